"""
RDP catalog: Artin coindices, non-equivariant types and the regeneration of
the non-equivariant configuration tables.

Catalog facts (split types, normal forms of exceptional types, Tjurina numbers
of the Artin forms, the non-equivariant lists) are read from
``rdp_catalog.json``. A_n and D_n forms and their Tjurina numbers follow
closed formulas.
"""

import itertools
import json
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import ValidationError

from src.config.logging import format_log_context
from src.config.settings import BUNDLED_DATA_DIR, ComputeSettings
from src.lattice.core import QuadraticSpace
from src.lattice.dynkin import DynkinComponent, DynkinType, DynkinTypeError
from src.lattice.embedding import embedding_classes, maximal_rank_types
from src.models.catalog import CatalogFile, CharacteristicCatalog, ExpectedTablesFile
from src.services.base_service import BaseService, ServiceNotFoundError, ServiceValidationError

logger = logging.getLogger(__name__)

SUPPORTED_CHARACTERISTICS = (3, 5, 7)
CATALOG_FILE = "rdp_catalog.json"
TABLES_FILE = "expected_tables.json"

_RDP_RE = re.compile(r"^\s*([ADE])_?\{?(\d+)\}?(?:\^\{?(\d+)\}?)?\s*$")
_TERM_RE = re.compile(r"^\s*(\d*)\s*([ADE]_?\{?\d+\}?(?:\^\{?\d+\}?)?)\s*$")


class UnsupportedCharacteristicError(ServiceValidationError):
    """Raised for characteristics outside {3, 5, 7}."""
    pass


class CatalogMissError(ServiceNotFoundError):
    """Raised when a (type, characteristic) pair has no catalog entry."""
    pass


def check_characteristic(p: int) -> None:
    if p not in SUPPORTED_CHARACTERISTICS:
        raise UnsupportedCharacteristicError(
            f"characteristic {p} is not supported; expected one of {SUPPORTED_CHARACTERISTICS}"
        )


@dataclass(frozen=True)
class RdpType:
    """An ADE component together with Artin's coindex where the characteristic splits it."""

    base: DynkinComponent
    coindex: Optional[int] = None

    def __post_init__(self) -> None:
        if self.coindex is not None and self.coindex < 0:
            raise DynkinTypeError(f"coindex must be nonnegative, got {self.coindex}")

    @classmethod
    def parse(cls, text: str) -> "RdpType":
        """Read ``A4``, ``A_4``, ``E6^0`` or ``E_6^1``."""
        match = _RDP_RE.match(text)
        if not match:
            raise DynkinTypeError(f"cannot parse RDP type {text!r}")
        coindex = int(match.group(3)) if match.group(3) is not None else None
        return cls(DynkinComponent(match.group(1), int(match.group(2))), coindex)

    def sort_key(self) -> Tuple[int, int, int]:
        base = self.base.sort_key()
        return (base[0], base[1], -1 if self.coindex is None else self.coindex)

    def __str__(self) -> str:
        if self.coindex is None:
            return str(self.base)
        return f"{self.base}^{self.coindex}"


@dataclass(frozen=True)
class RdpConfiguration:
    """A multiset of RDP types; ``primed`` marks lattice types with several embedding classes."""

    entries: Tuple[RdpType, ...] = ()
    primed: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=RdpType.sort_key)))
        if self.lattice_type.rank > 8:
            raise DynkinTypeError(f"configuration {self.body} has rank {self.lattice_type.rank} > 8")

    @classmethod
    def parse(cls, text: str) -> "RdpConfiguration":
        """Read labels such as ``A4+A2+A1``, ``2A4``, ``E6^0+A2`` or ``(A5+A1)'``."""
        stripped = text.strip()
        primed = False
        if stripped.startswith("(") and stripped.endswith(")'"):
            stripped, primed = stripped[1:-2], True
        entries: List[RdpType] = []
        if stripped and stripped != "0":
            for part in stripped.split("+"):
                match = _TERM_RE.match(part)
                if not match:
                    raise DynkinTypeError(f"cannot parse configuration term {part!r} in {text!r}")
                count = int(match.group(1)) if match.group(1) else 1
                entries.extend([RdpType.parse(match.group(2))] * count)
        return cls(tuple(entries), primed)

    @property
    def lattice_type(self) -> DynkinType:
        return DynkinType(tuple(e.base for e in self.entries))

    @property
    def body(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for entry, group in itertools.groupby(self.entries):
            count = len(list(group))
            parts.append(f"{count}{entry}" if count > 1 else str(entry))
        return "+".join(parts)

    @property
    def label(self) -> str:
        return f"({self.body})'" if self.primed else self.body

    def __str__(self) -> str:
        return self.label


class RdpCatalog:
    """Read-only view of the bundled catalog data."""

    def __init__(self, document: CatalogFile):
        self.document = document

    @classmethod
    def load(cls, path: Path) -> "RdpCatalog":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
            document = CatalogFile.model_validate(raw)
        except (OSError, json.JSONDecodeError, ValidationError) as exc:
            raise ServiceValidationError(f"cannot load RDP catalog from {path}: {exc}") from exc
        logger.debug("Loaded RDP catalog %s", format_log_context(path=str(path)))
        return cls(document)

    def for_characteristic(self, p: int) -> CharacteristicCatalog:
        check_characteristic(p)
        entry = self.document.characteristics.get(p)
        if entry is None:
            raise CatalogMissError(f"catalog has no data for characteristic {p}")
        return entry

    def coindices(self, base: DynkinComponent, p: int) -> List[int]:
        """Valid Artin coindices of ``base`` in characteristic p (empty when unsplit)."""
        forms = self.for_characteristic(p).split.get(str(base))
        return sorted(forms) if forms else []

    def validate(self, t: RdpType, p: int) -> None:
        options = self.coindices(t.base, p)
        if options and t.coindex is None:
            raise DynkinTypeError(f"{t.base} needs a coindex in characteristic {p}, one of {options}")
        if not options and t.coindex is not None:
            raise DynkinTypeError(f"{t.base} carries no coindex in characteristic {p}")
        if options and t.coindex not in options:
            raise DynkinTypeError(f"coindex {t.coindex} of {t.base} is out of range {options} in characteristic {p}")


@lru_cache(maxsize=None)
def _catalog_at(path: str) -> RdpCatalog:
    return RdpCatalog.load(Path(path))


def get_catalog(data_dir: Optional[Path] = None) -> RdpCatalog:
    """Catalog read from ``data_dir`` or the bundled data directory."""
    directory = Path(data_dir) if data_dir is not None else BUNDLED_DATA_DIR
    return _catalog_at(str(directory / CATALOG_FILE))


def is_nonequivariant(t: RdpType, p: int, catalog: Optional[RdpCatalog] = None) -> bool:
    """Whether the minimal resolution of an RDP of type t fails to be tangent-equivariant."""
    catalog = catalog or get_catalog()
    entry = catalog.for_characteristic(p)
    catalog.validate(t, p)
    return str(t) in entry.nonequivariant


def equivariant_exclusions(p: int, catalog: Optional[RdpCatalog] = None) -> List[RdpType]:
    """Types an equivariant RDP del Pezzo surface in characteristic p never contains."""
    catalog = catalog or get_catalog()
    return sorted((RdpType.parse(label) for label in catalog.for_characteristic(p).nonequivariant), key=RdpType.sort_key)


def split_types(p: int, catalog: Optional[RdpCatalog] = None) -> Dict[str, List[int]]:
    """Base types carrying Artin coindices in characteristic p."""
    catalog = catalog or get_catalog()
    return {base: sorted(forms) for base, forms in catalog.for_characteristic(p).split.items()}


def normal_form(t: RdpType, p: int, catalog: Optional[RdpCatalog] = None) -> str:
    """Artin normal form of t in variables x, y, z."""
    catalog = catalog or get_catalog()
    catalog.validate(t, p)
    family, n = t.base.family, t.base.rank
    if family == "A":
        return f"x*y + z^{n + 1}"
    if family == "D":
        return f"x^2 + y^2*z + z^{n - 1}"
    entry = catalog.for_characteristic(p)
    if t.coindex is not None:
        return entry.split[str(t.base)][t.coindex].normal_form
    form = entry.unsplit_forms.get(str(t.base))
    if form is None:
        raise CatalogMissError(f"no normal form for {t} in characteristic {p}")
    return form.normal_form


def tjurina_reference(t: RdpType, p: int, catalog: Optional[RdpCatalog] = None) -> int:
    """Tjurina number of the Artin normal form of t in characteristic p."""
    catalog = catalog or get_catalog()
    catalog.validate(t, p)
    family, n = t.base.family, t.base.rank
    if family == "A":
        return n + 1 if (n + 1) % p == 0 else n
    if family == "D":
        return n
    entry = catalog.for_characteristic(p)
    if t.coindex is not None:
        return entry.split[str(t.base)][t.coindex].tjurina
    form = entry.unsplit_forms.get(str(t.base))
    if form is None:
        raise CatalogMissError(f"no Tjurina number for {t} in characteristic {p}")
    return form.tjurina


def catalog_types(p: int, max_rank: int = 8, catalog: Optional[RdpCatalog] = None) -> List[RdpType]:
    """Every RDP type of rank <= max_rank in characteristic p, coindices expanded."""
    catalog = catalog or get_catalog()
    result: List[RdpType] = []
    for n in range(1, max_rank + 1):
        result.append(RdpType(DynkinComponent("A", n)))
    for n in range(4, max_rank + 1):
        result.append(RdpType(DynkinComponent("D", n)))
    for n in (6, 7, 8):
        if n > max_rank:
            continue
        base = DynkinComponent("E", n)
        options = catalog.coindices(base, p)
        if options:
            result.extend(RdpType(base, r) for r in options)
        else:
            result.append(RdpType(base))
    return result


def _expansions(lattice_type: DynkinType, p: int, catalog: RdpCatalog) -> Iterable[Tuple[RdpType, ...]]:
    per_component: List[List[RdpType]] = []
    for component in lattice_type.components:
        options = catalog.coindices(component, p)
        per_component.append([RdpType(component, r) for r in options] if options else [RdpType(component)])
    seen = set()
    for combo in itertools.product(*per_component):
        key = tuple(sorted(combo, key=RdpType.sort_key))
        if key not in seen:
            seen.add(key)
            yield key


class CatalogService(BaseService):
    """Table regeneration on top of the catalog and the embedding search."""

    def __init__(self, catalog: Optional[RdpCatalog] = None, compute: Optional[ComputeSettings] = None):
        super().__init__(compute)
        data_dir = self.compute.resolve_data_dir()
        self.catalog = catalog or get_catalog(data_dir)
        self.data_dir = data_dir

    def generate_config_table(self, p: int, degree: int) -> List[RdpConfiguration]:
        """
        Non-equivariant RDP configurations on del Pezzo surfaces of the given degree.

        Every lattice type embedding in E_{9-d} is expanded over coindices and
        kept when one entry is non-equivariant. Types with several embedding
        classes are primed.
        """
        check_characteristic(p)
        space = QuadraticSpace.for_degree(degree)
        nonequivariant = set(self.catalog.for_characteristic(p).nonequivariant)
        configs: List[RdpConfiguration] = []
        for lattice_type in maximal_rank_types(space):
            primed = len(embedding_classes(lattice_type, space)) > 1
            for entries in _expansions(lattice_type, p, self.catalog):
                if any(str(e) in nonequivariant for e in entries):
                    configs.append(RdpConfiguration(entries, primed))
        configs.sort(key=lambda c: (c.lattice_type.rank, c.body))
        self.logger.info(
            "Generated configuration table %s",
            format_log_context(characteristic=p, degree=degree, configurations=len(configs)),
        )
        return configs

    def expected_tables(self) -> Dict[int, Dict[int, List[str]]]:
        path = self.data_dir / TABLES_FILE
        try:
            document = ExpectedTablesFile.model_validate(json.loads(path.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError, ValidationError) as exc:
            raise ServiceValidationError(f"cannot load expected tables from {path}: {exc}") from exc
        return document.tables

    def expected_table(self, p: int, degree: int) -> List[RdpConfiguration]:
        check_characteristic(p)
        labels = self.expected_tables().get(p, {}).get(degree, [])
        return [RdpConfiguration.parse(label) for label in labels]

    def degrees_with_entries(self, p: int) -> List[int]:
        check_characteristic(p)
        return sorted(self.expected_tables().get(p, {}), reverse=True)


def generate_config_table(p: int, degree: int) -> List[RdpConfiguration]:
    return CatalogService().generate_config_table(p, degree)


__all__ = [
    "SUPPORTED_CHARACTERISTICS",
    "UnsupportedCharacteristicError",
    "CatalogMissError",
    "check_characteristic",
    "RdpType",
    "RdpConfiguration",
    "RdpCatalog",
    "get_catalog",
    "is_nonequivariant",
    "equivariant_exclusions",
    "split_types",
    "normal_form",
    "tjurina_reference",
    "catalog_types",
    "CatalogService",
    "generate_config_table",
]
