"""
Dataset of del Pezzo surfaces: the on-disk schema and the validated records.

Each bundled file holds the surfaces of one characteristic. Polynomials,
field elements and constraints are strings in the expression grammar; the
loader parses them, specialises family parameters to their representative
values and enforces every record invariant before a record is handed out.
"""

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.algebra.field import FieldSpec, finite_field
from src.algebra.params import ParamSpec
from src.algebra.polynomial import PolyRing
from src.config.logging import format_log_context
from src.services.action_service import GroupSchemeGenerator
from src.services.base_service import BaseServiceError, ServiceValidationError
from src.services.catalog_service import RdpCatalog, RdpConfiguration, RdpType, get_catalog
from src.services.singularity_service import AmbientSpace, Surface

logger = logging.getLogger(__name__)

DATASET_SCHEMA = "delpezzo-dataset/1"
_CONSTRAINT_RE = re.compile(r"^(?P<lhs>.+?)\s*(?P<op>!=|==)\s*(?P<rhs>.+)$")


class DatasetSchemaError(ServiceValidationError):
    """Raised when a dataset violates the schema; names the record and the field path."""

    def __init__(self, message: str, record_id: Optional[str] = None, path: str = ""):
        self.record_id = record_id
        self.path = path
        where = ""
        if record_id:
            where = f"record {record_id}"
            if path:
                where += f", {path}"
        elif path:
            where = path
        super().__init__(f"{where}: {message}" if where else message)


class AmbientModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["projective", "weighted", "affine"]
    variables: List[str] = Field(..., min_length=3)
    weights: Optional[List[int]] = Field(default=None, description="Weights of a weighted ambient")

    def build(self) -> AmbientSpace:
        return AmbientSpace(self.kind, tuple(self.variables), tuple(self.weights or ()))


class FieldModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    k: int = 1
    modulus: Optional[str] = Field(default=None, description="Monic irreducible polynomial in t")

    def build(self) -> FieldSpec:
        return FieldSpec(self.p, self.k, self.modulus)


class ParameterModel(BaseModel):
    """A family parameter with its representative value and the inequations it must satisfy."""
    model_config = ConfigDict(extra="forbid")

    name: str
    value: str
    constraints: List[str] = Field(default_factory=list)


class SingularityModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: str
    point: Optional[List[str]] = Field(default=None, description="Omitted when the source gives no position")
    note: Optional[str] = None


class ActionParamModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    kind: Literal["nilpotent", "root_of_unity", "unit", "additive"]
    order: Optional[int] = None

    def build(self) -> ParamSpec:
        return ParamSpec(self.name, self.kind, self.order)


class GeneratorModel(BaseModel):
    """A generator of Aut^0 given by coordinate images or by a matrix."""
    model_config = ConfigDict(extra="forbid")

    label: str
    params: List[ActionParamModel] = Field(default_factory=list)
    images: Optional[List[str]] = None
    matrix: Optional[List[List[str]]] = None

    @model_validator(mode="after")
    def one_form(self) -> "GeneratorModel":
        if (self.images is None) == (self.matrix is None):
            raise ValueError(f"generator {self.label} needs exactly one of images or matrix")
        return self


class MotionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generator: str
    point: List[str]
    claim: Literal["fixes", "moves"]


class RelationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generator: str
    companion: Optional[str] = None
    relation: str


class ProvenanceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    table: str
    row: str


class RecordModel(BaseModel):
    """One surface as stored on disk."""
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., pattern=r"^[a-z0-9][a-z0-9_.-]*$")
    degree: int = Field(..., ge=1, le=8)
    provenance: ProvenanceModel
    ambient: AmbientModel
    field: FieldModel
    equations: List[str] = Field(..., min_length=1)
    parameters: List[ParameterModel] = Field(default_factory=list)
    singularities: List[SingularityModel] = Field(default_factory=list)
    aut0: List[GeneratorModel] = Field(default_factory=list)
    motion: List[MotionModel] = Field(default_factory=list)
    relations: List[RelationModel] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class DatasetFile(BaseModel):
    """Top-level document of a dataset file."""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    schema_: str = Field(..., alias="schema")
    characteristic: int
    records: List[RecordModel]

    @field_validator("schema_")
    @classmethod
    def known_schema(cls, v: str) -> str:
        if v != DATASET_SCHEMA:
            raise ValueError(f"expected schema {DATASET_SCHEMA!r}, got {v!r}")
        return v

    @model_validator(mode="after")
    def unique_ids(self) -> "DatasetFile":
        seen = set()
        for record in self.records:
            if record.id in seen:
                raise ValueError(f"duplicate record id {record.id}")
            seen.add(record.id)
        return self


@dataclass(frozen=True)
class ClaimedSingularity:
    rdp: RdpType
    point: Optional[Tuple[int, ...]]
    note: Optional[str] = None


@dataclass(frozen=True)
class MotionClaim:
    generator: str
    point: Tuple[int, ...]
    claim: str


@dataclass(frozen=True, eq=False)
class SurfaceRecord:
    """A validated dataset entry with its surface, claims and generators built."""

    model: RecordModel
    characteristic: int
    field: FieldSpec
    values: Dict[str, int]
    surface: Surface
    singularities: Tuple[ClaimedSingularity, ...]
    generators: Dict[str, GroupSchemeGenerator]
    motions: Tuple[MotionClaim, ...]

    @property
    def id(self) -> str:
        return self.model.id

    @property
    def degree(self) -> int:
        return self.model.degree

    @property
    def ambient(self) -> AmbientSpace:
        return self.surface.ambient

    @property
    def relations(self) -> List[RelationModel]:
        return self.model.relations

    @property
    def configuration(self) -> RdpConfiguration:
        return RdpConfiguration(tuple(s.rdp for s in self.singularities))

    @property
    def provenance(self) -> str:
        return f"{self.model.provenance.table} {self.model.provenance.row}"


def _parse_point(record_id: str, path: str, coordinates: List[str], spec: FieldSpec, ambient: AmbientSpace) -> Tuple[int, ...]:
    if len(coordinates) != len(ambient.variables):
        raise DatasetSchemaError(f"expected {len(ambient.variables)} coordinates", record_id, path)
    ops = finite_field(spec)
    try:
        point = tuple(ops.parse_element(c) for c in coordinates)
        if not any(point):
            raise DatasetSchemaError("the zero vector is not a point", record_id, path)
        return ambient.normalize(point, spec)
    except BaseServiceError as exc:
        if isinstance(exc, DatasetSchemaError):
            raise
        raise DatasetSchemaError(str(exc), record_id, path) from exc


def _constraint_holds(source: str, values: Dict[str, int], spec: FieldSpec) -> bool:
    match = _CONSTRAINT_RE.match(source.strip())
    if not match:
        raise ServiceValidationError(f"constraint {source!r} must read '<expr> != <expr>' or '<expr> == <expr>'")
    ring = PolyRing(tuple(values), spec)
    lhs = ring.parse(match.group("lhs")).evaluate(values)
    rhs = ring.parse(match.group("rhs")).evaluate(values)
    return (lhs != rhs) if match.group("op") == "!=" else (lhs == rhs)


def build_record(model: RecordModel, characteristic: int, catalog: Optional[RdpCatalog] = None) -> SurfaceRecord:
    """Parse and check one record; every failure is reported against its field path."""
    catalog = catalog or get_catalog()
    rid = model.id
    spec = _guarded(rid, "field", model.field.build)
    if spec.p != characteristic:
        raise DatasetSchemaError(f"field characteristic {spec.p} differs from the file's {characteristic}", rid, "field.p")
    ambient = _guarded(rid, "ambient", model.ambient.build)
    ops = finite_field(spec)

    values: Dict[str, int] = {}
    for i, param in enumerate(model.parameters):
        values[param.name] = _guarded(rid, f"parameters[{i}].value", lambda: ops.parse_element(param.value))
    for i, param in enumerate(model.parameters):
        for j, constraint in enumerate(param.constraints):
            holds = _guarded(rid, f"parameters[{i}].constraints[{j}]", lambda: _constraint_holds(constraint, values, spec))
            if not holds:
                raise DatasetSchemaError(f"constraint {constraint!r} fails at the bundled values", rid, f"parameters[{i}].constraints[{j}]")

    equations = []
    for i, source in enumerate(model.equations):
        equations.append(_guarded(rid, f"equations[{i}]", lambda: Surface.from_strings(ambient, [source], spec, values).equations[0]))
    surface = _guarded(rid, "equations", lambda: Surface(ambient, tuple(equations)))

    claims = []
    for i, claim in enumerate(model.singularities):
        rdp = _guarded(rid, f"singularities[{i}].type", lambda: RdpType.parse(claim.type))
        _guarded(rid, f"singularities[{i}].type", lambda: catalog.validate(rdp, characteristic))
        point = None
        if claim.point is not None:
            point = _parse_point(rid, f"singularities[{i}].point", claim.point, spec, ambient)
            if not surface.contains(point):
                raise DatasetSchemaError("claimed singular point is not on the surface", rid, f"singularities[{i}].point")
        claims.append(ClaimedSingularity(rdp, point, claim.note))

    generators: Dict[str, GroupSchemeGenerator] = {}
    for i, gen in enumerate(model.aut0):
        path = f"aut0[{i}]"
        if gen.label in generators:
            raise DatasetSchemaError(f"duplicate generator label {gen.label}", rid, path)
        params = [_guarded(rid, f"{path}.params", p.build) for p in gen.params]
        if gen.images is not None:
            built = _guarded(rid, f"{path}.images", lambda: GroupSchemeGenerator.from_images(
                gen.label, ambient.variables, params, gen.images, spec, values))
        else:
            built = _guarded(rid, f"{path}.matrix", lambda: GroupSchemeGenerator.from_matrix(
                gen.label, ambient.variables, params, gen.matrix, spec, values))
        if not built.specialises_to_identity():
            raise DatasetSchemaError("generator is not the identity at the identity parameters", rid, path)
        generators[gen.label] = built

    motions = []
    for i, motion in enumerate(model.motion):
        path = f"motion[{i}]"
        if motion.generator not in generators:
            raise DatasetSchemaError(f"unknown generator {motion.generator}", rid, f"{path}.generator")
        point = _parse_point(rid, f"{path}.point", motion.point, spec, ambient)
        if not surface.contains(point):
            raise DatasetSchemaError("motion point is not on the surface", rid, f"{path}.point")
        motions.append(MotionClaim(motion.generator, point, motion.claim))

    for i, relation in enumerate(model.relations):
        for name in (relation.generator, relation.companion):
            if name is not None and name not in generators:
                raise DatasetSchemaError(f"unknown generator {name}", rid, f"relations[{i}]")

    return SurfaceRecord(model, characteristic, spec, values, surface, tuple(claims), generators, tuple(motions))


def _guarded(record_id: str, path: str, build):
    try:
        return build()
    except DatasetSchemaError:
        raise
    except BaseServiceError as exc:
        raise DatasetSchemaError(str(exc), record_id, path) from exc


def _location(loc: Tuple[Union[int, str], ...]) -> str:
    parts: List[str] = []
    for item in loc:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts)


def read_dataset(path: Path) -> DatasetFile:
    """Schema-level read of a dataset file."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DatasetSchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetSchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}", path=str(path)) from exc
    try:
        return DatasetFile.model_validate(raw)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = tuple(error["loc"])
        record_id = None
        if len(loc) >= 2 and loc[0] == "records" and isinstance(loc[1], int):
            records = raw.get("records", []) if isinstance(raw, dict) else []
            if loc[1] < len(records) and isinstance(records[loc[1]], dict):
                record_id = records[loc[1]].get("id")
            loc = loc[2:]
        raise DatasetSchemaError(error["msg"], record_id, _location(loc) or str(path)) from exc


def load_dataset(path: Path, catalog: Optional[RdpCatalog] = None) -> List[SurfaceRecord]:
    """Read and fully validate a dataset file."""
    document = read_dataset(path)
    records = [build_record(model, document.characteristic, catalog) for model in document.records]
    logger.info(
        "Dataset loaded %s",
        format_log_context(path=Path(path).name, characteristic=document.characteristic, records=len(records)),
    )
    return records


def serialize_dataset(document: DatasetFile) -> str:
    """Canonical JSON: sorted keys, two-space indent, defaults omitted, trailing newline."""
    payload = document.model_dump(by_alias=True, exclude_defaults=True)
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dataset_path(data_dir: Path, characteristic: int) -> Path:
    return Path(data_dir) / f"char{characteristic}.json"


__all__ = [
    "DATASET_SCHEMA",
    "DatasetSchemaError",
    "AmbientModel",
    "FieldModel",
    "ParameterModel",
    "SingularityModel",
    "ActionParamModel",
    "GeneratorModel",
    "MotionModel",
    "RelationModel",
    "ProvenanceModel",
    "RecordModel",
    "DatasetFile",
    "ClaimedSingularity",
    "MotionClaim",
    "SurfaceRecord",
    "build_record",
    "read_dataset",
    "load_dataset",
    "serialize_dataset",
    "dataset_path",
]
