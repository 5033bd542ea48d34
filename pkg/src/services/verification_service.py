"""
Orchestration of the dataset checks, the table regeneration and the reduction report.

Each record is checked independently: singular set, classification of every
singular point, invariance under every listed generator, point motion,
relations between generators and membership of its RDP configuration in the
expected table. Records may be fanned out over worker processes; the summary
is sorted by record id so it does not depend on scheduling.
"""

import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from src.algebra.field import finite_field
from src.config.logging import format_log_context, log_timing, setup_worker_logging
from src.config.settings import ComputeSettings
from src.lattice.core import QuadraticSpace, enumerate_exceptional, enumerate_roots
from src.lattice.dynkin import DynkinType
from src.lattice.embedding import embedding_classes, is_listed_nonunique
from src.models.dataset import RecordModel, SurfaceRecord, build_record, dataset_path, load_dataset
from src.models.summary import CheckResult, RecordResult, VerificationSummary
from src.services.action_service import ActionService
from src.services.base_service import BaseService, BaseServiceError, ServiceResourceError
from src.services.catalog_service import (
    SUPPORTED_CHARACTERISTICS,
    CatalogService,
    RdpType,
    check_characteristic,
    is_nonequivariant,
)
from src.services.singularity_service import LocalSingularity, SingularityService

# Sizes of Exc and of the root system of E_n for n = 1..8.
EXCEPTIONAL_COUNTS = {1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
ROOT_COUNTS = {1: 0, 2: 2, 3: 8, 4: 20, 5: 40, 6: 72, 7: 126, 8: 240}


@dataclass
class TableReport:
    characteristic: int
    generated: Dict[int, List[str]] = field(default_factory=dict)
    expected: Dict[int, List[str]] = field(default_factory=dict)
    diff: bool = False

    def missing(self, degree: int) -> List[str]:
        return sorted(set(self.expected.get(degree, [])) - set(self.generated.get(degree, [])))

    def unexpected(self, degree: int) -> List[str]:
        return sorted(set(self.generated.get(degree, [])) - set(self.expected.get(degree, [])))

    @property
    def passed(self) -> bool:
        if not self.diff:
            return True
        degrees = set(self.generated) | set(self.expected)
        return not any(self.missing(d) or self.unexpected(d) for d in degrees)

    def to_dict(self) -> Dict[str, object]:
        payload: Dict[str, object] = {
            "characteristic": self.characteristic,
            "tables": {str(d): labels for d, labels in sorted(self.generated.items(), reverse=True)},
        }
        if self.diff:
            payload["diff"] = {
                str(d): {"missing": self.missing(d), "unexpected": self.unexpected(d)}
                for d in sorted(self.generated, reverse=True)
            }
            payload["passed"] = self.passed
        return payload

    def render_text(self) -> str:
        lines = [f"Non-equivariant RDP configurations in characteristic {self.characteristic}"]
        for degree in sorted(self.generated, reverse=True):
            labels = self.generated[degree]
            lines.append(f"  d={degree} ({len(labels)}): " + (", ".join(labels) if labels else "-"))
            if self.diff:
                for label in self.missing(degree):
                    lines.append(f"      missing    {label}")
                for label in self.unexpected(degree):
                    lines.append(f"      unexpected {label}")
        if self.diff:
            lines.append("matches expected tables" if self.passed else "differs from expected tables")
        return "\n".join(lines)


@dataclass
class ReduceReport:
    dynkin: str
    degree: int
    classes: List[Dict[str, object]] = field(default_factory=list)
    listed_nonunique: bool = False

    @property
    def embeds(self) -> bool:
        return bool(self.classes)

    @property
    def unique(self) -> bool:
        return len(self.classes) == 1

    @property
    def criteria_agree(self) -> bool:
        return all(c["reducible"] == c["reducible_by_factorization"] for c in self.classes)

    def to_dict(self) -> Dict[str, object]:
        return {
            "type": self.dynkin,
            "degree": self.degree,
            "embeds": self.embeds,
            "unique": self.unique,
            "listed_nonunique": self.listed_nonunique,
            "criteria_agree": self.criteria_agree,
            "classes": self.classes,
        }

    def render_text(self) -> str:
        if not self.classes:
            return f"{self.dynkin} does not embed in E_{9 - self.degree}"
        lines = [f"{self.dynkin} in E_{9 - self.degree}: {len(self.classes)} embedding class(es)"]
        for i, c in enumerate(self.classes, 1):
            verdict = "reducible" if c["reducible"] else "not reducible"
            lines.append(
                f"  class {i}: {verdict}; orthogonal type {c['orthogonal_type']}, "
                f"{c['orthogonal_exceptional']} orthogonal exceptional vectors, {c['members']} member(s)"
            )
        if self.unique:
            lines.append("embedding is unique; the blow-down argument applies to every surface of this type")
        elif self.listed_nonunique:
            lines.append("listed exception: several embedding classes")
        else:
            lines.append("several embedding classes (not among the listed exceptions)")
        return "\n".join(lines)


def _format_point(point: Sequence[int], record: SurfaceRecord) -> str:
    ops = finite_field(record.field)
    return "[" + ":".join(ops.format_element(c) for c in point) + "]"


class VerificationService(BaseService):
    """Runs the per-record checks and the lattice-side reports."""

    def __init__(self, compute: Optional[ComputeSettings] = None):
        super().__init__(compute)
        self.catalog_service = CatalogService(compute=self.compute)
        self.singularity = SingularityService(self.catalog_service.catalog, compute=self.compute)
        self.actions = ActionService(compute=self.compute)

    # -- dataset -----------------------------------------------------------

    def load(self, characteristic: int, data_dir: Optional[Path] = None) -> List[SurfaceRecord]:
        check_characteristic(characteristic)
        directory = data_dir or self.compute.resolve_data_dir()
        return load_dataset(dataset_path(directory, characteristic), self.catalog_service.catalog)

    def verify_record(self, record: SurfaceRecord) -> RecordResult:
        started = time.perf_counter()
        checks: List[CheckResult] = []
        try:
            found = self.singularity.singular_points(record.surface)
        except ServiceResourceError as exc:
            checks.append(CheckResult(category="resource", passed=False, detail=str(exc)))
            found = None
        if found is not None:
            checks.extend(self._check_singularities(record, found))
        checks.extend(self._check_invariance(record))
        checks.extend(self._check_motion(record))
        checks.extend(self._check_relations(record))
        checks.extend(self._check_table(record))
        result = RecordResult(
            record_id=record.id,
            characteristic=record.characteristic,
            degree=record.degree,
            provenance=record.provenance,
            seconds=round(time.perf_counter() - started, 3),
            checks=checks,
        )
        self.logger.info(
            "Record verified %s",
            format_log_context(record=record.id, passed=result.passed, seconds=result.seconds),
        )
        return result

    def _check_singularities(self, record: SurfaceRecord, found: List[LocalSingularity]) -> List[CheckResult]:
        by_point = {s.point: s for s in found}
        positioned = [c for c in record.singularities if c.point is not None]
        loose = [c for c in record.singularities if c.point is None]
        missing = [c.point for c in positioned if c.point not in by_point]
        claimed_points = {c.point for c in positioned}
        extra = [s for s in found if s.point not in claimed_points]
        checks = []
        if missing or len(extra) != len(loose):
            detail = []
            if missing:
                detail.append("not singular: " + ", ".join(_format_point(p, record) for p in missing))
            if len(extra) != len(loose):
                detail.append(f"found {len(found)} singular points, claimed {len(record.singularities)}")
                unclaimed = [s.format_point() for s in extra]
                if unclaimed:
                    detail.append("unclaimed: " + ", ".join(unclaimed))
            checks.append(CheckResult(category="singular-set", passed=False, detail="; ".join(detail)))
            return checks
        checks.append(CheckResult(category="singular-set", passed=True, detail=f"{len(found)} point(s)"))

        for claim in positioned:
            checks.append(self._classify_against(record, by_point[claim.point], claim.rdp))
        if loose:
            observed: Counter = Counter()
            for singularity in extra:
                rdp = self._classify(record, singularity, checks)
                if rdp is not None:
                    observed[str(rdp)] += 1
            claimed = Counter(str(c.rdp) for c in loose)
            if sum(observed.values()) == len(extra):
                checks.append(CheckResult(
                    category="classification",
                    passed=observed == claimed,
                    detail=f"unpositioned: observed {dict(observed)}, claimed {dict(claimed)}",
                ))
        return checks

    def _classify(self, record: SurfaceRecord, singularity: LocalSingularity, checks: List[CheckResult]) -> Optional[RdpType]:
        try:
            return self.singularity.classify_rdp(singularity).rdp
        except ServiceResourceError as exc:
            checks.append(CheckResult(category="resource", passed=False, detail=f"{singularity.format_point()}: {exc}"))
        except BaseServiceError as exc:
            checks.append(CheckResult(category="classification", passed=False, detail=f"{singularity.format_point()}: {exc}"))
        return None

    def _classify_against(self, record: SurfaceRecord, singularity: LocalSingularity, claimed: RdpType) -> CheckResult:
        problems: List[CheckResult] = []
        rdp = self._classify(record, singularity, problems)
        if rdp is None:
            return problems[0]
        return CheckResult(
            category="classification",
            passed=rdp == claimed,
            detail=f"{singularity.format_point()}: observed {rdp}, claimed {claimed}",
        )

    def _check_invariance(self, record: SurfaceRecord) -> List[CheckResult]:
        checks = []
        for label, generator in record.generators.items():
            try:
                report = self.actions.verify_invariance(record.surface, generator)
                passed = report.preserved and self.actions.recheck(record.surface, generator, report)
                detail = f"{label}: " + ("preserved" if passed else report.reason or "certificate does not reproduce")
            except BaseServiceError as exc:
                passed, detail = False, f"{label}: {exc}"
            checks.append(CheckResult(category="invariance", passed=passed, detail=detail))
        return checks

    def _check_motion(self, record: SurfaceRecord) -> List[CheckResult]:
        checks = []
        for motion in record.motions:
            generator = record.generators[motion.generator]
            where = f"{motion.generator} {motion.claim} {_format_point(motion.point, record)}"
            try:
                passed = self.actions.verify_point_motion(record.surface, generator, motion.point, motion.claim)
                detail = where if passed else f"{where} does not hold"
            except BaseServiceError as exc:
                passed, detail = False, f"{where}: {exc}"
            checks.append(CheckResult(category="motion", passed=passed, detail=detail))
        return checks

    def _check_relations(self, record: SurfaceRecord) -> List[CheckResult]:
        checks = []
        for relation in record.relations:
            generator = record.generators[relation.generator]
            companion = record.generators.get(relation.companion) if relation.companion else None
            where = f"{relation.generator}: {relation.relation}" + (f" with {relation.companion}" if companion else "")
            try:
                passed = self.actions.verify_relations(generator, companion, relation.relation, record.ambient)
                detail = where if passed else f"{where} does not hold"
            except BaseServiceError as exc:
                passed, detail = False, f"{where}: {exc}"
            checks.append(CheckResult(category="relations", passed=passed, detail=detail))
        return checks

    def _check_table(self, record: SurfaceRecord) -> List[CheckResult]:
        p = record.characteristic
        catalog = self.catalog_service.catalog
        if not any(is_nonequivariant(c.rdp, p, catalog) for c in record.singularities):
            return []
        body = record.configuration.body
        expected = {c.body for c in self.catalog_service.expected_table(p, record.degree)}
        return [CheckResult(
            category="table-regeneration",
            passed=body in expected,
            detail=f"{body} at d={record.degree}" + ("" if body in expected else " is not in the table"),
        )]

    def run_verify(
        self,
        records: Sequence[SurfaceRecord],
        jobs: Optional[int] = None,
    ) -> VerificationSummary:
        """Verify records, sequentially or over worker processes."""
        jobs = jobs or self.compute.DPK_JOBS
        with log_timing(self.logger, "Verification finished", level=logging.INFO, records=len(records), jobs=jobs) as context:
            if jobs <= 1 or len(records) <= 1:
                results = [self.verify_record(r) for r in records]
            else:
                payloads = [(r.model.model_dump(), r.characteristic) for r in records]
                with ProcessPoolExecutor(
                    max_workers=jobs,
                    initializer=setup_worker_logging,
                    initargs=(logging.getLogger().level,),
                ) as pool:
                    results = list(pool.map(_verify_payload, payloads))
            summary = VerificationSummary(records=results)
            context["passed"] = summary.passed
        return summary

    # -- tables and lattice reports ----------------------------------------

    def run_tables(self, p: int, degrees: Optional[Sequence[int]] = None, diff: bool = False) -> TableReport:
        check_characteristic(p)
        report = TableReport(characteristic=p, diff=diff)
        for degree in degrees or range(8, 0, -1):
            labels = [c.label for c in self.catalog_service.generate_config_table(p, degree)]
            if labels or degrees:
                report.generated[degree] = labels
            if diff:
                expected = [c.label for c in self.catalog_service.expected_table(p, degree)]
                if expected:
                    report.expected[degree] = expected
                    report.generated.setdefault(degree, labels)
        return report

    def run_reduce(self, dynkin: DynkinType, degree: int) -> ReduceReport:
        space = QuadraticSpace.for_degree(degree)
        report = ReduceReport(str(dynkin), degree, listed_nonunique=is_listed_nonunique(dynkin, degree))
        for cls in embedding_classes(dynkin, space):
            report.classes.append({
                "orthogonal_type": cls.invariant.orthogonal_type,
                "orthogonal_exceptional": cls.invariant.orthogonal_exceptional,
                "members": cls.members,
                "reducible": cls.reducible,
                "reducible_by_factorization": cls.reducible_by_factorization,
                "representative": [list(r.coords) for r in cls.representative.roots],
            })
        return report

    def lattice_counts(self) -> Dict[int, Tuple[int, int]]:
        """(|Exc|, |roots|) for n = 1..8."""
        counts = {}
        for n in range(1, 9):
            space = QuadraticSpace(n)
            counts[n] = (len(enumerate_exceptional(space)), len(enumerate_roots(space)))
        return counts

    def lattice_counts_match(self) -> bool:
        return all(
            counts == (EXCEPTIONAL_COUNTS[n], ROOT_COUNTS[n])
            for n, counts in self.lattice_counts().items()
        )

    def verify_characteristics(
        self,
        characteristics: Sequence[int] = SUPPORTED_CHARACTERISTICS,
        record_id: Optional[str] = None,
        jobs: Optional[int] = None,
    ) -> VerificationSummary:
        records: List[SurfaceRecord] = []
        for p in characteristics:
            records.extend(r for r in self.load(p) if record_id is None or r.id == record_id)
        return self.run_verify(records, jobs)


def _verify_payload(payload: Tuple[Dict[str, object], int]) -> RecordResult:
    model, characteristic = payload
    service = VerificationService()
    record = build_record(RecordModel.model_validate(model), characteristic, service.catalog_service.catalog)
    return service.verify_record(record)


def run_verify(records: Sequence[SurfaceRecord], jobs: Optional[int] = None) -> VerificationSummary:
    return VerificationService().run_verify(records, jobs)


def run_tables(p: int, degrees: Optional[Sequence[int]] = None, diff: bool = False) -> TableReport:
    return VerificationService().run_tables(p, degrees, diff)


def run_reduce(dynkin: DynkinType, degree: int) -> ReduceReport:
    return VerificationService().run_reduce(dynkin, degree)


__all__ = [
    "EXCEPTIONAL_COUNTS",
    "ROOT_COUNTS",
    "TableReport",
    "ReduceReport",
    "VerificationService",
    "run_verify",
    "run_tables",
    "run_reduce",
]
