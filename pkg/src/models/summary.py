"""Verification summary: per-record outcome of every check category."""

import json
from typing import Dict, List, Literal, get_args

from pydantic import BaseModel, ConfigDict, Field, computed_field

CheckCategory = Literal[
    "singular-set",
    "classification",
    "invariance",
    "motion",
    "relations",
    "table-regeneration",
    "resource",
]
CATEGORIES: List[str] = list(get_args(CheckCategory))


class CheckResult(BaseModel):
    model_config = ConfigDict(extra="forbid")

    category: CheckCategory
    passed: bool
    detail: str = ""


class RecordResult(BaseModel):
    """Checks run on one dataset record."""
    model_config = ConfigDict(extra="forbid")

    record_id: str
    characteristic: int
    degree: int
    provenance: str = ""
    seconds: float = Field(default=0.0, ge=0)
    checks: List[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def category_passed(self, category: str) -> bool:
        return all(check.passed for check in self.checks if check.category == category)


class VerificationSummary(BaseModel):
    """Overall pass iff every check of every record passed."""
    model_config = ConfigDict(extra="forbid")

    records: List[RecordResult] = Field(default_factory=list)

    def model_post_init(self, __context) -> None:
        self.records.sort(key=lambda r: (r.characteristic, r.record_id))

    @computed_field
    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    def category_counts(self) -> Dict[str, Dict[str, int]]:
        counts = {c: {"passed": 0, "failed": 0} for c in CATEGORIES}
        for record in self.records:
            for check in record.checks:
                counts[check.category]["passed" if check.passed else "failed"] += 1
        return {c: v for c, v in counts.items() if v["passed"] or v["failed"]}

    def merge(self, other: "VerificationSummary") -> "VerificationSummary":
        return VerificationSummary(records=self.records + other.records)

    def to_json(self) -> str:
        payload = self.model_dump()
        payload["categories"] = self.category_counts()
        return json.dumps(payload, indent=2, sort_keys=True)

    def render_text(self) -> str:
        lines = []
        for record in self.records:
            status = "PASS" if record.passed else "FAIL"
            lines.append(f"{status}  {record.record_id:<28} char {record.characteristic} d={record.degree}  {record.seconds:7.2f}s  {record.provenance}")
            for check in record.failures():
                lines.append(f"      {check.category}: {check.detail}")
        total = len(self.records)
        failed = sum(1 for r in self.records if not r.passed)
        lines.append("")
        for category, counts in self.category_counts().items():
            lines.append(f"{category:<20} {counts['passed']:>4} passed  {counts['failed']:>4} failed")
        lines.append(f"{total - failed}/{total} records passed")
        return "\n".join(lines)


__all__ = [
    "CheckCategory",
    "CATEGORIES",
    "CheckResult",
    "RecordResult",
    "VerificationSummary",
]
