"""
Pydantic models for the bundled data files and the verification summary.

The dataset schema lives in ``src.models.dataset`` and is imported directly,
since building records needs the services.
"""

from src.models.catalog import CatalogFile, CharacteristicCatalog, CoindexEntry, ExpectedTablesFile
from src.models.summary import CheckResult, RecordResult, VerificationSummary

__all__ = [
    "CatalogFile",
    "CharacteristicCatalog",
    "CoindexEntry",
    "ExpectedTablesFile",
    "CheckResult",
    "RecordResult",
    "VerificationSummary",
]
