"""Pydantic models for the bundled RDP catalog and the expected configuration tables."""

from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field, field_validator

CATALOG_SCHEMA = "rdp_catalog/1"
TABLES_SCHEMA = "expected-tables/1"


class CoindexEntry(BaseModel):
    """One Artin form of a split type."""
    model_config = ConfigDict(extra="forbid")

    normal_form: str = Field(..., description="Local equation in x, y, z")
    tjurina: int = Field(..., ge=1, description="Tjurina number of the normal form")


class CharacteristicCatalog(BaseModel):
    """Catalog data for one characteristic."""
    model_config = ConfigDict(extra="forbid")

    split: Dict[str, Dict[int, CoindexEntry]] = Field(
        default_factory=dict,
        description="Base types with several Artin forms, keyed by base label then coindex",
    )
    unsplit_forms: Dict[str, CoindexEntry] = Field(
        default_factory=dict,
        description="Exceptional base types with a single form in this characteristic",
    )
    nonequivariant: List[str] = Field(..., description="Types whose resolution is not tangent-equivariant")

    @field_validator("split")
    @classmethod
    def coindices_start_at_zero(cls, v: Dict[str, Dict[int, CoindexEntry]]) -> Dict[str, Dict[int, CoindexEntry]]:
        """Coindices of a split type must be 0..r without gaps."""
        for base, forms in v.items():
            if sorted(forms) != list(range(len(forms))):
                raise ValueError(f"coindices of {base} must be 0..{len(forms) - 1}")
        return v


class CatalogFile(BaseModel):
    """Top-level document of rdp_catalog.json."""
    model_config = ConfigDict(extra="forbid")

    schema_: str = Field(..., alias="schema", description="Schema identifier")
    characteristics: Dict[int, CharacteristicCatalog] = Field(..., description="Catalog per characteristic")

    @field_validator("schema_")
    @classmethod
    def known_schema(cls, v: str) -> str:
        if v != CATALOG_SCHEMA:
            raise ValueError(f"expected schema {CATALOG_SCHEMA!r}, got {v!r}")
        return v


class ExpectedTablesFile(BaseModel):
    """Top-level document of expected_tables.json."""
    model_config = ConfigDict(extra="forbid")

    schema_: str = Field(..., alias="schema", description="Schema identifier")
    tables: Dict[int, Dict[int, List[str]]] = Field(..., description="Configuration labels per characteristic and degree")

    @field_validator("schema_")
    @classmethod
    def known_schema(cls, v: str) -> str:
        if v != TABLES_SCHEMA:
            raise ValueError(f"expected schema {TABLES_SCHEMA!r}, got {v!r}")
        return v


__all__ = [
    "CATALOG_SCHEMA",
    "TABLES_SCHEMA",
    "CoindexEntry",
    "CharacteristicCatalog",
    "CatalogFile",
    "ExpectedTablesFile",
]
