"""
delpezzo-kit services package.

Contains the catalog, singularity, action and verification services together
with the shared error hierarchy in ``base_service``. Modules are imported
directly (``from src.services.catalog_service import ...``) so that the lattice
and algebra packages can depend on ``base_service`` without import cycles.
"""
