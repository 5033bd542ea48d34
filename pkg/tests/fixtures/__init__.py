"""Shared fixture API for the unit tests.

Prefer:
- `tests.fixtures.builders` for dataset documents written to ``tmp_path``.
- `tests.fixtures.loaders` for the JSON files bundled under ``src/data``.
- `tests.fixtures.assertions` for checks on verification results and schema errors.
"""

from tests.fixtures.assertions import assert_categories_passed, assert_schema_error
from tests.fixtures.builders import build_dataset, build_record, write_dataset
from tests.fixtures.loaders import bundled_path, load_bundled_json, load_bundled_text

__all__ = [
    "assert_categories_passed",
    "assert_schema_error",
    "build_dataset",
    "build_record",
    "write_dataset",
    "bundled_path",
    "load_bundled_json",
    "load_bundled_text",
]
