"""Reusable assertions for verification results and schema errors."""

from __future__ import annotations

from typing import Any


def assert_schema_error(error: Any, *, record_id: str | None, path: str, message: str | None = None) -> None:
    """Assert that a DatasetSchemaError names the expected record and field path."""
    assert error.record_id == record_id
    assert error.path == path
    if message is not None:
        assert message in str(error)


def assert_categories_passed(result: Any, *categories: str) -> None:
    """Assert that a RecordResult has checks in every category and all of them passed."""
    by_category: dict[str, list[Any]] = {}
    for check in result.checks:
        by_category.setdefault(check.category, []).append(check)
    for category in categories:
        assert category in by_category, f"no {category} check in {result.record_id}"
        failed = [c.detail for c in by_category[category] if not c.passed]
        assert not failed, f"{result.record_id} {category} failed: {failed}"
