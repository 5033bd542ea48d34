"""
Shared loader API for the data files bundled with the package.

Tests read bundled JSON through these functions instead of constructing
file paths inline.
"""

import json
from pathlib import Path

from src.config.settings import BUNDLED_DATA_DIR


class FixtureNotFoundError(FileNotFoundError):
    """Raised when a requested data file does not exist."""


def bundled_path(name: str) -> Path:
    """Path of a bundled data file.

    Args:
        name: Bare filename, with or without the ``.json`` extension.

    Raises:
        FixtureNotFoundError: If no matching file exists under ``src/data``.
    """
    if not name.endswith(".json"):
        name = f"{name}.json"
    path = BUNDLED_DATA_DIR / name
    if not path.is_file():
        available = sorted(p.name for p in BUNDLED_DATA_DIR.glob("*.json"))
        raise FixtureNotFoundError(f"data file {name!r} not found; available: {available}")
    return path


def load_bundled_text(name: str) -> str:
    return bundled_path(name).read_text(encoding="utf-8")


def load_bundled_json(name: str) -> dict:
    return json.loads(load_bundled_text(name))
