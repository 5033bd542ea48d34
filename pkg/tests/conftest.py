"""
Root conftest: environment contract, singleton resets, and shared fixtures.

This file is loaded by pytest before any test module is imported, so
setting os.environ here guarantees that pydantic-settings reads the correct
test values on first access.
"""

import os

# ---------------------------------------------------------------------------
# Test environment contract, set before any app module is imported.
# ---------------------------------------------------------------------------
os.environ["ENVIRONMENT"] = "testing"

os.environ.setdefault("LOG_LEVEL", "WARNING")
os.environ.setdefault("LOG_CONSOLE_ENABLED", "false")
os.environ.setdefault("LOG_FILE_ENABLED", "false")

# Bundled data only; a developer's DPK_DATA_DIR must not change test outcomes.
os.environ["DPK_DATA_DIR"] = ""

# ---------------------------------------------------------------------------
# Imports after env-var setup so app code reads the right values.
# ---------------------------------------------------------------------------
import pytest  # noqa: E402


@pytest.fixture(autouse=True)
def _reset_singletons():
    """
    Reset the cached Settings between every test so that tests which patch
    the environment (caps, data directory) cannot affect later tests.
    """
    from tests.support.runtime import reset_all_singletons

    reset_all_singletons()
    yield
    reset_all_singletons()


@pytest.fixture
def bundled_data_dir():
    """Path of the data files shipped inside the package."""
    from src.config.settings import BUNDLED_DATA_DIR

    return BUNDLED_DATA_DIR
