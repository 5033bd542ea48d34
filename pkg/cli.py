#!/usr/bin/env python3
"""
Developer entry point, equivalent to the installed ``dpk`` command.

Usage:
    python cli.py exc --degree 1
    python cli.py tables --char 3 --diff
    python cli.py verify --char 7 --jobs 4
    python cli.py all
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from src.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
