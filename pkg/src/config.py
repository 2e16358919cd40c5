"""
Shared constants and environment lookups.
"""

from __future__ import annotations

import os
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = ROOT / "data"

SCHEMA_VERSION = "1.0"
ARTIFACT_VERSION = "1.0.0"

VERTEX_CAP = 4096
CANONICAL_KEY_LIMIT = 16
MIN_Q_LIMIT = 12

TABU_TENURE = 12
RESTART_AFTER = 200_000

RAMSEY_R_RANGE = range(42, 48)

CACHE_ENV = "GALLAI_RAMSEY_CACHE"
DEFAULT_CACHE_DIR = DATA_DIR / "witnesses"
RATIO_TABLES_PATH = DATA_DIR / "ratio_tables.json"


def cache_dir() -> Path:
    override = os.environ.get(CACHE_ENV)
    if override:
        return Path(override)
    return DEFAULT_CACHE_DIR


def check_ramsey_R(R: int) -> int:
    if R not in RAMSEY_R_RANGE:
        raise ValueError(f"R must lie in {RAMSEY_R_RANGE.start}..{RAMSEY_R_RANGE.stop - 1}, got {R}")
    return R
