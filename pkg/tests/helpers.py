"""Shared utilities for CLI and golden-file tests."""

import math
from pathlib import Path

from gamowlab.tables import from_csv

ROOT = Path(__file__).resolve().parent.parent
EXAMPLE = ROOT / "config" / "example.ini"
GOLDEN = Path(__file__).resolve().parent / "golden"
SUBCOMMANDS = ("poles", "average", "compare-gamma", "survival", "titchmarsh")


def tables_match(text, golden_text, rel=1e-9, abs_=1e-12):
    """Same layout and text cells; numeric cells equal up to last-digit drift."""
    a, b = from_csv(text), from_csv(golden_text)
    if (a.name, a.columns, len(a.rows)) != (b.name, b.columns, len(b.rows)):
        return False
    for ra, rb in zip(a.rows, b.rows):
        for x, y in zip(ra, rb):
            if isinstance(x, float) and isinstance(y, (int, float)):
                if not math.isclose(x, y, rel_tol=rel, abs_tol=abs_):
                    return False
            elif x != y:
                return False
    return set(a.notes) == set(b.notes)
