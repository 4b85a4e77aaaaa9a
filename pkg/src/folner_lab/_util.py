"""Shared helpers: parallelism cap and deterministic report serialization."""
from __future__ import annotations

import io
import os

VERSION = "0.1.0"
THREADS_ENV = "FOLNER_LAB_THREADS"


def worker_count() -> int:
    """Worker cap for grid evaluation; FOLNER_LAB_THREADS overrides."""
    env = os.environ.get(THREADS_ENV)
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return min(4, os.cpu_count() or 1)


def fmt_value(v) -> str:
    """Shortest round-trip text for report cells."""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return f"{v.real!r}{'+' if v.imag >= 0 else '-'}{abs(v.imag)!r}j"
    return str(v)


def report_csv(rows, columns) -> str:
    """CSV with a version-stamp comment line; body is byte-stable."""
    buf = io.StringIO()
    buf.write(f"# folner-lab {VERSION}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt_value(row.get(c, "")) for c in columns) + "\n")
    return buf.getvalue()
