"""Small shared helpers."""

from __future__ import annotations

import math
import os

from .errors import PreconditionError


def require(condition, code: str, message: str, required_value=None) -> None:
    if not condition:
        raise PreconditionError(code, message, required_value=required_value)


def ceil_int(x: float) -> int:
    """Ceiling with a relative guard against float noise just above an integer.

    Reciprocal stepsizes like 1/(1/27) land a few ulp above the integer the
    real-arithmetic expression equals; plain ceil would bump them up one.
    """
    return int(math.ceil(x - 1e-12 * max(1.0, abs(x))))


def env_threads(default: int = 1) -> int:
    """Worker cap from PABI_THREADS, defaulting to serial."""
    raw = os.environ.get("PABI_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return default
