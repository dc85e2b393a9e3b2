"""Input validation helpers shared by the numerical modules."""

from __future__ import annotations

import math
import numbers

import numpy as np

MAX_P = 2**53


def check_p(p) -> int:
    """Return ``p`` as a Python int, rejecting anything but an integer in [1, 2**53]."""
    if isinstance(p, bool) or not isinstance(p, numbers.Integral):
        raise TypeError(f"p must be a positive integer, got {p!r}")
    p = int(p)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p > MAX_P:
        raise ValueError(f"p must be <= 2**53 to stay exactly representable, got {p}")
    return p


def check_nonneg_int(n, name: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {n!r}")
    return int(n)


def check_unit_interval(x, name: str = "x"):
    """Validate that every entry of ``x`` is a finite number in [0, 1].

    Scalars come back as float, array-likes as float ndarrays.
    """
    if np.ndim(x) == 0:
        v = float(x)
        if math.isnan(v) or not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        return v
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any() or (arr < 0.0).any() or (arr > 1.0).any():
        raise ValueError(f"{name} must lie in [0, 1]")
    return arr


def check_grid(grid) -> np.ndarray:
    arr = np.atleast_1d(check_unit_interval(grid, "grid"))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence")
    if np.any(np.diff(arr) < 0):
        raise ValueError("grid must be sorted ascending")
    return arr
