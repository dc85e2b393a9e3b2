"""Invariant density, distribution function and interval measure of T_p."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_p, check_unit_interval


@dataclass(frozen=True)
class MapParams:
    p: int

    def __post_init__(self):
        check_p(self.p)


@dataclass(frozen=True)
class InvariantMeasure:
    """The absolutely continuous invariant measure c/(p+x) dx of T_p."""

    p: int
    norm_const: float

    @classmethod
    def for_p(cls, p: int) -> "InvariantMeasure":
        return cls(p=check_p(p), norm_const=norm_const(p))

    def density(self, x):
        return density_eta(self.p, x)

    def cdf(self, x):
        return cdf_phi(self.p, x)


def norm_const(p: int) -> float:
    """c = 1/(ln(p+1) - ln p), computed as 1/log1p(1/p)."""
    p = check_p(p)
    return 1.0 / math.log1p(1.0 / p)


def density_eta(p: int, x):
    x = check_unit_interval(x)
    return norm_const(p) / (p + x)


def cdf_phi(p: int, x):
    """Phi_p(x) = ln(1 + x/p) / ln(1 + 1/p)."""
    p = check_p(p)
    x = check_unit_interval(x)
    scale = math.log1p(1.0 / p)
    if isinstance(x, np.ndarray):
        return np.log1p(x / p) / scale
    return math.log1p(x / p) / scale


def mu_interval(p: int, lo: float, hi: float) -> float:
    lo = check_unit_interval(lo, "lo")
    hi = check_unit_interval(hi, "hi")
    if lo > hi:
        raise ValueError(f"empty interval: lo={lo} > hi={hi}")
    return cdf_phi(p, hi) - cdf_phi(p, lo)
