"""Hurwitz zeta values with error radii, the rate constant Q_p and its bounds.

Values are computed as a compensated direct sum followed by a three-term
Euler-Maclaurin tail.  For the completely monotone summands k**-s the
Euler-Maclaurin remainder lies between 0 and the first omitted correction
term; that is the one analytic assumption behind the error radii.  The value
is centred on that interval, so ``err`` is half the omitted term plus a
rounding allowance.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from ._validation import check_p

EPS = float(np.finfo(float).eps)

SUPPORTED_S = (2, 3, 4, 5, 6)

# Euler-Maclaurin cutoff floor and the largest cutoff tried before giving up.
_MIN_CUTOFF = 64
_MAX_CUTOFF = 2**24


class PrecisionError(ValueError):
    """Requested tolerance cannot be met in double precision."""


@dataclass(frozen=True)
class BoundedValue:
    """A float together with an absolute error radius."""

    value: float
    err: float

    def __post_init__(self):
        if not (math.isfinite(self.err) and self.err >= 0.0):
            raise ValueError(f"err must be finite and >= 0, got {self.err!r}")
        if not math.isfinite(self.value):
            raise ValueError(f"value must be finite, got {self.value!r}")

    @property
    def lo(self) -> float:
        return self.value - self.err

    @property
    def hi(self) -> float:
        return self.value + self.err

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class QpBounds:
    """Closed-form bounds on Q_p and on the two zeta values it is built from."""

    p: int
    lower: float
    upper: float
    zeta2_lower: float
    zeta3_upper: float
    a: float
    b: float


def _em_tail(s: int, n) -> tuple[float, float]:
    """Centred Euler-Maclaurin estimate of sum_{j>=0} (n+j)**-s and its radius."""
    # first omitted term is -B4/4! * f'''(n), negative for f = x**-s
    if isinstance(n, int):
        # integer powers and int/int division are exact up to one rounding each
        terms = [1 / ((s - 1) * n ** (s - 1)), 1 / (2 * n**s), s / (12 * n ** (s + 1))]
        omitted = s * (s + 1) * (s + 2) / (720 * n ** (s + 3))
    else:
        terms = [n ** (1 - s) / (s - 1), 0.5 * n**-s, s * n ** (-s - 1) / 12.0]
        omitted = s * (s + 1) * (s + 2) * n ** (-s - 3) / 720.0
    return math.fsum(terms + [-0.5 * omitted]), 0.5 * omitted


def hurwitz_zeta(s: int, a, tol: float = 1e-14) -> BoundedValue:
    """Return zeta(s, a) = sum_{k>=0} (a+k)**-s with ``err <= tol``.

    ``a`` is normally the positive integer p, in which case the sum runs over
    k = p, p+1, ...  Real shifts ``a >= 1`` are accepted too; the transfer
    operator's tail closure evaluates the sum at a = k_max + 1 + x.
    """
    if s not in SUPPORTED_S:
        raise ValueError(f"s must be one of {SUPPORTED_S}, got {s!r}")
    if isinstance(a, numbers.Integral):
        a = check_p(a)
    else:
        a = float(a)
        if not (math.isfinite(a) and a >= 1.0):
            raise ValueError(f"shift a must be a finite real >= 1, got {a!r}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")

    # a**(1-s)/(s-1) is a lower bound for the sum, so this rejects only
    # tolerances that are genuinely below 4 ulps of the result.
    floor_estimate = a ** (1 - s) / (s - 1)
    if tol < 4 * math.ulp(floor_estimate):
        raise PrecisionError(
            f"tol={tol:g} is below 4 ulps of zeta({s}, {a}) ~ {floor_estimate:.3e}"
        )

    n_terms = max(0, math.ceil(_MIN_CUTOFF - a))
    while True:
        cutoff = a + n_terms  # stays an int when a is an int
        tail, radius = _em_tail(s, cutoff)
        if n_terms:
            k = a + np.arange(n_terms, dtype=float)
            direct = math.fsum(k**-float(s))
        else:
            direct = 0.0
        value = direct + tail
        err = radius + 2 * EPS * value
        if err <= tol:
            return BoundedValue(value, err)
        if cutoff > _MAX_CUTOFF:
            raise PrecisionError(f"zeta({s}, {a}) did not reach tol={tol:g}")
        n_terms = math.ceil(2 * cutoff - a)


def q_constant(p: int, tol: float = 1e-12) -> BoundedValue:
    """Q_p = 2 p^2 zeta(3, p) - p zeta(2, p) with a propagated error radius."""
    p = check_p(p)
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    z3 = hurwitz_zeta(3, p, tol / (4.0 * p * p))
    z2 = hurwitz_zeta(2, p, tol / (4.0 * p))
    first = 2.0 * p * p * z3.value
    second = p * z2.value
    value = first - second
    err = 2.0 * p * p * z3.err + p * z2.err + EPS * (abs(first) + abs(second))
    if err > tol:
        raise PrecisionError(f"Q_{p} error radius {err:.3e} exceeds tol={tol:g}")
    return BoundedValue(value, err)


def q_bounds(p: int) -> QpBounds:
    p = check_p(p)
    fp = float(p)
    lower = 1.0 / fp - 1.0 / (2.0 * fp + 1.0)
    upper = 1.0 / (2.0 * fp) + 3.0 / (8.0 * fp * fp)
    # a and b are roots of a^2 + (2p+1)a + p = 0 and b^2 + 2p^2 b - p^2 = 0;
    # the Vieta forms below avoid subtracting nearly equal square roots.
    a = -2.0 * fp / ((2.0 * fp + 1.0) + math.sqrt(4.0 * fp * fp + 1.0))
    b = fp / (math.sqrt(fp * fp + 1.0) + fp)
    return QpBounds(
        p=p,
        lower=lower,
        upper=upper,
        zeta2_lower=1.0 / (fp + a),
        zeta3_upper=1.0 / (2.0 * (fp * fp - fp + b)),
        a=a,
        b=b,
    )


def asymptotic_residual(p: int, tol: float = 1e-14) -> float:
    """p^2 (Q_p - 1/(2p)) - 1/3, which tends to 0 like -2/(15 p^2)."""
    p = check_p(p)
    if p < 2:
        raise ValueError("asymptotic_residual needs p >= 2")
    q = q_constant(p, tol).value
    return p * p * (q - 0.5 / p) - 1.0 / 3.0
