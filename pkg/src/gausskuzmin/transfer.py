"""The transfer operator G_p on FuncRep, and pointwise diagnostics for the
quantities used to bound its contraction (h_k, D_k, G(k, x), Q(x)).

    (G_p f)(x) = sum_{k>=p} p/(k+x)^2 f(p/(k+x))

The branch sum is taken explicitly for k <= k_max.  Beyond k_max every branch
image p/(k+x) lies in [0, p/(k_max+1)], so f is replaced there by its Taylor
polynomial about 0 and each power sums to a Hurwitz zeta value:

    sum_{k>k_max} p/(k+x)^2 (p/(k+x))^j = p^{j+1} zeta(j+2, k_max+1+x).

The Taylor remainder is bounded by C p^{m+2} zeta(m+3, k_max+1) with
C = sup |f^(m+1)| / (m+1)! on [0, p/(k_max+1)].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import funcspace as fs
from ._validation import check_nonneg_int, check_p, check_unit_interval
from .funcspace import FuncRep
from .hurwitz import EPS, SUPPORTED_S, hurwitz_zeta

# Adaptive k_max doubles at most this many times.
_MAX_DOUBLINGS = 16


class TailToleranceError(ValueError):
    """The tail remainder bound exceeds the requested tolerance."""

    def __init__(self, message: str, bound: float, k_max: int):
        super().__init__(message)
        self.bound = bound
        self.k_max = k_max


@dataclass(frozen=True)
class TruncationPolicy:
    """How the infinite branch sum is cut.

    ``k_max=None`` starts at max(20p, 100) and doubles until the remainder
    bound meets ``tail_tol``; an explicit ``k_max`` is used as given and
    raises TailToleranceError if the bound is not met.
    """

    k_max: int | None = None
    taylor_order: int = 3
    tail_tol: float = 1e-12

    def __post_init__(self):
        if not 0 <= self.taylor_order <= 4:
            raise ValueError(f"taylor_order must be in 0..4, got {self.taylor_order}")
        if not self.tail_tol > 0:
            raise ValueError(f"tail_tol must be positive, got {self.tail_tol}")
        if self.k_max is not None and self.k_max < 1:
            raise ValueError(f"k_max must be positive, got {self.k_max}")


DEFAULT_POLICY = TruncationPolicy()


def min_k_max(p: int) -> int:
    return max(20 * p, 100)


@dataclass(frozen=True)
class TailReport:
    k_max: int
    bound: float


def _zeta_upper(s: int, a: int) -> float:
    """Upper bound for zeta(s, a)."""
    if s in SUPPORTED_S:
        est = a ** (1 - s) / (s - 1)
        return hurwitz_zeta(s, a, max(1e-6 * est, 8 * math.ulp(est))).hi
    # integral majorant: sum_{k>=a} k^-s <= (a-1)^(1-s)/(s-1)
    return (a - 1.0) ** (1 - s) / (s - 1)


@lru_cache(maxsize=256)
def _tail_table(p: int, k_max: int, degree: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """p^{j+1} zeta(j+2, k_max+1+x_i) and its error radii, shape (order+1, N+1)."""
    nodes = fs.chebyshev_nodes(degree)
    vals = np.empty((order + 1, degree + 1))
    errs = np.empty_like(vals)
    for j in range(order + 1):
        s = j + 2
        scale = float(p) ** (j + 1)
        for i, x in enumerate(nodes):
            a = k_max + 1.0 + float(x)
            est = a ** (1 - s) / (s - 1)
            z = hurwitz_zeta(s, a, 32 * EPS * est)
            vals[j, i] = scale * z.value
            errs[j, i] = scale * z.err
    vals.setflags(write=False)
    errs.setflags(write=False)
    return vals, errs


def _remainder_bound(p: int, f: FuncRep, order: int, k_max: int, coeffs, errs) -> float:
    deriv = fs.from_coeffs(fs.derivative_coeffs(f, order + 1), f.degree)
    y_hi = p / (k_max + 1.0)
    const = fs.sup_norm_on(deriv, 0.0, y_hi) / math.factorial(order + 1)
    taylor = const * float(p) ** (order + 2) * _zeta_upper(order + 3, k_max + 1)
    zeta_err = float(np.max(np.abs(coeffs) @ errs))
    return taylor + zeta_err


def transfer_with_report(
    p: int, f: FuncRep, policy: TruncationPolicy = DEFAULT_POLICY
) -> tuple[FuncRep, TailReport]:
    """Apply G_p to ``f`` and report the k_max used and the tail error bound."""
    p = check_p(p)
    m = policy.taylor_order
    floor = min_k_max(p)
    if policy.k_max is not None and policy.k_max < floor:
        raise ValueError(f"k_max must be >= max(20p, 100) = {floor}, got {policy.k_max}")

    coeffs = fs.taylor_coefficients(f, m)
    k_max = policy.k_max if policy.k_max is not None else floor
    for _ in range(_MAX_DOUBLINGS + 1):
        table, table_err = _tail_table(p, k_max, f.degree, m)
        bound = _remainder_bound(p, f, m, k_max, coeffs, table_err)
        if bound <= policy.tail_tol or policy.k_max is not None:
            break
        k_max *= 2
    if bound > policy.tail_tol:
        raise TailToleranceError(
            f"tail bound {bound:.3e} exceeds tail_tol={policy.tail_tol:g} at k_max={k_max}",
            bound,
            k_max,
        )

    x = f.nodes
    # Descending k so the small terms are accumulated first.
    k = np.arange(k_max, p - 1, -1, dtype=float)[:, None]
    y = p / (k + x[None, :])
    explicit = np.sum(y * y / p * fs.evaluate_unchecked(f, y), axis=0)
    tail = coeffs @ table
    out = explicit + tail
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite value in transfer operator")
    return FuncRep(out), TailReport(k_max=k_max, bound=bound)


def apply_transfer(p: int, f: FuncRep, policy: TruncationPolicy = DEFAULT_POLICY) -> FuncRep:
    return transfer_with_report(p, f, policy)[0]


def iterate_transfer(
    p: int, f: FuncRep, n: int, policy: TruncationPolicy = DEFAULT_POLICY
) -> FuncRep:
    n = check_nonneg_int(n)
    for _ in range(n):
        f = apply_transfer(p, f, policy)
    return f


def g_substitution(p: int, f: FuncRep) -> FuncRep:
    """g(x) = (p + x) f(x)."""
    return FuncRep(f.values * (p + f.nodes))


def inverse_g_substitution(p: int, g: FuncRep) -> FuncRep:
    return FuncRep(g.values / (p + g.nodes))


@dataclass(frozen=True)
class ProofDiagnostics:
    p: int
    k: int | np.ndarray
    x: float | np.ndarray
    h: float | np.ndarray
    h_prime: float | np.ndarray
    d: float | np.ndarray
    g_kx: float | np.ndarray


def h_k(p, k, x):
    return (p + x) / ((k + x) * (k + 1 + x))


def h_k_prime(p, k, x):
    u = k + x
    return (u * (u + 1) - (2 * k + 1 + 2 * x) * (p + x)) / (u**2 * (u + 1) ** 2)


def d_k(p, k, x):
    s = p + x
    num = (p + 1 + x) * s**2 + (k - p) ** 2 * (k + 1 - p)
    return num / (s * (k + x) ** 3 * (k + 1 + x) ** 2)


def g_kx(p, k, x):
    """(p+x)(k+x)^3(k+1+x)^2 D_k'(x), in the closed form used for its sign."""
    s = p + x
    base = s**2 * (p + 1 + x)
    return base * (2 / s + 1 / (p + 1 + x)) - (base + (k - p) ** 2 * (k + 1 - p)) * (
        1 / s + 3 / (k + x) + 2 / (k + 1 + x)
    )


def diagnostics(p: int, k, x) -> ProofDiagnostics:
    """h_k, h_k', D_k and G(k, x); ``k`` and ``x`` may be broadcastable arrays."""
    p = check_p(p)
    k_arr = np.asarray(k)
    if np.any(k_arr < p):
        raise ValueError("k must be >= p")
    x = check_unit_interval(x)
    kf = k_arr.astype(float) if k_arr.ndim else float(k_arr)
    return ProofDiagnostics(
        p=p,
        k=k,
        x=x,
        h=h_k(p, kf, x),
        h_prime=h_k_prime(p, kf, x),
        d=d_k(p, kf, x),
        g_kx=g_kx(p, kf, x),
    )


def h_sum(p: int, x: float, k_max: int | None = None) -> float:
    """sum_{k>=p} h_k(x): explicit to k_max plus the telescoped tail (p+x)/(k_max+1+x)."""
    p = check_p(p)
    x = check_unit_interval(x)
    k_max = min_k_max(p) if k_max is None else k_max
    k = np.arange(k_max, p - 1, -1, dtype=float)
    return math.fsum(h_k(p, k, x)) + (p + x) / (k_max + 1 + x)


def q_of_x(p: int, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Q(x) = p * sum_{k>=p} D_k(x).

    With u = k + x and s = p + x, partial fractions give

        D_k = 2s/u^3 - (s+2)/u^2 + (s+1)/(u+1)^2 + ((s+1)/s) (1/u - 1/(u+1)),

    so the tail over k > k_max is exact in terms of a = k_max + 1 + x:

        2s zeta(3, a) - zeta(2, a) - (s+1)/a^2 + (s+1)/(s a).
    """
    p = check_p(p)
    x = check_unit_interval(x)
    k_max = policy.k_max if policy.k_max is not None else min_k_max(p)
    k = np.arange(k_max, p - 1, -1, dtype=float)
    explicit = math.fsum(d_k(p, k, x))
    s = p + x
    a = k_max + 1.0 + x
    tol = 1e-3 * policy.tail_tol / p
    z3 = hurwitz_zeta(3, a, max(tol / (2 * s), 8 * math.ulp(a**-2)))
    z2 = hurwitz_zeta(2, a, max(tol, 8 * math.ulp(1 / a)))
    tail = 2 * s * z3.value - z2.value - (s + 1) / a**2 + (s + 1) / (s * a)
    return p * (explicit + tail)
