"""Gauss-Kuzmin iterates phi_{p,n}(x) = m(T_p^{-n}[0, x]) and their decay rate.

The main path works with densities: phi_n' = G_p^n 1, then phi_n is the
antiderivative.  ``phi_recursion_direct`` evaluates the measure recursion

    phi_{n+1}(x) = sum_{k>=p} phi_n(p/k) - phi_n(p/(k+x))

literally, as an independent cross-check for small n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import funcspace as fs
from ._validation import check_grid, check_nonneg_int, check_p
from .funcspace import DEFAULT_DEGREE, FuncRep
from .hurwitz import EPS, hurwitz_zeta, q_bounds, q_constant
from .measure import cdf_phi
from .transfer import (
    TailToleranceError,
    TruncationPolicy,
    apply_transfer,
    min_k_max,
)

log = logging.getLogger(__name__)

# Per-step tail error feeds straight into the mass of phi_n, so the iterates
# use a tighter tail tolerance than a single operator application.
KUZMIN_POLICY = TruncationPolicy(tail_tol=1e-14)
RESIDUAL_FLOOR = 1e-12
FIT_CEILING = 0.1
DEFAULT_N_MAX = 30
GRID_POINTS = 33

# Reference constant only: Levy's classical rate for p = 1.
LEVY_Q = 3.5 - 2.0 * math.sqrt(2.0)


def default_grid(points: int = GRID_POINTS) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


@dataclass(frozen=True)
class IterateRecord:
    p: int
    n: int
    grid: np.ndarray
    phi: np.ndarray
    delta: np.ndarray
    sup_delta: float


@dataclass(frozen=True)
class RateReport:
    p: int
    q_p: float
    q_err: float
    q_lower: float
    q_upper: float
    fitted_rate: float
    fit_window: tuple[int, int] | None
    residual_floor: float
    sup_deltas: list[float] = field(default_factory=list)
    fitted_constant: float = math.nan
    message: str = ""

    @property
    def usable(self) -> bool:
        return self.fit_window is not None

    @property
    def within_bound(self) -> bool:
        return self.usable and self.fitted_rate <= self.q_p + 0.05

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q_p": self.q_p,
            "q_err": self.q_err,
            "q_lower": self.q_lower,
            "q_upper": self.q_upper,
            "fitted_rate": self.fitted_rate,
            "fit_window": list(self.fit_window) if self.fit_window else None,
            "residual_floor": self.residual_floor,
            "fitted_constant": self.fitted_constant,
            "sup_deltas": list(self.sup_deltas),
            "message": self.message,
        }


def _record(p: int, n: int, grid: np.ndarray, phi: np.ndarray) -> IterateRecord:
    delta = phi - cdf_phi(p, grid)
    return IterateRecord(
        p=p, n=n, grid=grid, phi=phi, delta=delta, sup_delta=float(np.max(np.abs(delta)))
    )


def density_iterates(p: int, n_max: int, policy=KUZMIN_POLICY, degree: int = DEFAULT_DEGREE):
    """Yield phi_n' = G_p^n 1 for n = 0..n_max."""
    dens = fs.from_callable(lambda x: np.ones_like(x), degree)
    yield dens
    for _ in range(n_max):
        dens = apply_transfer(p, dens, policy)
        yield dens


def _phi_from_density(n: int, dens: FuncRep, grid: np.ndarray) -> np.ndarray:
    if n == 0:
        return grid.copy()
    return fs.evaluate_unchecked(fs.antiderivative(dens), grid)


def phi_iterate(
    p: int,
    n: int,
    grid=None,
    policy: TruncationPolicy = KUZMIN_POLICY,
    degree: int = DEFAULT_DEGREE,
) -> IterateRecord:
    p = check_p(p)
    n = check_nonneg_int(n)
    grid = default_grid() if grid is None else check_grid(grid)
    for dens in density_iterates(p, n, policy, degree):
        pass
    return _record(p, n, grid, _phi_from_density(n, dens, grid))


def iterate_records(
    p: int,
    n_max: int,
    grid=None,
    policy: TruncationPolicy = KUZMIN_POLICY,
    degree: int = DEFAULT_DEGREE,
) -> list[IterateRecord]:
    """IterateRecords for n = 0..n_max from a single pass of the operator."""
    p = check_p(p)
    n_max = check_nonneg_int(n_max, "n_max")
    grid = default_grid() if grid is None else check_grid(grid)
    return [
        _record(p, n, grid, _phi_from_density(n, dens, grid))
        for n, dens in enumerate(density_iterates(p, n_max, policy, degree))
    ]


def _difference_tail(p: int, k_max: int, x: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """sum_{k>k_max} sum_j c_j p^j (k^-j - (k+x)^-j) for j = 1..len(coeffs)-1."""
    a0 = k_max + 1
    out = np.zeros_like(x)
    # j = 1: sum_k x/(k(k+x)) = sum_i (-1)^i x^{i+1} zeta(i+2, a0), alternating in i
    z = [hurwitz_zeta(s, a0, 16 * EPS * a0 ** (1 - s)).value for s in range(2, 7)]
    harmonic = sum((-1) ** i * x ** (i + 1) * z[i] for i in range(5))
    out += coeffs[1] * p * harmonic
    for j in range(2, len(coeffs)):
        base = hurwitz_zeta(j, a0, 16 * EPS * a0 ** (1 - j)).value
        shifted = np.array(
            [hurwitz_zeta(j, a0 + xi, 16 * EPS * (a0 + xi) ** (1 - j)).value for xi in x]
        )
        out += coeffs[j] * p**j * (base - shifted)
    return out


def _recursion_step(p: int, phi: FuncRep, policy: TruncationPolicy) -> FuncRep:
    m = max(policy.taylor_order, 1)
    coeffs = fs.taylor_coefficients(phi, m)
    floor = min_k_max(p)
    k_max = policy.k_max if policy.k_max is not None else floor
    deriv = fs.from_coeffs(fs.derivative_coeffs(phi, m + 1), phi.degree)
    const = fs.sup_norm_on(deriv, 0.0, p / (floor + 1.0)) / math.factorial(m + 1)
    while True:
        # |R(p/k) - R(p/(k+x))| <= (m+1) C (p/k)^m * p x/(k(k+x)), plus the
        # truncation of the alternating j = 1 series at x^6 zeta(7, k_max+1).
        bound = (m + 1) * const * float(p) ** (m + 1) * k_max ** (-m - 1) / (m + 1)
        bound += abs(coeffs[1]) * p * k_max**-6 / 6.0
        if bound <= policy.tail_tol or policy.k_max is not None or k_max > 2**20:
            break
        k_max *= 2
    if bound > policy.tail_tol:
        raise TailToleranceError(
            f"recursion tail bound {bound:.3e} exceeds tail_tol={policy.tail_tol:g}",
            bound,
            k_max,
        )
    x = phi.nodes
    k = np.arange(k_max, p - 1, -1, dtype=float)
    at_k = fs.evaluate_unchecked(phi, p / k)
    at_kx = fs.evaluate_unchecked(phi, p / (k[:, None] + x[None, :]))
    explicit = np.sum(at_k[:, None] - at_kx, axis=0)
    return FuncRep(explicit + _difference_tail(p, k_max, x, coeffs))


def phi_recursion_direct(
    p: int,
    n: int,
    grid=None,
    policy: TruncationPolicy = KUZMIN_POLICY,
    degree: int = DEFAULT_DEGREE,
) -> IterateRecord:
    """phi_{p,n} from the measure recursion itself; limited to n <= 3."""
    p = check_p(p)
    n = check_nonneg_int(n)
    if n > 3:
        raise ValueError("phi_recursion_direct supports n <= 3")
    grid = default_grid() if grid is None else check_grid(grid)
    phi = fs.from_callable(lambda x: x, degree)
    for _ in range(n):
        phi = _recursion_step(p, phi, policy)
    values = grid.copy() if n == 0 else fs.evaluate_unchecked(phi, grid)
    return _record(p, n, grid, values)


def delta_sup(p: int, n: int, grid=None, policy: TruncationPolicy = KUZMIN_POLICY) -> float:
    return phi_iterate(p, n, grid, policy).sup_delta


def fit_window(sup_deltas, residual_floor: float = RESIDUAL_FLOOR, ceiling: float = FIT_CEILING):
    """First contiguous run of n with residual_floor < sup_delta < ceiling."""
    ns = [n for n, d in enumerate(sup_deltas) if residual_floor < d < ceiling]
    if not ns:
        return []
    run = [ns[0]]
    for n in ns[1:]:
        if n != run[-1] + 1:
            break
        run.append(n)
    return run


def rate_report(
    p: int, sup_deltas, residual_floor: float = RESIDUAL_FLOOR, q_tol: float = 1e-12
) -> RateReport:
    """Log-linear least-squares fit of sup_delta against n."""
    q = q_constant(p, q_tol)
    bounds = q_bounds(p)
    run = fit_window(sup_deltas, residual_floor)
    common = dict(
        p=p,
        q_p=q.value,
        q_err=q.err,
        q_lower=bounds.lower,
        q_upper=bounds.upper,
        residual_floor=residual_floor,
        sup_deltas=[float(d) for d in sup_deltas],
    )
    if len(run) < 4:
        msg = f"only {len(run)} usable n in ({residual_floor:g}, {FIT_CEILING:g}); need 4"
        log.warning("p=%d: %s", p, msg)
        return RateReport(fitted_rate=math.nan, fit_window=None, message=msg, **common)
    ns = np.array(run, dtype=float)
    slope, intercept = np.polyfit(ns, np.log([sup_deltas[n] for n in run]), 1)
    return RateReport(
        fitted_rate=float(math.exp(slope)),
        fit_window=(run[0], run[-1]),
        fitted_constant=float(math.exp(intercept)),
        **common,
    )


def fit_decay_rate(
    p: int,
    n_max: int = DEFAULT_N_MAX,
    grid=None,
    policy: TruncationPolicy = KUZMIN_POLICY,
    residual_floor: float = RESIDUAL_FLOOR,
    degree: int = DEFAULT_DEGREE,
) -> RateReport:
    if n_max < 5:
        raise ValueError("n_max must be >= 5")
    records = iterate_records(p, n_max, grid, policy, degree)
    return rate_report(p, [r.sup_delta for r in records], residual_floor)
