"""Registry of the invariant checks run by ``gausskuzmin verify``.

Each check returns ``(passed, detail)``.  Checks that compare against a
numeric tolerance accept ``tol``; ``None`` means the documented default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import funcspace as fs
from .gauss_map import orbit, phi_monte_carlo, t_apply_array
from .hurwitz import EPS, asymptotic_residual, hurwitz_zeta, q_bounds, q_constant
from .kuzmin import (
    default_grid,
    fit_window,
    iterate_records,
    phi_iterate,
    phi_recursion_direct,
    rate_report,
)
from .measure import cdf_phi, density_eta, norm_const
from .transfer import (
    TruncationPolicy,
    apply_transfer,
    d_k,
    g_kx,
    g_substitution,
    h_k_prime,
    h_sum,
    q_of_x,
)


@dataclass(frozen=True)
class Check:
    name: str
    func: Callable
    default_tol: float | None = None


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _eta(p, degree=fs.DEFAULT_DEGREE):
    c = norm_const(p)
    return fs.from_callable(lambda x: c / (p + x), degree)


def random_polynomials(count: int, seed: int, max_degree: int = 10):
    """Seeded polynomials on [0, 1] with uniform(-1, 1) monomial coefficients."""
    rng = np.random.default_rng(seed)
    polys = []
    for _ in range(count):
        deg = int(rng.integers(0, max_degree + 1))
        polys.append(rng.uniform(-1.0, 1.0, deg + 1))
    return polys


def hurwitz_sandwich(tol=None, **_):
    """Certified for p <= 1000; above that the zeta(3, p) gap drops below
    double rounding, so the bounds are only checked for consistency."""
    bad = []
    for p in range(1, 10_001):
        b = q_bounds(p)
        if p <= 1000:
            z2 = hurwitz_zeta(2, p, 16 * EPS / p)
            z3 = hurwitz_zeta(3, p, 8 * EPS / p**2)
            ok = b.zeta2_lower <= z2.lo and z3.hi < b.zeta3_upper
        else:
            z2 = hurwitz_zeta(2, p, 1e-10 / p)
            z3 = hurwitz_zeta(3, p, 1e-10 / p**2)
            ok = b.zeta2_lower <= z2.hi and z3.lo < b.zeta3_upper
        if not ok:
            bad.append(p)
    return not bad, f"violations at p={bad[:5]}" if bad else "certified p <= 1000, consistent to 10000"


def rate_sandwich(tol=None, **_):
    bad = []
    for p in range(1, 10_001):
        q = q_constant(p)
        b = q_bounds(p)
        if not (b.lower < q.lo and q.hi < b.upper < 1.0):
            bad.append(p)
    return not bad, f"violations at p={bad[:5]}" if bad else "p in 1..10000"


def zeta_recurrence(tol=None, **_):
    worst = 0.0
    for s in (2, 3):
        for p in range(1, 101):
            a = hurwitz_zeta(s, p, 1e-14)
            b = hurwitz_zeta(s, p + 1, 1e-14)
            slack = abs(a.value - b.value - p**-s) - (a.err + b.err + 4e-16)
            worst = max(worst, slack)
    return worst <= 0.0, f"max slack {worst:.3e}"


def q_monotone(tol=None, **_):
    qs = [q_constant(p).value for p in range(1, 101)]
    ok = all(b < a for a, b in zip(qs, qs[1:]))
    return ok, "Q_p strictly decreasing for p in 1..100"


def q1_bound(tol=None, **_):
    q = q_constant(1, 1e-10)
    return q.hi < 0.76 and 0.759179 < q.value < 0.759180, f"Q_1 = {q.value:.12f} +- {q.err:.1e}"


def asymptotics(tol=None, **_):
    r = asymptotic_residual(1000)
    return abs(r) <= 1e-4, f"residual(1000) = {r:.3e}"


def cdf_derivative(tol=None, **_):
    tol = 1e-8 if tol is None else tol
    h = 1e-5
    xs = np.linspace(0.0, 1.0, 35)[1:-1]
    worst = 0.0
    for p in (1, 2, 5, 10):
        fd = (cdf_phi(p, xs + h) - cdf_phi(p, xs - h)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(fd - density_eta(p, xs)))))
    return worst <= tol, f"max |FD - eta| = {worst:.3e}"


def density_normalized(tol=None, **_):
    tol = 1e-12 if tol is None else tol
    worst = max(abs(fs.integral(_eta(p)) - 1.0) for p in (1, 2, 5, 10, 100))
    return worst <= tol, f"max |int eta - 1| = {worst:.3e}"


def map_range(tol=None, **_):
    u = np.random.default_rng(7).random(100_000)
    u = u[u > 0]
    ok = True
    for p in (1, 2, 5, 10):
        y = t_apply_array(p, u)
        ok &= bool(np.all((y >= 0) & (y < 1)) and np.all(np.floor(p / u) >= p))
    return ok, "T_p(x) in [0,1) and floor(p/x) >= p on 1e5 samples"


def birkhoff(tol=None, **_):
    worst = 0.0
    qs = np.arange(1, 10) / 10
    for p in (1, 2):
        pts = orbit(p, math.sqrt(2.0) - 1.0, 1_000_000).points
        emp = np.searchsorted(np.sort(pts), qs, side="right") / pts.size
        worst = max(worst, float(np.max(np.abs(emp - cdf_phi(p, qs)))))
    return worst <= 0.02, f"max decile deviation {worst:.4f}"


def spectral_consistency(tol=None, **_):
    tol = 1e-10 if tol is None else tol
    funcs = [np.exp, np.sin, lambda x: 1 / (1 + x), lambda x: np.cos(3 * x)]
    worst = 0.0
    for f in funcs:
        r = fs.from_callable(f)
        worst = max(worst, abs(fs.integral(fs.differentiate(r)) - (r.values[-1] - r.values[0])))
    return worst <= tol, f"max |int f' - (f(1)-f(0))| = {worst:.3e}"


def geometric_convergence(tol=None, **_):
    grid = np.linspace(0, 1, 2001)
    ok = True
    for p in (1, 2, 5):
        errs = []
        for n in range(4, 65, 4):
            r = fs.from_callable(lambda x: 1 / (p + x), n)
            errs.append(float(np.max(np.abs(fs.evaluate(r, grid) - 1 / (p + grid)))))
        for a, b in zip(errs, errs[1:]):
            if a > 1e-13 and b > a / 2:
                ok = False
    return ok, "error on 1/(p+x) halves every +4 degrees down to 1e-13"


def fixed_point(tol=None, **_):
    tol = 1e-9 if tol is None else tol
    worst = 0.0
    policy = TruncationPolicy(tail_tol=1e-12)
    for p in (1, 2, 5, 10):
        e = _eta(p)
        worst = max(worst, float(np.max(np.abs(apply_transfer(p, e, policy).values - e.values))))
    return worst <= tol, f"max |G eta - eta| = {worst:.3e}"


def integral_preservation(tol=None, **_):
    tol = 1e-9 if tol is None else tol
    worst = 0.0
    for p in (1, 2, 5):
        for c in random_polynomials(20, seed=p):
            f = fs.from_callable(lambda x: np.polynomial.polynomial.polyval(x, c))
            worst = max(worst, abs(fs.integral(apply_transfer(p, f)) - fs.integral(f)))
    return worst <= tol, f"max |int Gf - int f| = {worst:.3e}"


def positivity(tol=None, **_):
    funcs = [np.exp, lambda x: (x - 0.5) ** 2, lambda x: np.ones_like(x), lambda x: x**3]
    worst = 0.0
    for p in (1, 2, 5):
        for f in funcs:
            worst = min(worst, float(np.min(apply_transfer(p, fs.from_callable(f)).values)))
    return worst >= -1e-12, f"min node value {worst:.3e}"


def derivative_ratio(tol=None, **_):
    """sup|g'_{n+1}| / sup|g'_n| <= Q_p + 1e-3 while g'_n stays above round-off."""
    detail = []
    ok = True
    for p in (1, 2, 5):
        q = q_constant(p).value
        f = fs.from_callable(lambda x: np.exp(x) / (math.e - 1))
        norms = []
        for _ in range(17):
            norms.append(fs.sup_norm(fs.differentiate(g_substitution(p, f))))
            f = apply_transfer(p, f)
        floor = 1e-9 * norms[0]
        ratios = [b / a for a, b in zip(norms[1:], norms[2:]) if b > floor]
        worst = max(ratios) if ratios else 0.0
        ok &= worst <= q + 1e-3
        detail.append(f"p={p}: {worst:.4f}<= {q:.4f}")
    return ok, "; ".join(detail)


def h_prime_bound(tol=None, **_):
    rng = np.random.default_rng(11)
    ok = True
    for p in (1, 2, 5, 10):
        k = p + rng.integers(0, 1000, 1000).astype(float)
        x = rng.random(1000)
        ok &= bool(np.all(np.abs(h_k_prime(p, k, x)) <= 3 / (k * (k + 1))))
    return ok, "|h_k'| <= 3/(k(k+1)) on 1e3 samples per p"


def proof_signs(tol=None, **_):
    tol = 1e-12 if tol is None else tol
    rng = np.random.default_rng(13)
    ok = True
    worst_sum = 0.0
    for p in (1, 2, 5, 10):
        k = p + np.floor(rng.pareto(1.0, 10_000) * p).astype(float)
        x = rng.random(10_000)
        ok &= bool(np.all(d_k(p, k, x) >= 0) and np.all(g_kx(p, k, x) < 0))
        worst_sum = max(worst_sum, max(abs(h_sum(p, xi) - 1) for xi in (0.0, 0.3, 0.7, 1.0)))
    return ok and worst_sum <= tol, f"D_k >= 0, G < 0; max |sum h_k - 1| = {worst_sum:.1e}"


def q_of_x_check(tol=None, **_):
    tol = 1e-8 if tol is None else tol
    worst = 0.0
    mono = True
    for p in (1, 2, 5, 10):
        worst = max(worst, abs(q_of_x(p, 0.0) - q_constant(p).value))
        vals = [q_of_x(p, x) for x in np.linspace(0, 1, 21)]
        mono &= all(b <= a for a, b in zip(vals, vals[1:]))
    return worst <= tol and mono, f"max |Q(0) - Q_p| = {worst:.3e}, nonincreasing={mono}"


def decay_rate(tol=None, **_):
    ok = True
    detail = []
    for p in (1, 2, 5):
        sd = [r.sup_delta for r in iterate_records(p, 30)]
        rep = rate_report(p, sd)
        run = fit_window(sd)
        steps = all(sd[n + 1] <= sd[n] * (rep.q_p + 0.05) for n in run[:-1])
        ok &= rep.within_bound and steps
        detail.append(f"p={p}: rate {rep.fitted_rate:.4f} vs Q_p {rep.q_p:.4f}")
    return ok, "; ".join(detail)


def path_consistency(tol=None, **_):
    tol = 1e-8 if tol is None else tol
    worst = 0.0
    for p in (1, 2, 5):
        for n in range(4):
            a = phi_iterate(p, n).phi
            b = phi_recursion_direct(p, n).phi
            worst = max(worst, float(np.max(np.abs(a - b))))
    return worst <= tol, f"max |density path - recursion| = {worst:.3e}"


def endpoints(tol=None, **_):
    tol = 1e-10 if tol is None else tol
    worst = 0.0
    for p in (1, 2, 5):
        for r in iterate_records(p, 30, grid=np.array([0.0, 1.0])):
            worst = max(worst, abs(r.phi[0]), abs(r.phi[1] - 1.0))
    return worst <= tol, f"max endpoint deviation {worst:.3e}"


def monte_carlo(tol=None, samples=200_000, seed=0, workers=1, **_):
    tol_mc = 4 / math.sqrt(samples)
    worst = 0.0
    xs = np.array([0.25, 0.5, 0.75])
    for p in (1, 2):
        for n in (1, 3):
            analytic = phi_iterate(p, n, xs).phi
            for x, a in zip(xs, analytic):
                est = phi_monte_carlo(p, n, float(x), samples, seed, workers)
                worst = max(worst, abs(est - a))
    return worst <= tol_mc, f"max |MC - analytic| = {worst:.2e} (tol {tol_mc:.2e})"


CHECKS = [
    Check("hurwitz.zeta_sandwich", hurwitz_sandwich),
    Check("hurwitz.rate_sandwich", rate_sandwich),
    Check("hurwitz.recurrence", zeta_recurrence),
    Check("hurwitz.q_monotone", q_monotone),
    Check("hurwitz.q1_bound", q1_bound),
    Check("hurwitz.asymptotics", asymptotics),
    Check("measure.cdf_derivative", cdf_derivative, 1e-8),
    Check("measure.normalization", density_normalized, 1e-12),
    Check("gauss_map.range_and_digits", map_range),
    Check("gauss_map.birkhoff", birkhoff),
    Check("funcspace.derivative_integral", spectral_consistency, 1e-10),
    Check("funcspace.geometric_convergence", geometric_convergence),
    Check("transfer.fixed_point", fixed_point, 1e-9),
    Check("transfer.integral_preservation", integral_preservation, 1e-9),
    Check("transfer.positivity", positivity),
    Check("transfer.derivative_ratio", derivative_ratio),
    Check("transfer.h_prime_bound", h_prime_bound),
    Check("transfer.proof_signs", proof_signs, 1e-12),
    Check("transfer.q_of_x", q_of_x_check, 1e-8),
    Check("kuzmin.decay_rate", decay_rate),
    Check("kuzmin.path_consistency", path_consistency, 1e-8),
    Check("kuzmin.endpoints", endpoints, 1e-10),
    Check("kuzmin.monte_carlo", monte_carlo),
]


def run_checks(tol=None, **options) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            passed, detail = check.func(tol=tol if check.default_tol is not None else None, **options)
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(check.name, bool(passed), detail))
    return results
