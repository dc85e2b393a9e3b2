"""Acceptance criteria 1-10, each at its stated tolerance and time budget.

Every test records its outcome with the ``acceptance`` fixture; the terminal
summary prints one PASS/FAIL line per criterion.
"""

import math
import time

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from gausskuzmin import funcspace as fs
from gausskuzmin.checks import random_polynomials
from gausskuzmin.gauss_map import phi_monte_carlo
from gausskuzmin.hurwitz import EPS, asymptotic_residual, hurwitz_zeta, q_bounds, q_constant
from gausskuzmin.kuzmin import fit_window, iterate_records, phi_iterate, phi_recursion_direct, rate_report
from gausskuzmin.measure import norm_const
from gausskuzmin.transfer import TruncationPolicy, apply_transfer, diagnostics, h_sum, q_of_x


def _timed(func):
    t0 = time.perf_counter()
    out = func()
    return out, time.perf_counter() - t0


def test_c01_q1_below_076(acceptance):
    q, dt = _timed(lambda: q_constant(1, 1e-10))
    ok = q.err <= 1e-10 and q.hi < 0.76 and 0.759179 < q.value < 0.759180 and dt < 0.1
    acceptance.record(1, "Q_1 < 0.76", ok, f"Q_1 = {q.value:.12f} +- {q.err:.1e}, {dt:.3f}s")
    assert ok


def test_c02_rate_sandwich(acceptance):
    def sweep():
        bad = []
        for p in range(1, 10_001):
            q = q_constant(p)
            b = q_bounds(p)
            if not (b.lower < q.lo and q.hi < b.upper < 1.0):
                bad.append(p)
        return bad

    bad, dt = _timed(sweep)
    ok = not bad and dt < 10.0
    acceptance.record(2, "lower < Q_p < upper < 1, p <= 10000", ok, f"{len(bad)} failures, {dt:.2f}s")
    assert ok


def test_c03_zeta_sandwiches(acceptance):
    bad = []
    for p in range(1, 1001):
        b = q_bounds(p)
        # radii near the precision floor; the zeta(3, p) gap is ~1/(24 p^4) relative
        z2 = hurwitz_zeta(2, p, 16 * EPS / p)
        z3 = hurwitz_zeta(3, p, 8 * EPS / p**2)
        if not (b.zeta2_lower <= z2.lo and z3.hi < b.zeta3_upper):
            bad.append(p)
    ok = not bad
    acceptance.record(3, "1/(p+a) <= zeta(2,p), zeta(3,p) < 1/(2(p^2-p+b))", ok, f"{len(bad)} failures")
    assert ok


def test_c04_fixed_point(acceptance):
    policy = TruncationPolicy(tail_tol=1e-12)
    worst = 0.0
    for p in (1, 2, 5, 10):
        c = norm_const(p)
        eta = fs.from_callable(lambda x: c / (p + x), 64)
        worst = max(worst, fs.sup_norm(fs.FuncRep(apply_transfer(p, eta, policy).values - eta.values)))
    ok = worst <= 1e-9
    acceptance.record(4, "sup|G eta - eta| <= 1e-9", ok, f"max residual {worst:.2e}")
    assert ok


def test_c05_integral_preservation(acceptance):
    worst = 0.0
    for p in (1, 2, 5):
        for c in random_polynomials(20, seed=1000 + p):
            f = fs.from_callable(lambda x: P.polyval(x, c))
            worst = max(worst, abs(fs.integral(apply_transfer(p, f)) - fs.integral(f)))
    ok = worst <= 1e-9
    acceptance.record(5, "|int G f - int f| <= 1e-9", ok, f"max drift {worst:.2e}")
    assert ok


def test_c06_decay_rate(acceptance):
    def run():
        out = {}
        for p in (1, 2, 5):
            sd = [r.sup_delta for r in iterate_records(p, 30)]
            out[p] = (sd, rate_report(p, sd))
        return out

    results, dt = _timed(run)
    ok = dt < 30.0
    parts = []
    for p, (sd, rep) in results.items():
        run_n = fit_window(sd)
        steps = all(sd[n + 1] <= sd[n] * (rep.q_p + 0.05) for n in run_n[:-1])
        ok &= rep.within_bound and steps
        parts.append(f"p={p} rate {rep.fitted_rate:.4f} <= {rep.q_p + 0.05:.4f}")
    acceptance.record(6, "fitted rate <= Q_p + 0.05, stepwise decay", ok, "; ".join(parts) + f", {dt:.1f}s")
    assert ok


def test_c07_monte_carlo(acceptance):
    samples = 10**6
    tol = 4 / math.sqrt(samples)
    xs = [0.25, 0.5, 0.75]

    def run():
        worst = 0.0
        for p in (1, 2):
            for n in (1, 3):
                analytic = phi_iterate(p, n, xs).phi
                for i, x in enumerate(xs):
                    est = phi_monte_carlo(p, n, x, samples, seed=20_000 + 10 * p + n)
                    worst = max(worst, abs(est - analytic[i]))
        return worst

    worst, dt = _timed(run)
    ok = worst <= tol and dt < 60.0
    acceptance.record(7, "|phi_iterate - MC| <= 4/sqrt(S)", ok, f"max diff {worst:.2e} (tol {tol:.0e}), {dt:.1f}s")
    assert ok


def test_c08_path_consistency(acceptance):
    worst = 0.0
    for p in (1, 2, 5):
        for n in range(4):
            worst = max(worst, float(np.max(np.abs(phi_iterate(p, n).phi - phi_recursion_direct(p, n).phi))))
    ok = worst <= 1e-8
    acceptance.record(8, "recursion path = density path", ok, f"max diff {worst:.2e}")
    assert ok


def test_c09_asymptotics(acceptance):
    r = asymptotic_residual(1000)
    ok = abs(r) <= 1e-4
    acceptance.record(9, "|p^2(Q_p - 1/(2p)) - 1/3| <= 1e-4 at p=1000", ok, f"residual {r:.3e}")
    assert ok


def test_c10_proof_diagnostics(acceptance):
    rng = np.random.default_rng(31_415)
    ok = True
    worst_sum = worst_q = 0.0
    for p in (1, 2, 5, 10):
        k = p + np.floor(rng.pareto(1.0, 10_000) * p)
        x = rng.random(10_000)
        d = diagnostics(p, k, x)
        ok &= bool(np.all(np.abs(d.h_prime) <= 3 / (k * (k + 1))))
        ok &= bool(np.all(d.d >= 0) and np.all(d.g_kx < 0))
        worst_sum = max(worst_sum, max(abs(h_sum(p, xi) - 1) for xi in np.linspace(0, 1, 11)))
        worst_q = max(worst_q, abs(q_of_x(p, 0.0) - q_constant(p).value))
        vals = [q_of_x(p, xi) for xi in np.linspace(0, 1, 33)]
        ok &= all(b <= a for a, b in zip(vals, vals[1:]))
    ok &= worst_sum <= 1e-12 and worst_q <= 1e-8
    acceptance.record(
        10, "h_k, D_k, G(k,x), Q(x) diagnostics", ok, f"|sum h - 1| {worst_sum:.1e}, |Q(0) - Q_p| {worst_q:.1e}"
    )
    assert ok
