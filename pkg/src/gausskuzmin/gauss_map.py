"""The generalized Gauss map T_p(x) = {p/x}, its orbits, and a Monte Carlo
estimator of phi_{p,n}(x) = m(T_p^{-n}[0, x])."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import check_nonneg_int, check_p, check_unit_interval

# Uniform draws are generated in blocks to bound memory.
_BLOCK = 1 << 18


@dataclass(frozen=True)
class OrbitRecord:
    p: int
    x0: float
    points: np.ndarray
    digits: np.ndarray

    @property
    def terminated(self) -> bool:
        """True when the orbit hit the fixed point 0 and stopped there."""
        return bool(self.points[-1] == 0.0)


def _exact_step(p: int, x: float) -> tuple[int, float]:
    """Digit and image of x under T_p in exact rational arithmetic.

    Only needed when p/x overflows, i.e. for subnormal x.
    """
    num, den = x.as_integer_ratio()
    d, r = divmod(p * den, num)
    return d, r / num


def t_apply(p: int, x: float) -> float:
    p = check_p(p)
    x = check_unit_interval(x)
    if x == 0.0:
        return 0.0
    y = p / x
    if math.isinf(y):
        return _exact_step(p, x)[1]
    return y - math.floor(y)


def t_apply_array(p: int, x: np.ndarray) -> np.ndarray:
    """Vectorised T_p; zeros map to zero."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    nz = x != 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        y = p / x[nz]
        out[nz] = y - np.floor(y)
    big = np.flatnonzero(nz)[np.isinf(y)]
    for i in big:
        out[i] = _exact_step(p, float(x[i]))[1]
    return out


def orbit(p: int, x0: float, n: int) -> OrbitRecord:
    """Iterate T_p up to ``n`` times from ``x0``, recording the digits floor(p/x).

    The orbit stops early at an exact zero; in that case ``digits`` is one
    shorter than ``points``.
    """
    p = check_p(p)
    x = check_unit_interval(x0, "x0")
    n = check_nonneg_int(n)
    points = [x]
    digits = []
    for _ in range(n):
        if x == 0.0:
            break
        y = p / x
        if math.isinf(y):
            d, x = _exact_step(p, x)
        else:
            d = math.floor(y)
            x = y - d
        digits.append(d)
        points.append(x)
    # digits of subnormal points do not fit in int64
    dtype = np.int64 if all(d < 2**63 for d in digits) else object
    return OrbitRecord(
        p=p,
        x0=float(x0),
        points=np.array(points, dtype=float),
        digits=np.array(digits, dtype=dtype),
    )


def _count_below(p: int, n: int, x: float, samples: int, seed_seq) -> int:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    hits = 0
    left = samples
    while left:
        m = min(left, _BLOCK)
        u = rng.random(m)
        for _ in range(n):
            u = t_apply_array(p, u)
        hits += int(np.count_nonzero(u <= x))
        left -= m
    return hits


def phi_monte_carlo(
    p: int, n: int, x: float, samples: int, seed: int, workers: int = 1
) -> float:
    """Fraction of ``samples`` uniform points u with T_p^n(u) <= x.

    Each worker draws from its own PCG64 stream spawned from
    ``SeedSequence(seed)``, and the merge is an integer sum of counts, so the
    result depends only on (seed, samples, workers).
    """
    p = check_p(p)
    n = check_nonneg_int(n)
    x = check_unit_interval(x)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    streams = np.random.SeedSequence(seed).spawn(workers)
    share, extra = divmod(samples, workers)
    sizes = [share + (i < extra) for i in range(workers)]
    if workers == 1:
        hits = _count_below(p, n, x, sizes[0], streams[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(lambda a: _count_below(p, n, x, *a), zip(sizes, streams)))
    return hits / samples
