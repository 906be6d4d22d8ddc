"""Divided differences of g(x) = x^d * log2(x) with confluent clusters.

The information gain of a spectrum reduces to the (d-1)-order divided
difference of g over the nodes x_i = lambda_i^2.  Direct evaluation of the
textbook sum loses all precision when nodes collide, so everything here goes
through a Newton table in which coincident nodes are collapsed into clusters
and the in-cluster entries are filled with the analytic derivative values

    g^(r)(x) / r! = C(d, r) * x^(d-r) * [log2 x + (eta(d) - eta(d-r)) / ln 2]

(zero at x = 0 for r < d).  Cross-cluster entries still divide by node gaps,
so the table additionally propagates a running rounding-error estimate; when
the estimate exceeds the caller's budget the table is recomputed in mpmath
at a precision chosen from the estimate itself.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

EPS = 2.220446049250313e-16
LN2 = math.log(2.0)

_MAX_DPS = 600


def _etas(n: int) -> list[float]:
    """Harmonic numbers 0..n as floats."""
    out = [0.0]
    for k in range(1, n + 1):
        out.append(out[-1] + 1.0 / k)
    return out


def cluster_nodes(x_sorted: np.ndarray, rtol: float) -> tuple[np.ndarray, np.ndarray]:
    """Group ascending nodes whose spacing is below rtol * max(x).

    Returns cluster representatives (means) and multiplicities.  The chain
    rule for grouping: a node joins the current cluster while its gap to the
    cluster's first member stays under the threshold.
    """
    n = x_sorted.size
    thr = rtol * float(x_sorted[-1])
    reps: list[float] = []
    mults: list[int] = []
    i = 0
    while i < n:
        j = i
        while j + 1 < n and (x_sorted[j + 1] - x_sorted[i]) <= thr:
            j += 1
        reps.append(float(x_sorted[i : j + 1].mean()))
        mults.append(j - i + 1)
        i = j + 1
    return np.asarray(reps), np.asarray(mults, dtype=np.int64)


def _conf(x: float, r: int, d: int, etas: list[float]) -> float:
    """g^(r)(x)/r! for g = x^d log2 x; requires r <= d."""
    if x == 0.0:
        # valid for r < d; the r = d limit diverges but is unreachable
        # because an all-zero node set never enters the table
        return 0.0
    if r == 0:
        return x**d * math.log2(x)
    return math.comb(d, r) * x ** (d - r) * (math.log2(x) + (etas[d] - etas[d - r]) / LN2)


def dd_confluent(reps, mults, d: int) -> tuple[float, float]:
    """Newton-table divided difference over a clustered node multiset.

    Returns (value, error_estimate).  The estimate follows the standard
    forward recurrence: each cross-cluster division amplifies the incoming
    absolute errors by the reciprocal gap and adds one rounding of its own.
    """
    xs: list[float] = []
    gid: list[int] = []
    for g, (v, m) in enumerate(zip(reps, mults)):
        xs.extend([float(v)] * int(m))
        gid.extend([g] * int(m))
    n = len(xs)
    if n - 1 > d:
        raise ValueError(f"node multiset of size {n} exceeds derivative order d={d}")
    etas = _etas(d)
    f = [_conf(x, 0, d, etas) for x in xs]
    e = [abs(v) * EPS for v in f]
    for lvl in range(1, n):
        for i in range(n - lvl):
            if gid[i + lvl] == gid[i]:
                f[i] = _conf(xs[i], lvl, d, etas)
                e[i] = abs(f[i]) * EPS
            else:
                gap = xs[i + lvl] - xs[i]
                new = (f[i + 1] - f[i]) / gap
                e[i] = (e[i + 1] + e[i] + EPS * (abs(f[i + 1]) + abs(f[i]))) / gap + EPS * abs(new)
                f[i] = new
    return f[0], e[0]


def dd_confluent_mp(reps, mults, d: int, dps: int) -> float:
    """mpmath twin of dd_confluent at a fixed working precision."""
    with mp.workdps(dps):
        ln2 = mp.log(2)
        etas = [mp.mpf(0)]
        for k in range(1, d + 1):
            etas.append(etas[-1] + mp.mpf(1) / k)

        def conf(x, r):
            if x == 0:
                return mp.mpf(0)
            if r == 0:
                return x**d * mp.log(x) / ln2
            return mp.binomial(d, r) * x ** (d - r) * (mp.log(x) + (etas[d] - etas[d - r])) / ln2

        xs = []
        gid = []
        for g, (v, m) in enumerate(zip(reps, mults)):
            xs.extend([mp.mpf(float(v))] * int(m))
            gid.extend([g] * int(m))
        n = len(xs)
        f = [conf(x, 0) for x in xs]
        for lvl in range(1, n):
            for i in range(n - lvl):
                if gid[i + lvl] == gid[i]:
                    f[i] = conf(xs[i], lvl)
                else:
                    f[i] = (f[i + 1] - f[i]) / (xs[i + lvl] - xs[i])
        return float(f[0])


# ---------------------------------------------------------------------------
# two-cluster series
#
# For nodes {x (mult j), 1 (mult i)} the divided difference of g equals the
# Taylor expansion of g around 1 pushed through the difference operator:
#
#     dd = sum_{m>=0} c_{m+i+j-1}(1) * C(m+j-1, j-1) * (x-1)^m
#
# with c_r(1) = g^(r)(1)/r!.  Orders r <= d come from the confluent formula
# (the log term vanishes at 1); beyond d only the logarithm survives:
# c_{d+p}(1) = (-1)^(p-1) / (p * C(d+p, p) * ln 2).  The ratio |x-1| < 1
# makes this converge for every x in (0, 1], fastest where the Newton table
# is worst, so the two paths cover each other.

_SERIES_TERMS = 80
_series_cache: dict[tuple[int, int, int], np.ndarray] = {}


def _series_coeffs(d: int, mult_one: int, mult_x: int) -> np.ndarray:
    key = (d, mult_one, mult_x)
    hit = _series_cache.get(key)
    if hit is not None:
        return hit
    etas = _etas(d)
    n = mult_one + mult_x
    out = np.empty(_SERIES_TERMS + 1)
    for m in range(_SERIES_TERMS + 1):
        r = m + n - 1
        if r <= d:
            c = math.comb(d, r) * (etas[d] - etas[d - r]) / LN2
        else:
            p = r - d
            c = (-1.0) ** (p - 1) / (p * math.comb(d + p, p) * LN2)
        out[m] = c * math.comb(m + mult_x - 1, mult_x - 1)
    _series_cache[key] = out
    return out


def dd_x_one_series(x, mult_x: int, mult_one: int, d: int):
    """dd of g over {x (mult_x times), 1 (mult_one times)}, vectorized in x.

    Accurate to ~1e-15 relative for |x - 1| <= 0.55 or so; callers switch to
    the Newton table below that.
    """
    coef = _series_coeffs(d, mult_one, mult_x)
    u = np.asarray(x, dtype=float) - 1.0
    acc = np.full_like(u, coef[-1])
    for m in range(_SERIES_TERMS - 1, -1, -1):
        acc = acc * u + coef[m]
    return acc


def needed_dps(err_est: float, target: float) -> int:
    """Working precision that brings the table error under target.

    The float estimate equals (amplification x machine epsilon); mpmath at
    p digits turns that into (amplification x 10^-p), so p must cover the
    amplification plus the target digits, with margin for mp's own ulps.
    """
    amp_digits = math.log10(max(err_est, EPS) / EPS)
    p = int(math.ceil(amp_digits - math.log10(target))) + 12
    return min(max(p, 30), _MAX_DPS)


def dd_accurate(reps, mults, d: int, target: float) -> float:
    """Divided difference to absolute accuracy target, escalating if needed."""
    val, err = dd_confluent(reps, mults, d)
    if err <= target:
        return val
    return dd_confluent_mp(reps, mults, d, needed_dps(err, target))
