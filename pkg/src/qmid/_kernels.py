"""Streaming enumeration of singular-value grids and the sweep kernels.

A sweep visits every descending tuple (j_1 >= ... >= j_d), j_i in {0..G},
except the all-zero one; lambda_i = j_i / G.  Tuples are ranked in
lexicographic order by

    rank(j) = sum_t C(j_t + d - t, d - t + 1)

with the all-zero tuple at rank 0, so any rank range can be enumerated
independently: chunks unrank their start and run an odometer from there.
That makes the sweep data-parallel with deterministic ordering.

All measures come from integer accumulators: with S1 = sum j_i and
S2 = sum j_i^2, the fidelities are ratios of integers, and the information
term needs only the divided-difference chain over the grid values
lambda^2, whose per-node data (monomial values, confluent derivatives,
log2 of integers) is precomputed per (d, G).  The chain reuses a Newton
table over the d-1 largest entries while the smallest one runs through its
range, so the cost per point is O(d) with no transcendentals.

The numba kernels (nogil, cached) are the default backend; a pure-numpy
twin evaluates the same formulas vectorized over unranked blocks.  Select
with QMID_BACKEND or config.sweep_backend.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import SweepError
from .measures import info_bound

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency normally
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


PLANES = ("GF", "GR", "IF", "IR")


def backend() -> str:
    """Resolve the sweep backend: env QMID_BACKEND beats config, auto picks numba."""
    choice = os.environ.get("QMID_BACKEND", config.sweep_backend).lower()
    if choice not in ("auto", "numba", "numpy"):
        raise SweepError(f"unknown backend {choice!r}; use auto, numba, or numpy")
    if choice == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    if choice == "numba" and not HAVE_NUMBA:
        raise SweepError("numba backend requested but numba is not importable")
    return choice


def thread_count() -> int:
    raw = os.environ.get("QMID_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise SweepError(f"QMID_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise SweepError("QMID_THREADS must be >= 1")
    return n


def grid_levels(step: float) -> int:
    """Number of grid intervals G for a step size; the grid is {0, 1/G, ..., 1}."""
    if not (0.0 < step <= 0.1):
        raise SweepError(f"step must lie in (0, 0.1], got {step}")
    G = round(1.0 / step)
    if abs(G * step - 1.0) > 1e-9:
        raise SweepError(f"step must divide 1 exactly, got {step}")
    return G


def total_points(d: int, G: int) -> int:
    """Count of descending tuples including the all-zero one (rank 0)."""
    return math.comb(G + d, d)


def unrank(d: int, G: int, rank: int) -> np.ndarray:
    """Digits of the descending tuple at a given lexicographic rank."""
    if not (0 <= rank < total_points(d, G)):
        raise SweepError(f"rank {rank} out of range for d={d}, G={G}")
    digits = np.empty(d, dtype=np.int64)
    r = rank
    for t in range(d):
        m = d - t  # order of the binomial for this digit
        j = 0
        # largest j with C(j + m - 1, m) <= r
        while j < G and math.comb(j + m, m) <= r:
            j += 1
        digits[t] = j
        r -= math.comb(j + m - 1, m)
    if r != 0:  # pragma: no cover - guarded by the range check above
        raise SweepError("internal unranking inconsistency")
    return digits


def rank_of(digits: np.ndarray) -> int:
    d = len(digits)
    return sum(math.comb(int(digits[t]) + d - t - 1, d - t) for t in range(d))


@dataclass(frozen=True)
class GridTables:
    d: int
    G: int
    step: float
    xg: np.ndarray  # lambda^2 per level
    g0: np.ndarray  # x^d log2 x per level
    conf: np.ndarray  # (G+1, d) confluent derivatives g^(r)/r! per level
    log2i: np.ndarray  # log2 of integers 0..d*G^2 (index 0 unused)
    base: float


def grid_tables(d: int, G: int) -> GridTables:
    step = 1.0 / G
    lam = np.arange(G + 1, dtype=np.float64) * step
    x = lam * lam
    g0 = np.zeros(G + 1)
    g0[1:] = x[1:] ** d * np.log2(x[1:])
    etas = np.array([0.0] + [sum(1.0 / k for k in range(1, n + 1)) for n in range(1, d + 1)])
    ln2 = math.log(2.0)
    conf = np.zeros((G + 1, d))
    conf[:, 0] = g0
    for r in range(1, d):
        conf[1:, r] = math.comb(d, r) * x[1:] ** (d - r) * (
            np.log2(x[1:]) + (etas[d] - etas[d - r]) / ln2)
    log2i = np.zeros(d * G * G + 1)
    log2i[1:] = np.log2(np.arange(1, d * G * G + 1, dtype=np.float64))
    return GridTables(d, G, step, x, g0, conf, log2i, info_bound(d))


@dataclass(frozen=True)
class BoundaryTables:
    """Per-plane piecewise-linear upper/lower info bounds on a uniform x grid."""

    d: int
    x0: np.ndarray  # (2, 4) rows upper/lower, columns in PLANES order
    invh: np.ndarray
    tab: np.ndarray  # (2, 4, nels)


def boundary_tables(d: int, n_lam: int = 400_001, seg: int | None = None) -> BoundaryTables:
    """Build the lookup tables the dominance kernel checks points against.

    On the F planes the boundary graphs have vertical tangents at the
    projector junctions (dF/dlambda vanishes at lambda=1 along every
    (k,1) family), so a lerp table misreads those spots by ~sqrt(cell).
    The junctions F(P_j) = (1+j)/(d+1) are equally spaced, so the grid is
    sized to land on them exactly and those entries are patched with exact
    projector values; elsewhere the graphs are smooth and lerp is accurate.
    """
    from .families import family_curve_batch, info_gain_projective

    if seg is None:
        seg = (1 << 20) // max(d - 1, 1)
    nels = (d - 1) * seg + 1 if d > 2 else seg + 1
    lam = np.linspace(0.0, 1.0, n_lam)
    up = family_curve_batch(d, 1, d - 1, lam)

    def proj_point(r):
        return {"I": info_gain_projective(d, r),
                "G": (r + 1.0) / ((d + 1.0) * r),
                "F": (1.0 + r) / (d + 1.0),
                "R": 0.0 if r < d else 1.0}

    def to_uniform(xs, ys, x_lo, x_hi, exact=()):
        o = np.argsort(xs, kind="stable")
        xs = xs[o]
        ys = ys[o]
        xu = np.linspace(x_lo, x_hi, nels)
        tab = np.interp(xu, xs, ys)
        for idx, val in exact:
            tab[idx] = val
        return x_lo, (nels - 1) / (x_hi - x_lo), tab

    F_lo, F_hi = 2.0 / (d + 1.0), 1.0
    pd = proj_point(d)
    p1 = proj_point(1)
    upper = {
        "GF": to_uniform(up["F"], up["G"], F_lo, F_hi,
                         [(0, p1["G"]), (nels - 1, pd["G"])]),
        "GR": to_uniform(up["R"], up["G"], 0.0, 1.0,
                         [(0, p1["G"]), (nels - 1, pd["G"])]),
        "IF": to_uniform(up["F"], up["I"], F_lo, F_hi,
                         [(0, p1["I"]), (nels - 1, pd["I"])]),
        "IR": to_uniform(up["R"], up["I"], 0.0, 1.0,
                         [(0, p1["I"]), (nels - 1, pd["I"])]),
    }
    # lower boundary: on the F planes the (k,1) curves chain P_k -> P_{k+1}
    # with abutting F ranges; on the R planes the single family (d-1, 1)
    chainF, chainG, chainI = [], [], []
    for k in range(1, d):
        cur = family_curve_batch(d, k, 1, lam)
        chainF.append(cur["F"])
        chainG.append(cur["G"])
        chainI.append(cur["I"])
    chainF = np.concatenate(chainF)
    chainG = np.concatenate(chainG)
    chainI = np.concatenate(chainI)
    junctions = [((j - 1) * seg, proj_point(j)) for j in range(1, d + 1)] if d > 2 \
        else [(0, proj_point(1)), (seg, proj_point(2))]
    lo = family_curve_batch(d, d - 1, 1, lam) if d > 2 else family_curve_batch(d, 1, 1, lam)
    pdm = proj_point(d - 1) if d > 2 else p1
    lower = {
        "GF": to_uniform(chainF, chainG, F_lo, F_hi,
                         [(i, pt["G"]) for i, pt in junctions]),
        "GR": to_uniform(lo["R"], lo["G"], 0.0, 1.0,
                         [(0, pdm["G"]), (nels - 1, pd["G"])]),
        "IF": to_uniform(chainF, chainI, F_lo, F_hi,
                         [(i, pt["I"]) for i, pt in junctions]),
        "IR": to_uniform(lo["R"], lo["I"], 0.0, 1.0,
                         [(0, pdm["I"]), (nels - 1, pd["I"])]),
    }
    x0 = np.empty((2, 4))
    invh = np.empty((2, 4))
    tab = np.empty((2, 4, nels))
    for side, src in enumerate((upper, lower)):
        for p, plane in enumerate(PLANES):
            x0[side, p], invh[side, p], tab[side, p] = src[plane]
    return BoundaryTables(d, x0, invh, tab)


@njit(cache=True, nogil=True)
def _dominance_chunk_nb(d, G, step, start, n_budget, xg, g0, conf, log2i, base,
                        bx0, binvh, btab, tol,
                        max_over, max_under, worst_over, worst_under):
    """Run n_budget points from the given start tuple, updating bound stats.

    max_over/max_under: (4,) worst signed excess above the upper table and
    below the lower table per plane.  worst_over/worst_under: (4, d) digit
    tuples achieving them.  Returns the count of points beyond tol.
    """
    s2c = step * step
    log2s2 = 2.0 * np.log2(step)
    nels = btab.shape[2]
    j = start[: d - 1].copy()
    jd_lo = start[d - 1]
    asc = np.zeros(d, dtype=np.int64)
    pre = np.zeros((d, d), dtype=np.float64)
    chain = np.zeros(d, dtype=np.float64)
    n_bad = 0
    count = 0
    while count < n_budget:
        for i in range(d - 1):
            asc[i + 1] = j[d - 2 - i]
        j1 = j[0]
        S1p = np.int64(0)
        S2p = np.int64(0)
        for i in range(d - 1):
            S1p += j[i]
            S2p += j[i] * j[i]
        # Newton table over the ascending prefix nodes asc[1..d-1]
        for i in range(1, d):
            pre[i, 0] = g0[asc[i]]
        for lvl in range(1, d - 1):
            for i in range(1, d - lvl):
                if asc[i + lvl] == asc[i]:
                    pre[i, lvl] = conf[asc[i], lvl]
                else:
                    pre[i, lvl] = (pre[i + 1, lvl - 1] - pre[i, lvl - 1]) / (
                        xg[asc[i + lvl]] - xg[asc[i]])
        jmax = j[d - 2]
        for jd in range(jd_lo, jmax + 1):
            S1 = S1p + jd
            S2 = S2p + jd * jd
            Gm = (S2 + j1 * j1) / ((d + 1.0) * S2)
            Fm = (S2 + float(S1) * S1) / ((d + 1.0) * S2)
            Rm = d * float(jd) * jd / S2
            chain[0] = g0[jd]
            for lvl in range(1, d):
                if asc[lvl] == jd:
                    chain[lvl] = conf[jd, lvl]
                else:
                    chain[lvl] = (pre[1, lvl - 1] - chain[lvl - 1]) / (
                        xg[asc[lvl]] - xg[jd])
            Im = base - (log2i[S2] + log2s2) + chain[d - 1] / (S2 * s2c)
            for p in range(4):
                if p == 0:
                    xq = Fm
                    yq = Gm
                elif p == 1:
                    xq = Rm
                    yq = Gm
                elif p == 2:
                    xq = Fm
                    yq = Im
                else:
                    xq = Rm
                    yq = Im
                t = (xq - bx0[0, p]) * binvh[0, p]
                if t < 0.0:
                    t = 0.0
                if t > nels - 1.001:
                    t = nels - 1.001
                i0 = int(t)
                fr = t - i0
                yu = btab[0, p, i0] * (1.0 - fr) + btab[0, p, i0 + 1] * fr
                t = (xq - bx0[1, p]) * binvh[1, p]
                if t < 0.0:
                    t = 0.0
                if t > nels - 1.001:
                    t = nels - 1.001
                i0 = int(t)
                fr = t - i0
                yl = btab[1, p, i0] * (1.0 - fr) + btab[1, p, i0 + 1] * fr
                over = yq - yu
                under = yl - yq
                if over > max_over[p]:
                    max_over[p] = over
                    for q in range(d - 1):
                        worst_over[p, q] = j[q]
                    worst_over[p, d - 1] = jd
                if under > max_under[p]:
                    max_under[p] = under
                    for q in range(d - 1):
                        worst_under[p, q] = j[q]
                    worst_under[p, d - 1] = jd
                if over > tol or under > tol:
                    n_bad += 1
            count += 1
            if count == n_budget:
                break
        jd_lo = 0
        p = d - 2
        while p >= 0:
            cap = G if p == 0 else j[p - 1]
            if j[p] < cap:
                j[p] += 1
                for q in range(p + 1, d - 1):
                    j[q] = 0
                break
            p -= 1
        if p < 0:
            break
    return n_bad


@njit(cache=True, nogil=True)
def _collect_chunk_nb(d, G, step, start, n_budget, xg, g0, conf, log2i, base,
                      out_I, out_G, out_F, out_R, out_dig):
    """Fill measure arrays (and digit rows) for n_budget points from start."""
    s2c = step * step
    log2s2 = 2.0 * np.log2(step)
    j = start[: d - 1].copy()
    jd_lo = start[d - 1]
    asc = np.zeros(d, dtype=np.int64)
    pre = np.zeros((d, d), dtype=np.float64)
    chain = np.zeros(d, dtype=np.float64)
    count = 0
    while count < n_budget:
        for i in range(d - 1):
            asc[i + 1] = j[d - 2 - i]
        j1 = j[0]
        S1p = np.int64(0)
        S2p = np.int64(0)
        for i in range(d - 1):
            S1p += j[i]
            S2p += j[i] * j[i]
        for i in range(1, d):
            pre[i, 0] = g0[asc[i]]
        for lvl in range(1, d - 1):
            for i in range(1, d - lvl):
                if asc[i + lvl] == asc[i]:
                    pre[i, lvl] = conf[asc[i], lvl]
                else:
                    pre[i, lvl] = (pre[i + 1, lvl - 1] - pre[i, lvl - 1]) / (
                        xg[asc[i + lvl]] - xg[asc[i]])
        jmax = j[d - 2]
        for jd in range(jd_lo, jmax + 1):
            S1 = S1p + jd
            S2 = S2p + jd * jd
            out_G[count] = (S2 + j1 * j1) / ((d + 1.0) * S2)
            out_F[count] = (S2 + float(S1) * S1) / ((d + 1.0) * S2)
            out_R[count] = d * float(jd) * jd / S2
            chain[0] = g0[jd]
            for lvl in range(1, d):
                if asc[lvl] == jd:
                    chain[lvl] = conf[jd, lvl]
                else:
                    chain[lvl] = (pre[1, lvl - 1] - chain[lvl - 1]) / (
                        xg[asc[lvl]] - xg[jd])
            out_I[count] = base - (log2i[S2] + log2s2) + chain[d - 1] / (S2 * s2c)
            for q in range(d - 1):
                out_dig[count, q] = j[q]
            out_dig[count, d - 1] = jd
            count += 1
            if count == n_budget:
                break
        jd_lo = 0
        p = d - 2
        while p >= 0:
            cap = G if p == 0 else j[p - 1]
            if j[p] < cap:
                j[p] += 1
                for q in range(p + 1, d - 1):
                    j[q] = 0
                break
            p -= 1
        if p < 0:
            break
    return count


def _unrank_block(d: int, G: int, start: int, n: int) -> np.ndarray:
    """Digits for ranks start..start+n-1, vectorized (numpy backend)."""
    r = np.arange(start, start + n, dtype=np.int64)
    digits = np.empty((n, d), dtype=np.int64)
    for t in range(d):
        m = d - t
        cum = np.array([math.comb(jj + m - 1, m) for jj in range(G + 1)], dtype=np.int64)
        jt = np.searchsorted(cum, r, side="right") - 1
        digits[:, t] = jt
        r = r - cum[jt]
    return digits


def _measures_block_np(tables: GridTables, digits: np.ndarray):
    """Vectorized twin of the kernel arithmetic for a block of digit rows."""
    d, G = tables.d, tables.G
    step = tables.step
    asc = digits[:, ::-1]  # ascending node levels per row
    S1 = digits.sum(axis=1)
    S2 = (digits * digits).sum(axis=1)
    j1 = digits[:, 0]
    jd = digits[:, -1]
    Gm = (S2 + j1 * j1) / ((d + 1.0) * S2)
    Fm = (S2 + S1.astype(np.float64) ** 2) / ((d + 1.0) * S2)
    Rm = d * jd.astype(np.float64) ** 2 / S2
    f = tables.g0[asc]  # (n, d) level-0 values
    with np.errstate(divide="ignore", invalid="ignore"):
        for lvl in range(1, d):
            for i in range(d - lvl):
                same = asc[:, i + lvl] == asc[:, i]
                new = (f[:, i + 1] - f[:, i]) / (tables.xg[asc[:, i + lvl]] - tables.xg[asc[:, i]])
                f[:, i] = np.where(same, tables.conf[asc[:, i], lvl], new)
    Im = tables.base - (tables.log2i[S2] + 2.0 * np.log2(step)) + f[:, 0] / (S2 * step * step)
    return Im, Gm, Fm, Rm


@dataclass
class DominanceReport:
    d: int
    step: float
    tol: float
    n_points: int
    n_bad: int
    max_over: dict
    max_under: dict
    worst_over: dict  # plane -> lambda tuple of the largest upper excess
    worst_under: dict

    @property
    def ok(self) -> bool:
        return self.n_bad == 0


def _chunk_ranges(total: int, n_chunks: int):
    edges = np.linspace(1, total, n_chunks + 1, dtype=np.int64)
    return [(int(a), int(b - a)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def run_dominance(d: int, step: float, tol: float = 1e-6,
                  bt: BoundaryTables | None = None) -> DominanceReport:
    """Check every swept point against the boundary tables on all four planes."""
    G = grid_levels(step)
    gt = grid_tables(d, G)
    if bt is None:
        bt = boundary_tables(d)
    total = total_points(d, G)
    be = backend()
    workers = thread_count()
    n_chunks = max(workers, (total - 1) // (1 << 24) + 1)
    ranges = _chunk_ranges(total, n_chunks)

    results = []
    if be == "numba":
        def run(rg):
            start_rank, n = rg
            start = unrank(d, G, start_rank)
            mo = np.full(4, -np.inf)
            mu = np.full(4, -np.inf)
            wo = np.zeros((4, d), dtype=np.int64)
            wu = np.zeros((4, d), dtype=np.int64)
            bad = _dominance_chunk_nb(d, G, gt.step, start, n, gt.xg, gt.g0, gt.conf,
                                      gt.log2i, gt.base, bt.x0, bt.invh, bt.tab, tol,
                                      mo, mu, wo, wu)
            return bad, mo, mu, wo, wu

        if workers == 1:
            results = [run(rg) for rg in ranges]
        else:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(run, ranges))
    else:
        block = 1 << 18
        def run(rg):
            start_rank, n = rg
            mo = np.full(4, -np.inf)
            mu = np.full(4, -np.inf)
            wo = np.zeros((4, d), dtype=np.int64)
            wu = np.zeros((4, d), dtype=np.int64)
            bad = 0
            nels = bt.tab.shape[2]
            for off in range(0, n, block):
                nn = min(block, n - off)
                digits = _unrank_block(d, G, start_rank + off, nn)
                Im, Gm, Fm, Rm = _measures_block_np(gt, digits)
                for p, plane in enumerate(PLANES):
                    xq = (Fm, Rm, Fm, Rm)[p]
                    yq = (Gm, Gm, Im, Im)[p]
                    for side, sgn in ((0, 1.0), (1, -1.0)):
                        t = np.clip((xq - bt.x0[side, p]) * bt.invh[side, p],
                                    0.0, nels - 1.001)
                        i0 = t.astype(np.int64)
                        fr = t - i0
                        yb = bt.tab[side, p, i0] * (1.0 - fr) + bt.tab[side, p, i0 + 1] * fr
                        dev = (yq - yb) * sgn
                        k = int(np.argmax(dev))
                        tgt_m, tgt_w = (mo, wo) if side == 0 else (mu, wu)
                        if dev[k] > tgt_m[p]:
                            tgt_m[p] = dev[k]
                            tgt_w[p] = digits[k]
                        bad += int(np.count_nonzero(dev > tol))
            return bad, mo, mu, wo, wu

        results = [run(rg) for rg in ranges]

    max_over = {p: -np.inf for p in PLANES}
    max_under = {p: -np.inf for p in PLANES}
    worst_over = {p: None for p in PLANES}
    worst_under = {p: None for p in PLANES}
    n_bad = 0
    for bad, mo, mu, wo, wu in results:
        n_bad += bad
        for p, plane in enumerate(PLANES):
            if mo[p] > max_over[plane]:
                max_over[plane] = float(mo[p])
                worst_over[plane] = wo[p] / G
            if mu[p] > max_under[plane]:
                max_under[plane] = float(mu[p])
                worst_under[plane] = wu[p] / G
    return DominanceReport(d, step, tol, total - 1, n_bad,
                           max_over, max_under, worst_over, worst_under)


def iter_measures(d: int, step: float, chunk: int = 1 << 20):
    """Yield (offset, lambdas, I, G, F, R) blocks over the whole sweep, in rank order."""
    G = grid_levels(step)
    gt = grid_tables(d, G)
    total = total_points(d, G)
    be = backend()
    offset = 0
    for start_rank in range(1, total, chunk):
        n = min(chunk, total - start_rank)
        if be == "numba":
            out_I = np.empty(n)
            out_G = np.empty(n)
            out_F = np.empty(n)
            out_R = np.empty(n)
            dig = np.empty((n, d), dtype=np.int64)
            start = unrank(d, G, start_rank)
            _collect_chunk_nb(d, G, gt.step, start, n, gt.xg, gt.g0, gt.conf,
                              gt.log2i, gt.base, out_I, out_G, out_F, out_R, dig)
        else:
            dig = _unrank_block(d, G, start_rank, n)
            out_I, out_G, out_F, out_R = _measures_block_np(gt, dig)
        yield offset, dig * gt.step, out_I, out_G, out_F, out_R
        offset += n


@njit(cache=True, nogil=True)
def _hull_chain_nb(xs, ys, order, keep):
    """Monotone-chain convex hull; returns count of kept indices in keep."""
    n = order.size
    m = 0
    for pass_dir in range(2):
        start_m = m
        for ii in range(n):
            i = order[ii] if pass_dir == 0 else order[n - 1 - ii]
            while m - start_m >= 2:
                a = keep[m - 2]
                b = keep[m - 1]
                cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a])
                if cross <= 1e-12:
                    m -= 1
                else:
                    break
            keep[m] = i
            m += 1
        m -= 1  # endpoint repeats as the start of the next pass
    return m


def hull_indices(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Indices of the convex hull in counterclockwise order (no repeat of start)."""
    if xs.size <= 2:
        return np.arange(xs.size, dtype=np.int64)
    order = np.lexsort((ys, xs))
    if HAVE_NUMBA:
        keep = np.empty(2 * xs.size + 4, dtype=np.int64)
        m = _hull_chain_nb(xs.astype(np.float64), ys.astype(np.float64), order, keep)
        return keep[:m]
    hull = []
    for half in (order, order[::-1]):
        base_len = len(hull)
        for i in half:
            while len(hull) - base_len >= 2:
                a, b = hull[-2], hull[-1]
                cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a])
                if cross <= 1e-12:
                    hull.pop()
                else:
                    break
            hull.append(i)
        hull.pop()
    return np.array(hull, dtype=np.int64)
