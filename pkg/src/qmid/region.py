"""Allowed-region geometry on the four information-disturbance planes.

Each plane pairs an information axis (estimation fidelity G or information
gain I, plotted as y) with a disturbance axis (operation fidelity F or
reversibility R, plotted as x).  The single-outcome region is bounded
above by the (1, d-1) family curve and below by the (k, 1) chain on the F
planes or the (d-1, 1) curve on the R planes; for d = 2 every spectrum
collapses onto the one curve (1, 1).

The tangent point T is where the chord from P_d to the (1, d-1) curve in
the I-F plane matches the curve's slope; it exists for d >= 3 and governs
how far averaging can push the upper boundary past the single-outcome one.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from ._dd import LN2, dd_accurate, dd_x_one_series
from . import _kernels
from ._kernels import (BoundaryTables, DominanceReport, boundary_tables,
                       grid_levels, hull_indices, iter_measures, run_dominance,
                       total_points)
from .errors import (CurvatureUnreliableError, NoTangentPointError, QmidError,
                     SweepError)
from .families import family_curve_batch, family_spectrum, info_gain_projective
from .measures import info_bound
from .spectra import Spectrum


class PlaneKind(Enum):
    """One of the four information-disturbance plane choices."""

    GF = ("estimation_fidelity", "operation_fidelity")
    GR = ("estimation_fidelity", "reversibility")
    IF = ("info_gain", "operation_fidelity")
    IR = ("info_gain", "reversibility")

    @property
    def info_axis(self) -> str:
        return self.value[0]

    @property
    def disturbance_axis(self) -> str:
        return self.value[1]

    @property
    def _ykey(self) -> str:
        return "G" if self.info_axis == "estimation_fidelity" else "I"

    @property
    def _xkey(self) -> str:
        return "F" if self.disturbance_axis == "operation_fidelity" else "R"

    @classmethod
    def parse(cls, name: str) -> "PlaneKind":
        try:
            return cls[name.upper()]
        except KeyError:
            raise QmidError(f"unknown plane {name!r}; choose from GF, GR, IF, IR")


@dataclass(frozen=True)
class RegionPoint:
    """A plane point: x is the disturbance coordinate, y the information one."""

    x: float
    y: float
    source_spectrum: Spectrum


@dataclass(frozen=True)
class Polyline:
    label: str
    points: tuple

    @property
    def xs(self) -> np.ndarray:
        return np.array([p.x for p in self.points])

    @property
    def ys(self) -> np.ndarray:
        return np.array([p.y for p in self.points])


@dataclass(frozen=True)
class TangentReport:
    d: int
    lambda_T: float
    I_T: float
    F_T: float
    max_gap: float


def projector_point(d: int, r: int, plane: PlaneKind) -> RegionPoint:
    """Plane position of the rank-r projective measurement operator."""
    if not 1 <= r <= d:
        raise QmidError(f"projector rank must lie in 1..{d}, got {r}")
    vals = {
        "I": info_gain_projective(d, r),
        "G": (r + 1.0) / ((d + 1.0) * r),
        "F": (1.0 + r) / (d + 1.0),
        "R": 0.0 if r < d else 1.0,
    }
    spec = Spectrum(np.concatenate([np.ones(r), np.zeros(d - r)]))
    return RegionPoint(vals[plane._xkey], vals[plane._ykey], spec)


def boundary_polyline(d: int, plane: PlaneKind, k: int, l: int,
                      n_samples: int = 1001) -> Polyline:
    """The (k, l) family curve sampled uniformly in lambda and mapped to the plane."""
    if n_samples < 2:
        raise SweepError(f"n_samples must be >= 2, got {n_samples}")
    lam = np.linspace(0.0, 1.0, n_samples)
    cur = family_curve_batch(d, k, l, lam)
    xs = cur[plane._xkey]
    ys = cur[plane._ykey]
    pts = tuple(
        RegionPoint(float(x), float(y), Spectrum(family_spectrum(d, k, l, float(t))))
        for x, y, t in zip(xs, ys, lam)
    )
    return Polyline(f"({k},{l})", pts)


def upper_boundary(d: int, plane: PlaneKind, n_samples: int = 1001) -> Polyline:
    """Single-outcome upper boundary: the (1, d-1) curve on every plane."""
    return boundary_polyline(d, plane, 1, max(d - 1, 1), n_samples)


def lower_boundaries(d: int, plane: PlaneKind, n_samples: int = 1001) -> list:
    """Single-outcome lower boundary: (k,1) chain on F planes, (d-1,1) on R planes."""
    if plane._xkey == "F":
        return [boundary_polyline(d, plane, k, 1, n_samples) for k in range(1, max(d, 2))]
    return [boundary_polyline(d, plane, max(d - 1, 1), 1, n_samples)]


_MAX_MATERIALIZED = 300_000_000


class RegionSweep(Sequence):
    """All grid spectra mapped onto one plane, in deterministic rank order.

    Acts as a sequence of RegionPoint; the coordinate arrays xs/ys and the
    integer grid rows are held as numpy arrays, and points are wrapped
    lazily on access.
    """

    def __init__(self, d: int, plane: PlaneKind, step: float):
        G = grid_levels(step)
        n = total_points(d, G) - 1
        if n > _MAX_MATERIALIZED:
            raise SweepError(
                f"sweep of {n:,} points is too large to materialize; "
                "use a coarser step or the streaming iterator")
        self.d = d
        self.plane = plane
        self.step = step
        self.grid_levels = G
        self.xs = np.empty(n)
        self.ys = np.empty(n)
        self._digits = np.empty((n, d), dtype=np.int16)
        xk, yk = plane._xkey, plane._ykey
        for off, lams, I, Gm, F, R in iter_measures(d, step):
            vals = {"I": I, "G": Gm, "F": F, "R": R}
            m = len(I)
            self.xs[off:off + m] = vals[xk]
            self.ys[off:off + m] = vals[yk]
            self._digits[off:off + m] = np.round(lams * G).astype(np.int16)

    def __len__(self) -> int:
        return len(self.xs)

    def spectrum(self, i: int) -> Spectrum:
        return Spectrum(self._digits[i] / self.grid_levels)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return RegionPoint(float(self.xs[i]), float(self.ys[i]), self.spectrum(i))


def sweep_region(d: int, plane: PlaneKind, step: float) -> RegionSweep:
    """Every descending grid spectrum's point on the chosen plane."""
    return RegionSweep(d, plane, step)


def averaged_region(d: int, plane: PlaneKind, step: float) -> Polyline:
    """Closed convex-hull boundary of the swept cloud, counterclockwise.

    Averaging over outcomes mixes single-outcome points with weights
    p(m), so complete measurements fill exactly the convex hull of the
    single-outcome region.
    """
    G = grid_levels(step)
    xk, yk = plane._xkey, plane._ykey
    cand_x, cand_y, cand_dig = [], [], []
    for off, lams, I, Gm, F, R in iter_measures(d, step):
        vals = {"I": I, "G": Gm, "F": F, "R": R}
        xs = vals[xk]
        ys = vals[yk]
        idx = hull_indices(xs, ys)
        cand_x.append(xs[idx])
        cand_y.append(ys[idx])
        cand_dig.append(np.round(lams[idx] * G).astype(np.int16))
    xs = np.concatenate(cand_x)
    ys = np.concatenate(cand_y)
    dig = np.concatenate(cand_dig)
    idx = hull_indices(xs, ys)
    pts = [RegionPoint(float(xs[i]), float(ys[i]), Spectrum(dig[i] / G)) for i in idx]
    pts.append(pts[0])  # close the loop
    return Polyline("hull", tuple(pts))


def _dd_one(x: float, mult_x: int, d: int) -> float:
    """Divided difference of x^d log2 x over {x repeated mult_x times, 1}."""
    if x >= 0.49:
        return float(dd_x_one_series(x, mult_x, 1, d))
    return dd_accurate([x, 1.0], [mult_x, 1], d, 1e-12)


def if_curve(d: int, lam: float):
    """(I, F, dI/dlambda, dF/dlambda) along the (1, d-1) family, interior lambda."""
    if not 0.0 < lam < 1.0:
        raise QmidError(f"lambda must lie in (0, 1), got {lam}")
    x = lam * lam
    s = 1.0 + (d - 1) * x
    tau = 1.0 + (d - 1) * lam
    sp = 2.0 * lam * (d - 1)
    F = (s + tau * tau) / ((d + 1) * s)
    Fp = (2.0 * tau * (d - 1) * s - tau * tau * sp) / ((d + 1) * s * s)
    dd = _dd_one(x, d - 1, d)
    # moving one node of a divided difference differentiates it by doubling
    # that node; the lambda^2 cluster contributes mult * dx/dlambda copies
    ddp = 2.0 * lam * (d - 1) * _dd_one(x, d, d)
    I = info_bound(d) - math.log2(s) + dd / s
    Ip = -sp / (s * LN2) + ddp / s - dd * sp / (s * s)
    return I, F, Ip, Fp


def curve_slope(d: int, lam: float) -> float:
    """dF/dI along the (1, d-1) curve (the tangent slope in the I-F plane)."""
    _, _, Ip, Fp = if_curve(d, lam)
    return Fp / Ip


def chord_slope(d: int, lam: float) -> float:
    """Slope of the straight line from P_d = (0, 1) to the curve point at lambda."""
    I, F, _, _ = if_curve(d, lam)
    return (F - 1.0) / I


def curvature_sign(d: int, lam: float) -> int:
    """Sign of d^2F/dI^2 along the (1, d-1) curve at lambda.

    Computed as the finite-difference derivative of the parametric slope
    divided by dI/dlambda.  Near the endpoints the slope degenerates and
    differencing cannot resolve the sign; that raises instead of guessing.
    """
    if not 0.0 < lam < 1.0:
        raise QmidError(f"lambda must lie in (0, 1), got {lam}")
    h = 1e-5
    if lam < 1e-3 or lam > 1.0 - 1e-3:
        raise CurvatureUnreliableError(
            f"lambda={lam} too close to an endpoint for stable differencing")
    _, _, Ip, _ = if_curve(d, lam)
    if abs(Ip) < 1e-10:
        raise CurvatureUnreliableError("dI/dlambda vanishes at this lambda")
    dprime = (curve_slope(d, lam + h) - curve_slope(d, lam - h)) / (2.0 * h)
    curv = dprime / Ip
    if abs(curv) < 1e-6:
        raise CurvatureUnreliableError(
            f"curvature {curv:.2e} below the differencing noise floor")
    return 1 if curv > 0 else -1


@lru_cache(maxsize=None)
def tangent_point(d: int) -> TangentReport:
    """Locate T on the I-F plane where chord slope equals curve slope.

    Scans a 0.01 grid of lambda for sign changes of the slope mismatch,
    requires exactly one, bisects it, then measures how far the chord
    P_d-T extension rises above the curve (the F-direction offset),
    maximized over lambda in [lambda_T, 1].
    """
    if d < 2:
        raise QmidError(f"dimension must be >= 2, got {d}")
    if d == 2:
        raise NoTangentPointError(
            "the d=2 curve has no interior tangent point: slopes only meet at lambda=1")

    def mismatch(lam: float) -> float:
        I, F, Ip, Fp = if_curve(d, lam)
        return Fp / Ip - (F - 1.0) / I

    grid = [i / 100.0 for i in range(1, 100)]
    vals = [mismatch(g) for g in grid]
    brackets = [i for i in range(len(grid) - 1) if vals[i] * vals[i + 1] < 0.0]
    if not brackets:
        raise NoTangentPointError(f"no slope crossing found on (0, 1) for d={d}")
    if len(brackets) > 1:
        raise QmidError(
            f"expected exactly one tangent bracket for d={d}, found {len(brackets)}")
    lo, hi = grid[brackets[0]], grid[brackets[0] + 1]
    flo = vals[brackets[0]]
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        fm = mismatch(mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    lam_T = 0.5 * (lo + hi)
    I_T, F_T, _, _ = if_curve(d, lam_T)

    # chord height minus curve height, measured along F at equal I
    slope = (F_T - 1.0) / I_T

    def gap(lam: float) -> float:
        I, F, _, _ = if_curve(d, lam)
        return 1.0 + I * slope - F

    lams = np.linspace(lam_T, 1.0 - 1e-6, 400)
    cur = family_curve_batch(d, 1, d - 1, lams)
    gaps = 1.0 + cur["I"] * slope - cur["F"]
    k = int(np.argmax(gaps))
    a = lams[max(k - 1, 0)]
    b = lams[min(k + 1, len(lams) - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1, f2 = gap(c1), gap(c2)
    while b - a > 1e-10:
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = gap(c2)
        else:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = gap(c1)
    max_gap = max(f1, f2)
    return TangentReport(d, lam_T, I_T, F_T, max_gap)


def efficiency_argmax(d: int) -> float:
    """Lambda maximizing I/(1-F) along the (1, d-1) family."""
    lams = np.linspace(1e-3, 1.0 - 1e-3, 999)
    cur = family_curve_batch(d, 1, max(d - 1, 1), lams)
    eff = cur["I"] / (1.0 - cur["F"])
    k = int(np.argmax(eff))
    a = lams[max(k - 1, 0)]
    b = lams[min(k + 1, len(lams) - 1)]

    def e(lam: float) -> float:
        I, F, _, _ = if_curve(d, lam)
        return I / (1.0 - F)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1, f2 = e(c1), e(c2)
    while b - a > 1e-9:
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = e(c2)
        else:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = e(c1)
    return 0.5 * (a + b)
