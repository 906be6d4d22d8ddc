"""Complete measurements: averaging, construction, optimal families, classification.

A measurement is a set of diagonal operators in cyclically shifted bases;
every measure and the completeness sum depend only on the diagonals, so no
general matrix algebra appears.  Outcome weights are implied: p(m) equals
the operator's squared norm over d, and averaging measures over outcomes
is a center-of-mass computation with those masses.

Any particle set (plane points with masses) can be realized as an actual
measurement: rescale each particle's operator by the square root of its
mass over its squared norm, emit the d cyclic shifts, and merge duplicate
diagonals in quadrature.  Completeness then holds by construction and the
averaged measures reproduce the center of mass.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import IncompleteMeasurementError, QmidError
from .families import family_curve_batch, info_gain_projective
from .measures import measures
from .region import PlaneKind, tangent_point
from .spectra import Spectrum, canonicalize

SCHEMA_VERSION = 1

_COMPLETENESS_TOL = 1e-9
_CLASSIFY_TOL = 1e-6
_CLASSIFY_SAMPLES = 10_000


def _cyclic_positions(d: int, shift: int) -> np.ndarray:
    """Basis position of each diagonal entry under the cyclic shift tag."""
    return (np.arange(d) + shift) % d


@dataclass(frozen=True)
class DiagonalOperator:
    """Diagonal entries in a cyclically shifted basis; entries in [0, 1]."""

    diag: np.ndarray
    shift: int = 0

    def __post_init__(self):
        arr = np.asarray(self.diag, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "diag", arr)
        if arr.ndim != 1 or arr.size < 2:
            raise QmidError("operator diagonal must be a 1-D array of length >= 2")
        if not np.all(np.isfinite(arr)):
            raise QmidError("operator diagonal must be finite")
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise QmidError("operator diagonal entries must lie in [0, 1]")
        d = arr.size
        if not 0 <= int(self.shift) < d:
            raise QmidError(f"shift must lie in 0..{d - 1}, got {self.shift}")
        object.__setattr__(self, "shift", int(self.shift))

    @property
    def d(self) -> int:
        return self.diag.size

    def global_diag(self) -> np.ndarray:
        """The diagonal re-expressed in the unshifted basis."""
        out = np.empty(self.d)
        out[_cyclic_positions(self.d, self.shift)] = self.diag
        return out

    def norm_sq(self) -> float:
        return float(np.sum(self.diag * self.diag))

    def spectrum(self) -> Spectrum:
        return Spectrum(np.sort(self.diag)[::-1].copy())


@dataclass(frozen=True)
class Particle:
    """A plane point with a mass; the center-of-mass picture of averaging."""

    spectrum: Spectrum
    mass: float

    def __post_init__(self):
        if not isinstance(self.spectrum, Spectrum):
            object.__setattr__(self, "spectrum", Spectrum(self.spectrum))
        if not (0.0 < self.mass <= 1.0):
            raise QmidError(f"particle mass must lie in (0, 1], got {self.mass}")


def _check_particles(particles) -> list:
    particles = list(particles)
    if not particles:
        raise QmidError("particle set must not be empty")
    total = sum(p.mass for p in particles)
    if abs(total - 1.0) > 1e-12:
        raise QmidError(f"particle masses must sum to 1, got {total!r}")
    return particles


@dataclass(frozen=True)
class Measurement:
    """A set of diagonal measurement operators; p(m) = |M_m|^2 / d."""

    d: int
    operators: tuple

    def __post_init__(self):
        ops = tuple(self.operators)
        object.__setattr__(self, "operators", ops)
        if not ops:
            raise QmidError("measurement must have at least one operator")
        for op in ops:
            if op.d != self.d:
                raise QmidError("all operators must share the measurement dimension")

    def completeness_residual(self) -> float:
        """Max elementwise deviation of sum M^dag M from the identity."""
        acc = np.zeros(self.d)
        for op in self.operators:
            g = op.global_diag()
            acc += g * g
        return float(np.max(np.abs(acc - 1.0)))

    def p(self, m: int) -> float:
        return self.operators[m].norm_sq() / self.d

    def weights(self) -> np.ndarray:
        return np.array([op.norm_sq() for op in self.operators]) / self.d

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "d": self.d,
            "operators": [
                {"diag": [float(v) for v in op.diag], "shift": op.shift}
                for op in self.operators
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Measurement":
        doc = json.loads(text)
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise QmidError(f"unsupported measurement schema_version {version!r}")
        d = int(doc["d"])
        ops = tuple(
            DiagonalOperator(np.array(entry["diag"], dtype=float), int(entry.get("shift", 0)))
            for entry in doc["operators"]
        )
        return cls(d, ops)


@dataclass(frozen=True)
class AveragedMeasures:
    I: float
    G: float
    F: float
    R: float


def center_of_mass(particles) -> AveragedMeasures:
    """Mass-weighted mean of the particles' measure values."""
    particles = _check_particles(particles)
    acc = np.zeros(4)
    for p in particles:
        mv = measures(p.spectrum)
        acc += p.mass * np.array([mv.info_gain, mv.estimation_fidelity,
                                  mv.operation_fidelity, mv.reversibility])
    return AveragedMeasures(*acc)


def average_measures(m: Measurement) -> AveragedMeasures:
    """Outcome-weighted averages; requires completeness within 1e-9."""
    residual = m.completeness_residual()
    if residual > _COMPLETENESS_TOL:
        raise IncompleteMeasurementError(residual, _COMPLETENESS_TOL)
    acc = np.zeros(4)
    for op in m.operators:
        w = op.norm_sq() / m.d
        if w == 0.0:
            continue
        mv = measures(op.spectrum())
        acc += w * np.array([mv.info_gain, mv.estimation_fidelity,
                             mv.operation_fidelity, mv.reversibility])
    return AveragedMeasures(*acc)


def construct_measurement(particles) -> Measurement:
    """Realize a particle set as an actual measurement (d shifts per particle).

    Particle n becomes sqrt(q_n / sigma_n^2) times its operator under all d
    cyclic shifts; operators whose global diagonals coincide merge with
    weights combined in quadrature, which preserves both completeness and
    the per-outcome measures.
    """
    particles = _check_particles(particles)
    d = particles[0].spectrum.d
    for p in particles:
        if p.spectrum.d != d:
            raise QmidError("all particles must share one dimension")
    merged: dict = {}
    order: list = []
    for p in particles:
        lam = np.asarray(p.spectrum.values, dtype=float)
        sigma_sq = float(np.sum(lam * lam))
        base = lam * math.sqrt(p.mass / sigma_sq)
        for shift in range(d):
            g = np.empty(d)
            g[_cyclic_positions(d, shift)] = base
            key = g.tobytes()
            if key in merged:
                merged[key] = merged[key] + g * g
            else:
                merged[key] = g * g
                order.append(key)
    ops = tuple(DiagonalOperator(np.sqrt(merged[key]), 0) for key in order)
    return Measurement(d, ops)


def extract_particles(m: Measurement) -> list:
    """The particle set a measurement averages over (canonical spectra, p(m) masses)."""
    out = []
    for op in m.operators:
        w = op.norm_sq() / m.d
        if w == 0.0:
            continue
        out.append(Particle(canonicalize(op.spectrum()), w))
    return out


def isotropic_measurement(d: int, lam: float) -> Measurement:
    """The d-outcome measurement whose outcomes all sit at one (1, d-1) point.

    Operator m has the unit singular value at basis position m and lambda
    elsewhere, scaled so the d operators sum to the identity; every outcome
    has p(m) = 1/d and the same measure values as the bare family operator.
    """
    if d < 2:
        raise QmidError(f"dimension must be >= 2, got {d}")
    if not 0.0 <= lam <= 1.0:
        raise QmidError(f"lambda must lie in [0, 1], got {lam}")
    s = 1.0 + (d - 1) * lam * lam
    base = np.full(d, lam / math.sqrt(s))
    base[0] = 1.0 / math.sqrt(s)
    ops = tuple(DiagonalOperator(base.copy(), shift) for shift in range(d))
    return Measurement(d, ops)


def _bisect_family_F(d: int, F_target: float) -> float:
    """Solve F(lambda) = F_target along (1, d-1); F is monotone increasing."""
    def F(lam):
        s = 1.0 + (d - 1) * lam * lam
        tau = 1.0 + (d - 1) * lam
        return (s + tau * tau) / ((d + 1) * s)

    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if F(mid) < F_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimal_IF(d: int, F_target: float) -> Measurement:
    """Measurement maximizing average I at the given average F (d >= 3).

    Below the tangent fidelity F_T the optimum is the isotropic measurement
    on the (1, d-1) curve; above it, a mixture of the tangent-point
    operators with weight q = (1 - F)/(1 - F_T) and the identity.
    """
    if d < 3:
        raise QmidError("optimal_IF requires d >= 3; the d=2 upper boundary has no chord part")
    if not 2.0 / (d + 1) - 1e-12 <= F_target <= 1.0 + 1e-12:
        raise QmidError(f"F_target must lie in [{2.0 / (d + 1)}, 1], got {F_target}")
    tr = tangent_point(d)
    if F_target <= tr.F_T:
        lam = _bisect_family_F(d, F_target)
        return isotropic_measurement(d, lam)
    q = (1.0 - F_target) / (1.0 - tr.F_T)
    if q <= 0.0:
        return Measurement(d, (DiagonalOperator(np.ones(d), 0),))
    iso = isotropic_measurement(d, tr.lambda_T)
    root_q = math.sqrt(q)
    ops = [DiagonalOperator(root_q * op.diag, op.shift) for op in iso.operators]
    ops.append(DiagonalOperator(np.full(d, math.sqrt(1.0 - q)), 0))
    return Measurement(d, tuple(ops))


def optimal_IR(d: int, R_target: float) -> Measurement:
    """Measurement maximizing average I at the given average R.

    A weight-q projective measurement mixed with the identity, q = 1 - R;
    its averaged point runs along the chord P_1 - P_d of the I-R plane.
    """
    if d < 2:
        raise QmidError(f"dimension must be >= 2, got {d}")
    if not 0.0 <= R_target <= 1.0:
        raise QmidError(f"R_target must lie in [0, 1], got {R_target}")
    q = 1.0 - R_target
    ops = []
    if q > 0.0:
        root_q = math.sqrt(q)
        for shift in range(d):
            diag = np.zeros(d)
            diag[0] = root_q
            ops.append(DiagonalOperator(diag, shift))
    if q < 1.0:
        ops.append(DiagonalOperator(np.full(d, math.sqrt(1.0 - q)), 0))
    return Measurement(d, tuple(ops))


@lru_cache(maxsize=None)
def _curve_xy(d: int, xkey: str, ykey: str, lam_hi: float) -> tuple:
    lam = np.linspace(0.0, lam_hi, _CLASSIFY_SAMPLES)
    cur = family_curve_batch(d, 1, d - 1, lam)
    return cur[xkey], cur[ykey]


def _poly_dist(px: float, py: float, xs: np.ndarray, ys: np.ndarray) -> float:
    ax, ay = xs[:-1], ys[:-1]
    dx, dy = xs[1:] - ax, ys[1:] - ay
    L2 = dx * dx + dy * dy
    L2 = np.where(L2 > 0.0, L2, 1.0)
    t = np.clip(((px - ax) * dx + (py - ay) * dy) / L2, 0.0, 1.0)
    qx = ax + t * dx - px
    qy = ay + t * dy - py
    return float(np.sqrt(np.min(qx * qx + qy * qy)))


def classify_optimality(m: Measurement) -> set:
    """Which of the four plane-optimality conditions the measurement meets.

    GR: every outcome on the (1, d-1) curve.  GF: additionally all
    outcomes at one identical point.  IF (d >= 3): one identical curve
    point no further than the tangent point, or every outcome at P_d or T;
    for d = 2 it coincides with GF.  IR: every outcome at P_1 or P_d.
    """
    residual = m.completeness_residual()
    if residual > _COMPLETENESS_TOL:
        raise IncompleteMeasurementError(residual, _COMPLETENESS_TOL)
    d = m.d
    pts = []  # (I, G, F, R) per weighted outcome
    for op in m.operators:
        if op.norm_sq() == 0.0:
            continue
        mv = measures(op.spectrum())
        pts.append((mv.info_gain, mv.estimation_fidelity,
                    mv.operation_fidelity, mv.reversibility))

    def coord(pt, key):
        return pt[{"I": 0, "G": 1, "F": 2, "R": 3}[key]]

    def on_curve(pt, xkey, ykey, lam_hi=1.0):
        xs, ys = _curve_xy(d, xkey, ykey, lam_hi)
        return _poly_dist(coord(pt, xkey), coord(pt, ykey), xs, ys) <= _CLASSIFY_TOL

    def identical(xkey, ykey):
        xs = [coord(p, xkey) for p in pts]
        ys = [coord(p, ykey) for p in pts]
        return (max(xs) - min(xs)) <= _CLASSIFY_TOL and (max(ys) - min(ys)) <= _CLASSIFY_TOL

    def near(pt, xkey, ykey, x0, y0):
        return math.hypot(coord(pt, xkey) - x0, coord(pt, ykey) - y0) <= _CLASSIFY_TOL

    out = set()
    gr = all(on_curve(p, "R", "G") for p in pts)
    if gr:
        out.add("GR")
    gf = gr and identical("F", "G")
    if gf:
        out.add("GF")
    # P_1 and P_d reference coordinates
    I1 = info_gain_projective(d, 1)
    Id = 0.0
    if d == 2:
        if gf:
            out.add("IF")
    else:
        tr = tangent_point(d)
        branch1 = (identical("F", "I")
                   and all(on_curve(p, "F", "I", tr.lambda_T) for p in pts))
        branch2 = all(near(p, "F", "I", 1.0, Id) or near(p, "F", "I", tr.F_T, tr.I_T)
                      for p in pts)
        if branch1 or branch2:
            out.add("IF")
    if all(near(p, "R", "I", 0.0, I1) or near(p, "R", "I", 1.0, Id) for p in pts):
        out.add("IR")
    return out
