"""Per-outcome information and disturbance measures.

All four measures (information gain I, estimation fidelity G, operation
fidelity F, physical reversibility R) plus the outcome probability are
functions of the singular values alone:

    I = log2 d - (eta(d) - 1)/ln 2 - log2 sigma^2 + dd[g; lambda^2] / sigma^2
    G = (sigma^2 + lambda_max^2) / ((d+1) sigma^2)
    F = (sigma^2 + tau^2)       / ((d+1) sigma^2)
    R = d lambda_min^2 / sigma^2
    p = sigma^2 / d

where dd[g; .] is the (d-1)-order divided difference of g(x) = x^d log2 x
over the nodes lambda_i^2, sigma^2 = sum lambda_i^2 and tau = sum lambda_i.
I, G, F, R are invariant under permuting and rescaling the spectrum; p
scales with the square of the scale factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import config
from ._dd import EPS, LN2, cluster_nodes, dd_accurate
from .errors import SpectrumError, UndefinedEfficiencyError
from .spectra import as_array, harmonic_number

harmonic_eta = harmonic_number


def info_bound(d: int) -> float:
    """Upper bound of the information gain, log2 d - (eta(d)-1)/ln 2 bits.

    Attained exactly by rank-1 projectors.
    """
    return math.log2(d) - (harmonic_number(d) - 1.0) / LN2


def info_gain(s) -> float:
    """Information gain in bits via the clustered divided-difference table.

    Nodes are normalized by the largest lambda^2 before the table is built;
    the assembled value is invariant under that rescaling, and unit-scale
    nodes keep the log terms well conditioned.
    """
    arr = as_array(s)
    d = arr.size
    x = np.sort(arr * arr)
    x = x / x[-1]
    s2 = float(x.sum())
    reps, mults = cluster_nodes(x, config.degeneracy_rtol)
    dd = dd_accurate(reps, mults, d, config.info_abs_tol)
    return info_bound(d) - math.log2(s2) + dd / s2


def estimation_fidelity(s) -> float:
    arr = as_array(s)
    d = arr.size
    s2 = float(np.dot(arr, arr))
    lmax = float(arr.max())
    return (s2 + lmax * lmax) / ((d + 1) * s2)


def operation_fidelity(s) -> float:
    arr = as_array(s)
    d = arr.size
    s2 = float(np.dot(arr, arr))
    tau = float(arr.sum())
    return (s2 + tau * tau) / ((d + 1) * s2)


def reversibility(s) -> float:
    arr = as_array(s)
    d = arr.size
    s2 = float(np.dot(arr, arr))
    lmin = float(arr.min())
    return d * lmin * lmin / s2


def outcome_probability(s) -> float:
    """sigma^2/d of the raw spectrum; the one scale-dependent quantity."""
    arr = as_array(s)
    return float(np.dot(arr, arr)) / arr.size


def efficiency(s) -> float:
    """Information gain per unit fidelity loss, I/(1-F)."""
    F = operation_fidelity(s)
    if F >= 1.0:
        raise UndefinedEfficiencyError(
            "efficiency undefined: operation fidelity is 1 (identity-proportional spectrum)"
        )
    return info_gain(s) / (1.0 - F)


@dataclass(frozen=True)
class MeasureVector:
    info_gain: float
    estimation_fidelity: float
    operation_fidelity: float
    reversibility: float
    outcome_probability: float


def measures(s) -> MeasureVector:
    arr = as_array(s)
    return MeasureVector(
        info_gain=info_gain(arr),
        estimation_fidelity=estimation_fidelity(arr),
        operation_fidelity=operation_fidelity(arr),
        reversibility=reversibility(arr),
        outcome_probability=outcome_probability(arr),
    )


# ---------------------------------------------------------------------------
# batch evaluation


def _validate_block(lams) -> np.ndarray:
    lams = np.asarray(lams, dtype=float)
    if lams.ndim != 2 or lams.shape[1] < 2:
        raise SpectrumError(f"expected an (n, d>=2) block of spectra, got shape {lams.shape}")
    if not np.all(np.isfinite(lams)):
        raise SpectrumError("spectrum block contains non-finite entries")
    if np.any(lams < 0.0) or np.any(lams > 1.0):
        raise SpectrumError("singular values must lie in [0, 1]")
    if not np.all(np.any(lams > 0.0, axis=1)):
        raise SpectrumError("all-zero spectrum rejected: not a measurement operator")
    return lams


def info_gain_batch(lams: np.ndarray, target: float = 1e-13) -> np.ndarray:
    """Information gain for an (n, d) block of spectra.

    The Newton table runs vectorized across rows with the same running
    error estimate as the scalar path; rows whose nodes collide within the
    degeneracy tolerance, or whose estimate exceeds target, are redone
    through the scalar clustered evaluator.
    """
    lams = _validate_block(lams)
    n, d = lams.shape
    x = np.sort(lams * lams, axis=1)
    xmax = x[:, -1].copy()
    x /= xmax[:, None]
    s2 = x.sum(axis=1)
    base = info_bound(d)

    thr = config.degeneracy_rtol
    risky = (np.diff(x, axis=1) <= thr).any(axis=1)

    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(x > 0.0, x**d * np.log2(np.where(x > 0.0, x, 1.0)), 0.0)
        e = np.abs(f) * EPS
        for lvl in range(1, d):
            gap = x[:, lvl:] - x[:, : d - lvl]
            new = (f[:, 1:] - f[:, :-1]) / gap
            e = (e[:, 1:] + e[:, :-1] + EPS * (np.abs(f[:, 1:]) + np.abs(f[:, :-1]))) / gap + EPS * np.abs(new)
            f = new
    out = base - np.log2(s2) + f[:, 0] / s2
    err = e[:, 0] / s2

    redo = risky | ~np.isfinite(out) | (err > target)
    for i in np.flatnonzero(redo):
        out[i] = info_gain(lams[i])
    return out


def measures_batch(lams: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorized I, G, F, R, p for an (n, d) block of raw spectra."""
    lams = _validate_block(lams)
    n, d = lams.shape
    s2 = np.einsum("ij,ij->i", lams, lams)
    tau = lams.sum(axis=1)
    lmax = lams.max(axis=1)
    lmin = lams.min(axis=1)
    return {
        "I": info_gain_batch(lams),
        "G": (s2 + lmax * lmax) / ((d + 1) * s2),
        "F": (s2 + tau * tau) / ((d + 1) * s2),
        "R": d * lmin * lmin / s2,
        "p": s2 / d,
    }


# ---------------------------------------------------------------------------
# analytic first derivatives (hand-differentiated closed forms)


def grad_operation_fidelity(s) -> np.ndarray:
    """dF/dlambda_i = 2 tau (sigma^2 - lambda_i tau) / ((d+1) sigma^4)."""
    arr = as_array(s)
    d = arr.size
    s2 = float(np.dot(arr, arr))
    tau = float(arr.sum())
    return 2.0 * tau * (s2 - arr * tau) / ((d + 1) * s2 * s2)


def grad_reversibility(s, min_index: int | None = None) -> np.ndarray:
    """Gradient of R with the minimal singular value pinned to one index.

    R = d lambda_min^2 / sigma^2 is non-smooth where the minimum ties;
    pinning the index (by convention the last, i.e. the smallest in a
    descending spectrum) differentiates the smooth branch
    R = d lambda_j^2 / sigma^2:

        dR/dlambda_i = 2 d (delta_ij lambda_j sigma^2 - lambda_j^2 lambda_i) / sigma^4
    """
    arr = as_array(s)
    d = arr.size
    j = int(np.argmin(arr)) if min_index is None else int(min_index)
    s2 = float(np.dot(arr, arr))
    lj = float(arr[j])
    g = -2.0 * d * lj * lj * arr / (s2 * s2)
    g[j] += 2.0 * d * lj / s2
    return g
