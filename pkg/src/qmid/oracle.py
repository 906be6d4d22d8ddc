"""Monte-Carlo and quadrature cross-checks of the closed-form measures.

Uniform (Haar) averaging over pure states reduces to a flat Dirichlet
distribution of the squared amplitudes in the measurement eigenbasis, so
every measure becomes a simplex expectation over t = (|c_1|^2,...,|c_d|^2)
with q(t) = sum lambda_i^2 t_i playing the outcome likelihood:

    F = E[(sum lambda_i t_i)^2] / qbar       qbar = sigma^2 / d
    G = E[q(t) t_imax] / qbar                imax = first maximal lambda
    R = lambda_min^2 / qbar                  (exact, no sampling needed)

These estimators validate the closed forms without reusing any of their
algebra.  For d=2 the information gain itself is a one-dimensional
integral evaluated by adaptive quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import QmidError
from .spectra import as_array

_MIN_SAMPLES = 10_000


@dataclass(frozen=True)
class SimplexSample:
    """Squared amplitudes of one Haar-random pure state."""

    t: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.t, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "t", arr)
        if np.any(arr < 0.0) or abs(arr.sum() - 1.0) > 1e-12:
            raise QmidError("simplex sample must be nonnegative and sum to 1")


@dataclass(frozen=True)
class OracleEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int


def _as_rng(rng_state) -> np.random.Generator:
    if isinstance(rng_state, np.random.Generator):
        return rng_state
    return np.random.default_rng(rng_state)


def sample_simplex(d: int, rng_state) -> SimplexSample:
    """One uniform point on the probability simplex (flat Dirichlet)."""
    if d < 2:
        raise QmidError(f"dimension must be >= 2, got {d}")
    rng = _as_rng(rng_state)
    return SimplexSample(rng.dirichlet(np.ones(d)))


def _estimate(values: np.ndarray, seed: int) -> OracleEstimate:
    n = values.size
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / np.sqrt(n))
    return OracleEstimate(mean, std_error, n, seed)


def mc_measures(s, n: int, seed: int) -> dict:
    """Monte-Carlo estimates of G, F (and exact R) for one outcome spectrum."""
    if n < _MIN_SAMPLES:
        raise QmidError(f"need at least {_MIN_SAMPLES} samples, got {n}")
    lam = as_array(s)
    d = lam.size
    lam_sq = lam * lam
    qbar = float(lam_sq.sum()) / d
    if qbar == 0.0:
        raise QmidError("spectrum must have at least one positive value")
    rng = np.random.default_rng(seed)
    t = rng.dirichlet(np.ones(d), size=n)
    q = t @ lam_sq
    overlap = t @ lam
    imax = int(np.argmax(lam))  # ties resolve to the lowest index
    f_vals = overlap * overlap / qbar
    g_vals = q * t[:, imax] / qbar
    r_exact = float(lam_sq.min()) / qbar
    return {
        "F": _estimate(f_vals, seed),
        "G": _estimate(g_vals, seed),
        "R": OracleEstimate(r_exact, 0.0, n, seed),
    }


def quad_info_gain_d2(s) -> float:
    """Information gain for d=2 by direct quadrature of the defining integral."""
    lam = as_array(s)
    if lam.size != 2:
        raise QmidError(f"quadrature oracle requires d=2, got d={lam.size}")
    a, b = float(lam[0] ** 2), float(lam[1] ** 2)
    qbar = 0.5 * (a + b)
    if qbar == 0.0:
        raise QmidError("spectrum must have at least one positive value")
    if a == b:
        return 0.0

    def integrand(t):
        ratio = (a * t + b * (1.0 - t)) / qbar
        if ratio <= 0.0:
            return 0.0
        return ratio * np.log2(ratio)

    val, _ = quad(integrand, 0.0, 1.0, epsabs=1e-9, epsrel=1e-11, limit=200)
    return float(val)
