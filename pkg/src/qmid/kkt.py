"""Numerical verification of the first-order optimality conditions.

Each boundary family is a stationary point of a Lagrange function
L = I + alpha*C + (inequality terms), C being F or R.  The multiplier
alpha is recovered from the stationarity equation of one free component,
inequality multipliers are solved from their own equations under
complementary slackness, and the remaining equations give the residual.
A true family point drives the residual to zero; an off-family spectrum
cannot satisfy all blocks with a single alpha.

I has no closed-form gradient here, so its derivatives are finite
differences; F and R use exact expressions.  R is differentiated on the
branch with the minimal singular value pinned to the last position, with
the tie constraints lambda_i >= lambda_d carrying their own multipliers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import QmidError
from .measures import (
    grad_operation_fidelity,
    grad_reversibility,
    info_gain,
    operation_fidelity,
    reversibility,
)
from .spectra import as_array

PROBLEMS = ("F-max", "F-min", "R-max", "R-min")

_RESIDUAL_TOL = 1e-5
_SLACKNESS_TOL = 1e-10


def _eval(measure: str, arr: np.ndarray) -> float:
    if measure == "I":
        return info_gain(arr)
    if measure == "F":
        return operation_fidelity(arr)
    if measure == "R":
        return reversibility(arr)
    raise QmidError(f"measure must be one of I, F, R, got {measure!r}")


def numeric_gradient(measure: str, s, h: float = 1e-5) -> np.ndarray:
    """Finite-difference gradient d(measure)/d(lambda_i).

    Central differences in the interior; second-order one-sided stencils
    where a component sits at 0 or 1.  For R, a component tied with the
    minimum of the others is differenced forward only, so the value is the
    derivative of the branch keeping that component above the minimum.
    """
    if h <= 0.0:
        raise QmidError(f"step h must be positive, got {h}")
    arr = as_array(s).astype(float).copy()
    _eval(measure, arr)  # validate once up front
    d = arr.size
    out = np.empty(d)

    def f(i, v):
        old = arr[i]
        arr[i] = v
        val = _eval(measure, arr)
        arr[i] = old
        return val

    for i in range(d):
        x = arr[i]
        others_min = np.min(np.delete(arr, i)) if d > 1 else math.inf
        forward_only = measure == "R" and x - h <= others_min + h
        if x + h <= 1.0 and x - h >= 0.0 and not forward_only:
            out[i] = (f(i, x + h) - f(i, x - h)) / (2.0 * h)
        elif x + h <= 1.0:
            out[i] = (-3.0 * f(i, x) + 4.0 * f(i, x + h) - f(i, x + 2.0 * h)) / (2.0 * h)
        else:
            out[i] = (3.0 * f(i, x) - 4.0 * f(i, x - h) + f(i, x - 2.0 * h)) / (2.0 * h)
    return out


def _grad_I(arr: np.ndarray, h: float, richardson: bool) -> np.ndarray:
    g = numeric_gradient("I", arr, h)
    if richardson:
        g2 = numeric_gradient("I", arr, h / 2.0)
        g = (4.0 * g2 - g) / 3.0
    return g


def euler_residual(s, h: float = 1e-5) -> float:
    """|sum_i lambda_i dI/dlambda_i|; zero because I is scale invariant."""
    arr = as_array(s)
    return float(abs(np.dot(arr, numeric_gradient("I", arr, h))))


@dataclass(frozen=True)
class KKTReport:
    family: tuple  # (d, k, l, lam)
    objective: str  # always "I"
    constraint: str  # "F" or "R"
    problem: str
    stationarity_residual: float
    alpha: float
    betas_or_gammas: tuple
    signs_ok: bool
    slackness_ok: bool

    @property
    def ok(self) -> bool:
        return (self.stationarity_residual <= _RESIDUAL_TOL
                and self.signs_ok and self.slackness_ok)

    def to_json(self) -> str:
        return json.dumps({
            "family": list(self.family),
            "objective": self.objective,
            "constraint": self.constraint,
            "problem": self.problem,
            "stationarity_residual": self.stationarity_residual,
            "alpha": self.alpha,
            "betas_or_gammas": list(self.betas_or_gammas),
            "signs_ok": self.signs_ok,
            "slackness_ok": self.slackness_ok,
        }, indent=2)


def _family_spectrum(d: int, k: int, l: int, lam: float) -> np.ndarray:
    arr = np.zeros(d)
    arr[:k] = 1.0
    arr[k:k + l] = lam
    return arr


def _check_pairing(d: int, k: int, l: int, problem: str) -> None:
    if problem not in PROBLEMS:
        raise QmidError(f"problem must be one of {PROBLEMS}, got {problem!r}")
    if k < 1 or l < 1 or k + l > d:
        raise QmidError(f"invalid family ({k},{l}) for d={d}")
    if problem in ("F-max", "R-max") and (k, l) != (1, d - 1):
        raise QmidError(f"{problem} pairs with the (1,{d - 1}) family, got ({k},{l})")
    if problem == "F-min" and l != 1:
        raise QmidError(f"F-min pairs with (k,1) families, got ({k},{l})")
    if problem == "R-min" and (k, l) != (d - 1, 1):
        raise QmidError(f"R-min pairs with the ({d - 1},1) family, got ({k},{l})")


def kkt_report(d: int, k: int, l: int, lam: float, problem: str,
               spectrum=None, h: float = 1e-5) -> KKTReport:
    """Check stationarity, multiplier signs and slackness for one problem.

    `spectrum` overrides the family point (same block layout assumed);
    used for negative controls.  The I gradient is redone with Richardson
    extrapolation if the plain stencil misses the residual tolerance.
    """
    _check_pairing(d, k, l, problem)
    if not 0.0 < lam < 1.0:
        raise QmidError(f"family parameter must lie in (0, 1), got {lam}")
    if spectrum is None:
        arr = _family_spectrum(d, k, l, lam)
    else:
        arr = as_array(spectrum).astype(float).copy()
        if arr.size != d:
            raise QmidError("spectrum length must equal d")

    constraint = "F" if problem.startswith("F") else "R"
    if constraint == "F":
        gC = grad_operation_fidelity(arr)
    else:
        gC = grad_reversibility(arr, min_index=d - 1)

    # standard form: grad I = alpha grad C + (inequality-normal terms);
    # sign of the inequality part flips between the max and min problems
    sign = 1.0 if problem.endswith("max") else -1.0
    for richardson in (False, True):
        gI = _grad_I(arr, h, richardson)
        alpha = gI[0] / gC[0]
        eq = gI - alpha * gC
        if constraint == "F":
            # constraints lambda_i >= 0; betas live on the zero block,
            # every other stationarity equation is free
            resid = eq.copy()
            betas = np.zeros(d)
            zero = arr == 0.0
            betas[zero] = -sign * eq[zero]
            resid[zero] = 0.0
            multipliers = betas
            signs_ok = bool(np.all(betas >= -_SLACKNESS_TOL))
            slack = float(np.max(np.abs(betas * arr)))
        else:
            # constraints lambda_i >= lambda_d for i < d; gammas on active
            # ties, and the pinned component collects their sum
            gammas = np.zeros(d - 1)
            active = np.abs(arr[:d - 1] - arr[d - 1]) <= 1e-12
            gammas[active] = -sign * eq[:d - 1][active]
            resid = eq.copy()
            resid[:d - 1][active] = 0.0
            resid[d - 1] = eq[d - 1] - sign * np.sum(gammas)
            multipliers = gammas
            signs_ok = bool(np.all(gammas >= -_SLACKNESS_TOL))
            slack = float(np.max(np.abs(gammas * (arr[:d - 1] - arr[d - 1])))) if d > 1 else 0.0
        resid[0] = 0.0  # recovery equation
        stationarity = float(np.max(np.abs(resid)))
        if stationarity <= _RESIDUAL_TOL or richardson:
            break

    return KKTReport(
        family=(d, k, l, float(lam)),
        objective="I",
        constraint=constraint,
        problem=problem,
        stationarity_residual=stationarity,
        alpha=float(alpha),
        betas_or_gammas=tuple(float(b) for b in multipliers),
        signs_ok=signs_ok,
        slackness_ok=slack <= _SLACKNESS_TOL,
    )
