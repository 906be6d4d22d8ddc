"""Named spectrum families and their closed-form information values.

The two-parameter family (k, l) at parameter lambda has spectrum

    (1 x k, lambda x l, 0 x (d-k-l)),

interpolating between rank projectors: lambda=0 gives the rank-k projector,
lambda=1 the rank-(k+l) one.  For l = 1 or k = 1 the information gain has
closed forms built from the coefficients

    a_n^(j) = C(j, n) [eta(j) - eta(j-n)] / ln 2
    c_n^(j)(lambda) = lambda^(2(j-n)) [C(j, n) log2 lambda^2 + a_n^(j)]

which this module evaluates in adaptive-precision arithmetic: both forms
divide by powers of (1 - lambda^2), so fixed-precision evaluation collapses
near lambda = 1.  The general-purpose evaluator in measures.py must agree
with these forms wherever they apply; the tests enforce that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import config
from ._dd import LN2, _etas, dd_x_one_series
from .errors import FamilyError
from .measures import info_bound, info_gain
from .spectra import harmonic_number

# closer than this to an endpoint, the closed forms are numerically
# indistinguishable from their projective limits even at 10^-30 accuracy
_ENDPOINT_GAP = 1e-30


@dataclass(frozen=True)
class FamilyKL:
    d: int
    k: int
    l: int
    lam: float

    def __post_init__(self):
        _check_family(self.d, self.k, self.l)
        if not 0.0 <= self.lam <= 1.0:
            raise FamilyError(f"lambda must lie in [0, 1], got {self.lam}")


def _check_family(d: int, k: int, l: int) -> None:
    if d < 2:
        raise FamilyError(f"dimension must be >= 2, got {d}")
    if k < 1 or l < 1:
        raise FamilyError(f"family requires k >= 1 and l >= 1, got k={k}, l={l}")
    if k + l > d:
        raise FamilyError(f"family requires k + l <= d, got k={k}, l={l}, d={d}")


def family_spectrum(d: int, k: int, l: int, lam: float) -> np.ndarray:
    """Spectrum (1 x k, lambda x l, 0 x (d-k-l)) in descending order."""
    _check_family(d, k, l)
    if not 0.0 <= lam <= 1.0:
        raise FamilyError(f"lambda must lie in [0, 1], got {lam}")
    return np.concatenate([np.ones(k), np.full(l, float(lam)), np.zeros(d - k - l)])


def projector_spectrum(d: int, r: int) -> np.ndarray:
    """Spectrum of the rank-r projector: r ones, d-r zeros."""
    if not 1 <= r <= d:
        raise FamilyError(f"projector rank must satisfy 1 <= r <= d, got r={r}, d={d}")
    return np.concatenate([np.ones(r), np.zeros(d - r)])


# ---------------------------------------------------------------------------
# coefficient tables


def harmonic_rational(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def a_coeff_rational(j: int, n: int) -> Fraction:
    """The rational factor of a_n^(j): C(j, n) [eta(j) - eta(j-n)]."""
    if not 0 <= n <= j:
        raise FamilyError(f"a coefficient requires 0 <= n <= j, got n={n}, j={j}")
    return math.comb(j, n) * (harmonic_rational(j) - harmonic_rational(j - n))


def a_coeff(j: int, n: int) -> float:
    return float(a_coeff_rational(j, n)) / LN2


def c_coeff(j: int, n: int, lam: float) -> float:
    """lambda^(2(j-n)) [C(j, n) log2 lambda^2 + a_n^(j)]; zero limit at lambda=0 for n<j."""
    if not 0 <= n <= j:
        raise FamilyError(f"c coefficient requires 0 <= n <= j, got n={n}, j={j}")
    if lam == 0.0:
        return a_coeff(j, n) if n == j else 0.0
    l2 = lam * lam
    return l2 ** (j - n) * (math.comb(j, n) * math.log2(l2) + a_coeff(j, n))


# ---------------------------------------------------------------------------
# closed-form information values


def info_gain_projective(d: int, r: int) -> float:
    """I of the rank-r projector: log2(d/r) - [eta(d) - eta(r)] / ln 2."""
    if not 1 <= r <= d:
        raise FamilyError(f"projector rank must satisfy 1 <= r <= d, got r={r}, d={d}")
    return math.log2(d / r) - (harmonic_number(d) - harmonic_number(r)) / LN2


def _closed_form_dps(order: int, lam: float) -> int:
    # each power of (1 - lambda^2) in a denominator costs log10(1/(1-l2)) digits
    gap = 1.0 - lam * lam
    return min(600, 40 + int(order * max(0.0, -math.log10(gap))) + 10)


def info_gain_k1(d: int, k: int, lam: float) -> float:
    """Closed form for the (k, 1) family."""
    _check_family(d, k, 1)
    if not 0.0 <= lam <= 1.0:
        raise FamilyError(f"lambda must lie in [0, 1], got {lam}")
    if lam == 0.0:
        return info_gain_projective(d, k)
    if 1.0 - lam * lam < _ENDPOINT_GAP:
        return info_gain_projective(d, k + 1)
    with mp.workdps(_closed_form_dps(k, lam)):
        lamm = mp.mpf(float(lam))
        l2 = lamm * lamm
        ln2 = mp.log(2)
        eta = [mp.mpf(0)]
        for i in range(1, d + 1):
            eta.append(eta[-1] + mp.mpf(1) / i)

        def a(j, n):
            return mp.binomial(j, n) * (eta[j] - eta[j - n]) / ln2

        term = l2 ** (k + 1) * mp.log(l2) / ln2 / (l2 - 1) ** k
        ssum = mp.fsum(a(k + 1, n) / (l2 - 1) ** (k - n) for n in range(k))
        s2 = k + l2
        return float(mp.log(d) / ln2 - (eta[d] - 1) / ln2 - mp.log(s2) / ln2 + (term - ssum) / s2)


def info_gain_1l(d: int, l: int, lam: float) -> float:
    """Closed form for the (1, l) family."""
    _check_family(d, 1, l)
    if not 0.0 <= lam <= 1.0:
        raise FamilyError(f"lambda must lie in [0, 1], got {lam}")
    if lam == 0.0:
        return info_gain_projective(d, 1)
    if 1.0 - lam * lam < _ENDPOINT_GAP:
        return info_gain_projective(d, 1 + l)
    with mp.workdps(_closed_form_dps(l, lam)):
        lamm = mp.mpf(float(lam))
        l2 = lamm * lamm
        ln2 = mp.log(2)
        eta = [mp.mpf(0)]
        for i in range(1, d + 1):
            eta.append(eta[-1] + mp.mpf(1) / i)

        def c(j, n):
            acoef = mp.binomial(j, n) * (eta[j] - eta[j - n]) / ln2
            return l2 ** (j - n) * (mp.binomial(j, n) * mp.log(l2) / ln2 + acoef)

        ssum = mp.fsum(c(l + 1, n) / (1 - l2) ** (l - n) for n in range(l))
        s2 = 1 + l * l2
        return float(mp.log(d) / ln2 - (eta[d] - 1) / ln2 - mp.log(s2) / ln2 - ssum / s2)


def info_gain_family(d: int, k: int, l: int, lam: float) -> float:
    """Closed form where one exists, else the general evaluator."""
    if lam == 0.0:
        return info_gain_projective(d, k)
    if lam == 1.0:
        return info_gain_projective(d, k + l)
    if k == 1:
        return info_gain_1l(d, l, lam)
    if l == 1:
        return info_gain_k1(d, k, lam)
    return info_gain(family_spectrum(d, k, l, lam))


# ---------------------------------------------------------------------------
# vectorized family curves


def family_curve_batch(d: int, k: int, l: int, lams: np.ndarray) -> dict[str, np.ndarray]:
    """I, G, F, R along the (k, l) family for an array of lambda values.

    Zero entries in the spectrum just lower the monomial degree, so the
    divided difference reduces to one over {lambda^2 x l, 1 x k} with
    exponent k + l.  That leaves a single cross-cluster gap 1 - lambda^2:
    for lambda^2 < 0.49 the confluent Newton table runs vectorized with no
    small denominator anywhere, and above that the expansion of the
    difference about the ones cluster converges geometrically.  Neither
    path needs extended precision.
    """
    _check_family(d, k, l)
    lams = np.asarray(lams, dtype=float)
    if lams.ndim != 1:
        raise FamilyError("lams must be one-dimensional")
    if np.any(lams < 0.0) or np.any(lams > 1.0) or not np.all(np.isfinite(lams)):
        raise FamilyError("lambda values must lie in [0, 1]")

    z = d - k - l
    x = lams * lams
    s2 = k + l * x
    tau = k + l * lams
    G = (s2 + 1.0) / ((d + 1) * s2)
    F = (s2 + tau * tau) / ((d + 1) * s2)
    R = d * x / s2 if z == 0 else np.zeros_like(x)

    deff = k + l
    dd = np.empty_like(x)
    hi = x >= 0.49
    if np.any(hi):
        dd[hi] = dd_x_one_series(x[hi], l, k, deff)

    lo = ~hi & (x > 0.0)
    if np.any(lo):
        xl = x[lo]
        etas = _etas(deff)
        labels = ["lam"] * l + ["one"] * k

        def conf_lam(r: int) -> np.ndarray:
            return math.comb(deff, r) * xl ** (deff - r) * (
                np.log2(xl) + (etas[deff] - etas[deff - r]) / LN2)

        def conf_one(r: int) -> float:
            return math.comb(deff, r) * (etas[deff] - etas[deff - r]) / LN2

        f = np.zeros((deff, xl.size))
        f[:l] = conf_lam(0)
        gap = xl - 1.0
        for lvl in range(1, deff):
            for i in range(deff - lvl):
                top, bot = labels[i + lvl], labels[i]
                if top == bot:
                    f[i] = conf_lam(lvl) if bot == "lam" else conf_one(lvl)
                else:
                    f[i] = (f[i] - f[i + 1]) / gap
        dd[lo] = f[0]

    I = info_bound(d) - np.log2(np.where(s2 > 0, s2, 1.0)) + dd / np.where(s2 > 0, s2, 1.0)
    at0 = x == 0.0
    if np.any(at0):
        I[at0] = info_gain_projective(d, k)
    at1 = x == 1.0
    if np.any(at1):
        I[at1] = info_gain_projective(d, deff)
    return {"I": I, "G": G, "F": F, "R": R}
