"""Singular-value spectra: validation, canonical form, auxiliary scalars.

A measurement operator acting on a d-level system is characterized, for
every quantity computed in this package, solely by its d singular values
lambda_1..lambda_d in [0, 1].  This module owns the container type and the
canonical form (descending order, sum of squares rescaled to one) that the
region machinery works in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpectrumError


def harmonic_number(n: int) -> float:
    """Sum_{k=1..n} 1/k, accumulated in ascending k.

    Ascending accumulation adds the small terms last, which keeps the
    floating sum within one ulp of the rounded exact value for every n
    used here.
    """
    if n < 1:
        raise SpectrumError(f"harmonic_number requires n >= 1, got {n}")
    total = 0.0
    for k in range(1, n + 1):
        total += 1.0 / k
    return total


def validate_values(values, d: int | None = None) -> np.ndarray:
    """Check spectrum invariants and return the values as a float array."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise SpectrumError(f"spectrum must be one-dimensional, got shape {arr.shape}")
    if d is not None and arr.size != d:
        raise SpectrumError(f"expected {d} singular values, got {arr.size}")
    if arr.size < 2:
        raise SpectrumError(f"dimension must be at least 2, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise SpectrumError("spectrum contains non-finite entries")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        bad = arr[(arr < 0.0) | (arr > 1.0)][0]
        raise SpectrumError(f"singular values must lie in [0, 1], got {bad!r}")
    if not np.any(arr > 0.0):
        raise SpectrumError("all-zero spectrum rejected: not a measurement operator")
    return arr


@dataclass(frozen=True)
class Spectrum:
    """A validated singular-value spectrum.

    values keeps the caller's scale and order; the outcome probability
    sigma^2/d depends on that scale, everything else does not.
    """

    values: np.ndarray

    def __init__(self, values, d: int | None = None):
        arr = validate_values(values, d)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def d(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return self.values.size


def as_array(s) -> np.ndarray:
    """Accept a Spectrum or any sequence; return validated float array."""
    if isinstance(s, Spectrum):
        return s.values
    return validate_values(s)


def canonicalize(s) -> Spectrum:
    """Descending order, rescaled so that sigma^2 = sum lambda_i^2 = 1.

    Every measure except the outcome probability is invariant under this
    transformation, so canonical spectra are the natural coordinates for
    region work.
    """
    arr = as_array(s)
    arr = np.sort(arr)[::-1]
    norm = float(np.sqrt(np.dot(arr, arr)))
    return Spectrum(arr / norm)


@dataclass(frozen=True)
class AuxiliaryScalars:
    sigma_sq: float
    tau: float
    lambda_max: float
    lambda_min: float
    eta_d: float


def auxiliary_scalars(s) -> AuxiliaryScalars:
    arr = as_array(s)
    return AuxiliaryScalars(
        sigma_sq=float(np.dot(arr, arr)),
        tau=float(arr.sum()),
        lambda_max=float(arr.max()),
        lambda_min=float(arr.min()),
        eta_d=harmonic_number(arr.size),
    )


def random_spectra(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n random spectra, uniform on [0,1]^d, all-zero rows excluded.

    The all-zero row has probability zero; the resample loop exists so the
    invariant holds unconditionally.
    """
    out = rng.uniform(0.0, 1.0, size=(n, d))
    while True:
        dead = ~np.any(out > 0.0, axis=1)
        if not dead.any():
            return out
        out[dead] = rng.uniform(0.0, 1.0, size=(int(dead.sum()), d))
