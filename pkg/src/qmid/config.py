"""Package-wide numeric knobs.

Modules read these at call time, so assigning new values takes effect
immediately for subsequent calls.
"""

# Relative tolerance on lambda^2 below which two singular values are treated
# as one confluent cluster.  Shared by every evaluator in the package.
degeneracy_rtol: float = 1e-7

# Absolute error budget for a single info-gain evaluation.  The divided
# difference table tracks its own rounding error; results above this budget
# are recomputed in arbitrary precision.
info_abs_tol: float = 1e-13

# Backend for the grid sweep kernels: "auto" picks the compiled path when
# numba imports cleanly, else the vectorized numpy path.  Overridden by the
# QMID_BACKEND environment variable ("numba" | "numpy" | "auto").
sweep_backend: str = "auto"
