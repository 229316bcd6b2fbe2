"""Minimum-norm least squares for the assembled systems.

Random-feature Galerkin matrices are rank-deficient by construction, so the
solve uses truncated-SVD semantics: singular values below rcond * sigma_max
are treated as zero and the minimum-norm minimizer is returned.  LAPACK's
divide-and-conquer SVD driver (gelsd) implements exactly that; the pivoted
complete-orthogonal driver (gelsy) gives the same minimizer to working
accuracy at a fraction of the cost and is selected for large systems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class SolveError(ValueError):
    pass


@dataclass(frozen=True)
class LeastSquaresReport:
    """Solution of min |A u - b| with diagnostics."""

    solution: np.ndarray
    residual_norm: float
    relative_residual: float
    effective_rank: int
    cutoff: float


# above this column count the SVD driver is replaced by pivoted QR
GELSY_THRESHOLD = 3000


def solve_least_squares(matrix, rhs, rcond: float = 1e-12,
                        driver: str | None = None) -> LeastSquaresReport:
    """Minimum-norm least-squares solution with singular-value truncation.

    ``driver`` forces a LAPACK backend ("gelsd" or "gelsy"); by default small
    systems use gelsd and large ones gelsy.
    """
    A = np.asarray(matrix, dtype=float)
    b = np.asarray(rhs, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise SolveError(f"matrix must be 2-D and nonempty, got shape {A.shape}")
    if b.shape[0] != A.shape[0]:
        raise SolveError(f"rhs length {b.shape[0]} != row count {A.shape[0]}")
    if not 0.0 < rcond < 1.0:
        raise SolveError(f"rcond must lie in (0, 1), got {rcond}")
    if not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)):
        raise SolveError("matrix/rhs contain non-finite entries")

    if driver is None:
        driver = "gelsd" if A.shape[1] <= GELSY_THRESHOLD else "gelsy"
    u, _, rank, _ = scipy.linalg.lstsq(
        A, b, cond=rcond, lapack_driver=driver, check_finite=False)
    residual = float(np.linalg.norm(A @ u - b))
    denom = max(float(np.linalg.norm(b)), np.finfo(float).tiny)
    return LeastSquaresReport(
        solution=u,
        residual_norm=residual,
        relative_residual=residual / denom,
        effective_rank=int(rank),
        cutoff=rcond,
    )
