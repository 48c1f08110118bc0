"""Dense real linear-algebra kernels.

Everything here is a pure function of its inputs. Matrices are plain
``numpy.ndarray`` objects of dtype float64; returned arrays are fresh and
marked read-only where they are part of a value type.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NonSymmetric,
    NotPositiveDefinite,
    RankDeficient,
    ValidationError,
)

# Relative threshold on sigma_min / sigma_max below which a solve matrix is
# treated as rank deficient.
RANK_RTOL = 1e-12
# A selection matrix counts as invertible iff sigma_min > INVERTIBLE_RTOL * sigma_max.
INVERTIBLE_RTOL = 1e-10
# Default absolute tolerance for the symmetry check in sym_eig.
SYMMETRY_TOL = 1e-12


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array with positive dimensions."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionMismatch(f"{name} has an empty dimension: {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains NaN or Inf")
    return m


def as_vector(x, name="vector"):
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} contains NaN or Inf")
    return v


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class EigenPair:
    """Eigendecomposition ``M = V diag(eigenvalues) V^T`` of a symmetric matrix.

    Eigenvalues are sorted in non-increasing order; column ``i`` of
    ``eigenvectors`` belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def canonical_signs(v):
    """Flip columns of ``v`` so each column's largest-magnitude entry is positive.

    Ties in magnitude resolve to the earliest row index (``argmax`` order).
    """
    v = np.array(v, dtype=float)
    if v.size == 0:
        return v
    pivot = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[pivot, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def sym_eig(m, tol=SYMMETRY_TOL):
    """Eigendecomposition of a real symmetric matrix.

    Parameters
    ----------
    m : array_like, shape (N, N)
        Symmetric matrix. Only symmetry up to ``tol`` (max-abs entrywise) is
        required; the matrix is symmetrized before decomposition.
    tol : float
        Absolute symmetry tolerance.

    Returns
    -------
    EigenPair
        Eigenvalues in descending order, eigenvectors with the
        largest-magnitude entry of each column made positive.

    Raises
    ------
    NonSymmetric
        If ``max|M - M^T| > tol``.
    NoConvergence
        If the LAPACK driver fails to converge.
    """
    m = as_matrix(m, "M")
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"M must be square, got {m.shape}")
    asym = np.max(np.abs(m - m.T))
    if asym > tol:
        raise NonSymmetric(f"max |M - M^T| = {asym:.3e} exceeds tol {tol:.1e}")
    sym = 0.5 * (m + m.T)
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(-w, kind="stable")
    return EigenPair(_frozen(w[order]), _frozen(canonical_signs(v[:, order])))


def extreme_singular_values(a):
    """Return ``(sigma_min, sigma_max)`` of ``a``.

    For a non-square matrix the smallest singular value is taken over the
    ``min(rows, cols)`` singular values, so a tall matrix with full column
    rank has ``sigma_min > 0``.
    """
    a = as_matrix(a, "A")
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return float(s[-1]), float(s[0])


def _check_rank(a, rtol, what):
    smin, smax = extreme_singular_values(a)
    if smax == 0.0 or smin <= rtol * smax:
        raise RankDeficient(
            f"{what} is rank deficient (sigma_min={smin:.3e}, sigma_max={smax:.3e})"
        )


def orth_complement_projector(b):
    """Projector onto the orthogonal complement of the row space of ``b``.

    Returns ``I_k - B^T (B B^T)^{-1} B`` for ``b`` of shape (s, k) with full
    row rank.
    """
    b = as_matrix(b, "B")
    if b.shape[0] > b.shape[1]:
        raise RankDeficient(f"B with shape {b.shape} cannot have full row rank")
    _check_rank(b, RANK_RTOL, "B")
    k = b.shape[1]
    gram = b @ b.T
    p = np.eye(k) - b.T @ np.linalg.solve(gram, b)
    return 0.5 * (p + p.T)


def solve_least_squares(a, b):
    """Minimize ``||A z - b||_2`` for a tall or square full-column-rank ``A``."""
    a = as_matrix(a, "A")
    b = as_vector(b, "b")
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"A has {a.shape[0]} rows, b has length {b.shape[0]}")
    if a.shape[0] < a.shape[1]:
        raise RankDeficient(f"underdetermined system: A has shape {a.shape}")
    _check_rank(a, RANK_RTOL, "A")
    if a.shape[0] == a.shape[1]:
        return np.linalg.solve(a, b)
    z, *_ = np.linalg.lstsq(a, b, rcond=None)
    return z


def cholesky_pd(q, name="Q"):
    """Lower Cholesky factor of ``q`` after checking positive definiteness."""
    q = as_matrix(q, name)
    if q.shape[0] != q.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got {q.shape}")
    if np.max(np.abs(q - q.T)) > 1e-10 * max(np.max(np.abs(q)), 1.0):
        raise NotPositiveDefinite(f"{name} is not symmetric")
    q = 0.5 * (q + q.T)
    w = np.linalg.eigvalsh(q)
    if w[-1] <= 0.0 or w[0] <= RANK_RTOL * w[-1]:
        raise NotPositiveDefinite(
            f"{name} is not positive definite (eigenvalues in [{w[0]:.3e}, {w[-1]:.3e}])"
        )
    try:
        return np.linalg.cholesky(q)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def gls_operator(a, q_s):
    """The map ``(A^T Q^{-1} A)^{-1} A^T Q^{-1}`` taking data to the GLS estimate.

    Built from the normal equations, with ``Q^{-1}`` applied through its
    Cholesky factor.
    """
    a = as_matrix(a, "A")
    if a.shape[0] < a.shape[1]:
        raise RankDeficient(f"underdetermined system: A has shape {a.shape}")
    q_s = as_matrix(q_s, "Q_S")
    if q_s.shape != (a.shape[0], a.shape[0]):
        raise DimensionMismatch(f"Q_S has shape {q_s.shape}, expected {(a.shape[0],) * 2}")
    _check_rank(a, RANK_RTOL, "A")
    chol = cholesky_pd(q_s, "Q_S")
    # W = L^{-1} A, so A^T Q^{-1} = W^T L^{-1}
    w = np.linalg.solve(chol, a)
    normal = w.T @ w
    _check_rank(normal, RANK_RTOL, "A^T Q_S^{-1} A")
    qinv_a = np.linalg.solve(chol.T, w)
    return np.linalg.solve(normal, qinv_a.T)


def solve_gls(a, b, q_s):
    """Generalized least squares: solve ``(A^T Q^{-1} A) z = A^T Q^{-1} b``."""
    b = as_vector(b, "b")
    a = as_matrix(a, "A")
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"A has {a.shape[0]} rows, b has length {b.shape[0]}")
    return gls_operator(a, q_s) @ b


def pd_factor(q):
    """Return ``F`` with ``F F^T = Q`` for a symmetric positive-definite ``Q``."""
    return cholesky_pd(q)


def is_full_column_rank(a, rtol=INVERTIBLE_RTOL):
    """True iff ``sigma_min(a) > rtol * sigma_max(a)`` and ``a`` is not wide."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] < a.shape[1] or a.size == 0:
        return False
    smin, smax = extreme_singular_values(a)
    return smax > 0.0 and smin > rtol * smax
