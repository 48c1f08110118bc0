"""Shared frequency-support identification from fully observed signals.

The estimate keeps the ``k`` rows of the spectrum ``Ybar = V^T Y`` with the
largest l2 norms and zeroes the rest. That is the exact minimizer of
``||Xbar - Ybar||_F`` over matrices with at most ``k`` nonzero rows.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidBandwidth, InvalidSupport, ValidationError
from .signal_model import ObservationBatch, check_support, gft


@dataclass(frozen=True, eq=False)
class SupportEstimate:
    """Estimated support (sorted, 0-based) and the row-thresholded spectrum."""

    support: tuple
    xbar_hat: np.ndarray
    zeta: float
    margin: float

    def to_json(self):
        return json.dumps(
            {"support": list(self.support), "zeta": self.zeta, "margin": self.margin}
        )


def row_norms(m):
    """l2 norm of every row of ``m``."""
    m = np.asarray(m, dtype=float)
    return np.sqrt(np.einsum("ij,ij->i", m, m))


def mixed_norm(m, p=2, q=0):
    """The (p, q) mixed norm: the q-norm of the vector of row p-norms.

    ``q = 0`` counts the nonzero rows.
    """
    r = np.linalg.norm(np.asarray(m, dtype=float), ord=p, axis=1)
    if q == 0:
        return int(np.count_nonzero(r))
    return float(np.sum(r**q) ** (1.0 / q))


def threshold_rows(ybar, k):
    """Keep the ``k`` rows of ``ybar`` with largest l2 norm; ties keep the lower index."""
    ybar = np.asarray(ybar, dtype=float)
    if ybar.ndim == 1:
        ybar = ybar[:, None]
    n = ybar.shape[0]
    if not 1 <= k <= n:
        raise InvalidBandwidth(f"bandwidth k must lie in [1, {n}], got {k}")
    norms = row_norms(ybar)
    order = np.argsort(-norms, kind="stable")
    keep = np.sort(order[:k])
    xbar = np.zeros_like(ybar)
    xbar[keep] = ybar[keep]
    zeta = float(norms[order[k - 1]])
    nxt = float(norms[order[k]]) if k < n else 0.0
    return SupportEstimate(tuple(int(i) for i in keep), xbar, zeta, zeta - nxt)


def recover_support(basis, y, k):
    """Estimate the common support of the columns of ``y`` in ``basis``.

    ``y`` is an :class:`ObservationBatch` or an N x P (or length-N) array.
    Runs in ``O(N P + N log N)`` once the spectrum is formed.
    """
    if not isinstance(y, ObservationBatch):
        y = ObservationBatch(np.asarray(y, dtype=float))
    if y.n != basis.n:
        raise DimensionMismatch(f"observations have {y.n} rows, basis has {basis.n} nodes")
    return threshold_rows(gft(basis, y.y), k)


def identifiability_check(xbar_true, support, eps_n):
    """Sufficient condition for exact support recovery under bounded noise.

    With every noise column bounded by ``eps_n`` in l2 norm, thresholding
    recovers ``support`` exactly whenever
    ``min_{i in support} ||xbar(i, :)|| > 2 * eps_n * sqrt(P)``.

    Returns
    -------
    (holds, lhs, rhs) : (bool, float, float)
    """
    xbar = np.asarray(xbar_true, dtype=float)
    if xbar.ndim == 1:
        xbar = xbar[:, None]
    support = check_support(support, xbar.shape[0])
    if eps_n < 0:
        raise ValidationError(f"eps_n must be non-negative, got {eps_n}")
    lhs = float(np.min(row_norms(xbar[list(support)])))
    rhs = 2.0 * float(eps_n) * np.sqrt(xbar.shape[1])
    return lhs > rhs, lhs, float(rhs)


def support_error(estimated, truth, k=None):
    """``1 - |estimated & truth| / k``: 0 for a perfect estimate, 1 if disjoint."""
    truth = set(int(i) for i in truth)
    k = len(truth) if k is None else int(k)
    if k < 1 or len(truth) != k:
        raise InvalidSupport(f"truth has {len(truth)} indices, expected k = {k}")
    return 1.0 - len(truth & set(int(i) for i in estimated)) / k
