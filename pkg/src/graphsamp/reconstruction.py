"""Recovering a bandlimited signal from its values on a node subset."""

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg_core
from .errors import (
    DimensionMismatch,
    NotInvertible,
    RankDeficient,
    ValidationError,
    ZeroSignal,
)
from .sampling import SamplingSet


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Vertex-domain estimate ``xhat = U @ xbar_hat`` with diagnostics.

    ``condition`` is ``sigma_min / sigma_max`` of the sampled rows ``U[S]``;
    ``bound`` is the worst-case error bound when a noise radius was given.
    """

    xhat: np.ndarray
    xbar_hat: np.ndarray
    condition: float
    bound: Optional[float] = None

    def to_json(self, x_true=None):
        d = {
            "xhat": self.xhat.tolist(),
            "xbar_hat": self.xbar_hat.tolist(),
            "condition": self.condition,
            "bound": self.bound,
        }
        if x_true is not None:
            d["error"] = float(np.linalg.norm(self.xhat - np.asarray(x_true)))
            d["relative_error"] = recovery_error(self.xhat, x_true)
        return json.dumps(d)


def _indices(s):
    return list(s.indices) if isinstance(s, SamplingSet) else [int(i) for i in s]


def _sampled_rows(u, s):
    u = linalg_core.as_matrix(u, "U")
    idx = _indices(s)
    if max(idx) >= u.shape[0]:
        raise DimensionMismatch(f"node index {max(idx)} outside U with {u.shape[0]} rows")
    rows = u[idx]
    if rows.shape[0] < rows.shape[1]:
        raise NotInvertible(f"{rows.shape[0]} samples cannot determine {rows.shape[1]} coefficients")
    smin, smax = linalg_core.extreme_singular_values(rows)
    if not (smax > 0 and smin > linalg_core.INVERTIBLE_RTOL * smax):
        raise NotInvertible(
            f"sampled rows are rank deficient (sigma_min={smin:.3e}, sigma_max={smax:.3e})"
        )
    return u, idx, rows, smin / smax


def _samples(x_tilde, m):
    x_tilde = linalg_core.as_vector(x_tilde, "x_tilde")
    if x_tilde.size != m:
        raise DimensionMismatch(f"{x_tilde.size} samples for {m} selected nodes")
    return x_tilde


def reconstruct_noiseless(u, s, x_tilde):
    """Interpolate from samples ``x_tilde`` taken on ``s``.

    Solves ``U[S] z = x_tilde`` exactly when ``|S| = k`` and in the
    least-squares sense when ``|S| > k``.

    Raises
    ------
    NotInvertible
        If ``U[S]`` does not have full column rank.
    """
    u, idx, rows, cond = _sampled_rows(u, s)
    x_tilde = _samples(x_tilde, len(idx))
    try:
        z = linalg_core.solve_least_squares(rows, x_tilde)
    except RankDeficient as exc:
        raise NotInvertible(str(exc)) from exc
    return ReconstructionResult(u @ z, z, cond)


def sampled_covariance(q, idx):
    q = linalg_core.as_matrix(q, "Q")
    if q.shape[0] != q.shape[1]:
        raise DimensionMismatch(f"Q must be square, got {q.shape}")
    return q[np.ix_(idx, idx)]


def reconstruct_gls(u, s, x_tilde, q, eps_n=None):
    """Generalized least-squares estimate under noise covariance ``q`` (N x N).

    The sampled covariance ``Q_S`` is the ``S x S`` block of ``q``. If
    ``eps_n`` is given, the worst-case error bound is attached to the result.
    """
    u, idx, rows, cond = _sampled_rows(u, s)
    x_tilde = _samples(x_tilde, len(idx))
    q_s = sampled_covariance(q, idx)
    try:
        op = linalg_core.gls_operator(rows, q_s)
    except RankDeficient as exc:
        raise NotInvertible(str(exc)) from exc
    z = op @ x_tilde
    bound = None
    if eps_n is not None:
        bound = _bound_from_operator(op, eps_n)
    return ReconstructionResult(u @ z, z, cond, bound)


def _bound_from_operator(op, eps_n):
    if eps_n < 0:
        raise ValidationError(f"eps_n must be non-negative, got {eps_n}")
    return linalg_core.extreme_singular_values(op)[1] * float(eps_n)


def error_bound(u, s, q, eps_n):
    """Worst-case ``||xhat - x||_2`` over noise with ``||n||_2 <= eps_n``.

    Equals ``sigma_max((U_S^T Q_S^{-1} U_S)^{-1} U_S^T Q_S^{-1}) * eps_n``; the
    vertex-domain guarantee assumes ``U`` has orthonormal columns.
    """
    _, idx, rows, _ = _sampled_rows(u, s)
    q_s = sampled_covariance(q, idx)
    try:
        op = linalg_core.gls_operator(rows, q_s)
    except RankDeficient as exc:
        raise NotInvertible(str(exc)) from exc
    return _bound_from_operator(op, eps_n)


def recovery_error(xhat, x):
    """Relative error energy ``||xhat - x||^2 / ||x||^2``."""
    xhat = np.asarray(xhat, dtype=float)
    x = np.asarray(x, dtype=float)
    if xhat.shape != x.shape:
        raise DimensionMismatch(f"shapes differ: {xhat.shape} vs {x.shape}")
    energy = float(x @ x)
    if energy == 0.0:
        raise ZeroSignal("recovery error is undefined for a zero signal")
    d = xhat - x
    return float(d @ d) / energy
