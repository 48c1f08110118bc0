"""Node-subset selection for bandlimited graph signals.

The greedy scheme picks, at each step, the unselected node whose band-basis
row best correlates with a residual vector: the residual node's row with
the span of the already-selected rows projected out. Because the residual
is orthogonal to every selected row, each pick adds a new direction, so
``k`` picks give an invertible ``k x k`` system for generic bases.

Random baselines (uniform and leverage-score) are provided for comparison.
"""

import json
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg_core
from .errors import (
    DegenerateWeights,
    DimensionMismatch,
    SpanExhausted,
    TooManySamples,
    ValidationError,
)

log = logging.getLogger(__name__)

# Rows with norm <= ZERO_ROW_RTOL * (largest row norm) are never selectable.
ZERO_ROW_RTOL = 1e-12
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SamplingSet:
    """Ordered node indices (0-based) plus selection diagnostics."""

    indices: tuple
    residual_node: Optional[int] = None
    scores: tuple = ()

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if not idx:
            raise ValidationError("a sampling set needs at least one node")
        if len(set(idx)) != len(idx) or min(idx) < 0:
            raise ValidationError(f"indices must be distinct and non-negative: {idx}")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))

    @property
    def m(self):
        return len(self.indices)

    def to_json(self):
        return json.dumps(
            {
                "indices": list(self.indices),
                "residual_node": self.residual_node,
                "scores": list(self.scores),
            }
        )

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(tuple(d["indices"]), d.get("residual_node"), tuple(d.get("scores", ())))


def _row_norms(u):
    return np.sqrt(np.einsum("ij,ij->i", u, u))


def _resolve_residual_node(residual_node, norms, seed):
    n = norms.shape[0]
    if residual_node == "auto":
        return int(np.argmax(norms))
    if residual_node == "random":
        return int(np.random.default_rng(seed).integers(n))
    ell = int(residual_node)
    if not 0 <= ell < n:
        raise ValidationError(f"residual node {ell} outside [0, {n})")
    return ell


def _project_out(q, x):
    """Remove the span of the orthonormal columns of ``q`` from ``x`` (rows)."""
    if q.shape[1] == 0:
        return x.copy()
    # two passes of classical Gram-Schmidt keep the residual orthogonal to
    # working precision
    x = x - (x @ q) @ q.T
    return x - (x @ q) @ q.T


def iterative_selection(u, m, residual_node=0, tol=DEFAULT_TOL, seed=None):
    """Greedy iterative selection of ``m`` nodes from band basis ``u`` (N x k).

    Parameters
    ----------
    u : array_like, shape (N, k)
        Rows ``u_j`` of the band basis, one per node.
    m : int
        Number of nodes to select, ``1 <= m <= N - 1``.
    residual_node : int, "auto" or "random"
        Node whose row seeds the residual. ``"auto"`` takes the row of largest
        norm, ``"random"`` draws one uniformly using ``seed``. The residual
        node is not a candidate while it seeds the residual.
    tol : float
        Residual and correlation threshold, relative to the largest row norm.
        When the residual (or its best correlation) drops below it before
        ``m`` picks, the residual is re-seeded from the unselected row with the
        largest component outside the selected span. Once no such row is left,
        further picks maximize the smallest singular value of the selected rows.

    Returns
    -------
    SamplingSet
        ``scores[i]`` is the greedy score of pick ``i`` (the smallest singular
        value for picks made after the selected rows span ``R^k``).

    Raises
    ------
    SpanExhausted
        If ``m > N - 1`` or fewer than ``m`` nodes have nonzero rows.
    """
    u = linalg_core.as_matrix(u, "U")
    n, k = u.shape
    if m < 1:
        raise ValidationError(f"m must be at least 1, got {m}")
    if m > n - 1:
        raise SpanExhausted(f"cannot select {m} of {n} nodes (at most N - 1 = {n - 1})")

    norms = _row_norms(u)
    scale = norms.max()
    selectable = norms > ZERO_ROW_RTOL * scale
    if not selectable.all():
        log.debug("skipping %d zero rows of U", int((~selectable).sum()))
    if selectable.sum() < m:
        raise SpanExhausted(f"only {int(selectable.sum())} nodes have nonzero rows, need {m}")
    ell = _resolve_residual_node(residual_node, norms, seed)
    abs_tol = tol * scale

    safe_norms = np.where(selectable, norms, 1.0)
    chosen = np.zeros(n, dtype=bool)
    picks, scores = [], []
    basis = np.zeros((k, 0))  # orthonormal basis of the selected rows' span
    seed_node = ell
    excluded = ell  # the original residual node, until the first re-seed
    spanned = False
    reseeded = False

    while len(picks) < m:
        cand = selectable & ~chosen
        if excluded is not None:
            cand[excluded] = False
        pick = None
        if not spanned:
            r = _project_out(basis, u[seed_node])
            if np.linalg.norm(r) > abs_tol and cand.any():
                corr = np.abs(u @ r) / safe_norms
                corr[~cand] = -np.inf
                best = int(np.argmax(corr))
                if corr[best] > abs_tol:
                    pick, score = best, float(corr[best] ** 2)
            if pick is None and reseeded:
                # the re-seed row itself still sticks out of the span
                pick = seed_node
                score = float((u[seed_node] @ r) ** 2 / safe_norms[seed_node] ** 2)
            if pick is None:
                # re-seed from the unselected row sticking out of the span most
                excluded = None
                pool = selectable & ~chosen
                resid = np.linalg.norm(_project_out(basis, u), axis=1)
                resid[~pool] = -np.inf
                best = int(np.argmax(resid))
                if resid[best] > abs_tol:
                    if best != seed_node:
                        log.debug("re-seeding residual at node %d after %d picks", best, len(picks))
                    seed_node = best
                    reseeded = True
                    continue
                spanned = True
                if basis.shape[1] < k:
                    log.debug("U has rank %d < k = %d; filling by smallest singular value", basis.shape[1], k)
        if spanned:
            cand = selectable & ~chosen
            gram = u[picks].T @ u[picks]
            rows = u[cand]
            stacked = gram[None, :, :] + rows[:, :, None] * rows[:, None, :]
            lam_min = np.linalg.eigvalsh(stacked)[:, 0]
            j = int(np.argmax(lam_min))
            pick = int(np.flatnonzero(cand)[j])
            score = float(np.sqrt(max(lam_min[j], 0.0)))

        reseeded = False
        picks.append(pick)
        scores.append(score)
        chosen[pick] = True
        if not spanned and basis.shape[1] < k:
            w = _project_out(basis, u[pick])
            wn = np.linalg.norm(w)
            if wn > ZERO_ROW_RTOL * scale:
                basis = np.column_stack([basis, w / wn])

    return SamplingSet(tuple(picks), ell, tuple(scores))


def uniform_random(n, m, seed):
    """``m`` distinct nodes drawn uniformly without replacement."""
    if m < 1:
        raise ValidationError(f"m must be at least 1, got {m}")
    if m > n:
        raise TooManySamples(f"cannot draw {m} of {n} nodes without replacement")
    rng = np.random.default_rng(seed)
    return SamplingSet(tuple(int(i) for i in rng.choice(n, size=m, replace=False)))


def leverage_weights(u):
    """Leverage scores ``||u_i||^2 / ||U||_F^2`` (equals ``||u_i||^2 / k`` for orthonormal columns)."""
    u = linalg_core.as_matrix(u, "U")
    w = np.einsum("ij,ij->i", u, u)
    total = w.sum()
    if total == 0.0:
        raise DegenerateWeights("all rows of U are zero")
    return w / total


def leverage_score(u, m, seed):
    """Sequential weighted draws without replacement, weights = leverage scores.

    After each draw the chosen node is removed and the remaining weights are
    renormalized.
    """
    p = leverage_weights(u)
    nonzero = int(np.count_nonzero(p))
    if m < 1:
        raise ValidationError(f"m must be at least 1, got {m}")
    if m > nonzero:
        raise TooManySamples(f"cannot draw {m} nodes, only {nonzero} have nonzero weight")
    rng = np.random.default_rng(seed)
    w = p.copy()
    picks = []
    for _ in range(m):
        c = np.cumsum(w)
        j = int(np.searchsorted(c, rng.random() * c[-1], side="right"))
        j = min(j, w.size - 1)
        picks.append(j)
        w[j] = 0.0
    return SamplingSet(tuple(picks))


def is_invertible_selection(u, s):
    """True iff the selected rows ``U[S]`` have full column rank.

    Full rank means ``sigma_min > 1e-10 * sigma_max``; for ``|S| = k`` this is
    invertibility of the square system.
    """
    u = np.asarray(u, dtype=float)
    idx = s.indices if isinstance(s, SamplingSet) else tuple(s)
    if max(idx) >= u.shape[0]:
        raise DimensionMismatch(f"node index {max(idx)} outside U with {u.shape[0]} rows")
    return linalg_core.is_full_column_rank(u[list(idx)])


def select(scheme, u, m, seed, residual_node=0):
    """Dispatch by scheme name: ``iterative``, ``uniform`` or ``leverage``."""
    if scheme == "iterative":
        return iterative_selection(u, m, residual_node=residual_node, seed=seed)
    if scheme == "uniform":
        return uniform_random(np.shape(u)[0], m, seed)
    if scheme == "leverage":
        return leverage_score(u, m, seed)
    raise ValidationError(f"unknown sampling scheme {scheme!r}")
