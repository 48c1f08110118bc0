"""Undirected weighted graphs, edge-list ingestion and the graph Fourier basis."""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from . import linalg_core
from .errors import (
    DimensionMismatch,
    InvalidProbability,
    NegativeWeight,
    NodeOutOfRange,
    NonSymmetric,
    ParseError,
    ValidationError,
)

DEFAULT_THRESHOLD = 0.01


class ShiftKind(str, Enum):
    ADJACENCY = "adjacency"
    LAPLACIAN = "laplacian"


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph over ``n`` nodes given by its weighted adjacency.

    The adjacency is validated on construction: square, exactly symmetric,
    non-negative, zero diagonal. It is stored read-only.
    """

    adjacency: np.ndarray
    node_labels: Optional[tuple] = None

    def __post_init__(self):
        a = linalg_core.as_matrix(self.adjacency, "adjacency")
        if a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"adjacency must be square, got {a.shape}")
        if not np.array_equal(a, a.T):
            raise NonSymmetric("adjacency must be exactly symmetric")
        if np.any(a < 0):
            raise NegativeWeight("adjacency has negative weights")
        if np.any(np.diag(a) != 0):
            raise ValidationError("adjacency must have a zero diagonal")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "adjacency", a)
        if self.node_labels is not None:
            labels = tuple(str(s) for s in self.node_labels)
            if len(labels) != a.shape[0]:
                raise DimensionMismatch(
                    f"{len(labels)} labels given for {a.shape[0]} nodes"
                )
            object.__setattr__(self, "node_labels", labels)

    @property
    def n(self):
        return self.adjacency.shape[0]

    def laplacian(self):
        """Combinatorial Laplacian ``diag(A 1) - A``."""
        return np.diag(self.adjacency.sum(axis=1)) - self.adjacency

    def edges(self):
        """Upper-triangle edges as ``(i, j, w)`` with 0-based ``i < j``."""
        iu, ju = np.nonzero(np.triu(self.adjacency, 1))
        return [(int(i), int(j), float(self.adjacency[i, j])) for i, j in zip(iu, ju)]


@dataclass(frozen=True, eq=False)
class GftBasis:
    """Orthonormal graph Fourier basis.

    ``v[:, i]`` is the i-th frequency mode; ``lam`` holds the eigenvalues of
    the decomposed shift in descending order.
    """

    v: np.ndarray
    lam: np.ndarray
    shift_kind: ShiftKind

    @property
    def n(self):
        return self.v.shape[0]

    def band(self, support):
        """Columns of ``v`` indexed by ``support`` (the band basis U)."""
        return np.array(self.v[:, list(support)])

    @classmethod
    def from_matrix(cls, v, shift_kind=ShiftKind.ADJACENCY, lam=None):
        """Wrap an arbitrary orthonormal matrix (e.g. the identity) as a basis."""
        v = linalg_core.as_matrix(v, "V")
        if v.shape[0] != v.shape[1]:
            raise DimensionMismatch(f"V must be square, got {v.shape}")
        if np.max(np.abs(v.T @ v - np.eye(v.shape[0]))) > 1e-8:
            raise ValidationError("V must have orthonormal columns")
        lam = np.zeros(v.shape[0]) if lam is None else np.asarray(lam, dtype=float)
        v = v.copy()
        v.flags.writeable = False
        lam = lam.copy()
        lam.flags.writeable = False
        return cls(v, lam, ShiftKind(shift_kind))


def erdos_renyi(n, p, seed):
    """Unweighted Erdos-Renyi graph G(n, p), deterministic in ``seed``.

    Each unordered pair is an edge independently with probability ``p``.
    """
    if not 0.0 < p < 1.0:
        raise InvalidProbability(f"edge probability must lie in (0, 1), got {p}")
    if n < 2:
        raise ValidationError(f"need at least 2 nodes, got {n}")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    mask = rng.random(iu[0].size) < p
    a = np.zeros((n, n))
    a[iu[0][mask], iu[1][mask]] = 1.0
    return Graph(a + a.T)


def _check_edge(i, j, w, n):
    if not (1 <= i <= n and 1 <= j <= n):
        raise NodeOutOfRange(f"edge ({i}, {j}) outside nodes 1..{n}")
    if not np.isfinite(w):
        raise ValidationError(f"edge ({i}, {j}) has non-finite weight {w}")
    if w < 0:
        raise NegativeWeight(f"edge ({i}, {j}) has negative weight {w}")


def from_edge_list(edges, n, threshold=DEFAULT_THRESHOLD, node_labels=None):
    """Build a graph from 1-based ``(i, j, w)`` triples.

    Weights below ``threshold`` become zero. Later duplicates of a pair
    overwrite earlier ones; self-loops are dropped.
    """
    if n < 1:
        raise ValidationError(f"node count must be positive, got {n}")
    a = np.zeros((n, n))
    for i, j, w in edges:
        i, j, w = int(i), int(j), float(w)
        _check_edge(i, j, w, n)
        if i == j:
            continue
        val = w if w >= threshold else 0.0
        a[i - 1, j - 1] = a[j - 1, i - 1] = val
    return Graph(a, node_labels)


def read_edge_list(path, threshold=DEFAULT_THRESHOLD):
    """Parse an edge-list file: header ``n=<count>``, then ``i,j,w`` lines.

    Blank lines and ``#`` comments are ignored. Errors carry the line number.
    """
    path = Path(path)
    n = None
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if n is None:
                key, sep, val = line.partition("=")
                if not sep or key.strip() != "n":
                    raise ParseError("expected header 'n=<count>'", path, lineno)
                try:
                    n = int(val)
                except ValueError:
                    raise ParseError(f"bad node count {val!r}", path, lineno) from None
                continue
            parts = [s.strip() for s in line.split(",")]
            if len(parts) != 3:
                raise ParseError(f"expected 'i,j,w', got {line!r}", path, lineno)
            try:
                edge = (int(parts[0]), int(parts[1]), float(parts[2]))
            except ValueError:
                raise ParseError(f"cannot parse edge {line!r}", path, lineno) from None
            try:
                _check_edge(*edge, n)
            except ValidationError as exc:
                raise ParseError(str(exc), path, lineno) from None
            edges.append(edge)
    if n is None:
        raise ParseError("missing header 'n=<count>'", path)
    return from_edge_list(edges, n, threshold)


def format_edge_list(graph):
    """Render ``graph`` in the 1-based edge-list format (17 significant digits)."""
    lines = [f"n={graph.n}"]
    lines += [f"{i + 1},{j + 1},{w:.17g}" for i, j, w in graph.edges()]
    return "\n".join(lines) + "\n"


def write_edge_list(graph, path):
    Path(path).write_text(format_edge_list(graph))


def gft_basis(graph, shift_kind=ShiftKind.ADJACENCY):
    """Eigenbasis of the adjacency or Laplacian, eigenvalues descending."""
    kind = ShiftKind(shift_kind)
    shift = graph.adjacency if kind is ShiftKind.ADJACENCY else graph.laplacian()
    pair = linalg_core.sym_eig(shift)
    return GftBasis(pair.eigenvectors, pair.eigenvalues, kind)


def save_matrix_csv(path, m):
    """Write a vector or matrix as CSV, one row per line, 17 significant digits."""
    m = np.asarray(m, dtype=float)
    if m.ndim == 1:
        m = m[:, None]
    np.savetxt(path, m, delimiter=",", fmt="%.17g")


def load_matrix_csv(path) -> np.ndarray:
    """Read a CSV matrix written by :func:`save_matrix_csv`; always 2-D."""
    try:
        m = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ParseError(str(exc), Path(path)) from None
    return m

