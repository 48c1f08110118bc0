"""Bandlimited graph signals, the GFT pair and additive noise models.

Node and frequency indices are 0-based throughout the Python API.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import linalg_core
from .errors import DimensionMismatch, InvalidSupport, ValidationError, ZeroSignal


def check_support(support, n):
    """Validate a frequency support and return it as a tuple of ints."""
    s = tuple(int(i) for i in support)
    if not s:
        raise InvalidSupport("support must be nonempty")
    if len(set(s)) != len(s):
        raise InvalidSupport(f"support has repeated indices: {s}")
    if min(s) < 0 or max(s) >= n:
        raise InvalidSupport(f"support indices must lie in [0, {n}), got {s}")
    return s


def _readonly(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class BandlimitedSignal:
    """A k-bandlimited signal: ``values = V[:, support] @ coeffs``."""

    support: tuple
    coeffs: np.ndarray
    values: np.ndarray

    @property
    def k(self):
        return len(self.support)


def make_bandlimited(basis, support, coeffs):
    """Build a :class:`BandlimitedSignal` from frequency coefficients."""
    support = check_support(support, basis.n)
    coeffs = linalg_core.as_vector(coeffs, "coeffs")
    if coeffs.size != len(support):
        raise DimensionMismatch(f"{coeffs.size} coefficients for support of size {len(support)}")
    values = basis.band(support) @ coeffs
    return BandlimitedSignal(support, _readonly(coeffs), _readonly(values))


def synth_bandlimited(basis, support, coeff_std, seed):
    """Random bandlimited signal with i.i.d. N(0, coeff_std^2) coefficients."""
    if not coeff_std > 0:
        raise ValidationError(f"coeff_std must be positive, got {coeff_std}")
    support = check_support(support, basis.n)
    rng = np.random.default_rng(seed)
    return make_bandlimited(basis, support, coeff_std * rng.standard_normal(len(support)))


def synth_batch(basis, support, p, coeff_std, seed):
    """``p`` signals sharing ``support``; returns ``(X, Xbar)``, each N x p.

    Rows of ``Xbar`` outside ``support`` are exactly zero.
    """
    if not coeff_std > 0:
        raise ValidationError(f"coeff_std must be positive, got {coeff_std}")
    support = check_support(support, basis.n)
    rng = np.random.default_rng(seed)
    xbar = np.zeros((basis.n, p))
    xbar[list(support), :] = coeff_std * rng.standard_normal((len(support), p))
    return basis.v @ xbar, xbar


def gft(basis, x):
    """Graph Fourier transform ``V^T x`` (vector or column-stacked matrix)."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != basis.n:
        raise DimensionMismatch(f"signal has {x.shape[0]} entries, basis has {basis.n} nodes")
    return basis.v.T @ x


def igft(basis, xbar):
    """Inverse graph Fourier transform ``V xbar``."""
    xbar = np.asarray(xbar, dtype=float)
    if xbar.shape[0] != basis.n:
        raise DimensionMismatch(f"spectrum has {xbar.shape[0]} entries, basis has {basis.n} nodes")
    return basis.v @ xbar


class NoiseKind(str, Enum):
    NONE = "none"
    COVARIANCE = "covariance"
    WHITE_SNR = "white_snr"
    BOUNDED = "bounded"


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Additive noise specification.

    Use the class constructors :meth:`covariance`, :meth:`white_snr`,
    :meth:`bounded` and :meth:`none` rather than building one directly.
    """

    kind: NoiseKind
    q: Optional[np.ndarray] = None
    snr_db: Optional[float] = None
    eps_n: Optional[float] = None
    _factor: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def none(cls):
        return cls(NoiseKind.NONE)

    @classmethod
    def covariance(cls, q):
        q = linalg_core.as_matrix(q, "Q")
        factor = linalg_core.pd_factor(q)
        return cls(NoiseKind.COVARIANCE, q=_readonly(q), _factor=_readonly(factor))

    @classmethod
    def white(cls, n, sigma):
        """Shorthand for ``covariance(sigma**2 * I_n)``."""
        return cls.covariance(sigma**2 * np.eye(n))

    @classmethod
    def white_snr(cls, snr_db):
        if not np.isfinite(snr_db):
            raise ValidationError(f"snr_db must be finite, got {snr_db}")
        return cls(NoiseKind.WHITE_SNR, snr_db=float(snr_db))

    @classmethod
    def bounded(cls, eps_n):
        if not eps_n > 0:
            raise ValidationError(f"eps_n must be positive, got {eps_n}")
        return cls(NoiseKind.BOUNDED, eps_n=float(eps_n))

    def draw(self, x, rng):
        """One noise vector for clean signal ``x`` using generator ``rng``."""
        n = x.shape[0]
        if self.kind is NoiseKind.NONE:
            return np.zeros(n)
        if self.kind is NoiseKind.COVARIANCE:
            if self.q.shape[0] != n:
                raise DimensionMismatch(f"Q is {self.q.shape[0]}x{self.q.shape[0]}, signal has {n} entries")
            return self._factor @ rng.standard_normal(n)
        if self.kind is NoiseKind.WHITE_SNR:
            energy = float(x @ x)
            if energy == 0.0:
                raise ZeroSignal("SNR-specified noise needs a nonzero signal")
            sigma2 = energy / (n * 10.0 ** (self.snr_db / 10.0))
            return np.sqrt(sigma2) * rng.standard_normal(n)
        # uniform in the l2 ball of radius eps_n
        g = rng.standard_normal(n)
        radius = self.eps_n * rng.random() ** (1.0 / n)
        return g * (radius / np.linalg.norm(g))


def add_noise(x, model, seed):
    """Return ``(x + n, ||n||_2)`` for one noise draw from ``model``."""
    x = linalg_core.as_vector(x, "x")
    noise = model.draw(x, np.random.default_rng(seed))
    return x + noise, float(np.linalg.norm(noise))


def add_noise_batch(x, model, seed):
    """Corrupt each column of ``x`` independently; returns ``(Y, column norms)``."""
    x = np.asarray(x, dtype=float)
    rng = np.random.default_rng(seed)
    noise = np.column_stack([model.draw(x[:, j], rng) for j in range(x.shape[1])])
    return x + noise, np.linalg.norm(noise, axis=0)


@dataclass(frozen=True, eq=False)
class ObservationBatch:
    """N x P matrix of fully observed signals sharing one frequency support."""

    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        y = linalg_core.as_matrix(y, "Y")
        object.__setattr__(self, "y", _readonly(y))

    @property
    def n(self):
        return self.y.shape[0]

    @property
    def p(self):
        return self.y.shape[1]

