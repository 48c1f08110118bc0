"""Experiment configuration: a flat YAML mapping whose keys are the field names."""

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import yaml

from ..errors import ConfigError
from ..graph_model import load_matrix_csv
from ..signal_model import NoiseModel

EXPERIMENTS = ("support_vs_p", "sampling_vs_k", "real_data")
SCHEMES = ("iterative", "uniform", "leverage")
NOISE_KINDS = ("none", "covariance", "white_snr", "bounded")


@dataclass
class NoiseSpec:
    """Serializable noise description; ``build(n)`` gives the :class:`NoiseModel`.

    ``covariance`` takes either ``sigma`` (``Q = sigma^2 I``) or ``q_path``, a
    CSV file holding the full N x N covariance.
    """

    kind: str = "none"
    sigma: Optional[float] = None
    q_path: Optional[str] = None
    snr_db: Optional[float] = None
    eps_n: Optional[float] = None

    def validate(self):
        if self.kind not in NOISE_KINDS:
            raise ConfigError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if self.kind == "covariance" and (self.sigma is None) == (self.q_path is None):
            raise ConfigError("covariance noise needs exactly one of 'sigma' or 'q_path'")
        if self.kind == "covariance" and self.sigma is not None and not self.sigma > 0:
            raise ConfigError(f"noise sigma must be positive, got {self.sigma}")
        if self.kind == "white_snr" and self.snr_db is None:
            raise ConfigError("white_snr noise needs 'snr_db'")
        if self.kind == "bounded" and not (self.eps_n is not None and self.eps_n > 0):
            raise ConfigError("bounded noise needs a positive 'eps_n'")

    def build(self, n):
        if self.kind == "none":
            return NoiseModel.none()
        if self.kind == "covariance":
            if self.sigma is not None:
                return NoiseModel.white(n, self.sigma)
            return NoiseModel.covariance(load_matrix_csv(self.q_path))
        if self.kind == "white_snr":
            return NoiseModel.white_snr(self.snr_db)
        return NoiseModel.bounded(self.eps_n)

    def to_dict(self):
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


@dataclass
class ExperimentConfig:
    experiment: str
    n: int = 200
    edge_prob: list = field(default_factory=lambda: [0.15])
    k_grid: list = field(default_factory=lambda: [30])
    p_grid: list = field(default_factory=lambda: [1])
    m: Union[int, str] = "equal_k"
    m_grid: list = field(default_factory=list)
    coeff_std: float = 100.0
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    trials: int = 100
    seed: int = 0
    schemes: list = field(default_factory=lambda: ["iterative"])
    data_path: Optional[str] = None
    signal_path: Optional[str] = None
    threshold: float = 0.01
    shift: str = "adjacency"
    residual_node: Union[int, str] = 0
    leak: float = 0.01

    def __post_init__(self):
        if isinstance(self.noise, dict):
            unknown = set(self.noise) - {f.name for f in dataclasses.fields(NoiseSpec)}
            if unknown:
                raise ConfigError(f"unknown noise keys: {sorted(unknown)}")
            self.noise = NoiseSpec(**self.noise)
        if not isinstance(self.edge_prob, (list, tuple)):
            self.edge_prob = [self.edge_prob]
        self.edge_prob = [float(p) for p in self.edge_prob]
        for name in ("k_grid", "p_grid", "m_grid", "schemes"):
            val = getattr(self, name)
            if not isinstance(val, (list, tuple)):
                val = [val]
            setattr(self, name, list(val))
        self.coeff_std = float(self.coeff_std)
        self.threshold = float(self.threshold)
        self.leak = float(self.leak)

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, int) or self.seed < 0 or self.seed >= 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not self.k_grid or any(not isinstance(k, int) or k < 1 for k in self.k_grid):
            raise ConfigError(f"k_grid must be a nonempty list of positive integers, got {self.k_grid!r}")
        if not self.schemes or any(s not in SCHEMES for s in self.schemes):
            raise ConfigError(f"schemes must be a nonempty subset of {SCHEMES}, got {self.schemes!r}")
        if self.m != "equal_k" and not (isinstance(self.m, int) and self.m >= 1):
            raise ConfigError(f"m must be 'equal_k' or a positive integer, got {self.m!r}")
        if not self.coeff_std > 0:
            raise ConfigError("coeff_std must be positive")
        if self.shift not in ("adjacency", "laplacian"):
            raise ConfigError(f"shift must be 'adjacency' or 'laplacian', got {self.shift!r}")
        self.noise.validate()
        if self.experiment == "real_data":
            if not self.data_path:
                raise ConfigError("real_data experiment needs data_path")
            if not Path(self.data_path).is_file():
                raise ConfigError(f"data_path {self.data_path!r} does not exist")
            if self.signal_path and not Path(self.signal_path).is_file():
                raise ConfigError(f"signal_path {self.signal_path!r} does not exist")
            if not self.m_grid or any(not isinstance(m, int) or m < 1 for m in self.m_grid):
                raise ConfigError("real_data experiment needs a nonempty m_grid of positive integers")
            if not 0.0 <= self.leak < 1.0:
                raise ConfigError(f"leak must lie in [0, 1), got {self.leak}")
        else:
            if self.n < 2:
                raise ConfigError(f"n must be at least 2, got {self.n}")
            if not self.edge_prob or any(not 0 < p < 1 for p in self.edge_prob):
                raise ConfigError(f"edge_prob values must lie in (0, 1), got {self.edge_prob!r}")
            if max(self.k_grid) > self.n:
                raise ConfigError(f"k_grid exceeds n = {self.n}")
        if self.experiment == "support_vs_p":
            if not self.p_grid or any(not isinstance(p, int) or p < 1 for p in self.p_grid):
                raise ConfigError(f"p_grid must be a nonempty list of positive integers, got {self.p_grid!r}")
        return self

    def sample_count(self, k):
        return k if self.m == "equal_k" else int(self.m)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["noise"] = self.noise.to_dict()
        return d

    def dumps(self):
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, d, base_dir=None):
        if not isinstance(d, dict):
            raise ConfigError("config must be a key-value mapping")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "experiment" not in d:
            raise ConfigError("config needs an 'experiment' key")
        d = dict(d)
        if base_dir is not None:
            for key in ("data_path", "signal_path"):
                if d.get(key):
                    d[key] = str(Path(base_dir) / d[key])
            if isinstance(d.get("noise"), dict) and d["noise"].get("q_path"):
                d["noise"] = dict(d["noise"], q_path=str(Path(base_dir) / d["noise"]["q_path"]))
        try:
            return cls(**d)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def loads(cls, text, base_dir=None):
        try:
            d = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse config: {exc}") from None
        return cls.from_dict(d, base_dir)

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.loads(text, base_dir=path.parent)


def derive_seed(seed, trial, *stream):
    """Per-trial seed: ``seed XOR trial`` hashed through ``SeedSequence``.

    ``stream`` separates independent uses within one trial (graph, signal,
    noise, scheme draws, grid cell).
    """
    ss = np.random.SeedSequence((int(seed) ^ int(trial)) & (2**64 - 1), spawn_key=tuple(int(s) for s in stream))
    return int(ss.generate_state(1, np.uint64)[0])
