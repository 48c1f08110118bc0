"""Seeded Monte-Carlo runners producing :class:`ResultTable` curves.

Every random quantity in trial ``t`` is drawn from a generator seeded by
``derive_seed(cfg.seed, t, ...)``, so results do not depend on how trials are
scheduled across threads. Reduction is always in trial order.
"""

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from ..errors import ConfigError, NotInvertible
from ..graph_model import erdos_renyi, gft_basis, load_matrix_csv, read_edge_list
from ..reconstruction import reconstruct_gls, reconstruct_noiseless, recovery_error
from ..sampling import is_invertible_selection, select
from ..signal_model import NoiseKind, add_noise, add_noise_batch, synth_bandlimited, synth_batch
from ..support_recovery import recover_support, support_error
from .config import ExperimentConfig, derive_seed

log = logging.getLogger(__name__)

# stream ids for derive_seed
_GRAPH, _SUPPORT, _SIGNAL, _NOISE, _SCHEME = range(5)

CSV_HEADER = ("scheme", "param", "mean_error", "std_error", "success_rate", "trials")
FAILED_DRAW_ERROR = 1.0


@dataclass
class ResultRow:
    scheme: str
    param: int
    mean_error: float
    std_error: float
    success_rate: float
    trials: int


@dataclass
class ResultTable:
    rows: list
    config: ExperimentConfig
    metadata: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow(
                [r.scheme, r.param, f"{r.mean_error:.17g}", f"{r.std_error:.17g}",
                 f"{r.success_rate:.17g}", r.trials]
            )
        return buf.getvalue()

    def to_json(self):
        return json.dumps(
            {
                "version": __version__,
                "config": self.config.to_dict(),
                "metadata": self.metadata,
                "rows": [vars(r) for r in self.rows],
            },
            indent=2,
        )

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.csv").write_text(self.to_csv())
        (out / "results.json").write_text(self.to_json() + "\n")
        return out / "results.csv", out / "results.json"

    def lookup(self, scheme, param):
        for r in self.rows:
            if r.scheme == scheme and r.param == param:
                return r
        raise KeyError((scheme, param))


def _summarize(scheme, param, errors, successes):
    errors = np.asarray(errors, dtype=float)
    return ResultRow(
        scheme=scheme,
        param=int(param),
        mean_error=float(errors.mean()),
        std_error=float(errors.std()),
        success_rate=float(np.mean(successes)),
        trials=int(errors.size),
    )


def _map_trials(fn, trials, threads):
    if threads <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


def run_experiment(cfg, threads=1):
    cfg.validate()
    runner = {
        "support_vs_p": run_support_experiment,
        "sampling_vs_k": run_sampling_experiment,
        "real_data": run_real_data_experiment,
    }[cfg.experiment]
    return runner(cfg, threads=threads)


def _cell_label(prefix, k, p):
    return f"{prefix}_k{k}_p{p:g}"


def run_support_experiment(cfg, threads=1):
    """Support recovery error against the number of observed signals P.

    One row per ``(k, edge_prob)`` cell and P. ``success_rate`` is the
    fraction of trials with exact support recovery.
    """
    if cfg.experiment != "support_vs_p":
        raise ConfigError(f"expected a support_vs_p config, got {cfg.experiment!r}")
    cfg.validate()
    rows = []
    noise = cfg.noise.build(cfg.n)
    cells = [(k, p) for p in cfg.edge_prob for k in cfg.k_grid]
    for ci, (k, prob) in enumerate(cells):
        for pi, n_obs in enumerate(cfg.p_grid):

            def trial(t, k=k, prob=prob, n_obs=n_obs, key=(ci, pi)):
                g = erdos_renyi(cfg.n, prob, derive_seed(cfg.seed, t, _GRAPH, *key))
                basis = gft_basis(g, cfg.shift)
                rng = np.random.default_rng(derive_seed(cfg.seed, t, _SUPPORT, *key))
                support = tuple(sorted(int(i) for i in rng.choice(cfg.n, size=k, replace=False)))
                x, _ = synth_batch(basis, support, n_obs, cfg.coeff_std, derive_seed(cfg.seed, t, _SIGNAL, *key))
                y, _ = add_noise_batch(x, noise, derive_seed(cfg.seed, t, _NOISE, *key))
                est = recover_support(basis, y, k)
                err = support_error(est.support, support, k)
                return err, err == 0.0

            res = _map_trials(trial, cfg.trials, threads)
            rows.append(
                _summarize(_cell_label("support", k, prob), n_obs, [r[0] for r in res], [r[1] for r in res])
            )
    return ResultTable(rows, cfg, {"metric": "1 - |K_hat & K| / k", "success": "exact support recovery"})


def _reconstruct(u, s, y_full, noise, x_true):
    """Reconstruct from ``y_full`` on ``s``; failed draws score FAILED_DRAW_ERROR."""
    ok = is_invertible_selection(u, s)
    if not ok:
        return FAILED_DRAW_ERROR, False
    samples = y_full[list(s.indices)]
    try:
        if noise.kind is NoiseKind.COVARIANCE:
            res = reconstruct_gls(u, s, samples, noise.q)
        else:
            res = reconstruct_noiseless(u, s, samples)
    except NotInvertible:
        return FAILED_DRAW_ERROR, False
    return recovery_error(res.xhat, x_true), True


def _scheme_label(scheme, prob, cfg):
    return scheme if len(cfg.edge_prob) == 1 else f"{scheme}_p{prob:g}"


def run_sampling_experiment(cfg, threads=1):
    """Recovery error and success rate of each sampling scheme against k.

    U is the first k eigenvectors of the shift. All schemes in a trial share
    the graph, the signal and the noise realization.
    """
    if cfg.experiment != "sampling_vs_k":
        raise ConfigError(f"expected a sampling_vs_k config, got {cfg.experiment!r}")
    cfg.validate()
    rows = []
    noise = cfg.noise.build(cfg.n)
    for pi, prob in enumerate(cfg.edge_prob):
        for ki, k in enumerate(cfg.k_grid):
            m = cfg.sample_count(k)
            if m > cfg.n:
                raise ConfigError(f"m = {m} exceeds n = {cfg.n}")
            key = (pi, ki)

            def trial(t, k=k, m=m, prob=prob, key=key):
                g = erdos_renyi(cfg.n, prob, derive_seed(cfg.seed, t, _GRAPH, *key))
                basis = gft_basis(g, cfg.shift)
                support = tuple(range(k))
                u = basis.band(support)
                sig = synth_bandlimited(basis, support, cfg.coeff_std, derive_seed(cfg.seed, t, _SIGNAL, *key))
                y, _ = add_noise(sig.values, noise, derive_seed(cfg.seed, t, _NOISE, *key))
                out = []
                for si, scheme in enumerate(cfg.schemes):
                    s = select(scheme, u, m, derive_seed(cfg.seed, t, _SCHEME, si, *key), cfg.residual_node)
                    out.append(_reconstruct(u, s, y, noise, sig.values))
                return out

            res = _map_trials(trial, cfg.trials, threads)
            for si, scheme in enumerate(cfg.schemes):
                rows.append(
                    _summarize(_scheme_label(scheme, prob, cfg), k,
                               [r[si][0] for r in res], [r[si][1] for r in res])
                )
    meta = {
        "metric": "||xhat - x||^2 / ||x||^2",
        "failed_draw_error": FAILED_DRAW_ERROR,
        "success": "U[S] has full column rank (sigma_min > 1e-10 sigma_max)",
    }
    return ResultTable(rows, cfg, meta)


def approx_bandlimited_signal(basis, k, coeff_std, leak, seed):
    """Signal whose energy outside the first ``k`` modes is the fraction ``leak``."""
    rng = np.random.default_rng(seed)
    n = basis.n
    xbar = np.zeros(n)
    xbar[:k] = coeff_std * rng.standard_normal(k)
    if leak > 0 and k < n:
        tail = rng.standard_normal(n - k)
        in_energy = float(xbar[:k] @ xbar[:k])
        tail *= np.sqrt(leak / (1.0 - leak) * in_energy / float(tail @ tail))
        xbar[k:] = tail
    return basis.v @ xbar


def run_real_data_experiment(cfg, threads=1):
    """Recovery error of each scheme against the sample size m on an ingested graph.

    The bandwidth is ``k_grid[0]``. The signal comes from ``signal_path`` (one
    column) or, if absent, is synthesized with a fraction ``leak`` of its
    energy outside the band.
    """
    if cfg.experiment != "real_data":
        raise ConfigError(f"expected a real_data config, got {cfg.experiment!r}")
    cfg.validate()
    g = read_edge_list(cfg.data_path, cfg.threshold)
    basis = gft_basis(g, cfg.shift)
    k = cfg.k_grid[0]
    if k > g.n:
        raise ConfigError(f"bandwidth {k} exceeds graph size {g.n}")
    if cfg.signal_path:
        x = load_matrix_csv(cfg.signal_path)
        if x.shape != (g.n, 1):
            raise ConfigError(f"signal file must hold one column of {g.n} values, got shape {x.shape}")
        x = x[:, 0]
    else:
        x = approx_bandlimited_signal(basis, k, cfg.coeff_std, cfg.leak, derive_seed(cfg.seed, 0, _SIGNAL))
    u = basis.band(range(k))
    noise = cfg.noise.build(g.n)
    out_of_band = float(np.sum((basis.v[:, k:].T @ x) ** 2) / (x @ x))
    rows = []
    for mi, m in enumerate(cfg.m_grid):
        if m > g.n - 1:
            raise ConfigError(f"sample size {m} exceeds N - 1 = {g.n - 1}")

        def trial(t, m=m, mi=mi):
            y, _ = add_noise(x, noise, derive_seed(cfg.seed, t, _NOISE, mi))
            out = []
            for si, scheme in enumerate(cfg.schemes):
                s = select(scheme, u, m, derive_seed(cfg.seed, t, _SCHEME, si, mi), cfg.residual_node)
                out.append(_reconstruct(u, s, y, noise, x))
            return out

        res = _map_trials(trial, cfg.trials, threads)
        for si, scheme in enumerate(cfg.schemes):
            rows.append(_summarize(scheme, m, [r[si][0] for r in res], [r[si][1] for r in res]))
    meta = {
        "metric": "||xhat - x||^2 / ||x||^2",
        "failed_draw_error": FAILED_DRAW_ERROR,
        "bandwidth": k,
        "n": g.n,
        "out_of_band_energy": out_of_band,
    }
    return ResultTable(rows, cfg, meta)
