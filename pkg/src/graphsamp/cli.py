"""Command-line interface.

Exit codes: 0 on success, 1 on usage or validation errors, 2 on numerical
failures (rank deficiency, non-convergence, exhausted span).
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import GraphSampError, NumericalError
from .experiments.config import ExperimentConfig
from .experiments.runners import run_experiment
from .graph_model import (
    DEFAULT_THRESHOLD,
    erdos_renyi,
    format_edge_list,
    gft_basis,
    load_matrix_csv,
    read_edge_list,
    save_matrix_csv,
    write_edge_list,
)
from .reconstruction import reconstruct_gls, reconstruct_noiseless
from .sampling import SamplingSet, select
from .support_recovery import recover_support

log = logging.getLogger("graphsamp")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _residual_node(text):
    if text in ("auto", "random"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, 'auto' or 'random', got {text!r}") from None


def _emit(text, out):
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _band_basis(args):
    g = read_edge_list(args.graph, args.threshold)
    return gft_basis(g, args.shift).band(range(args.k))


def cmd_gen_graph(args):
    g = erdos_renyi(args.n, args.edge_prob, args.seed)
    if args.out:
        write_edge_list(g, args.out)
    else:
        sys.stdout.write(format_edge_list(g))


def cmd_sample(args):
    u = _band_basis(args)
    m = args.k if args.m is None else args.m
    s = select(args.scheme, u, m, args.seed, args.residual_node)
    _emit(s.to_json(), args.out)


def cmd_reconstruct(args):
    u = _band_basis(args)
    s = SamplingSet.from_json(Path(args.sampling).read_text())
    values = load_matrix_csv(args.samples)[:, 0]
    if values.size == u.shape[0] and values.size != s.m:
        values = values[list(s.indices)]
    truth = load_matrix_csv(args.truth)[:, 0] if args.truth else None
    if args.noise_cov or args.noise_sigma is not None:
        q = load_matrix_csv(args.noise_cov) if args.noise_cov else args.noise_sigma**2 * np.eye(u.shape[0])
        res = reconstruct_gls(u, s, values, q, eps_n=args.eps_n)
    else:
        res = reconstruct_noiseless(u, s, values)
    _emit(res.to_json(truth), args.out)


def cmd_recover_support(args):
    g = read_edge_list(args.basis_from, args.threshold)
    basis = gft_basis(g, args.shift)
    y = load_matrix_csv(args.signals)
    est = recover_support(basis, y, args.k)
    if args.xbar_out:
        save_matrix_csv(args.xbar_out, est.xbar_hat)
    _emit(est.to_json(), args.out)


def cmd_experiment(args):
    cfg = ExperimentConfig.load(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    table = run_experiment(cfg, threads=args.threads)
    out = Path(args.out) if args.out else Path(args.config).parent
    csv_path, json_path = table.write(out)
    print(json.dumps({"csv": str(csv_path), "json": str(json_path), "rows": len(table.rows)}))


def build_parser():
    p = _Parser(prog="graphsamp", description="Sampling and reconstruction of bandlimited graph signals.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_opts(sp, flag="--graph"):
        sp.add_argument(flag, required=True, help="edge-list file (header n=<count>, lines i,j,w; 1-based)")
        sp.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
        sp.add_argument("--shift", choices=("adjacency", "laplacian"), default="adjacency")

    sp = sub.add_parser("gen-graph", help="generate an Erdos-Renyi graph as an edge list")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--edge-prob", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen_graph)

    sp = sub.add_parser("sample", help="select a sampling set; prints SamplingSet JSON")
    graph_opts(sp)
    sp.add_argument("--k", type=int, required=True, help="bandwidth: use the first k modes")
    sp.add_argument("--m", type=int, help="number of samples (default k)")
    sp.add_argument("--scheme", choices=("iterative", "uniform", "leverage"), default="iterative")
    sp.add_argument("--residual-node", type=_residual_node, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("reconstruct", help="reconstruct a signal from samples; prints JSON")
    graph_opts(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--sampling", required=True, help="SamplingSet JSON")
    sp.add_argument("--samples", required=True, help="CSV with the m sampled values (or the full N-vector)")
    sp.add_argument("--noise-cov", help="CSV noise covariance Q (N x N); enables GLS")
    sp.add_argument("--noise-sigma", type=float, help="white noise level; Q = sigma^2 I")
    sp.add_argument("--eps-n", type=float, help="noise norm bound; adds the worst-case error bound")
    sp.add_argument("--truth", help="CSV true signal, to report the realized error")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("recover-support", help="estimate the shared frequency support")
    sp.add_argument("--signals", required=True, help="CSV, one signal per column")
    graph_opts(sp, "--basis-from")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--xbar-out", help="write the thresholded spectrum as CSV")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_recover_support)

    sp = sub.add_parser("experiment", help="run a Monte-Carlo experiment from a config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--seed", type=int, help="override the config seed")
    sp.add_argument("--out", help="output directory (default: next to the config)")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except NumericalError as exc:
        print(f"graphsamp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (GraphSampError, OSError) as exc:
        print(f"graphsamp: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def run():
    sys.exit(main())
