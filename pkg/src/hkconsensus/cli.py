"""Command-line interface.

Subcommands: hkpr | consensus | sweep | leader-follow | lambda1. Every
command reads an edge-list graph, emits tidy CSV (comments, one header row,
data rows) to --out or stdout, and is byte-reproducible for a fixed seed.
Exit codes: 0 success, 2 usage or input error, 3 mathematical precondition
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .consensus import consensus_state, convergence_trace
from .errors import ConvergenceError, InputFormatError, PreconditionError
from .exact import exact_hkpr, lambda1
from .fileio import format_value, open_output, read_vector_file, write_csv
from .graph import load_edge_list
from .hkpr import approx_hkpr
from .leader import (
    LeaderControl,
    lf_consensus_state,
    parse_controls,
    parse_partition,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3

DEFAULT_SEED = 0  # documented fixed default: runs are reproducible out of the box
DEFAULT_EPS = 0.1
DEFAULT_SWEEP_STEPS = 25


def _eps(text: str) -> float:
    value = float(text)
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError(f"eps must be in (0, 1), got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not (0 <= value < 2**64):
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _nonneg_t(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"t must be nonnegative, got {text}")
    return value


def _add_common(parser, state_flag=None, needs_t=False):
    parser.add_argument("--graph", required=True, type=Path, help="edge-list file")
    if state_flag:
        parser.add_argument(state_flag, required=True, type=Path)
    if needs_t:
        parser.add_argument("--t", type=_nonneg_t, default=None,
                            help="diffusion time (default: 1/lambda1)")
    parser.add_argument("--eps", type=_eps, default=DEFAULT_EPS)
    parser.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    parser.add_argument("--mode", choices=("exact", "mc"), default="exact")
    parser.add_argument("--out", type=Path, default=None, help="output CSV (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hkconsensus",
        description="Consensus values via heat kernel pagerank (exact oracle and "
        "sublinear Monte Carlo).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hkpr", help="heat kernel pagerank of a preference vector")
    _add_common(p, state_flag="--pref", needs_t=True)

    p = sub.add_parser("consensus", help="consensus state x(t) from an initial state")
    _add_common(p, state_flag="--state", needs_t=True)

    p = sub.add_parser("sweep", help="disagreement over a grid of times")
    _add_common(p, state_flag="--state")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-steps", type=int, default=DEFAULT_SWEEP_STEPS)
    p.add_argument("--t-scale", choices=("log", "linear"), default="log")
    p.add_argument("--plot", type=Path, default=None,
                   help="also render the decay curve to this image file")

    p = sub.add_parser("leader-follow", help="follower states under leader controls")
    _add_common(p, state_flag="--state", needs_t=True)
    p.add_argument("--partition", required=True, type=Path,
                   help="lines 'leader <label>' / 'follower <label>'")
    p.add_argument("--controls", type=Path, default=None,
                   help="lines '<label> <a> <c>' (default: zero controls)")

    p = sub.add_parser("lambda1", help="spectral gap of the normalized Laplacian")
    p.add_argument("--graph", required=True, type=Path)
    p.add_argument("--out", type=Path, default=None)

    return parser


def _load_graph(path: Path):
    return load_edge_list(path)


def _resolve_t(args, graph) -> float:
    if args.t is not None:
        return args.t
    return 1.0 / lambda1(graph).lambda1


def cmd_hkpr(args) -> int:
    graph = _load_graph(args.graph)
    pref = read_vector_file(args.pref, graph, name=str(args.pref))
    t = _resolve_t(args, graph)
    comments = [f"t={format_value(t)}, eps={format_value(args.eps)}, "
                f"seed={args.seed}, mode={args.mode}"]
    if args.mode == "exact":
        values = exact_hkpr(graph, t, pref)
    else:
        est = approx_hkpr(graph, t, pref, args.eps, args.seed)
        values = est.values
        comments.append(f"r={est.r_walks}, K={est.k_cap}")
    rows = [(graph.node_labels[i], values[i]) for i in range(graph.n)]
    with open_output(args.out) as handle:
        write_csv(handle, comments, ["node", "value"], rows)
    return EXIT_OK


def cmd_consensus(args) -> int:
    graph = _load_graph(args.graph)
    x0 = read_vector_file(args.state, graph, name=str(args.state))
    t = _resolve_t(args, graph)
    result = consensus_state(graph, x0, t, args.eps, args.seed, args.mode)
    comments = [
        f"chi_w={format_value(result.chi_w)}, t={format_value(t)}, mode={args.mode}",
        f"eps={format_value(args.eps)}, seed={args.seed}",
    ]
    rows = [(graph.node_labels[i], result.state[i]) for i in range(graph.n)]
    with open_output(args.out) as handle:
        write_csv(handle, comments, ["node", "x_t"], rows)
    return EXIT_OK


def _sweep_grid(args, graph) -> np.ndarray:
    if args.t_steps < 1:
        raise InputFormatError("--t-steps must be >= 1")
    marker = 1.0 / lambda1(graph).lambda1
    t_min = args.t_min if args.t_min is not None else marker / 100.0
    if args.t_max is not None:
        t_max = args.t_max
    else:
        t_max = min(marker * 100.0, 600.0)  # keep defaults inside the series range
        t_min = min(t_min, t_max / 1e4)
    if t_min < 0 or t_max <= t_min:
        raise InputFormatError("need 0 <= t-min < t-max")
    if args.t_scale == "log":
        if t_min <= 0:
            raise InputFormatError("log scale needs t-min > 0")
        grid = np.geomspace(t_min, t_max, args.t_steps)
    else:
        grid = np.linspace(t_min, t_max, args.t_steps)
    return grid


def cmd_sweep(args) -> int:
    graph = _load_graph(args.graph)
    x0 = read_vector_file(args.state, graph, name=str(args.state))
    grid = _sweep_grid(args, graph)
    trace = convergence_trace(graph, x0, grid, args.eps, args.seed, args.mode)
    lam = 1.0 / trace.lambda1_marker
    comments = [
        f"lambda1={format_value(lam)}, one_over_lambda1={format_value(trace.lambda1_marker)}",
        f"eps={format_value(args.eps)}, seed={args.seed}, mode={args.mode}",
    ]
    with open_output(args.out) as handle:
        write_csv(
            handle,
            comments,
            ["t", "disagreement_euclidean", "disagreement_dnorm"],
            trace.rows(),
        )
    if args.plot is not None:
        from .plotting import render_sweep_figure

        render_sweep_figure(trace, args.plot)
    return EXIT_OK


def cmd_leader_follow(args) -> int:
    graph = _load_graph(args.graph)
    x0 = read_vector_file(args.state, graph, name=str(args.state))
    with open(args.partition, "r", encoding="utf-8") as handle:
        partition = parse_partition(handle, graph)
    if args.controls is not None:
        with open(args.controls, "r", encoding="utf-8") as handle:
            control = LeaderControl.from_mapping(graph, partition, parse_controls(handle))
    else:
        control = LeaderControl.zero(partition)
    t = args.t if args.t is not None else 0.0
    sol = lf_consensus_state(graph, partition, x0, t, control, args.eps, args.seed, args.mode)
    comments = [f"mode={args.mode}, eps={format_value(args.eps)}, seed={args.seed}"]
    if sol.params is not None:
        comments.append(
            f"T={format_value(sol.params.T)}, N={sol.params.N}, r={sol.params.r}"
        )
    labels = [graph.node_labels[int(g)] for g in partition.local_to_global]
    rows = list(zip(labels, sol.x_f))
    with open_output(args.out) as handle:
        write_csv(handle, comments, ["follower", "x_f"], rows)
    return EXIT_OK


def cmd_lambda1(args) -> int:
    graph = _load_graph(args.graph)
    gap = lambda1(graph)
    with open_output(args.out) as handle:
        write_csv(
            handle,
            [f"iterations={gap.iterations}"],
            ["lambda1", "residual"],
            [(gap.lambda1, gap.residual)],
        )
    return EXIT_OK


_DISPATCH = {
    "hkpr": cmd_hkpr,
    "consensus": cmd_consensus,
    "sweep": cmd_sweep,
    "leader-follow": cmd_leader_follow,
    "lambda1": cmd_lambda1,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        name = getattr(exc, "filename", None)
        detail = f"{exc.strerror}: {name}" if name else str(exc)
        print(f"error: {detail}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
