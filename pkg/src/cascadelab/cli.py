"""Command-line entry point for all experiments and theory evaluations."""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .cascade import CascadeConfig, SurplusAssignment, cascade_csv_row, run_cascade
from .generate import ConnectivitySamplingError
from .graphs import degree_stats, write_edge_list
from .harness import (
    ExperimentSpec,
    build_graph,
    degree_sequence_for,
    parse_k_grid,
    read_config,
    run_census_moments,
    run_connectivity,
    run_failure_tail,
    run_first_disconnect,
    run_fpt,
    run_outside_giant,
    write_census_csv,
    write_connectivity_csv,
    write_disconnect_csv,
    write_fpt_csv,
    write_outside_csv,
    write_tail_csv,
)
from . import theory

OUT_DIR_ENV = "CASCADELAB_OUT_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, runtime failures exit 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _resolve_out(path: str) -> str:
    base = os.environ.get(OUT_DIR_ENV)
    if base and not os.path.dirname(path):
        return os.path.join(base, path)
    return path


def _add_graph_flags(p):
    p.add_argument(
        "--family",
        default="cm",
        choices=["cm", "cm-erased", "star", "lattice", "er-giant", "chained-stars"],
    )
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--m", type=int, help="edge count (star family)")
    p.add_argument("--side", type=int, help="lattice side")
    p.add_argument("--lam", type=float, default=2.0, help="er-giant mean degree")
    p.add_argument("--star-size", type=int, default=4, help="chained-stars spokes")
    p.add_argument("--counts", help="cm degree counts, e.g. 2:1000,3:1000")
    p.add_argument("--degrees-file", help="cm degree sequence file")


def _graph_spec(args) -> dict:
    spec = {"family": args.family, "n": args.n}
    if args.family == "star":
        spec["m"] = args.m if args.m else args.n
    elif args.family == "lattice":
        spec["side"] = args.side if args.side else args.n
    elif args.family == "er-giant":
        spec["lam"] = args.lam
    elif args.family == "chained-stars":
        spec["star_size"] = args.star_size
    elif args.family == "cm":
        if args.degrees_file:
            spec["degrees_file"] = args.degrees_file
        elif args.counts:
            spec["counts"] = {
                int(part.split(":")[0]): int(part.split(":")[1])
                for part in args.counts.split(",")
            }
    return spec


def _config_summary(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def build_parser() -> _Parser:
    ap = _Parser(prog="cascadelab", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    common = dict(seed=0, reps=1000)

    p = sub.add_parser("cascade-tail", help="failure-size tail P(A >= k)")
    _add_graph_flags(p)
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--k", default="50,100,200", help="grid: ints or f:<fraction of m>")
    p.add_argument("--reps", type=int, default=common["reps"])
    p.add_argument("--seed", type=int, default=common["seed"])
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--per-rep-out", help="also write per-replication cascade rows")
    p.add_argument("--config")
    p.add_argument("--out", required=True)

    p = sub.add_parser("first-disconnect", help="scaled first-disconnection samples")
    _add_graph_flags(p)
    p.add_argument("--reps", type=int, default=common["reps"])
    p.add_argument("--seed", type=int, default=common["seed"])
    p.add_argument("--config")
    p.add_argument("--out", required=True)

    p = sub.add_parser("outside-giant", help="(m/i^2) * edges outside giant")
    _add_graph_flags(p)
    p.add_argument("--checkpoints", default="", help="comma-separated removal indices")
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=common["seed"])
    p.add_argument("--config")
    p.add_argument("--out", required=True)

    p = sub.add_parser("census", help="line-component counts under explosion")
    _add_graph_flags(p)
    p.add_argument("--i", type=float, help="removal level (edges), default m^0.7")
    p.add_argument("--line-sizes", default="2,3,4")
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=int, default=common["seed"])
    p.add_argument("--config")
    p.add_argument("--out", required=True)

    p = sub.add_parser("connectivity", help="percolated connectivity at q=c/sqrt(m)")
    _add_graph_flags(p)
    p.add_argument("--c", default="1.0", help="comma-separated c values")
    p.add_argument("--reps", type=int, default=common["reps"])
    p.add_argument("--seed", type=int, default=common["seed"])
    p.add_argument("--config")
    p.add_argument("--out", required=True)

    p = sub.add_parser("fpt", help="first-passage survival under boundaries")
    p.add_argument("--boundary", default="all", choices=["all", "constant", "gplus", "gminus"])
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--k", type=int, default=10000)
    p.add_argument("--l", default="k^0.6", help="boundary switch index: int or k^<pow>")
    p.add_argument("--gamma", type=float, default=0.3)
    p.add_argument("--reps", type=int, default=200000)
    p.add_argument("--seed", type=int, default=common["seed"])
    p.add_argument("--config")
    p.add_argument("--out", required=True)

    p = sub.add_parser("theory", help="print one closed-form value as a CSV row")
    p.add_argument(
        "--what",
        required=True,
        choices=[
            "tail-constant",
            "star-tail",
            "disconnect-constant",
            "rayleigh-pdf",
            "rayleigh-cdf",
            "outside-giant",
            "line-moment",
            "connectivity",
            "xi",
            "rho",
            "beta-alpha",
        ],
    )
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--p2", type=float, default=0.5)
    p.add_argument("--d", type=float, default=2.5)
    p.add_argument("--m", type=int, default=10000)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--i", type=float, default=1000)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--q", type=float, default=0.1)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--n", type=int, default=2000)

    p = sub.add_parser("graph-gen", help="sample one graph and write its edge list")
    _add_graph_flags(p)
    p.add_argument("--seed", type=int, default=common["seed"])
    p.add_argument("--out", required=True)
    return ap


def _apply_config(ap, argv):
    """Let --config provide flag defaults; explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv[1:])
    args = ap.parse_args(argv)
    if getattr(known, "config", None):
        cfg = read_config(known.config)
        given = {tok.split("=")[0].lstrip("-").replace("-", "_") for tok in argv if tok.startswith("--")}
        for key, val in cfg.items():
            attr = key.replace("-", "_")
            if attr in given or not hasattr(args, attr):
                continue
            current = getattr(args, attr)
            cast = type(current) if current is not None else str
            setattr(args, attr, cast(val) if cast is not bool else val.lower() in ("1", "true"))
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = _apply_config(ap, argv) if "--config" in " ".join(argv) else ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConnectivitySamplingError as exc:
        print(f"cascadelab: sampling failure: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure contract
        print(f"cascadelab: error: {exc}", file=sys.stderr)
        return 2


def _theory_value(args) -> float:
    what = args.what
    if what == "tail-constant":
        return theory.tail_constant(args.theta)
    if what == "star-tail":
        return theory.star_tail(args.m, args.k, args.theta)
    if what == "disconnect-constant":
        return theory.disconnect_constant(args.theta, args.p2, args.d, args.m)
    if what == "rayleigh-pdf":
        return theory.rayleigh_pdf(args.x, args.p2, args.d)
    if what == "rayleigh-cdf":
        return theory.rayleigh_cdf(args.x, args.p2, args.d)
    if what == "outside-giant":
        return theory.outside_giant_constants(args.p2, args.d)["edges_in_lines"]
    if what == "line-moment":
        return theory.line_first_moment(args.k, args.p2, args.d, args.i, args.m)
    if what == "connectivity":
        return theory.connectivity_probs(args.c, args.p2, args.d)[1]
    seq = degree_sequence_for({"family": "cm", "n": args.n})
    if what == "xi":
        return theory.xi(args.q, seq)
    if what == "rho":
        return theory.rho(args.q, seq)
    return theory.beta_alpha(args.alpha, seq)


def _dispatch(args) -> int:
    if args.cmd == "theory":
        print(f"{_theory_value(args):.10g}")
        return 0

    if args.cmd == "fpt":
        if isinstance(args.l, str) and args.l.startswith("k^"):
            l = int(round(args.k ** float(args.l[2:])))
        else:
            l = int(args.l)
        rows = run_fpt(args.theta, args.k, args.reps, args.seed, l=l, gamma=args.gamma)
        if args.boundary != "all":
            rows = [r for r in rows if r[1] == args.boundary]
        cfg = _config_summary(args, ["theta", "k", "l", "gamma", "reps", "boundary"])
        write_fpt_csv(_resolve_out(args.out), rows, cfg, args.seed)
        return 0

    if args.cmd == "graph-gen":
        rng = np.random.default_rng(args.seed)
        g = build_graph(_graph_spec(args), rng)
        write_edge_list(g, _resolve_out(args.out))
        return 0

    gspec = _graph_spec(args)
    cfg_keys = ["family", "n", "theta", "reps"]
    if args.cmd == "cascade-tail":
        spec = ExperimentSpec(
            graph_spec=gspec,
            theta=args.theta,
            reps=args.reps,
            k_grid=parse_k_grid(args.k.split(",")),
            master_seed=args.seed,
            threads=args.threads,
        )
        estimates, n_failed, m_nominal = run_failure_tail(spec)
        cfg = _config_summary(args, cfg_keys + ["k", "threads"])
        cfg["n_failed"] = n_failed
        cfg["m"] = m_nominal
        write_tail_csv(_resolve_out(args.out), estimates, cfg, args.seed)
        if args.per_rep_out:
            _write_per_rep(spec, _resolve_out(args.per_rep_out))
        return 0

    if args.cmd == "first-disconnect":
        spec = ExperimentSpec(graph_spec=gspec, reps=args.reps, master_seed=args.seed)
        samples, ks_stat, n_failed = run_first_disconnect(spec)
        cfg = _config_summary(args, ["family", "n", "reps"])
        cfg.update(ks_stat=f"{ks_stat:.6g}", n_failed=n_failed)
        write_disconnect_csv(_resolve_out(args.out), samples, cfg, args.seed)
        return 0

    if args.cmd == "outside-giant":
        seq = degree_sequence_for(gspec)
        default_i = int(round(seq.m**0.7)) if seq is not None else 100
        checkpoints = (
            tuple(int(t) for t in args.checkpoints.split(",") if t)
            if args.checkpoints
            else (default_i,)
        )
        spec = ExperimentSpec(
            graph_spec=gspec, reps=args.reps, master_seed=args.seed, checkpoints=checkpoints
        )
        rows = run_outside_giant(spec)
        cfg = _config_summary(args, ["family", "n", "reps", "checkpoints"])
        write_outside_csv(_resolve_out(args.out), rows, cfg, args.seed)
        return 0

    if args.cmd == "census":
        extra = {"i": args.i} if args.i else {}
        spec = ExperimentSpec(
            graph_spec=gspec, reps=args.reps, master_seed=args.seed, extra=extra
        )
        k_values = tuple(int(t) for t in args.line_sizes.split(","))
        rows = run_census_moments(spec, k_values)
        cfg = _config_summary(args, ["family", "n", "reps", "i"])
        write_census_csv(_resolve_out(args.out), rows, cfg, args.seed)
        return 0

    if args.cmd == "connectivity":
        spec = ExperimentSpec(graph_spec=gspec, reps=args.reps, master_seed=args.seed)
        c_grid = [float(t) for t in args.c.split(",")]
        rows = run_connectivity(spec, c_grid)
        cfg = _config_summary(args, ["family", "n", "reps", "c"])
        write_connectivity_csv(_resolve_out(args.out), rows, cfg, args.seed)
        return 0

    raise SystemExit(1)


def _write_per_rep(spec: ExperimentSpec, path: str) -> None:
    from .harness import tail_replications

    rows = tail_replications(spec)
    with open(path, "w") as fh:
        fh.write("rep,m,theta,A,A_hat,A_tilde,T,reached_disconnection\n")
        for r, row in enumerate(rows):
            if row is None:
                continue
            A, A_hat, A_tilde, m, T = row
            fh.write(f"{r},{m},{spec.theta},{A},{A_hat},{A_tilde},{T},{int(A >= T)}\n")


if __name__ == "__main__":
    raise SystemExit(main())
