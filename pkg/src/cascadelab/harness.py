"""Experiment orchestration: replication, seeding, estimators, CSV emission.

Replication r always draws its stream from SeedSequence(master_seed).spawn, so
results are identical for any worker count and samples never entangle.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cascade import (
    CascadeConfig,
    SurplusAssignment,
    run_cascade,
)
from .generate import (
    ConnectivitySamplingError,
    chained_stars,
    er_giant,
    erased_cm_degrees,
    erased_connected_cm,
    half_two_three,
    percolate,
    sample_connected_cm,
    square_lattice,
    star,
)
from .graphs import DegreeSequence, degree_stats, is_connected, read_degree_sequence
from .removal import build_trace, census_graph
from .theory import (
    line_first_moment,
    connectivity_probs,
    outside_giant_constants,
    rayleigh_cdf,
    tail_constant,
)
from .walks import Boundary, survival_counts


@dataclass(frozen=True)
class ExperimentSpec:
    graph_spec: dict
    theta: float = 1.0
    reps: int = 1000
    k_grid: tuple = ()  # entries: ("abs", int) or ("frac", float)
    master_seed: int = 0
    checkpoints: tuple = ()
    threads: int = 1
    max_attempts: int = 1000
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        ks = [k for kind, k in self.k_grid if kind == "abs"]
        if ks != sorted(ks):
            raise ValueError("k_grid must be sorted")


@dataclass(frozen=True)
class TailEstimate:
    k: int
    p_hat: float
    std_err: float
    ci_low: float
    ci_high: float
    theory_overlay: float


def parse_k_grid(tokens) -> tuple:
    """Absolute ints, or `f:0.1`-style fractions of m."""
    out = []
    for tok in tokens:
        tok = str(tok).strip()
        if tok.startswith("f:"):
            out.append(("frac", float(tok[2:])))
        else:
            out.append(("abs", int(tok)))
    return tuple(out)


def wilson_ci(successes: int, trials: int, z: float = 1.959963984540054) -> tuple:
    """95% Wilson score interval."""
    if trials == 0:
        return float("nan"), float("nan")
    p = successes / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return center - half, center + half


def rep_rng(master_seed: int, r: int) -> np.random.Generator:
    """Stream for replication r, injective in (master_seed, r)."""
    return np.random.default_rng(np.random.SeedSequence(master_seed).spawn(r + 1)[r])


def _rep_rngs(master_seed: int, reps: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(master_seed).spawn(reps)]


def degree_sequence_for(graph_spec: dict) -> DegreeSequence | None:
    family = graph_spec["family"]
    if family == "cm":
        if "degrees_file" in graph_spec:
            return read_degree_sequence(graph_spec["degrees_file"])
        if "counts" in graph_spec:
            return DegreeSequence.from_counts(graph_spec["counts"])
        return half_two_three(int(graph_spec["n"]))
    if family == "cm-erased":
        return erased_cm_degrees(int(graph_spec["n"]))
    return None


def build_graph(graph_spec: dict, rng: np.random.Generator, max_attempts: int = 1000):
    """One graph per replication, per the family in graph_spec."""
    family = graph_spec["family"]
    if family == "cm":
        return sample_connected_cm(degree_sequence_for(graph_spec), rng, max_attempts)
    if family == "cm-erased":
        return erased_connected_cm(degree_sequence_for(graph_spec), rng)
    if family == "star":
        return star(int(graph_spec["m"]))
    if family == "lattice":
        return square_lattice(int(graph_spec["side"]))
    if family == "er-giant":
        return er_giant(int(graph_spec["n"]), float(graph_spec.get("lam", 2.0)), rng)
    if family == "chained-stars":
        return chained_stars(int(graph_spec["n"]), int(graph_spec.get("star_size", 4)))
    raise ValueError(f"unknown graph family {family!r}")


# --- failure-size tails -----------------------------------------------------

def _tail_rep(args):
    graph_spec, theta, master_seed, r, max_attempts = args
    rng = np.random.default_rng(np.random.SeedSequence(master_seed).spawn(r + 1)[r])
    try:
        g = build_graph(graph_spec, rng, max_attempts)
    except ConnectivitySamplingError:
        return None
    trace = build_trace(g, rng)
    res = run_cascade(
        trace, SurplusAssignment.sample(g.m, rng), CascadeConfig(theta)
    )
    return res.A, res.A_hat, res.A_tilde, g.m, trace.first_disconnect


def tail_replications(spec: ExperimentSpec) -> tuple:
    """Raw per-replication cascade rows (A, A_hat, A_tilde, m, T); None = failed."""
    args = [
        (spec.graph_spec, spec.theta, spec.master_seed, r, spec.max_attempts)
        for r in range(spec.reps)
    ]
    if spec.threads > 1:
        with ProcessPoolExecutor(max_workers=spec.threads) as pool:
            rows = list(pool.map(_tail_rep, args, chunksize=64))
    else:
        # cheaper seeding path: spawn all streams once
        rows = []
        rngs = _rep_rngs(spec.master_seed, spec.reps)
        for r, rng in enumerate(rngs):
            try:
                g = build_graph(spec.graph_spec, rng, spec.max_attempts)
            except ConnectivitySamplingError:
                rows.append(None)
                continue
            trace = build_trace(g, rng)
            res = run_cascade(
                trace, SurplusAssignment.sample(g.m, rng), CascadeConfig(spec.theta)
            )
            rows.append((res.A, res.A_hat, res.A_tilde, g.m, trace.first_disconnect))
    return rows


def run_failure_tail(spec: ExperimentSpec) -> tuple:
    """Tail estimates P(A >= k) over the k grid.

    Returns (estimates, n_failed, m_nominal); m_nominal is the median edge
    count over replications (families with random size vary per rep).
    """
    rows = tail_replications(spec)
    ok = [row for row in rows if row is not None]
    n_failed = len(rows) - len(ok)
    if not ok:
        raise RuntimeError("all replications failed to produce a graph")
    A = np.array([row[0] for row in ok])
    m_arr = np.array([row[3] for row in ok])
    m_nominal = int(np.median(m_arr))
    estimates = []
    for kind, val in spec.k_grid:
        if kind == "abs":
            k_label = int(val)
            hits = int((A >= val).sum())
        else:
            k_label = int(round(val * m_nominal))
            hits = int((A >= np.round(val * m_arr)).sum())
        n = A.size
        p = hits / n
        se = math.sqrt(p * (1 - p) / n)
        lo, hi = wilson_ci(hits, n)
        theory = tail_constant(spec.theta) / math.sqrt(k_label) if k_label > 0 else 1.0
        estimates.append(TailEstimate(k_label, p, se, lo, hi, theory))
    return estimates, n_failed, m_nominal


# --- first disconnection ----------------------------------------------------

def run_first_disconnect(spec: ExperimentSpec) -> tuple:
    """(samples of T/sqrt(m), KS distance vs the scaled-disconnection CDF)."""
    from scipy.stats import kstest

    seq = degree_sequence_for(spec.graph_spec)
    samples = []
    n_failed = 0
    for rng in _rep_rngs(spec.master_seed, spec.reps):
        try:
            g = build_graph(spec.graph_spec, rng, spec.max_attempts)
        except ConnectivitySamplingError:
            n_failed += 1
            continue
        trace = build_trace(g, rng)
        samples.append(trace.first_disconnect / math.sqrt(g.m))
    samples = np.array(samples)
    if seq is not None:
        stats = degree_stats(seq)
        ks = kstest(samples, lambda x: np.vectorize(rayleigh_cdf)(x, stats.p2, stats.d_bar))
        ks_stat = float(ks.statistic)
    else:
        ks_stat = float("nan")
    return samples, ks_stat, n_failed


# --- outside-giant ratio ----------------------------------------------------

def run_outside_giant(spec: ExperimentSpec) -> list:
    """(m/i^2)*(edges outside the giant) at each checkpoint, with overlay."""
    seq = degree_sequence_for(spec.graph_spec)
    stats = degree_stats(seq) if seq is not None else None
    ratios = {i: [] for i in spec.checkpoints}
    for rng in _rep_rngs(spec.master_seed, spec.reps):
        try:
            g = build_graph(spec.graph_spec, rng, spec.max_attempts)
        except ConnectivitySamplingError:
            continue
        trace = build_trace(g, rng)
        for i in spec.checkpoints:
            ratios[i].append(g.m / (i * i) * trace.outside_edges(i))
    rows = []
    for i in spec.checkpoints:
        vals = np.array(ratios[i])
        theory = (
            outside_giant_constants(stats.p2, stats.d_bar)["edges_in_lines"]
            if stats is not None
            else float("nan")
        )
        rows.append(
            (i, float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size)), theory)
        )
    return rows


# --- line-component census under explosion ----------------------------------

def run_census_moments(spec: ExperimentSpec, k_values=(2, 3, 4)) -> list:
    """Mean per-k line counts in the exploded pairing vs first-moment overlay."""
    from .generate import explode

    seq = degree_sequence_for(spec.graph_spec)
    stats = degree_stats(seq)
    m = seq.m
    i = float(spec.extra.get("i", round(m**0.7)))
    q = i / m
    counts = {k: [] for k in k_values}
    for rng in _rep_rngs(spec.master_seed, spec.reps):
        out = explode(seq, q, rng, keep_intermediate=True)
        census = census_graph(out.intermediate)
        for k in k_values:
            counts[k].append(census.lines.get(k, 0))
    rows = []
    for k in k_values:
        theory = line_first_moment(k, stats.p2, stats.d_bar, i, m)
        rows.append((k, float(np.mean(counts[k])), theory))
    return rows


# --- percolated connectivity ------------------------------------------------

def run_connectivity(spec: ExperimentSpec, c_grid) -> list:
    """Connectivity frequency of percolation at q = c/sqrt(m), per c."""
    seq = degree_sequence_for(spec.graph_spec)
    stats = degree_stats(seq)
    m = seq.m
    rows = []
    for c in c_grid:
        q = c / math.sqrt(m)
        hits = n_ok = 0
        ci = list(c_grid).index(c)
        streams = np.random.SeedSequence([spec.master_seed, ci]).spawn(spec.reps)
        for rng in (np.random.default_rng(s) for s in streams):
            try:
                g = build_graph(spec.graph_spec, rng, spec.max_attempts)
            except ConnectivitySamplingError:
                continue
            hits += is_connected(percolate(g, q, rng))
            n_ok += 1
        p = hits / n_ok
        se = math.sqrt(p * (1 - p) / n_ok)
        _, conditioned = connectivity_probs(c, stats.p2, stats.d_bar)
        rows.append((c, p, se, conditioned))
    return rows


# --- first-passage tables ---------------------------------------------------

def run_fpt(
    theta: float,
    k: int,
    reps: int,
    master_seed: int,
    l: int | None = None,
    gamma: float = 0.3,
) -> list:
    """Survival P(T > k) under the constant and both moving boundaries.

    Rows: (k, boundary, p_hat, se, theory) with theory = tail_constant/sqrt(k)
    for every boundary (the moving boundaries share the constant-boundary tail).
    """
    if l is None:
        l = int(round(k**0.6))
    rng = np.random.default_rng(np.random.SeedSequence(master_seed))
    bounds = [
        ("constant", Boundary.constant(1.0 - theta)),
        ("gplus", Boundary.power_after(1.0 - theta, l, gamma, 1)),
        ("gminus", Boundary.power_after(1.0 - theta, l, gamma, -1)),
    ]
    counts = survival_counts([b for _, b in bounds], k, reps, rng)
    theory = tail_constant(theta) / math.sqrt(k)
    rows = []
    for (name, _), cnt in zip(bounds, counts):
        p = int(cnt) / reps
        se = math.sqrt(p * (1 - p) / reps)
        rows.append((k, name, p, se, theory))
    return rows


# --- CSV emission -----------------------------------------------------------

def _comment_header(config: dict, master_seed: int) -> str:
    parts = " ".join(f"{k}={v}" for k, v in sorted(config.items()))
    return f"# version={__version__} master_seed={master_seed} {parts}\n"


def write_tail_csv(path, estimates, config: dict, master_seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(_comment_header(config, master_seed))
        fh.write("k,p_hat,se,ci_low,ci_high,theory\n")
        for e in estimates:
            fh.write(
                f"{e.k},{e.p_hat:.10g},{e.std_err:.10g},{e.ci_low:.10g},"
                f"{e.ci_high:.10g},{e.theory_overlay:.10g}\n"
            )


def write_disconnect_csv(path, samples, config: dict, master_seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(_comment_header(config, master_seed))
        fh.write("rep,t_scaled\n")
        for r, t in enumerate(samples):
            fh.write(f"{r},{t:.10g}\n")


def write_outside_csv(path, rows, config: dict, master_seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(_comment_header(config, master_seed))
        fh.write("i,ratio_mean,ratio_se,theory\n")
        for i, mean, se, theory in rows:
            fh.write(f"{i},{mean:.10g},{se:.10g},{theory:.10g}\n")


def write_census_csv(path, rows, config: dict, master_seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(_comment_header(config, master_seed))
        fh.write("k,count_mean,theory\n")
        for k, mean, theory in rows:
            fh.write(f"{k},{mean:.10g},{theory:.10g}\n")


def write_fpt_csv(path, rows, config: dict, master_seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(_comment_header(config, master_seed))
        fh.write("k,boundary,p_hat,se,theory\n")
        for k, name, p, se, theory in rows:
            fh.write(f"{k},{name},{p:.10g},{se:.10g},{theory:.10g}\n")


def write_connectivity_csv(path, rows, config: dict, master_seed: int) -> None:
    with open(path, "w") as fh:
        fh.write(_comment_header(config, master_seed))
        fh.write("c,p_hat,se,theory\n")
        for c, p, se, theory in rows:
            fh.write(f"{c:.10g},{p:.10g},{se:.10g},{theory:.10g}\n")


def read_config(path) -> dict:
    """Plain key=value config file; later keys win; `#` starts a comment."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            if not _:
                raise ValueError(f"bad config line: {raw!r}")
            out[key.strip()] = val.strip()
    return out
