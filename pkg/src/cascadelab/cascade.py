"""The load-surge cascade, coupled to a removal trace.

Surplus capacities are the order statistics of m uniforms, attached
positionally to the removal order; the cascade then fails edges in removal
order within each component until a capacity survives the component's surge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import cascade_pass
from .graphs import DegreeSequence
from .generate import ConnectivitySamplingError, sample_connected_cm
from .removal import RemovalTrace, build_trace


@dataclass(frozen=True)
class CascadeConfig:
    """theta is the initial disturbance; comparison is strict (< fails)."""

    theta: float = 1.0

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError("theta must be positive")


@dataclass(frozen=True)
class SurplusAssignment:
    """Sorted uniform capacities U_(1) <= ... <= U_(m), coupled positionally."""

    sorted_capacities: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.sorted_capacities, dtype=np.float64)
        if c.ndim != 1:
            raise ValueError("capacities must be 1-d")
        if c.size and (c.min() < 0 or c.max() > 1):
            raise ValueError("capacities must lie in [0, 1]")
        if np.any(np.diff(c) < 0):
            raise ValueError("capacities must be sorted ascending")
        c.setflags(write=False)
        object.__setattr__(self, "sorted_capacities", c)

    @classmethod
    def sample(cls, m: int, rng: np.random.Generator) -> "SurplusAssignment":
        return cls(np.sort(rng.random(m)))


@dataclass(frozen=True)
class CascadeResult:
    A: int  # total failures
    A_hat: int  # failures of edges in the giant upon failure
    A_tilde: int  # failures outside the giant
    reached_disconnection: bool  # A >= first disconnection step
    per_component_stops: list  # (split-forest node, stop step) pairs


def surge_closed_form(i: int, m: int, theta: float) -> float:
    """Surge before the i-th comparison when no disconnection intervened."""
    return theta / m + (i - 1) * (1 - theta / m) / m


def run_cascade(
    trace: RemovalTrace, capacities: SurplusAssignment, cfg: CascadeConfig
) -> CascadeResult:
    """Per-component cascade over the split forest.

    Every initial component starts at surge theta/m; a failure in a component
    with E edges (including the failing one) lifts its surge by (1-l)/E, and
    both sides of a split inherit the post-update surge. A surviving
    comparison stops that component's lineage permanently.
    """
    m = trace.m
    if capacities.sorted_capacities.size != m:
        raise ValueError("capacities not coupled to this trace (length mismatch)")
    A, A_hat, stop_nodes, stop_steps = cascade_pass(
        trace.comp_of_step,
        trace.split_forest.child1,
        trace.split_forest.child2,
        trace.split_forest.edge_count,
        trace.in_giant,
        trace.split_forest.roots,
        capacities.sorted_capacities,
        cfg.theta,
    )
    return CascadeResult(
        A=int(A),
        A_hat=int(A_hat),
        A_tilde=int(A) - int(A_hat),
        reached_disconnection=int(A) >= trace.first_disconnect,
        per_component_stops=list(zip(stop_nodes.tolist(), stop_steps.tolist())),
    )


def run_star_cascade(m: int, theta: float, rng: np.random.Generator) -> int:
    """Failure count on the star: no splits, so only the surge line matters.

    A* is the longest prefix k with U_(i) below the closed-form surge for all
    i <= k.
    """
    if m < 1 or theta <= 0:
        raise ValueError("need m >= 1 and theta > 0")
    return int(star_cascade_sizes(m, theta, 1, rng)[0])


def star_cascade_sizes(
    m: int, theta: float, reps: int, rng: np.random.Generator, chunk: int = 2000
) -> np.ndarray:
    """Vectorized star cascades: order statistics via exponential spacings."""
    i_arr = np.arange(1, m + 1, dtype=np.float64)
    boundary = theta / m + (i_arr - 1) * (1 - theta / m) / m
    out = np.empty(reps, dtype=np.int64)
    done = 0
    while done < reps:
        b = min(chunk, reps - done)
        e = rng.standard_exponential((b, m + 1))
        u = np.cumsum(e[:, :m], axis=1) / e.sum(axis=1, keepdims=True)
        survives = u >= boundary  # strict comparator: U < l fails
        first = np.argmax(survives, axis=1)
        none = ~survives.any(axis=1)
        first[none] = m
        out[done : done + b] = first
        done += b
    return out


@dataclass(frozen=True)
class DisconnectionHitEstimate:
    p_hat: float
    std_err: float
    theory: float
    reps: int
    n_failed: int  # connected-sampler failures (skipped, not retried)


def estimate_disconnection_hit(
    seq: DegreeSequence,
    theta: float,
    rng: np.random.Generator,
    reps: int,
    max_attempts: int = 1000,
) -> DisconnectionHitEstimate:
    """MC frequency of the cascade reaching the first disconnection step."""
    from .theory import disconnect_constant
    from .graphs import degree_stats

    stats = degree_stats(seq)
    m = seq.m
    hits = 0
    n_failed = 0
    n_ok = 0
    for _ in range(reps):
        try:
            g = sample_connected_cm(seq, rng, max_attempts=max_attempts)
        except ConnectivitySamplingError:
            n_failed += 1
            continue
        trace = build_trace(g, rng)
        res = run_cascade(trace, SurplusAssignment.sample(m, rng), CascadeConfig(theta))
        hits += res.reached_disconnection
        n_ok += 1
    p = hits / n_ok if n_ok else float("nan")
    se = math.sqrt(p * (1 - p) / n_ok) if n_ok else float("nan")
    theory = disconnect_constant(theta, stats.p2, stats.d_bar, m)
    return DisconnectionHitEstimate(p, se, theory, n_ok, n_failed)


def cascade_csv_row(rep: int, m: int, theta: float, res: CascadeResult, t: int) -> str:
    """Per-replication row `rep, m, theta, A, A_hat, A_tilde, T, reached_disconnection`."""
    return (
        f"{rep},{m},{theta},{res.A},{res.A_hat},{res.A_tilde},{t},"
        f"{int(res.reached_disconnection)}"
    )
