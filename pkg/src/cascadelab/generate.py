"""Samplers for every graph family used in the experiments.

Connected and erased configuration models, direct percolation, the explosion
construction of the percolated model, and the comparison topologies (star,
square lattice, Erdos-Renyi giant, chained stars).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import (
    DegreeSequence,
    MultiGraph,
    component_labels,
    is_connected,
    pair_half_edges,
)


class ConnectivitySamplingError(RuntimeError):
    """Rejection sampler for the connected model ran out of attempts."""

    def __init__(self, attempts: int):
        super().__init__(f"no connected sample in {attempts} attempts")
        self.attempts = attempts


class ErasureEmptyError(RuntimeError):
    """Erasure left no edges at all."""


@dataclass(frozen=True)
class ExplosionOutcome:
    """Result of the four-step explosion construction.

    `graph` is distributed as the percolated configuration model; `intermediate`
    is the augmented-sequence pairing before the degree-1 removals (kept when
    requested, else None).
    """

    graph: MultiGraph
    exploded_sequence: DegreeSequence
    R_n: int
    intermediate: MultiGraph | None


def sample_connected_cm(
    seq: DegreeSequence,
    rng: np.random.Generator,
    max_attempts: int = 1000,
    return_attempts: bool = False,
):
    """Rejection-sample the configuration model conditioned on connectivity."""
    for attempt in range(1, max_attempts + 1):
        g = pair_half_edges(seq, rng)
        if is_connected(g):
            return (g, attempt) if return_attempts else g
    raise ConnectivitySamplingError(max_attempts)


def connected_acceptance_rate(seq, rng, reps: int = 200) -> float:
    """Fraction of plain pairings that come out connected."""
    hits = sum(is_connected(pair_half_edges(seq, rng)) for _ in range(reps))
    return hits / reps


def erased_connected_cm(seq: DegreeSequence, rng: np.random.Generator) -> MultiGraph:
    """Pair, merge parallel edges, drop self-loops, keep the largest component.

    Ties between equal-sized components break toward the lowest contained
    vertex index. Surviving vertices are relabeled compactly in index order.
    """
    g = pair_half_edges(seq, rng)
    e = np.sort(g.edges, axis=1)
    e = e[e[:, 0] != e[:, 1]]  # self-loops
    e = np.unique(e, axis=0)  # parallel edges
    if e.shape[0] == 0:
        raise ErasureEmptyError("no edges survive erasure")
    simple = MultiGraph(g.n, e)
    labels = component_labels(simple)
    sizes = np.bincount(labels)
    best = np.flatnonzero(sizes == sizes.max())
    if best.size > 1:
        # lowest min vertex index among the tied components
        first_vertex = np.array([np.flatnonzero(labels == b)[0] for b in best])
        best = best[np.argsort(first_vertex)]
    keep_label = int(best[0])
    keep = labels == keep_label
    relabel = -np.ones(g.n, dtype=np.int64)
    relabel[keep] = np.arange(keep.sum())
    mask = keep[e[:, 0]] & keep[e[:, 1]]
    return MultiGraph(int(keep.sum()), relabel[e[mask]])


def percolate(g: MultiGraph, q: float, rng: np.random.Generator) -> MultiGraph:
    """Delete each edge independently with probability q; vertices unchanged."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    keep = rng.random(g.m) >= q
    return MultiGraph(g.n, g.edges[keep])


def explode(
    seq: DegreeSequence,
    q: float,
    rng: np.random.Generator,
    keep_intermediate: bool = False,
) -> ExplosionOutcome:
    """Four-step construction of the percolated configuration model.

    1. Remove each half-edge independently with probability 1 - sqrt(1-q);
       call the removed count R_n.
    2. Append R_n new degree-1 vertices, giving the augmented sequence d'.
    3. Pair the augmented sequence uniformly.
    4. Remove R_n degree-1 vertices uniformly at random (removing a degree-1
       vertex deletes its incident edge); survivors are relabeled compactly.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError("q must lie in [0, 1)")
    p_half = 1.0 - math.sqrt(1.0 - q)
    removed = rng.binomial(seq.degrees, p_half)
    R_n = int(removed.sum())
    d_prime = np.concatenate(
        [seq.degrees - removed, np.ones(R_n, dtype=np.int64)]
    )
    exploded_seq = DegreeSequence(d_prime)
    inter = pair_half_edges(exploded_seq, rng)
    deg1 = np.flatnonzero(inter.degree == 1)
    victims = rng.choice(deg1, size=R_n, replace=False) if R_n else deg1[:0]
    dead = np.zeros(inter.n, dtype=bool)
    dead[victims] = True
    mask = ~(dead[inter.edges[:, 0]] | dead[inter.edges[:, 1]])
    relabel = -np.ones(inter.n, dtype=np.int64)
    relabel[~dead] = np.arange(inter.n - R_n)
    final = MultiGraph(inter.n - R_n, relabel[inter.edges[mask]])
    return ExplosionOutcome(
        graph=final,
        exploded_sequence=exploded_seq,
        R_n=R_n,
        intermediate=inter if keep_intermediate else None,
    )


# --- deterministic / comparison topologies ----------------------------------

def star(m: int) -> MultiGraph:
    """One hub (vertex 0) with m leaves."""
    if m < 1:
        raise ValueError("m must be positive")
    leaves = np.arange(1, m + 1, dtype=np.int64)
    return MultiGraph(m + 1, np.column_stack([np.zeros(m, dtype=np.int64), leaves]))


def square_lattice(side: int) -> MultiGraph:
    """side x side grid with open boundaries: 2*side*(side-1) edges."""
    if side < 1:
        raise ValueError("side must be positive")
    idx = np.arange(side * side, dtype=np.int64).reshape(side, side)
    horiz = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    vert = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    return MultiGraph(side * side, np.vstack([horiz, vert]))


def er_giant_fraction(lam: float) -> float:
    """Nonzero root of eta = 1 - exp(-lam*eta).

    MC at lam=2 shows this root (~0.7968) matches the observed giant *fraction*;
    it equals 1 minus the branching extinction probability below.
    """
    eta = 0.5
    for _ in range(200):
        eta = 1.0 - math.exp(-lam * eta)
    return eta


def er_extinction_prob(lam: float) -> float:
    """Smallest root of eta = exp(-lam*(1-eta)), the extinction probability."""
    eta = 0.0
    for _ in range(500):
        eta = math.exp(-lam * (1.0 - eta))
    return eta


def er_giant(n: int, lam: float, rng: np.random.Generator) -> MultiGraph:
    """Largest component of G(n, lam/n), compactly relabeled."""
    if lam <= 1:
        raise ValueError("lam must exceed 1 for a giant to exist")
    p = lam / n
    n_pairs = n * (n - 1) // 2
    n_edges = rng.binomial(n_pairs, p)
    codes = rng.choice(n_pairs, size=n_edges, replace=False)
    # decode linear pair index to (u, v) with u < v
    u = (np.floor((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * codes)) / 2)).astype(np.int64)
    v = (codes - u * n + u * (u + 1) // 2 + u + 1).astype(np.int64)
    g = MultiGraph(n, np.column_stack([u, v]))
    labels = component_labels(g)
    sizes = np.bincount(labels)
    best = np.flatnonzero(sizes == sizes.max())
    if best.size > 1:
        first_vertex = np.array([np.flatnonzero(labels == b)[0] for b in best])
        best = best[np.argsort(first_vertex)]
    keep = labels == int(best[0])
    relabel = -np.ones(n, dtype=np.int64)
    relabel[keep] = np.arange(keep.sum())
    mask = keep[g.edges[:, 0]] & keep[g.edges[:, 1]]
    return MultiGraph(int(keep.sum()), relabel[g.edges[mask]])


def chained_stars(n_components: int, star_size: int) -> MultiGraph:
    """n hubs, each with star_size leaf-edges, hubs joined in a hub cycle.

    With star_size=4 this has 5n vertices and 5n edges.
    """
    if n_components < 1 or star_size < 1:
        raise ValueError("sizes must be positive")
    n = n_components
    hubs = np.arange(n, dtype=np.int64)
    ring = np.column_stack([hubs, (hubs + 1) % n])
    leaf_hub = np.repeat(hubs, star_size)
    leaves = n + np.arange(n * star_size, dtype=np.int64)
    spokes = np.column_stack([leaf_hub, leaves])
    return MultiGraph(n * (star_size + 1), np.vstack([ring, spokes]))


def erased_cm_degrees(n: int) -> DegreeSequence:
    """Benchmark degree recipe for the erased-model experiments.

    ceil(n^(1/3)) vertices of degree 1 and of degree 4, the rest split evenly
    between degrees 2 and 3; roughly 5n/4 edges.
    """
    n_edge_cases = math.ceil(n ** (1 / 3))
    n23 = n // 2 - n_edge_cases
    counts = {1: n_edge_cases, 2: n23, 3: n23, 4: n_edge_cases}
    seq = DegreeSequence.from_counts(counts)
    if seq.total_degree % 2:
        counts[2] += 1  # keep the sum pairable
        seq = DegreeSequence.from_counts(counts)
    return seq


def half_two_three(n: int) -> DegreeSequence:
    """n/2 vertices of degree 2 and n/2 of degree 3 (p2=0.5, d=2.5)."""
    if n % 4:
        raise ValueError("n must be divisible by 4 for an even degree sum")
    return DegreeSequence.from_counts({2: n // 2, 3: n // 2})
