"""Sequential uniform edge removal with full component history.

A RemovalTrace fixes one uniform removal permutation and stores the offline
split forest (reverse union-find), the giant-component edge series, the first
disconnection step, and the stopping-time helpers built on those series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import build_trace_arrays
from .graphs import DegreeSequence, MultiGraph
from .generate import sample_connected_cm


@dataclass(frozen=True)
class SplitForest:
    """Laminar history of component splits under a fixed removal order.

    Node ids 0..n-1 are the single-vertex components left after all removals;
    node n-1+j (j >= 1) is the component destroyed at some removal step. Each
    node records the components it splits into (one child for a cycle edge,
    two for a bridge) and its edge count just before the split.
    """

    n: int
    child1: np.ndarray
    child2: np.ndarray
    edge_count: np.ndarray
    destroyed_at: np.ndarray  # forward step at which each node is split, 0 = never
    birth_step: np.ndarray  # step whose removal created the node, 0 = initial
    roots: np.ndarray  # component nodes of the intact graph

    def children(self, node: int) -> list:
        out = []
        if self.child1[node] >= 0:
            out.append(int(self.child1[node]))
        if self.child2[node] >= 0:
            out.append(int(self.child2[node]))
        return out

    def members(self, node: int) -> np.ndarray:
        """Vertex set of a component node, resolved by descending to leaves."""
        stack, verts = [int(node)], []
        while stack:
            x = stack.pop()
            if x < self.n:
                verts.append(x)
            else:
                stack.extend(self.children(x))
        return np.sort(np.array(verts, dtype=np.int64))


@dataclass(frozen=True)
class RemovalTrace:
    graph: MultiGraph
    order: np.ndarray  # removal permutation of edge indices
    split_forest: SplitForest
    comp_of_step: np.ndarray  # comp_of_step[i] = node containing e_(i) at time i-1
    giant_edges: np.ndarray  # giant_edges[i] = largest-component edges after i removals
    in_giant: np.ndarray  # in_giant[i] = e_(i+1) in the giant after i removals
    first_disconnect: int  # m+1 sentinel if never disconnected, 0 if it starts so

    @property
    def m(self) -> int:
        return self.graph.m

    def outside_edges(self, i: int) -> int:
        """Surviving edges outside the giant after i removals."""
        return int(self.m - i - self.giant_edges[i])


def build_trace(g: MultiGraph, rng: np.random.Generator) -> RemovalTrace:
    """Draw a uniform removal permutation and compute its full history."""
    if g.m < 1:
        raise ValueError("graph must have at least one edge")
    order = rng.permutation(g.m)
    u = np.ascontiguousarray(g.edges[order, 0])
    v = np.ascontiguousarray(g.edges[order, 1])
    (
        comp_of_step,
        child1,
        child2,
        node_edges,
        giant_edges,
        in_giant,
        first_disconnect,
        roots,
    ) = build_trace_arrays(u, v, g.n)
    total = g.n + g.m
    destroyed_at = np.zeros(total, dtype=np.int64)
    destroyed_at[comp_of_step[1:]] = np.arange(1, g.m + 1)
    birth = np.zeros(total, dtype=np.int64)
    for arr in (child1, child2):
        kids = arr[comp_of_step[1:]]
        mask = kids >= 0
        birth[kids[mask]] = np.arange(1, g.m + 1)[mask]
    forest = SplitForest(
        n=g.n,
        child1=child1,
        child2=child2,
        edge_count=node_edges,
        destroyed_at=destroyed_at,
        birth_step=birth,
        roots=roots,
    )
    return RemovalTrace(
        graph=g,
        order=order,
        split_forest=forest,
        comp_of_step=comp_of_step,
        giant_edges=giant_edges,
        in_giant=in_giant,
        first_disconnect=int(first_disconnect),
    )


def kappa(trace: RemovalTrace, i: int) -> int:
    """Removals that hit the giant among the first i removals."""
    if not 0 <= i <= trace.m:
        raise ValueError("i out of range")
    return int(trace.in_giant[:i].sum())


def upsilon(trace: RemovalTrace, k: int) -> int:
    """Smallest j with j + (surviving edges outside the giant at j) >= k."""
    if not 1 <= k <= trace.m:
        raise ValueError("k out of range")
    j_arr = np.arange(trace.m + 1)
    reach = j_arr + (trace.m - j_arr - trace.giant_edges)
    hits = np.flatnonzero(reach >= k)
    return int(hits[0]) if hits.size else trace.m + 1


def varrho(trace: RemovalTrace, k: int) -> int:
    """Smallest j with kappa(j) >= k; m+1 sentinel when unreachable."""
    if not 1 <= k <= trace.m:
        raise ValueError("k out of range")
    csum = np.cumsum(trace.in_giant)
    hits = np.flatnonzero(csum >= k)
    return int(hits[0]) + 1 if hits.size else trace.m + 1


@dataclass(frozen=True)
class ComponentCensus:
    """Classification of all non-largest components at a checkpoint."""

    N0: int  # isolated vertices
    lines: dict  # vertex count k -> number of line components (k-1 edges)
    cycles: dict  # edge count k -> number of cycle components
    complex_edges: int  # edges in non-giant components with a degree>=3 vertex
    giant_edges: int

    @property
    def line_edges(self) -> int:
        return sum((k - 1) * c for k, c in self.lines.items())

    @property
    def cycle_edges(self) -> int:
        return sum(k * c for k, c in self.cycles.items())

    @property
    def outside_vertices(self) -> int:
        """N0 plus vertices in line components."""
        return self.N0 + sum(k * c for k, c in self.lines.items())


def census_graph(g: MultiGraph) -> ComponentCensus:
    """Classify every non-largest component of a graph by degree inspection."""
    from .graphs import component_labels

    labels = component_labels(g)
    n_comps = int(labels.max()) + 1 if g.n else 0
    vcount = np.bincount(labels, minlength=n_comps)
    if g.m:
        ecount = np.bincount(labels[g.edges[:, 0]], minlength=n_comps)
    else:
        ecount = np.zeros(n_comps, dtype=np.int64)
    deg = g.degree
    # per-component max degree and degree-1 count, for line/cycle recognition
    maxdeg = np.zeros(n_comps, dtype=np.int64)
    np.maximum.at(maxdeg, labels, deg)
    deg1 = np.bincount(labels[deg == 1], minlength=n_comps)
    if n_comps == 0:
        return ComponentCensus(0, {}, {}, 0, 0)
    giant_candidates = np.flatnonzero(ecount == ecount.max())
    if giant_candidates.size > 1:
        first_vertex = np.array(
            [np.flatnonzero(labels == c)[0] for c in giant_candidates]
        )
        giant_candidates = giant_candidates[np.argsort(first_vertex)]
    giant = int(giant_candidates[0])
    N0 = 0
    lines: dict = {}
    cycles: dict = {}
    complex_edges = 0
    for c in range(n_comps):
        if c == giant:
            continue
        if ecount[c] == 0:
            N0 += 1
        elif maxdeg[c] >= 3:
            complex_edges += int(ecount[c])
        elif ecount[c] == vcount[c] - 1 and deg1[c] == 2:
            k = int(vcount[c])
            lines[k] = lines.get(k, 0) + 1
        elif ecount[c] == vcount[c] and deg1[c] == 0:
            k = int(ecount[c])
            cycles[k] = cycles.get(k, 0) + 1
        else:  # unreachable for max degree <= 2
            complex_edges += int(ecount[c])
    return ComponentCensus(N0, lines, cycles, complex_edges, int(ecount[giant]))


def census_at(trace: RemovalTrace, i: int) -> ComponentCensus:
    """Reconstruct the remaining graph after i removals and classify it."""
    if not 0 <= i <= trace.m:
        raise ValueError("i out of range")
    keep = trace.order[i:]
    return census_graph(MultiGraph(trace.graph.n, trace.graph.edges[keep]))


def first_disconnect_sample(
    seq: DegreeSequence, rng: np.random.Generator, max_attempts: int = 1000
) -> float:
    """Scaled first-disconnection step of a fresh connected sample."""
    g = sample_connected_cm(seq, rng, max_attempts=max_attempts)
    trace = build_trace(g, rng)
    return trace.first_disconnect / math.sqrt(g.m)


def write_trace_csv(trace: RemovalTrace, path) -> None:
    """Trace summary rows `i, giant_edges, outside_edges, in_giant`.

    The final row (i = m, nothing left to remove) reports in_giant as 0.
    """
    with open(path, "w") as fh:
        fh.write("i,giant_edges,outside_edges,in_giant\n")
        for i in range(trace.m + 1):
            ig = int(trace.in_giant[i]) if i < trace.m else 0
            fh.write(f"{i},{trace.giant_edges[i]},{trace.outside_edges(i)},{ig}\n")
