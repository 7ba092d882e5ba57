"""Degree sequences, multigraphs, half-edge pairing, and degree statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class UnpairableSequenceError(ValueError):
    """Raised when a degree sequence has an odd degree sum."""


@dataclass(frozen=True)
class DegreeSequence:
    """Prescribed per-vertex degrees d = (d_1, ..., d_n)."""

    degrees: np.ndarray
    counts: dict = field(default=None, compare=False)

    def __post_init__(self):
        deg = np.asarray(self.degrees, dtype=np.int64)
        if deg.ndim != 1 or (deg.size and deg.min() < 0):
            raise ValueError("degrees must be a 1-d array of non-negative ints")
        deg.setflags(write=False)
        object.__setattr__(self, "degrees", deg)
        vals, cnts = np.unique(deg, return_counts=True)
        object.__setattr__(self, "counts", {int(v): int(c) for v, c in zip(vals, cnts)})

    @classmethod
    def from_counts(cls, counts: dict) -> "DegreeSequence":
        """Build from a map degree -> number of vertices (ascending degree order)."""
        degs = np.concatenate(
            [np.full(n_i, i, dtype=np.int64) for i, n_i in sorted(counts.items()) if n_i]
            or [np.empty(0, dtype=np.int64)]
        )
        return cls(degs)

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    @property
    def total_degree(self) -> int:
        return int(self.degrees.sum())

    @property
    def m(self) -> int:
        """Number of edges after pairing; requires an even degree sum."""
        if self.total_degree % 2:
            raise UnpairableSequenceError("odd degree sum")
        return self.total_degree // 2


@dataclass(frozen=True)
class DegreeStats:
    """Empirical degree-law statistics of a sequence."""

    d_bar: float
    p2: float
    second_factorial_moment: float
    q_c: float | None  # None when E[D(D-1)] <= E[D] (subcritical without removal)
    pgf_coeffs: np.ndarray  # pgf_coeffs[i] = fraction of degree-i vertices

    def pgf(self, x: float) -> float:
        """G_D(x) = E[x^D]."""
        return float(np.polynomial.polynomial.polyval(x, self.pgf_coeffs))

    def pgf_prime(self, x: float) -> float:
        """G_D'(x)."""
        c = self.pgf_coeffs
        dcoef = c[1:] * np.arange(1, c.size)
        return float(np.polynomial.polynomial.polyval(x, dcoef))


@dataclass(frozen=True)
class MultiGraph:
    """Multigraph with self-loops and parallel edges allowed.

    Edges are stored as an (m, 2) integer array of unordered endpoint pairs.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @property
    def degree(self) -> np.ndarray:
        """Per-vertex degree; a self-loop contributes 2."""
        return np.bincount(self.edges.ravel(), minlength=self.n)


def validate_regularity(seq: DegreeSequence, epsilon: float) -> list:
    """Check the regularity clauses a well-behaved sequence should satisfy.

    Returns a list of (clause, passed, detail) triples. Advisory only: the
    samplers accept any even-sum sequence. An odd degree sum is the one hard
    rejection (unpairable).
    """
    if not 0 < epsilon < 0.25:
        raise ValueError("epsilon must lie in (0, 1/4)")
    if seq.total_degree % 2:
        raise UnpairableSequenceError("odd degree sum")
    n = seq.n
    counts = seq.counts
    n0 = counts.get(0, 0)
    n1 = counts.get(1, 0)
    n2 = counts.get(2, 0)
    max_deg = int(seq.degrees.max()) if n else 0
    cap = n ** (0.25 - epsilon)
    d_bar = seq.total_degree / n if n else 0.0
    return [
        ("no_isolated_vertices", n0 == 0, f"n_0={n0}"),
        ("no_degree_one_strict", n1 == 0, f"n_1={n1}"),
        ("degree_one_sublinear", n1 <= math.sqrt(n), f"n_1={n1} vs sqrt(n)={math.sqrt(n):.2f}"),
        ("degree_two_fraction_interior", 0 < n2 < n, f"n_2/n={n2 / n if n else 0:.4f}"),
        ("max_degree_cap", max_deg < cap, f"max={max_deg} vs n^(1/4-eps)={cap:.3f}"),
        ("finite_mean_degree", math.isfinite(d_bar) and d_bar > 0, f"d_bar={d_bar:.4f}"),
    ]


def pair_half_edges(seq: DegreeSequence, rng: np.random.Generator) -> MultiGraph:
    """Uniform random pairing of the half-edge multiset into a multigraph.

    A uniform permutation of the half-edge list paired positionally is uniform
    over perfect matchings.
    """
    if seq.total_degree % 2:
        raise UnpairableSequenceError("odd degree sum")
    half = np.repeat(np.arange(seq.n, dtype=np.int64), seq.degrees)
    perm = rng.permutation(half)
    return MultiGraph(seq.n, perm.reshape(-1, 2))


def degree_stats(seq: DegreeSequence) -> DegreeStats:
    """Exact empirical moments plus the critical removal probability q_c."""
    if seq.n < 1:
        raise ValueError("empty sequence")
    deg = seq.degrees.astype(np.float64)
    d_bar = float(deg.mean())
    sfm = float((deg * (deg - 1)).mean())
    q_c = 1.0 - d_bar / sfm if sfm > d_bar else None
    coeffs = np.bincount(seq.degrees) / seq.n
    return DegreeStats(
        d_bar=d_bar,
        p2=seq.counts.get(2, 0) / seq.n,
        second_factorial_moment=sfm,
        q_c=q_c,
        pgf_coeffs=coeffs,
    )


def component_labels(g: MultiGraph) -> np.ndarray:
    """Label vertices by connected component (isolated vertices included)."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    if g.m == 0:
        return np.arange(g.n, dtype=np.int64)
    u, v = g.edges[:, 0], g.edges[:, 1]
    data = np.ones(g.m, dtype=np.int8)
    adj = coo_matrix((data, (u, v)), shape=(g.n, g.n))
    _, labels = connected_components(adj, directed=False)
    return labels.astype(np.int64)


def is_connected(g: MultiGraph) -> bool:
    """True iff the graph is a single component; isolated vertices disconnect."""
    if g.n <= 1:
        return True
    return int(component_labels(g).max()) == 0


# --- file formats -----------------------------------------------------------

def read_degree_sequence(path) -> DegreeSequence:
    """Read either one integer per line or compact `i:n_i` count lines."""
    plain, counts = [], {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" in line:
                i, n_i = line.split(":")
                counts[int(i)] = counts.get(int(i), 0) + int(n_i)
            else:
                plain.append(int(line))
    if plain and counts:
        raise ValueError("mixed plain and count-form lines")
    if counts:
        return DegreeSequence.from_counts(counts)
    return DegreeSequence(np.array(plain, dtype=np.int64))


def write_degree_sequence(seq: DegreeSequence, path, count_form: bool = False) -> None:
    with open(path, "w") as fh:
        if count_form:
            for i, n_i in sorted(seq.counts.items()):
                fh.write(f"{i}:{n_i}\n")
        else:
            for d in seq.degrees:
                fh.write(f"{d}\n")


def read_edge_list(path) -> MultiGraph:
    """Read the `u v` edge-list format with a `# n=<n> m=<m>` header."""
    n = m = None
    edges = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    if key == "n":
                        n = int(val)
                    elif key == "m":
                        m = int(val)
                continue
            u, v = line.split()
            edges.append((int(u), int(v)))
    if n is None:
        raise ValueError("missing `# n=<n> m=<m>` header")
    if m is not None and m != len(edges):
        raise ValueError(f"header says m={m}, found {len(edges)} edges")
    return MultiGraph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def write_edge_list(g: MultiGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"# n={g.n} m={g.m}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")
