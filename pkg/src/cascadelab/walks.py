"""First-passage machinery: centered-exponential walks, exact bridges,
moving boundaries, and the giant-increment walk tied to a removal trace."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .removal import RemovalTrace


@dataclass(frozen=True)
class WalkPath:
    """S_0 = 0, S_1, ..., S_T with unit-exponential-centered increments."""

    values: np.ndarray
    law: str  # "iid" | "bridge" | "giant-increment"

    @property
    def horizon(self) -> int:
        return int(self.values.size - 1)


def sample_walk(k: int, rng: np.random.Generator) -> WalkPath:
    """Free walk: S_i = sum of (1 - Exp_j(1)) for j <= i."""
    if k < 1:
        raise ValueError("k must be positive")
    inc = 1.0 - rng.standard_exponential(k)
    return WalkPath(np.concatenate([[0.0], np.cumsum(inc)]), "iid")


def sample_bridge(m: int, rng: np.random.Generator) -> WalkPath:
    """Walk conditioned on S_{m+1} = 0 via rescaled exponential spacings."""
    if m < 1:
        raise ValueError("m must be positive")
    e = rng.standard_exponential(m + 1)
    scaled = e * ((m + 1) / e.sum())
    values = np.concatenate([[0.0], np.cumsum(1.0 - scaled)])
    return WalkPath(values, "bridge")


@dataclass(frozen=True)
class Boundary:
    """Lazy boundary g_i for i >= 1.

    kinds: constant(c); power_after(level, l, gamma, sign) which is `level` for
    i <= l and sign*i^gamma after; piecewise_constant(levels, breakpoints)
    where level[j] applies for i <= breakpoints[j] (last level extends);
    series(explicit values, 1-based).
    """

    kind: str
    c: float = 0.0
    level: float = 0.0
    l: int = 1
    gamma: float = 0.3
    sign: int = 1
    levels: tuple = ()
    breakpoints: tuple = ()
    series: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.kind == "power_after":
            if not 0 < self.gamma < 0.5:
                raise ValueError("gamma must lie in (0, 1/2)")
            if self.l < 1:
                raise ValueError("l must be >= 1")
        elif self.kind == "piecewise_constant":
            if len(self.levels) != len(self.breakpoints) or not self.levels:
                raise ValueError("levels and breakpoints must align")
        elif self.kind == "series":
            if self.series is None:
                raise ValueError("series boundary needs values")
        elif self.kind != "constant":
            raise ValueError(f"unknown boundary kind {self.kind!r}")

    @classmethod
    def constant(cls, c: float) -> "Boundary":
        return cls(kind="constant", c=c)

    @classmethod
    def power_after(cls, level: float, l: int, gamma: float, sign: int) -> "Boundary":
        return cls(kind="power_after", level=level, l=l, gamma=gamma, sign=sign)

    @classmethod
    def piecewise(cls, levels, breakpoints) -> "Boundary":
        return cls(
            kind="piecewise_constant", levels=tuple(levels), breakpoints=tuple(breakpoints)
        )

    @classmethod
    def from_series(cls, values) -> "Boundary":
        return cls(kind="series", series=np.asarray(values, dtype=np.float64))

    def value_array(self, horizon: int) -> np.ndarray:
        """Boundary values for i = 1..horizon."""
        i = np.arange(1, horizon + 1, dtype=np.float64)
        if self.kind == "constant":
            return np.full(horizon, self.c)
        if self.kind == "power_after":
            out = np.where(i <= self.l, self.level, float(self.sign) * i**self.gamma)
            return out
        if self.kind == "piecewise_constant":
            out = np.full(horizon, self.levels[-1], dtype=np.float64)
            prev = 0
            for lev, bp in zip(self.levels, self.breakpoints):
                out[prev : min(bp, horizon)] = lev
                prev = min(bp, horizon)
            return out
        if self.series.size < horizon:
            raise ValueError("series boundary shorter than horizon")
        return self.series[:horizon]

    def __call__(self, i: int) -> float:
        return float(self.value_array(i)[-1])


def first_passage(path: WalkPath, b: Boundary) -> int:
    """Smallest i >= 1 with S_i < g_i; horizon+1 sentinel when no crossing."""
    horizon = path.horizon
    below = path.values[1:] < b.value_array(horizon)
    hits = np.flatnonzero(below)
    return int(hits[0]) + 1 if hits.size else horizon + 1


def survival_counts(
    boundaries: list,
    k: int,
    reps: int,
    rng: np.random.Generator,
    block: int = 256,
    path_chunk: int = 50000,
) -> np.ndarray:
    """Paths (out of reps) that stay above each boundary through step k.

    Common random numbers: every boundary sees the same walks. Walks that have
    crossed all boundaries are dropped from further simulation; paths are
    processed in chunks to bound memory.
    """
    bvals = [b.value_array(k) for b in boundaries]
    nb = len(bvals)
    totals = np.zeros(nb, dtype=np.int64)
    done = 0
    while done < reps:
        n_paths = min(path_chunk, reps - done)
        done += n_paths
        S = np.zeros(n_paths)
        crossed = np.zeros((nb, n_paths), dtype=bool)
        active = np.arange(n_paths)
        pos = 0
        while pos < k and active.size:
            width = min(block, k - pos)
            inc = 1.0 - rng.standard_exponential((active.size, width))
            walk = S[active, None] + np.cumsum(inc, axis=1)
            for j in range(nb):
                below = (walk < bvals[j][pos : pos + width]).any(axis=1)
                crossed[j, active] |= below
            S[active] = walk[:, -1]
            pos += width
            active = active[~crossed[:, active].all(axis=0)]
        totals += (~crossed).sum(axis=1)
    return totals


@dataclass(frozen=True)
class RatioEstimate:
    ratio: float
    ci_low: float
    ci_high: float
    p_moving: float
    p_constant: float


def boundary_equivalence_ratio(
    bound_kind: str,
    l: int,
    gamma: float,
    k: int,
    reps: int,
    rng: np.random.Generator,
    theta: float = 1.0,
) -> RatioEstimate:
    """Paired MC of P(T_g > k) / P(T_const > k) for the g+ or g- boundary."""
    if bound_kind not in ("gplus", "gminus"):
        raise ValueError("bound_kind must be 'gplus' or 'gminus'")
    sign = 1 if bound_kind == "gplus" else -1
    moving = Boundary.power_after(1.0 - theta, l, gamma, sign)
    const = Boundary.constant(1.0 - theta)
    # survival under both boundaries plus joint survival, same walks
    bvals_joint = np.maximum(moving.value_array(k), const.value_array(k))
    counts = survival_counts(
        [moving, const, Boundary.from_series(bvals_joint)], k, reps, rng
    )
    s1, s2, s12 = (int(c) for c in counts)
    p1, p2, p12 = s1 / reps, s2 / reps, s12 / reps
    ratio = p1 / p2 if p2 else float("nan")
    # delta method on the paired ratio
    if s1 and s2:
        v = (
            (1 - p1) / (p1 * reps)
            + (1 - p2) / (p2 * reps)
            - 2 * (p12 - p1 * p2) / (p1 * p2 * reps)
        )
        half = 1.96 * ratio * math.sqrt(max(v, 0.0))
    else:
        half = float("nan")
    return RatioEstimate(ratio, ratio - half, ratio + half, p1, p2)


@dataclass(frozen=True)
class GiantIncrements:
    """Load-surge increments in the giant, rescaled by m+1.

    L[0] is the theta kick; L[i-1] = 0 exactly when removal i-1 fell outside
    the giant. final_remaining is (m+1) minus the running sum, tracked so the
    total-mass identity can be asserted exactly for theta = 1.
    """

    L: np.ndarray
    theta: float
    final_remaining: float

    def excursion(self) -> np.ndarray:
        """Y_i = sum over j <= i of (1 - L_j)."""
        return np.cumsum(1.0 - self.L)


def giant_increments(trace: RemovalTrace, theta: float) -> GiantIncrements:
    if trace.first_disconnect == 0:
        raise ValueError("trace must start from a connected graph")
    m = trace.m
    L = np.zeros(m + 1)
    L[0] = theta
    remaining = (m + 1.0) - theta
    ge = trace.giant_edges
    ig = trace.in_giant
    for i in range(2, m + 2):
        if ig[i - 2]:
            step = remaining / ge[i - 2]
            L[i - 1] = step
            remaining -= step
    return GiantIncrements(L=L, theta=theta, final_remaining=remaining)


def tau_m(trace: RemovalTrace, rng: np.random.Generator, theta: float) -> int:
    """First i <= m with S_i below 1-theta, where S has increments L_j - Exp_j."""
    m = trace.m
    L = giant_increments(trace, 1.0).L
    S = np.cumsum(L[:m] - rng.standard_exponential(m))
    hits = np.flatnonzero(S < 1.0 - theta)
    return int(hits[0]) + 1 if hits.size else m + 1


def tau_tail_vs_bridge(
    traces: list,
    theta: float,
    k: int,
    reps_per_trace: int,
    rng: np.random.Generator,
) -> tuple:
    """(unconditioned, bridge-conditioned) estimates of P(tau > k).

    Unconditioned uses iid exponentials; conditioned replaces them by
    spacings rescaled to total mass m+1 (the exact bridge construction).
    """
    if k == 0:
        return 1.0, 1.0
    surv_u = surv_c = total = 0
    for trace in traces:
        m = trace.m
        if k > m:
            raise ValueError("k exceeds trace length")
        L = giant_increments(trace, 1.0).L[:k]
        boundary = 1.0 - theta
        e_free = rng.standard_exponential((reps_per_trace, k))
        S = np.cumsum(L - e_free, axis=1)
        surv_u += int((S.min(axis=1) >= boundary).sum())
        e_all = rng.standard_exponential((reps_per_trace, m + 1))
        scaled = e_all[:, :k] * ((m + 1) / e_all.sum(axis=1, keepdims=True))
        S = np.cumsum(L - scaled, axis=1)
        surv_c += int((S.min(axis=1) >= boundary).sum())
        total += reps_per_trace
    return surv_u / total, surv_c / total
