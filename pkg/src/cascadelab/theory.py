"""Closed-form constants, densities, and solvers used as Monte Carlo overlays."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import DegreeSequence, DegreeStats, degree_stats


class DomainError(ValueError):
    """Formula evaluated outside its domain (e.g. d <= 2*p2)."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


@dataclass(frozen=True)
class TheoryContext:
    """Parameter bundle for the (p2, d, theta)-denominated formulas."""

    p2: float
    d: float
    theta: float = 1.0
    seq: DegreeSequence | None = None

    def __post_init__(self):
        _require(self.d > 2 * self.p2, "need d > 2*p2")


def tail_constant(theta: float) -> float:
    """Limiting value of k^(1/2) * P(failure size >= k): 2*theta/sqrt(2*pi)."""
    _require(theta > 0, "theta must be positive")
    return 2 * theta / math.sqrt(2 * math.pi)


def star_tail(m: int, k: int, theta: float) -> float:
    """Tail approximation for the star cascade: depends on the leaf count only."""
    _require(1 <= k <= m - 1, "need 1 <= k <= m-1")
    return tail_constant(theta) * math.sqrt((m - k) / m) / math.sqrt(k)


def disconnect_constant(theta: float, p2: float, d: float, m: int) -> float:
    """Probability that the cascade disconnects the graph, to leading order."""
    _require(d > 2 * p2, "need d > 2*p2")
    return (
        tail_constant(theta)
        * (2 * p2 / (d - 2 * p2)) ** 0.25
        * math.gamma(0.75)
        * m ** -0.25
    )


def rayleigh_pdf(x: float, p2: float, d: float) -> float:
    """Density of the scaled first-disconnection time."""
    _require(d > 2 * p2, "need d > 2*p2")
    _require(x >= 0, "x must be non-negative")
    a = 2 * p2 / (d - 2 * p2)
    return 2 * a * x * math.exp(-a * x * x)


def rayleigh_cdf(x: float, p2: float, d: float) -> float:
    _require(d > 2 * p2, "need d > 2*p2")
    if x <= 0:
        return 0.0
    a = 2 * p2 / (d - 2 * p2)
    return 1.0 - math.exp(-a * x * x)


def outside_giant_constants(p2: float, d: float) -> dict:
    """Limits of (m/i^2) * (edges in lines) and (m/i^2) * (vertices outside)."""
    _require(d > 2 * p2, "need d > 2*p2")
    denom = (d - 2 * p2) ** 2
    return {
        "edges_in_lines": 4 * p2 * p2 / denom,
        "vertices_outside": 2 * d * p2 / denom,
    }


def line_first_moment(k: int, p2: float, d: float, i: float, m: float) -> float:
    """Expected number of k-vertex line components after ~i removals."""
    _require(d > 2 * p2, "need d > 2*p2")
    _require(k >= 2, "lines have at least 2 vertices")
    return (i * i / m) * 0.25 * (1 + 2 * p2 / d) ** 2 * (2 * p2 / d) ** (k - 2)


def connectivity_probs(c: float, p2: float, d: float) -> tuple:
    """(unconditioned, conditioned) survival of connectivity at q = c/sqrt(m)."""
    _require(c > 0, "c must be positive")
    _require(d > 2 * p2, "need d > 2*p2")
    conditioned = math.exp(-2 * c * c * p2 / (d - 2 * p2))
    unconditioned = math.sqrt((d - 2 * p2) / d) * conditioned
    return unconditioned, conditioned


# --- giant-edge fraction under percolation ----------------------------------

def _bisect(f, lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if hi - lo < tol:
            return mid
        if (flo <= 0) == (fm <= 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _extinction_equation(stats: DegreeStats, q: float):
    s = math.sqrt(1.0 - q)
    d = stats.d_bar

    def f(rho):
        return s * stats.pgf_prime(1 - s + rho * s) + (1 - s) * d - rho * d

    return f


def rho(q: float, seq: DegreeSequence) -> float:
    """Extinction root of the exploded-model branching process.

    Smallest root in [0, 1) of s*G_D'(1-s+rho*s) + (1-s)*d = rho*d with
    s = sqrt(1-q); rho = 1 always solves it trivially and is excluded.
    """
    stats = degree_stats(seq)
    _require(stats.q_c is not None, "sequence subcritical without removal")
    _require(0 <= q < stats.q_c, "q must lie below q_c")
    f = _extinction_equation(stats, q)
    if abs(f(0.0)) < 1e-12:
        return 0.0
    # first sign change on a fine grid, then bisection
    grid = 1024
    prev = f(0.0)
    for j in range(1, grid + 1):
        x = j / grid * (1 - 1e-9)
        cur = f(x)
        if (prev <= 0) != (cur <= 0):
            return _bisect(f, (j - 1) / grid * (1 - 1e-9), x, 1e-12)
        prev = cur
    raise DomainError("no extinction root below 1 (subcritical at this q)")


def rho_printed(q: float, seq: DegreeSequence) -> float:
    """Literal root equation s*G_D'(1-s-rho*s) + (1-s)*d = rho*d.

    Kept for comparison: it does not reduce to the percolation-free limit
    (see xi_printed); the MC-validated solver is `rho`.
    """
    stats = degree_stats(seq)
    s = math.sqrt(1.0 - q)
    d = stats.d_bar

    def f(r):
        return s * stats.pgf_prime(1 - s - r * s) + (1 - s) * d - r * d

    grid = 1024
    prev = f(0.0)
    for j in range(1, grid + 1):
        x = j / grid
        cur = f(x)
        if (prev <= 0) != (cur <= 0):
            return _bisect(f, (j - 1) / grid, x, 1e-12)
        prev = cur
    raise DomainError("no root in [0, 1]")


def xi(q: float, seq: DegreeSequence) -> float:
    """Limiting fraction of surviving edges that lie in the giant.

    Derived from the explosion construction: with r the extinction root,
    xi = (1-r)(2*sqrt(1-q)-1+r)/(1-q). Satisfies xi -> 1 as q -> 0 for
    min-degree-2 sequences and is validated against the percolation MC oracle.
    """
    r = rho(q, seq)
    s = math.sqrt(1.0 - q)
    return (1 - r) * (2 * s - 1 + r) / (1 - q)


def xi_printed(q: float, seq: DegreeSequence) -> float:
    """Literal closed form (1-rho)/sqrt(1-q) + (1-rho)^2/2.

    Does not give xi -> 1 at q -> 0 (it gives 1.5 for min-degree-2
    sequences); exposed for comparison only, never used as an overlay.
    """
    r = rho_printed(q, seq)
    return (1 - r) / math.sqrt(1 - q) + (1 - r) ** 2 / 2


def _adaptive_simpson(f, a: float, b: float, tol: float) -> float:
    def simpson(lo, hi):
        mid = 0.5 * (lo + hi)
        return (hi - lo) / 6 * (f(lo) + 4 * f(mid) + f(hi)), mid

    def recurse(lo, hi, whole, depth):
        mid = 0.5 * (lo + hi)
        left, _ = simpson(lo, mid)
        right, _ = simpson(mid, hi)
        if depth > 40 or abs(left + right - whole) < 15 * tol:
            return left + right + (left + right - whole) / 15
        return recurse(lo, mid, left, depth + 1) + recurse(mid, hi, right, depth + 1)

    whole, _ = simpson(a, b)
    return recurse(a, b, whole, 0)


def xi_integral(x: float, seq: DegreeSequence) -> float:
    """Integral of xi over removal levels [0, x]."""
    if x <= 0:
        return 0.0
    return _adaptive_simpson(lambda q: xi(q, seq), 0.0, x, 1e-10)


def beta_alpha(alpha: float, seq: DegreeSequence) -> float:
    """Smallest x with the integral of xi over [0, x] equal to alpha."""
    _require(alpha >= 0, "alpha must be non-negative")
    if alpha == 0:
        return 0.0
    stats = degree_stats(seq)
    hi = stats.q_c * (1 - 1e-9)
    total = xi_integral(hi, seq)
    _require(alpha <= total, "alpha exceeds the integral of xi up to q_c")
    return _bisect(lambda x: xi_integral(x, seq) - alpha, 0.0, hi, 1e-8)
