import math

import numpy as np
import pytest

from cascadelab.generate import (
    ConnectivitySamplingError,
    chained_stars,
    connected_acceptance_rate,
    er_extinction_prob,
    er_giant_fraction,
    er_giant,
    erased_cm_degrees,
    erased_connected_cm,
    explode,
    half_two_three,
    percolate,
    sample_connected_cm,
    square_lattice,
    star,
)
from cascadelab.graphs import DegreeSequence, degree_stats, is_connected


class TestConnectedSampler:
    def test_sample_is_connected(self, rng):
        g = sample_connected_cm(half_two_three(40), rng)
        assert is_connected(g)
        assert g.m == 50

    def test_two_vertex_acceptance_rate(self, rng):
        # degrees (2,2): 3 matchings, 2 connected (parallel pair), 1 not
        seq = DegreeSequence([2, 2])
        rate = connected_acceptance_rate(seq, rng, reps=1500)
        assert abs(rate - 2 / 3) < 4 * math.sqrt((2 / 3) * (1 / 3) / 1500)

    def test_impossible_sequence_raises(self, rng):
        # two disjoint edges, never one component
        seq = DegreeSequence([1, 1, 1, 1])
        with pytest.raises(ConnectivitySamplingError) as exc:
            sample_connected_cm(seq, rng, max_attempts=20)
        assert exc.value.attempts == 20

    def test_return_attempts(self, rng):
        g, attempts = sample_connected_cm(
            half_two_three(40), rng, return_attempts=True
        )
        assert attempts >= 1 and is_connected(g)


class TestErasedModel:
    def test_simple_connected_compact(self, rng):
        g = erased_connected_cm(erased_cm_degrees(400), rng)
        assert is_connected(g)
        e = np.sort(g.edges, axis=1)
        assert (e[:, 0] != e[:, 1]).all()  # no self-loops
        assert np.unique(e, axis=0).shape[0] == g.m  # no parallel edges
        assert g.degree.min() >= 1  # compact relabeling leaves no strays

    def test_recipe_edge_budget(self):
        seq = erased_cm_degrees(4000)
        assert seq.n == pytest.approx(4000, abs=2)
        assert seq.m == pytest.approx(5 * 4000 / 4, rel=0.02)
        assert seq.total_degree % 2 == 0


class TestPercolation:
    def test_endpoints(self, rng):
        g = square_lattice(10)
        assert percolate(g, 0.0, rng).m == g.m
        assert percolate(g, 1.0, rng).m == 0

    def test_binomial_edge_count(self, rng):
        g = square_lattice(100)
        kept = percolate(g, 0.3, rng).m
        mean, sd = 0.7 * g.m, math.sqrt(g.m * 0.3 * 0.7)
        assert abs(kept - mean) < 5 * sd

    def test_q_out_of_range(self, rng):
        with pytest.raises(ValueError):
            percolate(square_lattice(3), 1.5, rng)


class TestExplosion:
    def test_half_edge_probability_exact_at_q_019(self):
        assert 1 - math.sqrt(1 - 0.19) == pytest.approx(0.1)

    def test_shapes_and_counts(self, rng):
        seq = half_two_three(400)
        out = explode(seq, 0.19, rng, keep_intermediate=True)
        assert out.exploded_sequence.n == seq.n + out.R_n
        assert out.intermediate.n == seq.n + out.R_n
        assert out.graph.n == seq.n  # exactly R_n vertices removed
        assert out.intermediate.m - out.graph.m <= out.R_n

    def test_r_n_mean(self, rng):
        seq = half_two_three(400)
        r = np.array([explode(seq, 0.19, rng).R_n for _ in range(300)])
        mean, sd = 0.1 * seq.total_degree, math.sqrt(seq.total_degree * 0.1 * 0.9)
        assert abs(r.mean() - mean) < 5 * sd / math.sqrt(300)

    def test_degree_one_first_moment(self, rng):
        # expected degree-1 count in the augmented sequence is i*(1 + 2*p2/d)
        seq = half_two_three(4000)
        i = 50.0
        q = i / seq.m
        n1 = [
            int(np.sum(explode(seq, q, rng).exploded_sequence.degrees == 1))
            for _ in range(300)
        ]
        assert np.mean(n1) == pytest.approx(i * 1.4, rel=0.1)

    def test_q_validation(self, rng):
        with pytest.raises(ValueError):
            explode(half_two_three(8), 1.0, rng)


class TestFixedTopologies:
    def test_star(self):
        g = star(6)
        assert (g.n, g.m) == (7, 6)
        assert g.degree[0] == 6 and (g.degree[1:] == 1).all()

    def test_square_lattice(self):
        g = square_lattice(4)
        assert (g.n, g.m) == (16, 2 * 4 * 3)
        assert is_connected(g)

    def test_chained_stars(self):
        g = chained_stars(10, 4)
        assert (g.n, g.m) == (50, 50)
        assert is_connected(g)
        assert (np.sort(g.degree)[-10:] == 6).all()  # hubs: 2 ring + 4 spokes

    def test_size_validation(self):
        for bad in (lambda: star(0), lambda: chained_stars(0, 4)):
            with pytest.raises(ValueError):
                bad()


class TestErdosRenyi:
    def test_fixed_points_complementary(self):
        giant = er_giant_fraction(2.0)
        ext = er_extinction_prob(2.0)
        assert giant == pytest.approx(0.79681213, abs=1e-6)
        assert ext == pytest.approx(1 - giant, abs=1e-8)

    def test_giant_fraction_matches_fixed_point(self, rng):
        fracs = [er_giant(20000, 2.0, rng).n / 20000 for _ in range(5)]
        assert np.mean(fracs) == pytest.approx(er_giant_fraction(2.0), abs=0.02)

    def test_giant_is_connected(self, rng):
        assert is_connected(er_giant(2000, 2.0, rng))

    def test_subcritical_rejected(self, rng):
        with pytest.raises(ValueError):
            er_giant(100, 0.9, rng)


def test_half_two_three_stats():
    stats = degree_stats(half_two_three(400))
    assert (stats.p2, stats.d_bar) == (0.5, 2.5)
    with pytest.raises(ValueError):
        half_two_three(42)
