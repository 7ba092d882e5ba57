import math

import numpy as np
import pytest

from cascadelab.generate import half_two_three
from cascadelab.graphs import MultiGraph, component_labels, pair_half_edges
from cascadelab.theory import (
    DomainError,
    TheoryContext,
    beta_alpha,
    connectivity_probs,
    disconnect_constant,
    line_first_moment,
    outside_giant_constants,
    rayleigh_cdf,
    rayleigh_pdf,
    rho,
    rho_printed,
    star_tail,
    tail_constant,
    xi,
    xi_integral,
    xi_printed,
)


class TestConstants:
    def test_tail_constant(self):
        assert tail_constant(1.0) == pytest.approx(0.7978845608, abs=1e-9)
        assert tail_constant(2.5) == pytest.approx(2.5 * tail_constant(1.0))

    def test_star_tail(self):
        assert star_tail(10**4, 100, 1.0) == pytest.approx(0.0793885, abs=1e-6)
        assert star_tail(10**4, 1, 1.0) == pytest.approx(
            tail_constant(1.0) * math.sqrt(0.9999), abs=1e-9
        )

    def test_disconnect_constant(self):
        # 0.798 * (2/3)^{1/4} * Gamma(3/4) at p2=0.5, d=2.5
        assert disconnect_constant(1.0, 0.5, 2.5, 1) == pytest.approx(
            0.883492, abs=1e-5
        )
        assert disconnect_constant(1.0, 0.5, 2.5, 10**4) == pytest.approx(
            0.883492 / 10, abs=1e-5
        )

    def test_outside_giant(self):
        c = outside_giant_constants(0.5, 2.5)
        assert c["edges_in_lines"] == pytest.approx(4 / 9)
        assert c["vertices_outside"] == pytest.approx(2.5 / 2.25)

    def test_line_first_moment(self):
        assert line_first_moment(2, 0.5, 2.5, 1000, 10**5) == pytest.approx(4.9)
        assert line_first_moment(3, 0.5, 2.5, 1000, 10**5) == pytest.approx(4.9 * 0.4)

    def test_connectivity_probs(self):
        uncond, cond = connectivity_probs(1.0, 0.5, 2.5)
        assert cond == pytest.approx(math.exp(-2 / 3), abs=1e-12)
        assert uncond == pytest.approx(math.sqrt(0.6) * cond, abs=1e-12)


class TestRayleigh:
    def test_point_values(self):
        assert rayleigh_pdf(1.0, 0.5, 2.5) == pytest.approx(0.6845562, abs=1e-6)
        assert rayleigh_cdf(1.0, 0.5, 2.5) == pytest.approx(1 - math.exp(-2 / 3))
        assert rayleigh_cdf(0.0, 0.5, 2.5) == 0.0
        assert rayleigh_cdf(50.0, 0.5, 2.5) == pytest.approx(1.0)

    def test_pdf_is_cdf_derivative(self):
        h = 1e-6
        for x in (0.3, 1.0, 2.2):
            num = (rayleigh_cdf(x + h, 0.5, 2.5) - rayleigh_cdf(x - h, 0.5, 2.5)) / (2 * h)
            assert num == pytest.approx(rayleigh_pdf(x, 0.5, 2.5), rel=1e-5)

    def test_pdf_integrates_to_one(self):
        x = np.linspace(0, 12, 20001)
        y = np.array([rayleigh_pdf(v, 0.5, 2.5) for v in x])
        assert np.trapezoid(y, x) == pytest.approx(1.0, abs=1e-6)


class TestDomain:
    def test_guards(self):
        with pytest.raises(DomainError):
            tail_constant(0.0)
        with pytest.raises(DomainError):
            star_tail(100, 100, 1.0)
        with pytest.raises(DomainError):
            rayleigh_pdf(-1.0, 0.5, 2.5)
        with pytest.raises(DomainError):
            outside_giant_constants(0.5, 1.0)
        with pytest.raises(DomainError):
            TheoryContext(p2=0.5, d=1.0)


class TestGiantFraction:
    def setup_method(self):
        self.seq = half_two_three(400)

    def test_rho_solves_its_equation(self):
        from cascadelab.graphs import degree_stats

        stats = degree_stats(self.seq)
        for q in (0.05, 0.1, 0.2):
            r = rho(q, self.seq)
            s = math.sqrt(1 - q)
            resid = s * stats.pgf_prime(1 - s + r * s) + (1 - s) * stats.d_bar - r * stats.d_bar
            assert abs(resid) < 1e-9
            assert 0 <= r < 1

    def test_no_removal_limits(self):
        assert rho(0.0, self.seq) == pytest.approx(0.0, abs=1e-9)
        assert xi(0.0, self.seq) == pytest.approx(1.0, abs=1e-9)

    def test_xi_decreases_in_q(self):
        vals = [xi(q, self.seq) for q in (0.0, 0.05, 0.1, 0.2, 0.3)]
        assert vals == sorted(vals, reverse=True)

    def test_xi_frozen_value(self):
        assert xi(0.1, self.seq) == pytest.approx(0.9910413385, abs=1e-6)

    def test_xi_against_percolation_mc(self, rng):
        # giant edge fraction of the percolated pairing, q = 0.1
        seq = half_two_three(4000)
        q = 0.1
        fracs = []
        for _ in range(60):
            g = pair_half_edges(seq, rng)
            keep = rng.random(g.m) >= q
            sub = MultiGraph(g.n, g.edges[keep])
            labels = component_labels(sub)
            ec = np.bincount(labels[sub.edges[:, 0]], minlength=labels.max() + 1)
            fracs.append(ec.max() / sub.m)
        assert np.mean(fracs) == pytest.approx(xi(0.1, self.seq), rel=0.05)

    def test_printed_form_disagrees_near_zero(self):
        # documented discrepancy: the literal form does not reduce to 1
        assert xi_printed(0.01, self.seq) > 1.4
        assert 0 <= rho_printed(0.01, self.seq) <= 1

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            rho(0.375, self.seq)  # at or beyond q_c


class TestBetaAlpha:
    def setup_method(self):
        self.seq = half_two_three(400)

    def test_inverts_integral(self):
        for alpha in (0.05, 0.15, 0.3):
            x = beta_alpha(alpha, self.seq)
            assert xi_integral(x, self.seq) == pytest.approx(alpha, abs=1e-6)

    def test_monotone(self):
        xs = [beta_alpha(a, self.seq) for a in (0.01, 0.1, 0.2, 0.3)]
        assert xs == sorted(xs)
        assert beta_alpha(0.0, self.seq) == 0.0

    def test_alpha_beyond_reach(self):
        with pytest.raises(DomainError):
            beta_alpha(10.0, self.seq)
