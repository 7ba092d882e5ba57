import math

import numpy as np
import pytest

from cascadelab.harness import (
    ExperimentSpec,
    build_graph,
    degree_sequence_for,
    parse_k_grid,
    read_config,
    rep_rng,
    run_census_moments,
    run_connectivity,
    run_failure_tail,
    run_first_disconnect,
    run_fpt,
    run_outside_giant,
    wilson_ci,
    write_fpt_csv,
    write_tail_csv,
)


def small_spec(**kw):
    base = dict(
        graph_spec={"family": "cm", "n": 40},
        theta=1.0,
        reps=40,
        k_grid=parse_k_grid(["5", "f:0.5"]),
        master_seed=314,
    )
    base.update(kw)
    return ExperimentSpec(**base)


class TestSpecAndGrids:
    def test_parse_k_grid(self):
        grid = parse_k_grid(["10", "f:0.25", "200"])
        assert grid == (("abs", 10), ("frac", 0.25), ("abs", 200))

    def test_unsorted_abs_grid_rejected(self):
        with pytest.raises(ValueError):
            small_spec(k_grid=parse_k_grid(["20", "10"]))

    def test_reps_positive(self):
        with pytest.raises(ValueError):
            small_spec(reps=0)


class TestWilson:
    def test_bounds_bracket_estimate(self):
        lo, hi = wilson_ci(8, 10)
        assert 0.0 <= lo < 0.8 < hi <= 1.0

    def test_degenerate(self):
        lo, hi = wilson_ci(0, 10)
        assert lo == pytest.approx(0.0, abs=1e-12)
        assert math.isnan(wilson_ci(0, 0)[0])

    def test_coverage(self):
        # 95% interval should cover the truth roughly 95% of the time
        rng = np.random.default_rng(0)
        p = 0.3
        cover = 0
        reps = 800
        for _ in range(reps):
            lo, hi = wilson_ci(int(rng.binomial(30, p)), 30)
            cover += lo <= p <= hi
        assert 0.90 <= cover / reps <= 0.99


class TestSeeding:
    def test_rep_rng_matches_spawned_streams(self):
        a = rep_rng(99, 3).random(5)
        ss = np.random.SeedSequence(99).spawn(10)
        b = np.random.default_rng(ss[3]).random(5)
        assert np.array_equal(a, b)

    def test_threads_do_not_change_results(self):
        est1, f1, m1 = run_failure_tail(small_spec(reps=16, threads=1))
        est2, f2, m2 = run_failure_tail(small_spec(reps=16, threads=2))
        assert (f1, m1) == (f2, m2)
        assert [(e.k, e.p_hat) for e in est1] == [(e.k, e.p_hat) for e in est2]


class TestRunners:
    def test_failure_tail_shapes(self):
        estimates, n_failed, m_nominal = run_failure_tail(small_spec())
        assert m_nominal == 50
        assert n_failed == 0
        assert [e.k for e in estimates] == [5, 25]
        for e in estimates:
            assert 0.0 <= e.p_hat <= 1.0
            assert e.ci_low <= e.p_hat <= e.ci_high

    def test_first_disconnect(self):
        spec = small_spec(reps=60, k_grid=())
        samples, ks_stat, n_failed = run_first_disconnect(spec)
        assert samples.size == 60 - n_failed
        assert 0.0 <= ks_stat <= 1.0
        assert (samples > 0).all()

    def test_outside_giant_rows(self):
        spec = small_spec(reps=30, k_grid=(), checkpoints=(5, 10))
        rows = run_outside_giant(spec)
        assert [r[0] for r in rows] == [5, 10]
        for _, mean, se, theory in rows:
            assert mean >= 0 and se >= 0
            assert theory == pytest.approx(4 / 9)

    def test_census_rows(self):
        spec = small_spec(
            graph_spec={"family": "cm", "n": 400}, reps=10, k_grid=(), extra={"i": 30}
        )
        rows = run_census_moments(spec, k_values=(2, 3))
        assert [r[0] for r in rows] == [2, 3]
        assert rows[0][2] == pytest.approx(
            30 * 30 / 500 * 0.25 * 1.4**2
        )

    def test_connectivity_deterministic(self):
        spec = small_spec(reps=30, k_grid=())
        rows_a = run_connectivity(spec, [0.5, 1.0])
        rows_b = run_connectivity(spec, [0.5, 1.0])
        assert rows_a == rows_b
        for c, p, se, theory in rows_a:
            assert 0 <= p <= 1
            assert theory == pytest.approx(math.exp(-2 * c * c * 0.5 / 1.5))

    def test_fpt_pathwise_ordering(self):
        rows = run_fpt(1.0, 500, 3000, master_seed=4)
        by_name = {name: p for _, name, p, _, _ in rows}
        assert set(by_name) == {"constant", "gplus", "gminus"}
        assert by_name["gplus"] <= by_name["constant"] <= by_name["gminus"]


class TestFamilies:
    def test_degree_sequence_for(self):
        seq = degree_sequence_for({"family": "cm", "counts": {2: 4, 3: 4}})
        assert seq.counts == {2: 4, 3: 4}
        assert degree_sequence_for({"family": "star"}) is None

    def test_build_graph_families(self, rng):
        assert build_graph({"family": "star", "m": 7}, rng).m == 7
        assert build_graph({"family": "lattice", "side": 3}, rng).n == 9
        assert build_graph({"family": "chained-stars", "n": 5}, rng).m == 25
        g = build_graph({"family": "er-giant", "n": 500, "lam": 2.0}, rng)
        assert 0 < g.n <= 500

    def test_unknown_family(self, rng):
        with pytest.raises(ValueError):
            build_graph({"family": "torus"}, rng)


class TestCsvAndConfig:
    def test_tail_csv_format(self, tmp_path):
        estimates, n_failed, m_nominal = run_failure_tail(small_spec())
        path = tmp_path / "tails.csv"
        write_tail_csv(path, estimates, {"n": 40, "m": m_nominal}, 314)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# version=")
        assert "master_seed=314" in lines[0]
        assert "m=50" in lines[0]
        assert lines[1] == "k,p_hat,se,ci_low,ci_high,theory"
        assert len(lines) == 2 + len(estimates)

    def test_fpt_csv_format(self, tmp_path):
        rows = run_fpt(1.0, 100, 500, master_seed=1)
        path = tmp_path / "fpt.csv"
        write_fpt_csv(path, rows, {"k": 100}, 1)
        lines = path.read_text().splitlines()
        assert lines[1] == "k,boundary,p_hat,se,theory"
        assert lines[2].split(",")[1] == "constant"

    def test_read_config(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("reps=250  # replication count\nfamily=cm\n\nn=80\n")
        assert read_config(path) == {"reps": "250", "family": "cm", "n": "80"}

    def test_read_config_bad_line(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("just-a-token\n")
        with pytest.raises(ValueError):
            read_config(path)
