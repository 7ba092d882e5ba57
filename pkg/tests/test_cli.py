import os

import pytest

from cascadelab.cli import OUT_DIR_ENV, main
from cascadelab.graphs import read_edge_list


def run(*argv):
    return main(list(argv))


class TestTheorySubcommand:
    def test_tail_constant(self, capsys):
        assert run("theory", "--what", "tail-constant") == 0
        assert capsys.readouterr().out.strip() == "0.7978845608"

    def test_star_tail(self, capsys):
        assert run("theory", "--what", "star-tail", "--m", "10000", "--k", "100") == 0
        assert abs(float(capsys.readouterr().out) - 0.0793885) < 1e-6

    def test_xi(self, capsys):
        assert run("theory", "--what", "xi", "--q", "0.1", "--n", "400") == 0
        assert abs(float(capsys.readouterr().out) - 0.9910413385) < 1e-6

    def test_domain_error_is_runtime_failure(self, capsys):
        assert run("theory", "--what", "star-tail", "--k", "0") == 2


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert run("cascade-tail") == 1  # missing --out

    def test_unknown_subcommand(self, capsys):
        assert run("no-such-command") == 1

    def test_runtime_error(self, tmp_path, capsys):
        # degrees (1,1,1,1) can never form a connected graph
        out = tmp_path / "t.csv"
        code = run(
            "cascade-tail",
            "--family", "cm",
            "--counts", "1:4",
            "--reps", "3",
            "--k", "1",
            "--out", str(out),
        )
        assert code == 2

    def test_version_flag(self, capsys):
        assert run("--version") == 0


class TestExperimentCommands:
    def test_cascade_tail_csv(self, tmp_path):
        out = tmp_path / "tails.csv"
        per_rep = tmp_path / "per_rep.csv"
        code = run(
            "cascade-tail",
            "--n", "40",
            "--k", "5,f:0.5",
            "--reps", "25",
            "--seed", "7",
            "--out", str(out),
            "--per-rep-out", str(per_rep),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "k,p_hat,se,ci_low,ci_high,theory"
        assert len(lines) == 4
        assert "m=50" in lines[0]
        rep_lines = per_rep.read_text().splitlines()
        assert rep_lines[0] == "rep,m,theta,A,A_hat,A_tilde,T,reached_disconnection"
        assert len(rep_lines) == 26

    def test_first_disconnect_csv(self, tmp_path):
        out = tmp_path / "disconnect.csv"
        assert run("first-disconnect", "--n", "40", "--reps", "30", "--out", str(out)) == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "rep,t_scaled"
        assert "ks_stat=" in lines[0]

    def test_outside_giant_csv(self, tmp_path):
        out = tmp_path / "outside.csv"
        code = run(
            "outside-giant", "--n", "40", "--checkpoints", "5,10",
            "--reps", "20", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "i,ratio_mean,ratio_se,theory"
        assert len(lines) == 4

    def test_census_csv(self, tmp_path):
        out = tmp_path / "census.csv"
        code = run(
            "census", "--n", "400", "--i", "30", "--line-sizes", "2,3",
            "--reps", "5", "--out", str(out),
        )
        assert code == 0
        assert out.read_text().splitlines()[1] == "k,count_mean,theory"

    def test_connectivity_csv(self, tmp_path):
        out = tmp_path / "conn.csv"
        code = run("connectivity", "--n", "40", "--c", "0.5,1.0", "--reps", "20", "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "c,p_hat,se,theory"
        assert len(lines) == 4

    def test_fpt_csv_with_power_l(self, tmp_path):
        out = tmp_path / "fpt.csv"
        code = run(
            "fpt", "--k", "200", "--l", "k^0.6", "--reps", "500",
            "--boundary", "constant", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "k,boundary,p_hat,se,theory"
        assert len(lines) == 3

    def test_graph_gen_roundtrip(self, tmp_path):
        out = tmp_path / "g.edges"
        assert run("graph-gen", "--family", "star", "--m", "5", "--out", str(out)) == 0
        g = read_edge_list(out)
        assert (g.n, g.m) == (6, 5)


class TestConfigAndEnv:
    def test_out_dir_env_for_bare_names(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUT_DIR_ENV, str(tmp_path))
        monkeypatch.chdir(tmp_path)
        assert run("graph-gen", "--family", "star", "--m", "3", "--out", "g.edges") == 0
        assert (tmp_path / "g.edges").exists()

    def test_env_ignored_for_paths(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUT_DIR_ENV, str(tmp_path / "elsewhere"))
        out = tmp_path / "direct.edges"
        assert run("graph-gen", "--family", "star", "--m", "3", "--out", str(out)) == 0
        assert out.exists()

    def test_config_defaults_and_flag_priority(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("reps=11\nn=40\nk=5\n")
        out = tmp_path / "tails.csv"
        code = run(
            "cascade-tail", "--config", str(cfg), "--reps", "9", "--out", str(out)
        )
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert "reps=9" in header  # explicit flag wins
        assert "n=40" in header  # config fills the rest
