import os

from cascadelab_plots.cli import main


def test_single_kind_writes_and_prints(data_dir, tmp_path, capsys):
    code = main(["--input", data_dir, "--kind", "rayleigh", "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out.splitlines()
    assert sorted(os.path.basename(p) for p in out) == ["rayleigh.png", "rayleigh.svg"]


def test_all_kinds(data_dir, tmp_path):
    assert main(["--input", data_dir, "--kind", "all", "--out", str(tmp_path)]) == 0
    assert len(os.listdir(tmp_path)) == 8


def test_missing_input_dir_is_usage_error(tmp_path):
    code = main(["--input", str(tmp_path / "nope"), "--kind", "all", "--out", str(tmp_path)])
    assert code == 1


def test_no_matching_csvs_is_usage_error(tmp_path):
    os.makedirs(tmp_path / "empty_dir")
    code = main(
        ["--input", str(tmp_path / "empty_dir"), "--kind", "rayleigh", "--out", str(tmp_path)]
    )
    assert code == 1


def test_schema_error_exit_code(tmp_path, capsys):
    bad_dir = tmp_path / "csvs"
    os.makedirs(bad_dir)
    (bad_dir / "tails_bad.csv").write_text("k,wrong\n1,2\n")
    code = main(["--input", str(bad_dir), "--kind", "tail-flatness", "--out", str(tmp_path)])
    assert code == 2
    assert "header mismatch" in capsys.readouterr().err
