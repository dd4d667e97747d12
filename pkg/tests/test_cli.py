"""Tests for the command-line surface: config handling, dimension
reports, verification suites and exit codes, artifact dumps, and the
symbolic straightening trace."""

import json

import pytest

from blobcell import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConfig:
    def test_config_file_round_trip(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text(
            "# scale\nn = 3\nl = 2\noracle = off\nkappa-hat = 0, 7\n")
        args = cli.build_parser().parse_args(
            ["dims", "--config", str(cfgfile)])
        cfg = cli.config_from_args(args)
        assert (cfg.n, cfg.l) == (3, 2)
        assert cfg.kappa_hat == (0, 7)
        assert cfg.oracle is False

    def test_flags_override_config(self, tmp_path):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("n=2\nl=2\n")
        args = cli.build_parser().parse_args(
            ["dims", "--config", str(cfgfile), "--n", "3"])
        assert cli.config_from_args(args).n == 3

    def test_missing_scale_rejected(self):
        args = cli.build_parser().parse_args(["dims", "--l", "2"])
        with pytest.raises(ValueError):
            cli.config_from_args(args)

    def test_bad_suite_rejected(self):
        args = cli.build_parser().parse_args(
            ["verify", "--n", "2", "--l", "2", "--suite", "all"])
        cfg = cli.config_from_args(args)
        assert cfg.suite == "all"
        args.suite = "bogus"
        with pytest.raises(ValueError):
            cli.config_from_args(args)


class TestDims:
    def test_three_strings_level_two(self, capsys):
        code, out, _ = run(["dims", "--n", "3", "--l", "2"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["dim_H"] == 48
        assert report["dim_B"] == 20
        assert report["num_shapes"] == 4

    def test_zero_strings(self, capsys):
        code, out, _ = run(["dims", "--n", "0", "--l", "2"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["dim_H"] == 1 and report["dim_B"] == 1

    def test_level_three(self, capsys):
        _, out, _ = run(["dims", "--n", "3", "--l", "3"], capsys)
        assert json.loads(out)["dim_B"] == 93

    def test_deterministic_modulo_timestamp(self, capsys):
        _, out1, _ = run(["dims", "--n", "2", "--l", "2"], capsys)
        _, out2, _ = run(["dims", "--n", "2", "--l", "2"], capsys)
        a, b = json.loads(out1), json.loads(out2)
        a.pop("timestamp"), b.pop("timestamp")
        assert a == b


class TestVerify:
    def test_all_suites_pass_at_two_strings(self, capsys):
        code, out, _ = run(["verify", "--n", "2", "--l", "2", "--e", "5",
                            "--p", "11", "--kappa-hat", "0,2"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["passed"]
        assert set(report["suites"]) == {"hecke", "klr", "cellular", "jm",
                                         "rewrite"}
        assert all(s["passed"] and not s["failures"]
                   for s in report["suites"].values())

    def test_adjacent_multicharge_rejected(self, capsys):
        code, _, err = run(["verify", "--n", "2", "--l", "2", "--e", "5",
                            "--p", "11", "--kappa-hat", "0,11"], capsys)
        assert code == 2
        assert "condition ii)" in err

    def test_rewrite_suite_with_oracle(self, capsys):
        code, out, _ = run(["verify", "--n", "3", "--l", "2", "--suite",
                            "rewrite", "--oracle", "on"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["suites"]["rewrite"]["passed"]

    def test_single_suite_selection(self, capsys):
        code, out, _ = run(["verify", "--n", "2", "--l", "2", "--suite",
                            "hecke"], capsys)
        assert code == 0
        assert set(json.loads(out)["suites"]) == {"hecke"}


class TestArtifacts:
    def test_basis_two_strings(self, capsys):
        code, out, _ = run(["basis", "--n", "2", "--l", "2"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["dim"] == 6
        assert len(report["vectors"]) == 6
        assert all(len(v["vector"]) == 6 for v in report["vectors"])

    def test_basis_csv_dump(self, tmp_path, capsys):
        out_json = tmp_path / "basis.csv"
        code, _, _ = run(["basis", "--n", "2", "--l", "2", "--out",
                          str(out_json)], capsys)
        assert code == 0
        rows = out_json.read_text().strip().splitlines()
        assert len(rows) == 6
        assert all(len(r.split(",")) == 6 for r in rows)

    def test_cell_table_level_three(self, capsys):
        code, out, _ = run(["cell", "--n", "3", "--l", "3"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["dim_check"]
        assert len(report["modules"]) == 10
        assert sum(m["dim"] ** 2 for m in report["modules"]) == 93

    def test_report_written_to_file(self, tmp_path, capsys):
        path = tmp_path / "dims.json"
        code, out, _ = run(["dims", "--n", "2", "--l", "2", "--out",
                            str(path)], capsys)
        assert code == 0 and not out
        assert json.loads(path.read_text())["dim_B"] == 6


class TestTrace:
    def test_symbolic_trace_at_22_strings(self, capsys):
        code, out, _ = run(["trace", "--n", "22", "--l", "4", "--e", "10",
                            "--p", "11", "--kappa-hat", "0,22,44,67",
                            "--k", "5"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["mode"] == "symbolic"
        assert report["zero"]
        assert report["trace"]["terminal"] == ["0"]
        assert any(s["rule"] == "dot-jump" for s in report["trace"]["steps"])

    def test_exact_trace_certified_at_small_scale(self, capsys):
        code, out, _ = run(["trace", "--n", "2", "--l", "2", "--k", "2",
                            "--oracle", "on"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["mode"] == "exact" and report["zero"]
