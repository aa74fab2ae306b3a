"""Test module for the command-line front end."""
import json

import pandas as pd
import pytest

from pynd import cli
from pynd import graph
from tests.utils import load_graph

GNAME = "cli"


@pytest.fixture
def example_path(tmp_path):
    path = str(tmp_path / "example.txt")
    graph.write_edge_list(load_graph("example"), path)
    return path


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _decompose(capsys, *argv):
    assert cli.main(["decompose"] + list(argv)) == cli.EXIT_OK
    return json.loads(capsys.readouterr().out)


class TestDecompose:
    """TestClass dedicated to the decompose subcommand."""

    def test_example_report(self, capsys, example_path):
        report = _decompose(capsys, "--input", example_path, "--r", "3",
                            "--s", "4")

        assert report["schema"] == 1
        assert report["rho"] == 3
        assert report["max_core"] == 2
        assert report["histogram"] == {"0": 1, "1": 3, "2": 10}
        assert report["total_cliques"] == 14
        assert sum(report["histogram"].values()) == report["total_cliques"]
        assert report["n"] == 7 and report["m"] == 15
        assert set(report["timings"]) == set(cli.PHASES)
        assert report["memory"]["total_cliques"] == 14
        assert report["summary"]["max"] == 2
        assert report["summary"]["quantiles"] == [0.0, 1.25, 2.0, 2.0, 2.0]

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_path_kcore(self, capsys, tmp_path, n):
        text = "".join("{0} {1}\n".format(v, v + 1) for v in range(n - 1))
        report = _decompose(capsys, "--input",
                            _write(tmp_path, "path.txt", text), "--r", "1",
                            "--s", "2")
        assert report["histogram"] == {"1": n}

    def test_contraction_flag(self, capsys, tmp_path):
        path = str(tmp_path / "rmat.txt")
        graph.write_edge_list(graph.generate_rmat(7, seed=1), path)

        on = _decompose(capsys, "--input", path, "--r", "2", "--s", "3",
                        "--contract", "--contract-edge-factor", "0.2")
        off = _decompose(capsys, "--input", path, "--r", "2", "--s", "3",
                         "--no-contract")

        assert on["histogram"] == off["histogram"]
        assert on["config"]["contract"] and not off["config"]["contract"]

    def test_threads_change_only_timings(self, capsys, example_path):
        reports = [
            _decompose(capsys, "--input", example_path, "--r", "2", "--s",
                       "4", "--threads", threads)
            for threads in ("1", "max")
        ]

        for report in reports:
            del report["timings"], report["threads"]
            del report["config"]["threads"]

        assert reports[0] == reports[1]

    @pytest.mark.parametrize(
        "flags",
        [
            ["--levels", "1", "--inverse", "binary", "--no-contiguous"],
            ["--levels", "3", "--agg", "array", "--bucket", "dense"],
            ["--agg", "hash", "--no-relabel", "--orientation", "degree"],
            ["--agg", "list-buffer", "--buffer-size", "2", "--window", "1"],
        ])
    def test_tuning_flags(self, capsys, example_path, flags):
        report = _decompose(capsys, "--input", example_path, "--r", "3",
                            "--s", "4", *flags)
        assert report["histogram"] == {"0": 1, "1": 3, "2": 10}

    def test_cores_out(self, capsys, tmp_path):
        path = _write(tmp_path, "raw.txt", "10 20\n20 30\n30 10\n30 40\n")
        out = str(tmp_path / "cores.csv")
        _decompose(capsys, "--input", path, "--r", "2", "--s", "3",
                   "--cores-out", out, "--with-vertices")

        frame = pd.read_csv(out)
        assert list(frame.columns) == ["index", "core", "v0", "v1"]
        assert frame["index"].tolist() == list(range(4))

        cores = {(row.v0, row.v1): row.core for row in frame.itertuples()}
        assert cores == {(10, 20): 1, (20, 30): 1, (10, 30): 1, (30, 40): 0}

    def test_cores_out_plain(self, capsys, example_path, tmp_path):
        out = str(tmp_path / "cores.csv")
        _decompose(capsys, "--input", example_path, "--r", "3", "--s", "4",
                   "--cores-out", out)
        frame = pd.read_csv(out)
        assert list(frame.columns) == ["index", "core"]
        assert frame["core"].value_counts().to_dict() == {2: 10, 1: 3, 0: 1}

    def test_binary_cache_input(self, capsys, tmp_path):
        path = str(tmp_path / "example.bin")
        graph.save_graph(load_graph("example"), path)
        report = _decompose(capsys, "--input", path, "--r", "3", "--s", "4")
        assert report["rho"] == 3

    def test_verbose_goes_to_stderr(self, capsys, example_path):
        assert cli.main(["decompose", "--input", example_path, "--r", "3",
                         "--s", "4", "--verbose"]) == cli.EXIT_OK
        captured = capsys.readouterr()
        assert json.loads(captured.out)["rho"] == 3
        assert "Counting 4-cliques..." in captured.err


class TestValidate:
    """TestClass dedicated to the validate subcommand."""

    def test_example_all_pairs(self, capsys, example_path):
        assert cli.main(["validate", "--input",
                         example_path]) == cli.EXIT_OK
        assert "match the reference" in capsys.readouterr().out

    def test_random(self, capsys):
        assert cli.main(["validate", "--random", "12", "0.3", "2", "--r",
                         "2", "--s", "3"]) == cli.EXIT_OK

    def test_corrupted_count(self, capsys, tmp_path):
        path = _write(tmp_path, "path.txt", "0 1\n1 2\n2 3\n3 4\n")
        status = cli.main(["validate", "--input", path, "--r", "2", "--s",
                           "3", "--corrupt-index", "0"])
        out = capsys.readouterr().out

        assert status == cli.EXIT_VALIDATION_FAILED
        assert "FAIL" in out and "expected core 0, got 1" in out

    def test_over_cap(self, capsys, tmp_path):
        path = str(tmp_path / "big.txt")
        graph.write_edge_list(graph.generate_gnp(45, 0.1), path)
        status = cli.main(["validate", "--input", path, "--r", "1", "--s",
                           "2"])
        assert status == cli.EXIT_ERROR
        assert capsys.readouterr().err.startswith("error:")

    def test_needs_graph(self, capsys):
        assert cli.main(["validate"]) == cli.EXIT_ERROR

    @pytest.mark.parametrize("r, exp_levels", [(1, [1]), (2, [1, 2]),
                                               (4, [1, 2, 3])])
    def test_config_matrix_layouts(self, r, exp_levels):
        configs = list(cli.config_matrix(r, threads=[1]))
        layouts = {(config.levels, config.inverse_map, config.contiguous)
                   for config in configs}

        assert layouts == {
            (levels, inverse, contiguous) for levels in exp_levels
            for inverse, contiguous in (("binary", False), ("binary", True),
                                        ("pointer", True))}
        assert len(configs) == len(layouts) * 3 * 2


class TestGenRmat:
    """TestClass dedicated to the gen-rmat subcommand."""

    def test_deterministic(self, tmp_path):
        paths = [str(tmp_path / name) for name in ("a.txt", "b.txt")]
        for path in paths:
            assert cli.main(["gen-rmat", "--scale", "8", "--seed", "7",
                             "--output", path]) == cli.EXIT_OK

        with open(paths[0], "rb") as f_a, open(paths[1], "rb") as f_b:
            assert f_a.read() == f_b.read()

    def test_scale_one(self, tmp_path):
        path = str(tmp_path / "tiny.txt")
        assert cli.main(["gen-rmat", "--scale", "1", "--output",
                         path]) == cli.EXIT_OK
        assert graph.read_edge_list(path).m <= 1

    def test_binary(self, tmp_path):
        path = str(tmp_path / "rmat.bin")
        assert cli.main(["gen-rmat", "--scale", "6", "--binary", "--output",
                         path]) == cli.EXIT_OK
        assert graph.load_graph(path) == graph.generate_rmat(6)

    def test_bad_probabilities(self, capsys, tmp_path):
        status = cli.main(["gen-rmat", "--scale", "4", "--a", "0.9",
                           "--output", str(tmp_path / "x.txt")])
        assert status == cli.EXIT_ERROR


class TestBench:
    """TestClass dedicated to the bench subcommand."""

    def test_rows_per_phase(self, tmp_path):
        out = str(tmp_path / "bench.csv")
        assert cli.main(["bench", "--rmat-scale", "6", "--threads", "1,2",
                         "--output", out]) == cli.EXIT_OK

        frame = pd.read_csv(out)
        assert list(frame.columns) == list(cli.BENCH_COLUMNS)
        assert len(frame) == 2 * len(cli.PHASES)
        assert frame.groupby("phase").size().tolist() == [2] * 5
        assert frame["histogram"].nunique() == 1
        assert frame["rho"].nunique() == 1

    def test_failed_row(self, tmp_path, example_path):
        out = str(tmp_path / "bench.csv")
        assert cli.main(["bench", "--input", example_path, "--rs", "2:3",
                         "--levels", "1,3", "--output", out]) == cli.EXIT_OK

        frame = pd.read_csv(out)
        assert len(frame) == len(cli.PHASES) + 1
        failed = frame[frame["error"].notna()]
        assert failed["levels"].tolist() == [3]

    def test_levels_memory(self, tmp_path):
        path = str(tmp_path / "k12.txt")
        graph.write_edge_list(load_graph("K12"), path)
        out = str(tmp_path / "bench.csv")
        assert cli.main(["bench", "--input", path, "--rs", "3:4",
                         "--levels", "1,2", "--output", out]) == cli.EXIT_OK

        frame = pd.read_csv(out)
        peak = frame.groupby("levels")["peak_table_bytes"].first()
        assert peak[1] >= peak[2]


class TestErrors:
    """TestClass dedicated to exit codes of the front end."""

    def test_missing_file(self, capsys, tmp_path):
        status = cli.main(["decompose", "--input",
                           str(tmp_path / "nope.txt"), "--r", "2", "--s",
                           "3"])
        assert status == cli.EXIT_ERROR
        assert capsys.readouterr().err.startswith("error:")

    def test_malformed_file(self, capsys, tmp_path):
        path = _write(tmp_path, "bad.txt", "0 1\n1 two\n")
        status = cli.main(["decompose", "--input", path, "--r", "2", "--s",
                           "3"])
        assert status == cli.EXIT_ERROR
        assert "line 2" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "r, s",
        [("3", "3"), ("0", "2"), ("4", "2")])
    def test_invalid_rs(self, capsys, example_path, r, s):
        status = cli.main(["decompose", "--input", example_path, "--r", r,
                           "--s", s])
        assert status == cli.EXIT_ERROR

    def test_levels_above_r(self, capsys, example_path):
        status = cli.main(["decompose", "--input", example_path, "--r", "2",
                           "--s", "3", "--levels", "3"])
        assert status == cli.EXIT_ERROR

    @pytest.mark.parametrize(
        "argv",
        [
            ["decompose", "--r", "2", "--s", "3"],
            ["decompose", "--input", "x", "--r", "2", "--s", "3", "--agg",
             "tree"],
            ["decompose", "--input", "x", "--r", "2", "--s", "3",
             "--threads", "0"],
            ["bench", "--rs", "2-3"],
            [],
        ])
    def test_usage_errors(self, capsys, argv):
        with pytest.raises(SystemExit) as err:
            cli.main(argv)

        assert err.value.code == 2
