"""Test module for the (r, s) nucleus decomposition."""
import itertools

import networkx as nx
import numpy as np
import pytest
from scipy.special import comb

from pynd import ND
from pynd import cli
from pynd import graph
from pynd import oracle
from pynd import peeling
from tests.utils import example_clique, load_graph, random_graph, to_networkx

GNAME = "peeling"

RS_PAIRS = [(r, s) for s in range(2, 6) for r in range(1, s)]

EXAMPLE_CORES = dict(
    [(example_clique("cdg"), 0)] +
    [(example_clique(name), 1) for name in ("abf", "aef", "bef")] +
    [(clique, 2) for clique in itertools.combinations(range(5), 3)])


def _random_instances():
    for n, p, seed in itertools.product((10, 18, 26), (0.2, 0.4, 0.6),
                                        range(2)):
        yield "gnp-{0}-{1}-{2}".format(n, p, seed), n, p, seed


class TestFixedPoint:
    """TestClass dedicated to the fixed-point count scale."""

    @pytest.mark.parametrize(
        "r, s, exp_value",
        [
            (1, 2, 2),
            (2, 3, 6),
            (3, 4, 12),
            (2, 4, 60),
            (1, 5, 60),
            (2, 5, 2520),
            (3, 5, 2520),
        ])
    def test_scale(self, r, s, exp_value):
        fixed = peeling.FixedPoint(r, s)
        assert fixed.scale == exp_value
        assert fixed.subsets == comb(s, r, exact=True)

    @pytest.mark.parametrize("num_peeled", [1, 2, 3, 4])
    def test_shares_sum_to_scale(self, num_peeled):
        fixed = peeling.FixedPoint(3, 4)
        assert fixed.share(num_peeled) * num_peeled == fixed.scale

    def test_overflow(self):
        with pytest.raises(ValueError):
            peeling.FixedPoint(5, 10)


class TestExample:
    """TestClass dedicated to the seven-vertex example graph."""

    def test_counting_phase(self):
        ws = peeling.prepare(load_graph("example"), 3, 4,
                             peeling.PeelConfig(relabel=False))
        peeling.count_phase(ws.graph, ws.dg, 3, 4, ws.table)
        scale = peeling.FixedPoint(3, 4).scale

        counts = {
            tuple(sorted(int(ws.labels[v]) for v in vertices)):
            ws.table.get_count(idx) // scale
            for idx, vertices in ws.table.cliques()
        }

        assert counts[example_clique("abe")] == 3
        assert counts[example_clique("cdg")] == 0
        assert sorted(counts.values()) == [0, 1, 1, 1] + [2] * 9 + [3]

    @pytest.mark.parametrize("relabel", [True, False])
    @pytest.mark.parametrize("bucket", ["open", "dense"])
    @pytest.mark.parametrize("aggregation",
                             ["array", "list-buffer", "hash"])
    def test_golden_cores(self, relabel, bucket, aggregation):
        res = peeling.nucleus_decomposition(
            load_graph("example"), 3, 4, relabel=relabel, bucket=bucket,
            aggregation=aggregation, threads=1)

        assert res.as_dict() == EXAMPLE_CORES
        assert res.rho == 3
        assert res.max_core == 2
        assert len(res) == 14
        assert res.histogram() == {0: 1, 1: 3, 2: 10}

    def test_rounds(self):
        res = peeling.nucleus_decomposition(load_graph("example"), 3, 4,
                                            instrument=True)
        assert res.trace.rounds == [(0, 1, 0), (1, 3, 1), (2, 10, 0)]
        assert res.trace.levels == [0, 1, 2]

    def test_core_of(self):
        res = ND(r=3, s=4).fit(load_graph("example")).extract()
        assert res.core_of(example_clique("abe")) == 2
        assert res.core_of((5, 4, 1)) == 1

    def test_timings(self):
        res = peeling.nucleus_decomposition(load_graph("example"), 3, 4)
        assert set(res.timings) == {"orient", "build", "count", "peel"}
        assert all(value >= 0 for value in res.timings.values())


class TestCliques:
    """TestClass dedicated to complete and trivial graphs."""

    @pytest.mark.parametrize("n", [4, 5, 6])
    @pytest.mark.parametrize("r, s", [(1, 2), (2, 3), (2, 4), (3, 4),
                                      (3, 5)])
    def test_complete_graph(self, n, r, s):
        res = peeling.nucleus_decomposition(load_graph("K{0}".format(n)),
                                            r, s)
        exp = comb(n - r, s - r, exact=True)

        assert res.histogram() == {exp: comb(n, r, exact=True)}
        assert res.rho == 1

    def test_triangle_free(self):
        res = peeling.nucleus_decomposition(load_graph("path5"), 2, 3)
        assert res.histogram() == {0: 4}

    def test_path_kcore(self):
        res = peeling.nucleus_decomposition(load_graph("path5"), 1, 2)
        assert res.histogram() == {1: 5}

    def test_empty_graph(self):
        res = peeling.nucleus_decomposition(load_graph("empty"), 2, 3)
        assert len(res) == 0 and res.rho == 0 and res.max_core == 0

    def test_no_r_cliques(self):
        res = peeling.nucleus_decomposition(load_graph("bipartite"), 3, 4)
        assert len(res) == 0 and res.histogram() == {}


class TestOracle:
    """TestClass dedicated to the equivalence with brute force."""

    @pytest.mark.parametrize("name, n, p, seed", list(_random_instances()))
    @pytest.mark.parametrize("r, s", RS_PAIRS)
    def test_default_config(self, name, n, p, seed, r, s):
        g = random_graph(n, p, seed)
        exp = oracle.oracle_nucleus(g, r, s)
        res = peeling.nucleus_decomposition(g, r, s, threads=2)
        assert res.as_dict() == exp.cores
        assert res.rho == exp.rho

    @pytest.mark.parametrize("r, s", [(1, 3), (2, 3), (2, 4), (3, 4),
                                      (3, 5)])
    def test_config_matrix(self, r, s):
        g = random_graph(14, 0.5, 11)
        exp = oracle.oracle_nucleus(g, r, s).cores

        for config in cli.config_matrix(r, threads=[1, 3]):
            res = peeling.nucleus_decomposition(g, r, s, config,
                                                suppress_warnings=True)
            assert res.as_dict() == exp, config

    @pytest.mark.parametrize("orientation", ["degeneracy", "degree"])
    def test_orientations(self, orientation):
        g = random_graph(20, 0.5, 3)
        exp = oracle.oracle_nucleus(g, 2, 4).cores
        res = peeling.nucleus_decomposition(g, 2, 4,
                                            orientation=orientation)
        assert res.as_dict() == exp

    @pytest.mark.parametrize("seed", range(10))
    def test_kcore(self, seed):
        g = random_graph(30, 0.15, seed)
        exp = nx.core_number(to_networkx(g))
        res = peeling.nucleus_decomposition(g, 1, 2)

        assert {clique[0]: core for clique, core in res.cliques()} == exp
        assert oracle.kcore_numbers(g) == exp


class TestContraction:
    """TestClass dedicated to graph contraction during (2, 3) peeling."""

    @pytest.mark.parametrize("seed", range(6))
    def test_contraction_on_off(self, seed):
        g = random_graph(30, 0.4, seed)
        on = peeling.nucleus_decomposition(g, 2, 3, contract=True,
                                           contract_edge_factor=0.1,
                                           instrument=True)
        off = peeling.nucleus_decomposition(g, 2, 3, contract=False)

        assert on.as_dict() == off.as_dict()
        assert on.rho == off.rho
        assert on.trace.contractions > 0

    def test_contraction_rmat(self):
        g = graph.generate_rmat(8, seed=2)
        on = peeling.nucleus_decomposition(g, 2, 3, contract=True,
                                           contract_edge_factor=0.5)
        off = peeling.nucleus_decomposition(g, 2, 3, contract=False)
        assert on.histogram() == off.histogram()


class TestProperties:
    """TestClass dedicated to conservation, determinism and monotonicity."""

    @pytest.mark.parametrize("seed", range(4))
    @pytest.mark.parametrize("r, s", [(1, 3), (2, 3), (2, 4), (3, 4),
                                      (2, 5), (3, 5)])
    def test_conservation(self, seed, r, s):
        g = random_graph(16, 0.5, seed)
        res = peeling.nucleus_decomposition(g, r, s, instrument=True,
                                            threads=2)
        scale = peeling.FixedPoint(r, s).scale

        assert set(res.trace.decrements) == oracle.brute_cliques(g, s)
        assert all(total == scale
                   for total in res.trace.decrements.values())
        assert res.trace.misaligned == 0

    @pytest.mark.parametrize("r, s", [(2, 3), (3, 4)])
    def test_determinism(self, r, s):
        g = graph.generate_rmat(8, seed=4)
        first = peeling.nucleus_decomposition(g, r, s, threads=4)

        for threads in (4, 1):
            again = peeling.nucleus_decomposition(g, r, s, threads=threads)
            assert np.array_equal(again.core, first.core)
            assert again.rho == first.rho

    @pytest.mark.parametrize("seed", range(4))
    @pytest.mark.parametrize("bucket", ["open", "dense"])
    def test_monotone_levels(self, seed, bucket):
        g = random_graph(26, 0.5, seed)
        res = peeling.nucleus_decomposition(g, 2, 3, bucket=bucket,
                                            window=2, instrument=True)
        assert res.trace.levels == sorted(res.trace.levels)
        assert len(res.trace.levels) == res.rho

    def test_cores_bounded_by_counts(self):
        g = random_graph(20, 0.5, 9)
        ws = peeling.prepare(g, 2, 3)
        peeling.count_phase(ws.graph, ws.dg, 2, 3, ws.table)
        scale = peeling.FixedPoint(2, 3).scale
        initial = {
            tuple(sorted(int(ws.labels[v]) for v in vertices)):
            ws.table.get_count(idx) // scale
            for idx, vertices in ws.table.cliques()
        }

        res = peeling.nucleus_decomposition(g, 2, 3)
        for clique, core in res.cliques():
            assert core <= initial[clique]


class TestND:
    """TestClass dedicated to the ND front end."""

    def test_fit_extract(self):
        res = ND(r=2, s=3).fit(load_graph("K4")).extract()
        assert res.histogram() == {2: 6}
        assert res.config["r"] == 2 and res.config["s"] == 3

    def test_defaults_for_edge_peeling(self):
        model = ND(r=2, s=3)
        assert model.config.aggregation == "hash"
        assert model.config.contract is True
        assert model.config.relabel is False

    def test_defaults_otherwise(self):
        model = ND(r=3, s=4)
        assert model.config.aggregation == "list-buffer"
        assert model.config.contract is False
        assert model.config.relabel is True
        assert model.config.levels == 2

    def test_extract_twice(self):
        model = ND(r=3, s=4).fit(load_graph("example"))
        first = model.extract()
        second = model.extract()
        assert first.as_dict() == second.as_dict()

    def test_fit_path(self, tmp_path):
        path = tmp_path / "example.txt"
        path.write_text("0 1\n1 2\n2 0\n2 3\n")
        res = ND(r=2, s=3).fit(str(path)).extract()
        assert res.histogram() == {0: 1, 1: 3}

    def test_timeopt_none(self):
        res = ND(r=2, s=3, timeopt="none").fit(load_graph("K4")).extract()
        assert res.timings == {}

    def test_verbose(self, capsys):
        ND(r=3, s=4).fit(load_graph("example"), verbose=True).extract(
            verbose=True)
        out = capsys.readouterr().out
        assert "Counting 4-cliques..." in out
        assert "Round 2: k=1, |A|=3" in out

    @pytest.mark.parametrize(
        "method, exp_value",
        [
            ("valid_aggregation", ("array", "list-buffer", "hash")),
            ("valid_bucket", ("open", "dense")),
            ("valid_inverse", ("binary", "pointer")),
            ("valid_orientation", ("degeneracy", "degree")),
            ("valid_timeopt", ("total", "none")),
        ])
    def test_valid_options(self, method, exp_value):
        assert getattr(ND, method)() == exp_value
