"""Corpus generation, soundness verification, reports, text formats, CLI."""

import subprocess
import sys

import pytest

from twkern.graphs import BoundariedGraph, Graph, make_grid, path_graph
from twkern.harness import (
    gen_corpus,
    is_member,
    problem_report_rows,
    run_experiment,
    reference_oracle,
    verify_kernel_soundness,
)
from twkern.io import ParseError, format_graph, format_pd, format_vertex_set, parse_graph, parse_pd_sets, parse_vertex_set
from twkern.problems import CATALOG

VC = CATALOG["vertex-cover"]


class TestGraphFormat:
    def test_single_edge(self):
        g = parse_graph("2 1\n1 2\n")
        assert g == path_graph(2)

    def test_comments_ignored(self):
        g = parse_graph("# corpus instance\n3 2\n1 2\n# middle comment\n2 3\n")
        assert g == path_graph(3)

    def test_round_trip_is_canonical(self):
        g = make_grid(3)
        assert parse_graph(format_graph(g)) == g
        text = "3 2\n# hello\n2 3\n1 2\n"
        assert format_graph(parse_graph(text)) == "3 2\n1 2\n2 3\n"

    def test_boundaried_round_trip(self):
        bg = BoundariedGraph(path_graph(3), {0: 2, 2: 1})
        text = format_graph(bg)
        assert parse_graph(text) == bg
        assert format_graph(parse_graph(text)) == text

    def test_endpoint_out_of_range_names_line(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_graph("2 2\n1 2\n1 3\n")

    def test_u_ge_v_rejected(self):
        with pytest.raises(ParseError, match="u < v"):
            parse_graph("2 1\n2 1\n")

    def test_malformed_header(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_graph("two one\n")

    def test_vertex_set_round_trip(self):
        vs = frozenset({0, 3, 7})
        assert parse_vertex_set(format_vertex_set(vs)) == vs

    def test_pd_round_trip(self):
        from twkern.protrusions import ProtrusionDecomposition

        pd = ProtrusionDecomposition(frozenset({0, 1}), (frozenset({2}), frozenset({3, 4})), 2, 1)
        core, parts = parse_pd_sets(format_pd(pd))
        assert core == pd.core and parts == pd.parts


class TestCorpus:
    def test_grid_family(self):
        corpus = gen_corpus("grid", {"t": 3}, seed=0)
        assert corpus == [make_grid(3)]

    def test_same_seed_identical(self):
        a = gen_corpus("random-planar", {"count": 6, "n_min": 5, "n_max": 15}, seed=4)
        b = gen_corpus("random-planar", {"count": 6, "n_min": 5, "n_max": 15}, seed=4)
        assert a == b
        c = gen_corpus("random-planar", {"count": 6, "n_min": 5, "n_max": 15}, seed=5)
        assert a != c

    def test_random_planar_verified(self):
        import networkx as nx

        corpus = gen_corpus("random-planar", {"count": 15, "n_min": 10, "n_max": 20}, seed=1)
        for g in corpus:
            gx = nx.Graph(list(g.edges))
            gx.add_nodes_from(range(g.n))
            assert nx.check_planarity(gx)[0]

    def test_pendant_family_sizes(self):
        corpus = gen_corpus(
            "grid+pendants", {"count": 2, "t": 3, "tree_size": 5, "pendants": 2}, seed=2
        )
        for g in corpus:
            assert g.n == 9 + 2 * 5

    def test_union_family_disconnected(self):
        corpus = gen_corpus("union", {"count": 3, "t_values": [2, 3]}, seed=3)
        assert all(len(g.connected_components()) >= 2 for g in corpus)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            gen_corpus("smallworld", {}, seed=0)


class TestSoundness:
    def test_membership_convention(self):
        assert is_member(VC, 3, 3) and not is_member(VC, 3, 2)
        assert not is_member(VC, 0, -1)  # negative k on minimization: no-instance
        p_max = CATALOG["independent-set"]
        assert is_member(p_max, 0, -1)  # negative k on maximization: yes-instance

    def test_empty_corpus_empty_report(self, vc_table):
        rep = verify_kernel_soundness(VC, [], vc_table)
        assert rep.rows == [] and rep.ok

    def test_small_corpus_no_violations(self, vc_table):
        corpus = gen_corpus("random-planar", {"count": 15, "n_min": 8, "n_max": 16}, seed=6)
        rep = verify_kernel_soundness(VC, corpus, vc_table, k_window=1)
        assert rep.ok
        assert len(rep.rows) == 3 * len(corpus)
        for row in rep.rows:
            assert row.kernel_n <= row.n and row.k_prime <= row.k

    def test_oracle_budget_guard(self, vc_table):
        with pytest.raises(ValueError):
            verify_kernel_soundness(VC, [Graph(40)], vc_table)

    def test_soundness_with_modulator_seeding(self, vc_table):
        corpus = gen_corpus("random-planar", {"count": 8, "n_min": 10, "n_max": 18}, seed=14)
        rep = verify_kernel_soundness(VC, corpus, vc_table, k_window=1, eta=1)
        assert rep.ok


class TestExperiment:
    def test_rows_and_invariants(self, vc_table):
        corpus = gen_corpus(
            "grid+pendants", {"count": 3, "t": 3, "tree_size": 8, "pendants": 2}, seed=8
        )
        rep = run_experiment(VC, corpus, vc_table, family="grid+pendants", seed=8)
        assert len(rep.rows) == 3
        for row in rep.rows:
            assert row.kernel_n <= row.n and row.k_prime <= row.k
            assert row.replacements >= 1

    def test_csv_deterministic(self, vc_table):
        corpus = gen_corpus("random-planar", {"count": 5, "n_min": 8, "n_max": 14}, seed=9)
        a = run_experiment(VC, corpus, vc_table, seed=9, deterministic_timing=True).to_csv()
        b = run_experiment(VC, corpus, vc_table, seed=9, deterministic_timing=True).to_csv()
        assert a == b
        assert a.splitlines()[1].startswith("instance_id,n,m,k,")

    def test_protrusion_free_corpus_keeps_sizes(self, vc_table):
        corpus = [make_grid(3)]
        rep = run_experiment(VC, corpus, vc_table)
        assert rep.rows[0].kernel_n == 9 and rep.rows[0].replacements == 0

    def test_problem_report_rows(self):
        rows = problem_report_rows(VC, [make_grid(2), path_graph(5)])
        assert len(rows) == 2
        for row in rows:
            parts = row.split(",")
            assert len(parts) == 6


class TestBudgetOverride:
    def test_env_var_overrides_oracle_budget(self, monkeypatch):
        from twkern.graphs import BudgetError
        from twkern.problems import opt_brute

        g = Graph(24)
        with pytest.raises(BudgetError):
            opt_brute(VC, g)
        monkeypatch.setenv("KERNEL_BUDGET_N", "25")
        assert opt_brute(VC, g)[0] == 0


class TestSpecOracle:
    def test_matches_fast_solver(self):
        from twkern.problems import opt_fast

        corpus = gen_corpus("random-planar", {"count": 20, "n_min": 6, "n_max": 16}, seed=10)
        for g in corpus:
            for name in ("vertex-cover", "dominating-set", "feedback-vertex-set"):
                p = CATALOG[name]
                assert reference_oracle(p, g) == opt_fast(p, g)[0]


class TestCli:
    def _run(self, *args, expect_ok=True):
        proc = subprocess.run(
            [sys.executable, "-m", "twkern.cli", *args], capture_output=True, text=True
        )
        if expect_ok:
            assert proc.returncode == 0, proc.stderr
        return proc

    def test_pipeline(self, tmp_path, vc_table):
        from twkern.replacement import format_table

        gpath = tmp_path / "g.gr"
        gpath.write_text(format_graph(path_graph(20)))
        tpath = tmp_path / "t.txt"
        tpath.write_text(format_table(vc_table))

        out = self._run("decompose", "--input", str(gpath))
        assert out.stdout.startswith("s ")

        kpath = tmp_path / "kernel.gr"
        out = self._run(
            "kernelize", "--problem", "vertex-cover", "--input", str(gpath),
            "--k", "10", "--table", str(tpath), "--out", str(kpath),
        )
        kernel = parse_graph(kpath.read_text())
        kernel_n = kernel.graph.n if isinstance(kernel, BoundariedGraph) else kernel.n
        assert kernel_n < 20

        out = self._run(
            "verify", "--problem", "vertex-cover", "--table", str(tpath),
            "--family", "random-planar", "--count", "4", "--n-max", "14", "--seed", "3",
        )
        assert "violations: 0" in out.stdout

        out = self._run(
            "verify", "--problem", "vertex-cover", "--table", str(tpath),
            "--input", str(gpath),
        )
        assert "violations: 0" in out.stdout

        csv_path = tmp_path / "report.csv"
        self._run(
            "experiment", "--problem", "vertex-cover", "--table", str(tpath),
            "--family", "grid+pendants", "--count", "2", "--grid-t", "3",
            "--tree-size", "8", "--seed", "1", "--no-timing", "--out", str(csv_path),
        )
        lines = csv_path.read_text().splitlines()
        assert lines[1] == "instance_id,n,m,k,kernel_n,kernel_m,k_prime,replacements,wall_time"
        assert len(lines) == 4

    def test_table_build_cli(self, tmp_path):
        tpath = tmp_path / "vc.txt"
        self._run(
            "table-build", "--problem", "vertex-cover", "--t", "1",
            "--size-bound", "5", "--certify", "off", "--out", str(tpath),
        )
        from twkern.replacement import parse_table

        table = parse_table(tpath.read_text())
        assert len(table) >= 4
