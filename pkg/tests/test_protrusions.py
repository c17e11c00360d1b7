"""Protrusion validation, decomposition building, and protrusion search."""

import random

import pytest

from twkern.graphs import Graph, complete_graph, disjoint_union, make_grid, path_graph
from twkern.modulators import Modulator, exact_modulator, recursive_modulator
from twkern.problems import CATALOG, opt_fast
from twkern.protrusions import (
    ProtrusionDecomposition,
    build_pd,
    find_max_protrusion,
    iter_protrusions,
    validate_pd,
    validate_protrusion,
)
from twkern.treedec import TreeDecomposition


def pendant_path_graph() -> Graph:
    # a triangle with a 5-vertex path hanging off vertex 0
    edges = [(0, 1), (0, 2), (1, 2), (0, 3), (3, 4), (4, 5), (5, 6), (6, 7)]
    return Graph(8, edges)


class TestValidateProtrusion:
    def test_pendant_path_is_1_protrusion(self):
        g = pendant_path_graph()
        assert validate_protrusion(g, {0, 3, 4, 5, 6, 7}, 1).ok

    def test_whole_grid_fails_as_3_protrusion(self):
        g = make_grid(4)
        res = validate_protrusion(g, frozenset(g.vertices), 3)
        assert not res.ok and "treewidth" in res.message

    def test_empty_set_is_always_fine(self):
        assert validate_protrusion(make_grid(3), frozenset(), 1).ok

    def test_boundary_too_large(self):
        g = make_grid(3)
        res = validate_protrusion(g, {0, 1, 2}, 1)
        assert not res.ok and "boundary" in res.message


class TestValidatePd:
    def test_core_everything(self):
        g = make_grid(3)
        pd = ProtrusionDecomposition(frozenset(g.vertices), (), alpha=g.n, r=0)
        assert validate_pd(g, pd).ok

    def test_empty_core_on_disconnected_graph(self):
        g = disjoint_union(path_graph(3), path_graph(3))
        pd = ProtrusionDecomposition(
            frozenset(), (frozenset({0, 1, 2}), frozenset({3, 4, 5})), alpha=2, r=1
        )
        assert validate_pd(g, pd).ok

    def test_part_with_outside_neighbors_rejected(self):
        g = path_graph(4)
        pd = ProtrusionDecomposition(frozenset({0}), (frozenset({1}), frozenset({2, 3})), 2, 1)
        res = validate_pd(g, pd)
        assert not res.ok and "core" in res.message

    def test_non_partition_rejected(self):
        g = path_graph(3)
        pd = ProtrusionDecomposition(frozenset({0, 1}), (frozenset({1, 2}),), 2, 1)
        assert not validate_pd(g, pd).ok

    def test_alpha_bound_enforced(self):
        g = path_graph(4)
        pd = ProtrusionDecomposition(frozenset({0, 1, 2, 3}), (), alpha=2, r=1)
        assert not validate_pd(g, pd).ok


class TestBuildPd:
    def test_single_vertex_modulator_base_case(self):
        g = path_graph(6)
        mod = _modulator_with(g, {0}, 1)
        pd = build_pd(g, mod)
        assert pd.core == {0}
        assert pd.parts == (frozenset(range(1, 6)),)
        assert validate_pd(g, pd).ok

    def test_grid4_with_exact_modulator(self):
        g = make_grid(4)
        mod = exact_modulator(g, 1)
        pd = build_pd(g, mod)
        assert mod.vertices <= pd.core
        assert validate_pd(g, pd).ok

    def test_disjoint_union_gets_per_component_parts(self):
        g = disjoint_union(make_grid(2), make_grid(2))
        mod = _modulator_with(g, {0, 4}, 1)
        pd = build_pd(g, mod)
        assert validate_pd(g, pd).ok
        for part in pd.parts:
            assert g.open_neighborhood(part) <= pd.core

    def test_empty_modulator_rejected(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            build_pd(g, _modulator_with(g, set(), 1))

    def test_bad_certificate_rejected(self):
        g = make_grid(3)
        fake = Modulator(frozenset({0}), 0, TreeDecomposition([set(range(8))]))
        with pytest.raises(ValueError):
            build_pd(g, fake)

    def test_planar_corpus_validates_and_measures(self):
        from twkern.harness import gen_corpus

        corpus = gen_corpus("random-planar", {"count": 15, "n_min": 15, "n_max": 40}, seed=21)
        max_sep_bound_violations = 0
        alpha_ratios = []
        for g in corpus:
            mod = recursive_modulator(g, 1)
            if not mod.vertices:
                continue
            pd = build_pd(g, mod)
            assert validate_pd(g, pd).ok
            if pd.r > 2 * max(pd.max_sep_order, 3) + 1:
                max_sep_bound_violations += 1
            alpha_ratios.append(pd.alpha / len(mod.vertices))
        assert max_sep_bound_violations == 0
        assert alpha_ratios and max(alpha_ratios) < float("inf")

    def test_alpha_linear_in_opt_on_grid_corpus(self):
        # cover-parameter form: alpha stays within a corpus-wide multiple of OPT
        p = CATALOG["vertex-cover"]
        ratios = []
        for t in (2, 3, 4):
            g = make_grid(t)
            mod = exact_modulator(g, 1)
            pd = build_pd(g, mod)
            assert validate_pd(g, pd).ok
            opt = opt_fast(p, g)[0]
            ratios.append(pd.alpha / opt)
        assert max(ratios) < float("inf")

    def test_alpha_linear_in_opt_on_planar_corpus(self):
        # a single corpus-wide constant C with max(ell, |core|) <= C * OPT
        from twkern.harness import gen_corpus

        p = CATALOG["vertex-cover"]
        corpus = gen_corpus("random-planar", {"count": 12, "n_min": 12, "n_max": 22}, seed=33)
        ratios = []
        for g in corpus:
            mod = recursive_modulator(g, 1)
            if not mod.vertices:
                continue
            pd = build_pd(g, mod)
            assert validate_pd(g, pd).ok
            opt = opt_fast(p, g)[0]
            if opt > 0:
                ratios.append(pd.alpha / opt)
        assert ratios
        corpus_constant = max(ratios)
        assert 0 < corpus_constant < float("inf")


def _modulator_with(g: Graph, vertices, eta: int) -> Modulator:
    from twkern.treedec import treewidth_at_most

    rest, _ = g.delete_vertices(vertices)
    td = treewidth_at_most(rest, eta)
    assert td is not None
    return Modulator(frozenset(vertices), eta, td)


class TestProtrusionSearch:
    def test_long_path_returns_subpath(self):
        x = find_max_protrusion(path_graph(12), 1, 3)
        assert x is not None and len(x.vertices) >= 3

    def test_k6_has_no_interior_2_protrusion(self):
        assert find_max_protrusion(complete_graph(6), 2, 2) is None

    def test_min_size_respected(self):
        g = pendant_path_graph()
        x = find_max_protrusion(g, 1, 4)
        assert x is not None and len(x.vertices) >= 4

    def test_found_protrusions_always_validate(self):
        rng = random.Random(31)
        from conftest import sparse_random_graph

        for _ in range(40):
            g = sparse_random_graph(rng, rng.randint(2, 12))
            for x in iter_protrusions(g, 2, 2):
                assert validate_protrusion(g, x.vertices, 2).ok

    def test_seeded_search_finds_pd_parts(self):
        g = make_grid(4)
        mod = exact_modulator(g, 1)
        pd = build_pd(g, mod)
        big_parts = [p for p in pd.parts if len(p) >= 3]
        if big_parts:
            seeds = tuple(big_parts)
            x = find_max_protrusion(g, pd.r, 3, seeds=seeds)
            assert x is not None
