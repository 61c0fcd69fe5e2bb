import numpy as np
import pytest
from oracles import random_connected_graph

from structlap.construct import (
    build_simple_support_digraph_laplacian,
    build_simple_support_laplacian,
    fiedler_cut,
    perturb_basis_nonzero,
    perturb_fiedler_nonzero,
    perturb_to_simple,
    perturb_to_simple_directed,
)
from structlap.errors import DegenerateFiedler, NoDivergingTree, NotConnected
from structlap.exact import simplicity_certificate
from structlap.graphs import Digraph, WeightedGraph, induced_subgraph, is_connected
from structlap.laplacian import digraph_laplacian, graph_of, laplacian, rationalize, support_equal
from structlap.spectral import gap_report, general_spectrum, min_spacing, spectral_scale, sym_spectrum


def unit(n, pairs):
    return WeightedGraph.from_edges(n, [(i, j, 1) for i, j in pairs])


def path(n):
    return unit(n, [(k, k + 1) for k in range(1, n)])


def star(n):
    return unit(n, [(1, k) for k in range(2, n + 1)])


def complete(n):
    return unit(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


class TestBuild:
    def test_path_weights(self):
        L, trace = build_simple_support_laplacian(path(5))
        assert [w for _, _, w in graph_of(L).edges] == [1, 2, 3, 4]
        assert all(step.stage == "path" for step in trace)
        assert gap_report(sym_spectrum(L)).simple

    def test_star_and_complete(self):
        for g in (star(4), complete(4)):
            L, _ = build_simple_support_laplacian(g)
            assert support_equal(L, laplacian(g))
            assert gap_report(sym_spectrum(L)).simple
        L, _ = build_simple_support_laplacian(complete(4))
        assert simplicity_certificate(rationalize(L)).verdict

    def test_random_supports(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            g = random_connected_graph(rng, int(rng.integers(2, 25)))
            L, _ = build_simple_support_laplacian(g)
            assert support_equal(L, laplacian(g)) and gap_report(sym_spectrum(L)).simple

    def test_disconnected(self):
        with pytest.raises(NotConnected):
            build_simple_support_laplacian(WeightedGraph(3, ((1, 2, 1),)))

    def test_digraph(self):
        dg = Digraph(4, ((1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 3, 1)))
        L, _ = build_simple_support_digraph_laplacian(dg)
        assert support_equal(L, digraph_laplacian(dg))
        vals = general_spectrum(L).eigenvalues
        assert min_spacing(vals) > 1e-8 * spectral_scale(vals)


def _check(res, L, eps0=1e-2):
    assert support_equal(res.result, L.to_real())
    assert res.achieved_norm < eps0
    vals = (general_spectrum if L.directed else sym_spectrum)(res.result).eigenvalues
    assert min_spacing(vals) > 1e-8 * spectral_scale(vals)


class TestPerturbToSimple:
    def test_already_simple(self):
        res = perturb_to_simple(laplacian(path(3)))
        assert res.perturbation == {} and res.attempts == 0 and res.achieved_norm == 0

    @pytest.mark.parametrize("g", [complete(3), star(5), complete(6)], ids=["K3", "S5", "K6"])
    def test_degenerate_inputs(self, g):
        L = laplacian(g)
        res = perturb_to_simple(L, 1e-2, certify=True)
        _check(res, L)
        assert res.certified.verdict

    def test_deterministic(self):
        L = laplacian(complete(5))
        assert perturb_to_simple(L, seed=3).perturbation == perturb_to_simple(L, seed=3).perturbation

    def test_directed_examples(self):
        L = digraph_laplacian(Digraph(3, ((1, 2, 1), (2, 3, 1))))
        _check(perturb_to_simple_directed(L), L)
        L = digraph_laplacian(Digraph(4, ((1, 2, 1), (1, 3, 1), (1, 4, 1))))
        _check(perturb_to_simple_directed(L), L)
        with pytest.raises(NoDivergingTree):
            perturb_to_simple_directed(digraph_laplacian(Digraph(4, ((1, 2, 1), (4, 2, 1), (1, 3, 1), (4, 3, 1)))))


class TestFiedlerAndBasis:
    def test_single_edge_untouched(self):
        L = laplacian(WeightedGraph(2, ((1, 2, 1),)))
        assert perturb_fiedler_nonzero(L).perturbation == {}
        assert perturb_basis_nonzero(L).perturbation == {}

    def test_p10_fiedler_already_fine(self):
        assert perturb_fiedler_nonzero(laplacian(path(10))).perturbation == {}

    def test_p3(self):
        L = laplacian(path(3))
        res = perturb_fiedler_nonzero(L)
        _check(res, L)
        assert res.min_fiedler_entry > 1e-8

    def test_p10_basis(self):
        L = laplacian(path(10))
        res = perturb_basis_nonzero(L)
        assert res.perturbation and res.achieved_norm < 1e-2
        vecs = sym_spectrum(res.result).eigenvectors
        assert all(np.abs(vecs[:, k]).min() > 1e-8 * np.abs(vecs[:, k]).max() for k in range(10))


class TestFiedlerCut:
    def test_p4(self):
        cut = fiedler_cut(laplacian(path(4)))
        assert (cut.positive, cut.negative, cut.cut_edges) == ((1, 2), (3, 4), ((2, 3),))

    def test_single_edge(self):
        cut = fiedler_cut(laplacian(WeightedGraph(2, ((1, 2, 1),))))
        assert (cut.positive, cut.negative, cut.cut_edges) == ((1,), (2,), ((1, 2),))

    def test_p3_degenerate(self):
        with pytest.raises(DegenerateFiedler):
            fiedler_cut(laplacian(path(3)))

    def test_random_cuts_connected(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            g = random_connected_graph(rng, int(rng.integers(2, 20)), weights="float")
            cut = fiedler_cut(laplacian(g))
            assert cut.positive_connected and cut.negative_connected
            assert is_connected(induced_subgraph(g, cut.positive))
