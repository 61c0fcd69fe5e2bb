import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import all_simple_paths, components_unionfind, random_connected_graph, reachability

from structlap.errors import InvalidGraph, InvalidPermutation, NotATree, NotConnected, PathNotInTree
from structlap.graphs import (
    Attachment,
    Digraph,
    WeightedGraph,
    branch_schedule,
    components,
    diverging_spanning_tree,
    induced_subgraph,
    is_connected,
    is_tree,
    is_weakly_connected,
    longest_path,
    reorder_nodes,
    spanning_tree,
)
from structlap.laplacian import laplacian
from structlap.spectral import sym_spectrum


def path(n):
    return WeightedGraph.from_edges(n, [(k, k + 1, 1) for k in range(1, n)])


def star(n):
    return WeightedGraph.from_edges(n, [(1, k, 1) for k in range(2, n + 1)])


G1 = Digraph(4, ((1, 2, 1), (4, 2, 1), (1, 3, 1), (4, 3, 1)))


class TestValidation:
    def test_orientation_normalised(self):
        g = WeightedGraph.from_edges(3, [(3, 1, 2), (2, 1, 1)])
        assert g.edges == ((1, 2, 1), (1, 3, 2))

    @pytest.mark.parametrize(
        "n, edges",
        [(0, []), (2, [(1, 1, 1)]), (2, [(1, 3, 1)]), (2, [(1, 2, 0)]), (2, [(1, 2, -1)]), (3, [(1, 2, 1), (2, 1, 1)])],
    )
    def test_rejects(self, n, edges):
        with pytest.raises(InvalidGraph):
            WeightedGraph.from_edges(n, edges)

    def test_digraph_rejects_duplicate_arc(self):
        with pytest.raises(InvalidGraph):
            Digraph(2, ((1, 2, 1), (1, 2, 2)))

    def test_antiparallel_arcs_allowed(self):
        assert Digraph(2, ((1, 2, 1), (2, 1, 1))).m == 2


class TestConnectivity:
    def test_examples(self):
        assert is_connected(path(4))
        assert not is_connected(WeightedGraph(3, ((1, 2, 1),)))
        assert is_connected(WeightedGraph(1, ()))

    def test_components_match_union_find(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(1, 15))
            pairs = {tuple(sorted(rng.choice(np.arange(1, n + 1), 2, replace=False))) for _ in range(n // 2)} if n > 1 else set()
            g = WeightedGraph.from_edges(n, [(int(i), int(j), 1) for i, j in pairs])
            assert len(components(g)) == components_unionfind(n, g.edges)


class TestSpanningTree:
    def test_tree_is_its_own(self):
        t = WeightedGraph.from_edges(4, [(1, 2, 1), (2, 3, 2), (2, 4, 3)])
        assert spanning_tree(t) == t

    def test_k3_gives_star_at_1(self):
        k3 = WeightedGraph.from_edges(3, [(1, 2, 1), (1, 3, 1), (2, 3, 1)])
        assert [e[:2] for e in spanning_tree(k3).edges] == [(1, 2), (1, 3)]

    def test_disconnected(self):
        with pytest.raises(NotConnected):
            spanning_tree(WeightedGraph(3, ((1, 2, 1),)))

    def test_random_is_spanning_subtree(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            g = random_connected_graph(rng, int(rng.integers(2, 20)))
            t = spanning_tree(g)
            assert is_tree(t) and set(t.edges) <= set(g.edges)


class TestLongestPath:
    def test_examples(self):
        assert longest_path(path(4)) == (1, 2, 3, 4)
        assert longest_path(star(4)) == (2, 1, 3)
        cat = WeightedGraph.from_edges(4, [(1, 2, 1), (2, 3, 1), (2, 4, 1)])
        assert longest_path(cat) == (1, 2, 3)
        assert longest_path(WeightedGraph(1, ())) == (1,)

    def test_not_a_tree(self):
        with pytest.raises(NotATree):
            longest_path(WeightedGraph.from_edges(3, [(1, 2, 1), (1, 3, 1), (2, 3, 1)]))

    def test_brute_force_diameter(self):
        rng = np.random.default_rng(2)
        for _ in range(60):
            n = int(rng.integers(2, 9))
            t = random_connected_graph(rng, n, extra=0)
            paths = all_simple_paths(t)
            best = max(len(p) for p in paths)
            lp = longest_path(t)
            assert len(lp) == best
            assert lp in paths
            assert (lp[0], lp[-1]) == min((p[0], p[-1]) for p in paths if len(p) == best)


class TestBranchSchedule:
    def test_path_tree_empty(self):
        assert branch_schedule(path(5), (1, 2, 3, 4, 5)) == []

    def test_two_edge_branch(self):
        # path 1..4 with branch 2-5-6
        t = WeightedGraph.from_edges(6, [(1, 2, 1), (2, 3, 1), (3, 4, 1), (2, 5, 1), (5, 6, 1)])
        assert branch_schedule(t, (1, 2, 3, 4)) == [Attachment((2, 5), 2), Attachment((5, 6), 5)]

    def test_root_side_branch_first(self):
        t = WeightedGraph.from_edges(5, [(1, 2, 1), (2, 3, 1), (3, 5, 1), (2, 4, 1)])
        sched = branch_schedule(t, (1, 2, 3))
        assert [a.anchor for a in sched] == [2, 3]

    def test_bad_path(self):
        with pytest.raises(PathNotInTree):
            branch_schedule(path(4), (1, 3))

    def test_each_attachment_has_one_covered_end(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            t = random_connected_graph(rng, int(rng.integers(2, 25)), extra=0)
            p = longest_path(t)
            covered = set(p)
            for (i, j), anchor in branch_schedule(t, p):
                assert anchor in (i, j) and (i in covered) != (j in covered)
                covered |= {i, j}
            assert covered == set(range(1, t.n + 1))


class TestDigraphs:
    def test_directed_path(self):
        root, tree = diverging_spanning_tree(Digraph(3, ((1, 2, 1), (2, 3, 1))))
        assert root == 1 and [a[:2] for a in tree.arcs] == [(1, 2), (2, 3)]

    def test_g1_has_none(self):
        assert diverging_spanning_tree(G1) is None
        assert is_weakly_connected(G1)

    def test_cycle_smallest_root(self):
        assert diverging_spanning_tree(Digraph(3, ((1, 2, 1), (2, 3, 1), (3, 1, 1))))[0] == 1

    def test_weak_connectivity(self):
        assert not is_weakly_connected(Digraph(4, ((1, 2, 1), (3, 4, 1))))
        assert is_weakly_connected(Digraph(2, ((1, 2, 1),)))

    def test_matches_transitive_closure(self):
        rng = np.random.default_rng(4)
        for _ in range(80):
            n = int(rng.integers(1, 8))
            arcs = {(int(i), int(j)) for i, j in rng.integers(1, n + 1, size=(n + 2, 2)) if i != j}
            dg = Digraph(n, tuple((i, j, 1) for i, j in sorted(arcs)))
            reach = reachability(n, dg.arcs)
            roots = [r for r in range(1, n + 1) if all(reach[r][1:])]
            found = diverging_spanning_tree(dg)
            if not roots:
                assert found is None
            else:
                root, tree = found
                assert root == roots[0] and tree.m == n - 1
                assert set(tree.arcs) <= set(dg.arcs)
                assert all(reachability(n, tree.arcs)[root][1:])


class TestReorder:
    def test_identity_and_swap(self):
        g = WeightedGraph.from_edges(3, [(1, 2, 2), (2, 3, 5)])
        assert reorder_nodes(g, [1, 2, 3]) == g
        e = WeightedGraph.from_edges(2, [(1, 2, 7)])
        assert reorder_nodes(e, [2, 1]) == e

    def test_rejects_non_permutation(self):
        with pytest.raises(InvalidPermutation):
            reorder_nodes(path(3), [1, 1, 2])

    @settings(max_examples=40, deadline=None)
    @given(st.permutations(list(range(1, 7))), st.integers(0, 1000))
    def test_spectrum_invariant(self, perm, seed):
        g = random_connected_graph(np.random.default_rng(seed), 6, weights="float")
        a = sym_spectrum(laplacian(g)).eigenvalues
        b = sym_spectrum(laplacian(reorder_nodes(g, perm))).eigenvalues
        assert np.allclose(a, b, atol=1e-10)


def test_induced_subgraph_relabels():
    g = WeightedGraph.from_edges(4, [(1, 2, 1), (2, 4, 3), (3, 4, 2)])
    sub = induced_subgraph(g, [2, 4])
    assert sub.n == 2 and sub.edges == ((1, 2, 3),)
