import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from oracles import (
    charpoly_oracle,
    det_permutation,
    has_repeated_root,
    random_connected_graph,
    random_rational_matrix,
    share_root,
)

from structlap.errors import XNotARoot
from structlap.exact import (
    MODULUS,
    Polynomial,
    _integer_charpoly,
    bareiss_determinant,
    char_poly,
    charpoly_mod,
    discriminant,
    discriminant_is_zero,
    eigvec_zero_free,
    induced_laplacian,
    integer_matrix,
    polynomial_divide_by_x,
    resultant_mod,
    simplicity_certificate,
    subgraph_disjoint_certificate,
    subgraph_spectra_intersect,
    sylvester_resultant,
)
from structlap.graphs import WeightedGraph
from structlap.laplacian import laplacian


def P(*coeffs):
    """Polynomial from descending coefficients (reads like the math)."""
    return Polynomial(tuple(F(c) for c in reversed(coeffs)))


def path(n):
    return laplacian(WeightedGraph.from_edges(n, [(k, k + 1, 1) for k in range(1, n)]))


def complete(n):
    return laplacian(WeightedGraph.from_edges(n, [(i, j, 1) for i in range(1, n + 1) for j in range(i + 1, n + 1)]))


class TestCharPoly:
    def test_examples(self):
        assert char_poly(laplacian(WeightedGraph(2, ((1, 2, 1),)))) == P(1, -2, 0)
        assert char_poly(path(3)) == P(1, -4, 3, 0)
        assert char_poly(np.array([[F(0), F(0)], [F(0), F(0)]], dtype=object)) == P(1, 0, 0)

    def test_permutation_expansion_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(1, 7))
            a = random_rational_matrix(rng, n)
            got = char_poly(np.array(a, dtype=object))
            assert list(got.coeffs) == charpoly_oracle(a)

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            char_poly(np.array([[0.5]]))

    def test_modular_agrees(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            g = random_connected_graph(rng, int(rng.integers(2, 9)), weights="rational")
            d, B = integer_matrix(laplacian(g))
            exact, _ = _integer_charpoly(B)
            assert [c % MODULUS for c in exact] == [c % MODULUS for c in charpoly_mod(B)]


def test_bareiss_matches_leibniz():
    rng = np.random.default_rng(2)
    for _ in range(40):
        n = int(rng.integers(1, 7))
        a = [[int(x) for x in row] for row in rng.integers(-9, 10, size=(n, n))]
        assert bareiss_determinant(a) == det_permutation(a)


class TestResultant:
    def test_examples(self):
        assert sylvester_resultant(P(1, -1), P(1, -2)) == -1
        assert sylvester_resultant(P(1, -3, 2), P(1, -1)) == 0
        assert sylvester_resultant(P(1, 0), P(1, 1)) == 1

    def test_product_formula(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            a = [int(x) for x in rng.integers(-5, 6, size=int(rng.integers(1, 4)))]
            b = [int(x) for x in rng.integers(-5, 6, size=int(rng.integers(1, 4)))]
            pa = Polynomial((F(1),))
            for r in a:
                pa = Polynomial(tuple(np.convolve([float(-r), 1.0], [float(c) for c in pa.coeffs]).astype(int).tolist()))
            pb = Polynomial((F(1),))
            for r in b:
                pb = Polynomial(tuple(np.convolve([float(-r), 1.0], [float(c) for c in pb.coeffs]).astype(int).tolist()))
            expect = 1
            for x, y in itertools.product(a, b):
                expect *= x - y
            assert sylvester_resultant(pa, pb) == expect

    def test_zero_iff_gcd(self):
        rng = np.random.default_rng(4)
        for _ in range(60):
            p = [F(int(x)) for x in rng.integers(-3, 4, size=int(rng.integers(2, 5)))]
            q = [F(int(x)) for x in rng.integers(-3, 4, size=int(rng.integers(2, 5)))]
            if p[-1] == 0 or q[-1] == 0:
                continue
            if rng.random() < 0.5:  # force a shared factor half of the time
                p = list(np.convolve([1, -1], p))
                q = list(np.convolve([1, -1], q))
            r = sylvester_resultant(Polynomial(tuple(p)), Polynomial(tuple(q)))
            assert (r == 0) == share_root(p, q)

    def test_modular_agrees(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            p = [int(x) for x in rng.integers(-50, 51, size=int(rng.integers(2, 7)))]
            q = [int(x) for x in rng.integers(-50, 51, size=int(rng.integers(2, 7)))]
            if p[-1] == 0 or q[-1] == 0:
                continue
            exact = sylvester_resultant(Polynomial(tuple(p)), Polynomial(tuple(q)))
            assert resultant_mod(p, q) == exact % MODULUS


class TestDiscriminant:
    def test_examples(self):
        assert discriminant(P(1, 0, -1)) == 4
        assert discriminant(P(1, 0, 0)) == 0
        assert discriminant(char_poly(complete(3))) == 0
        assert discriminant(char_poly(path(3))) == 36

    def test_quadratic_convention(self):
        for a, b, c in [(1, 3, 1), (2, -5, 2), (3, 1, 7)]:
            assert discriminant(P(a, b, c)) == b * b - 4 * a * c

    def test_zero_iff_repeated_root(self):
        rng = np.random.default_rng(6)
        for _ in range(60):
            p = [F(int(x)) for x in rng.integers(-4, 5, size=int(rng.integers(3, 6)))]
            if p[-1] == 0:
                continue
            if rng.random() < 0.5:
                p = list(np.convolve([1, -2, 1], p))
            assert (discriminant(Polynomial(tuple(p))) == 0) == has_repeated_root(p)


class TestCertificates:
    def test_simplicity(self):
        assert not simplicity_certificate(complete(3)).verdict
        c = simplicity_certificate(path(3))
        assert c.verdict and c.value == 36
        assert simplicity_certificate(laplacian(WeightedGraph(1, ()))).verdict

    def test_fast_path_agrees(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            g = random_connected_graph(rng, int(rng.integers(2, 8)), weights="unit")
            L = laplacian(g)
            assert discriminant_is_zero(L) == (not simplicity_certificate(L).verdict)

    def test_divide_by_x(self):
        assert polynomial_divide_by_x(P(1, -4, 3, 0)) == P(1, -4, 3)
        assert polynomial_divide_by_x(P(1, 0)) == P(1)
        with pytest.raises(XNotARoot):
            polynomial_divide_by_x(P(1, 0, 1))

    def test_subgraph_examples(self):
        edge = laplacian(WeightedGraph(2, ((1, 2, 1),)))
        c = subgraph_disjoint_certificate(edge, 2)
        assert c.verdict and c.value == 1
        assert subgraph_disjoint_certificate(path(3), 3).value == -1
        assert subgraph_disjoint_certificate(complete(3), 3).value == 1
        assert list(induced_laplacian(path(3), 3).entries.flat) == [1, -1, -1, 1]

    def test_subgraph_fast_path_agrees(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            g = random_connected_graph(rng, int(rng.integers(2, 7)), weights="unit")
            L = laplacian(g)
            for drop in range(1, g.n + 1):
                assert subgraph_spectra_intersect(L, drop) == (not subgraph_disjoint_certificate(L, drop).verdict)

    def test_shared_eigenvalue_instance(self):
        # exhaustive search over small unit graphs for a node whose removal keeps a nonzero eigenvalue
        found = None
        for n in range(3, 6):
            pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
            for mask in range(1, 1 << len(pairs)):
                edges = [(i, j, 1) for k, (i, j) in enumerate(pairs) if mask >> k & 1]
                g = WeightedGraph.from_edges(n, edges)
                from structlap.graphs import is_connected

                if not is_connected(g):
                    continue
                L = laplacian(g)
                if not subgraph_disjoint_certificate(L, n).verdict:
                    found = L
                    break
            if found is not None:
                break
        assert found is not None
        s_full = np.linalg.eigvalsh(found.to_real().entries)
        s_sub = np.linalg.eigvalsh(induced_laplacian(found, found.n).to_real().entries)
        shared = [x for x in s_full if x > 1e-9 and np.min(np.abs(s_sub - x)) < 1e-9]
        assert shared


class TestEigvecZeroFree:
    def test_p3_has_zero(self):
        assert not eigvec_zero_free(path(3))

    def test_p10_has_zero_p4_not(self):
        assert not eigvec_zero_free(path(10))
        assert eigvec_zero_free(path(4))

    def test_matches_numerics(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            g = random_connected_graph(rng, int(rng.integers(2, 7)), weights="rational")
            L = laplacian(g)
            if discriminant_is_zero(L):
                continue
            vecs = np.linalg.eigh(L.to_real().entries)[1]
            numeric = np.abs(vecs).min() > 1e-9
            assert eigvec_zero_free(L) == numeric
