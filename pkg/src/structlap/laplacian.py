"""Laplacian matrices and same-support (structural) perturbations.

Matrices are dense numpy arrays, either ``float64`` or ``object`` arrays of
``Fraction`` (exact mode).  Exact matrices may be converted to floats with
:meth:`LaplacianMatrix.to_real`; the reverse direction is not offered.

Perturbation tuples are plain dicts keyed by 1-based matrix positions:
``(i, j)`` with ``i < j`` for symmetric matrices, ordered ``(i, j)`` with
``i != j`` for directed ones.  Only positions in the support may appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import SupportViolation
from .graphs import Digraph, WeightedGraph

REAL_ROW_SUM_RTOL = 1e-12


def _is_exact_scalar(x):
    return isinstance(x, Rational) and not isinstance(x, bool)


def _exact_array(rows):
    a = np.empty((len(rows), len(rows)), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            a[i, j] = Fraction(x)
    return a


@dataclass(frozen=True, eq=False)
class LaplacianMatrix:
    """Zero-row-sum square matrix with an exact/real tag.

    Off-diagonal signs are not enforced here because ``L(E)`` for arbitrary
    real ``E`` need not be a Laplacian; see :attr:`is_laplacian`.
    """

    entries: np.ndarray
    exact: bool = False
    directed: bool = False

    def __post_init__(self):
        a = self.entries
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"Laplacian must be square, got shape {a.shape}")
        if self.exact:
            if a.dtype != object or not all(isinstance(x, Fraction) for x in a.flat):
                raise TypeError("exact Laplacian needs Fraction entries")
            if any(s != 0 for s in a.sum(axis=1)):
                raise ValueError("row sums are not exactly zero")
            if not self.directed and not (a == a.T).all():
                raise ValueError("symmetric Laplacian is not symmetric")
        else:
            a = np.asarray(a, dtype=float)
            object.__setattr__(self, "entries", a)
            tol = REAL_ROW_SUM_RTOL * max(1.0, float(np.abs(a).max(initial=0.0)))
            if np.abs(a.sum(axis=1)).max(initial=0.0) > tol:
                raise ValueError("row sums are not zero")
            if not self.directed and not np.array_equal(a, a.T):
                raise ValueError("symmetric Laplacian is not symmetric")
        self.entries.setflags(write=False)

    @property
    def n(self):
        return self.entries.shape[0]

    def to_real(self) -> "LaplacianMatrix":
        if not self.exact:
            return self
        return LaplacianMatrix(self.entries.astype(float), exact=False, directed=self.directed)

    def support(self):
        """Nonzero off-diagonal positions, 1-based (``i < j`` when symmetric)."""
        a = self.entries
        n = self.n
        if self.directed:
            return {(i + 1, j + 1) for i in range(n) for j in range(n) if i != j and a[i, j] != 0}
        return {(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if a[i, j] != 0}

    @property
    def is_laplacian(self):
        """True iff every off-diagonal entry is ``<= 0``."""
        off = self.entries.copy()
        for k in range(self.n):
            off[k, k] = 0
        return bool((off <= 0).all())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, LaplacianMatrix):
            return NotImplemented
        return (
            self.exact == other.exact
            and self.directed == other.directed
            and self.entries.shape == other.entries.shape
            and bool((self.entries == other.entries).all())
        )

    __hash__ = None


def _assemble(n, weighted_pairs, exact, directed):
    """Laplacian from ``(row, col, w)`` with off-diagonal ``-w`` at (row, col)."""
    if exact:
        a = np.empty((n, n), dtype=object)
        a.fill(Fraction(0))
    else:
        a = np.zeros((n, n))
    for r, c, w in weighted_pairs:
        w = Fraction(w) if exact else float(w)
        a[r - 1, c - 1] -= w
        a[r - 1, r - 1] += w
        if not directed:
            a[c - 1, r - 1] -= w
            a[c - 1, c - 1] += w
    return LaplacianMatrix(a, exact=exact, directed=directed)


def laplacian(g: WeightedGraph, exact=None) -> LaplacianMatrix:
    """``D - W`` of an undirected graph; exact when every weight is rational (default)."""
    if exact is None:
        exact = g.is_exact()
    return _assemble(g.n, g.edges, exact, directed=False)


def digraph_laplacian(dg: Digraph, exact=None) -> LaplacianMatrix:
    """In-degree Laplacian: row ``j`` carries ``-w`` at column ``i`` for each arc ``i -> j``.

    With this orientation a diverging (out-)tree gives a triangular matrix and
    0 is a simple eigenvalue exactly when such a tree exists.
    """
    if exact is None:
        exact = dg.is_exact()
    return _assemble(dg.n, ((j, i, w) for i, j, w in dg.arcs), exact, directed=True)


def graph_of(L: LaplacianMatrix) -> WeightedGraph:
    """Weighted graph whose Laplacian is ``L`` (off-diagonals must be ``<= 0``)."""
    if L.directed:
        raise TypeError("use digraph_of for directed Laplacians")
    a = L.entries
    edges = [(i, j, -a[i - 1, j - 1]) for i, j in sorted(L.support())]
    if not L.exact:
        edges = [(i, j, float(w)) for i, j, w in edges]
    return WeightedGraph(L.n, tuple(edges))


def digraph_of(L: LaplacianMatrix) -> Digraph:
    if not L.directed:
        raise TypeError("use graph_of for symmetric Laplacians")
    a = L.entries
    arcs = [(j, i, -a[i - 1, j - 1]) for i, j in sorted(L.support(), key=lambda p: (p[1], p[0]))]
    if not L.exact:
        arcs = [(i, j, float(w)) for i, j, w in arcs]
    return Digraph(L.n, tuple(arcs))


def _check_mode(L, eps):
    if L.exact and not all(_is_exact_scalar(v) for v in eps.values()):
        raise TypeError("exact Laplacian with inexact perturbation; call to_real() first")


def structural_perturbation(L: LaplacianMatrix, eps: dict) -> LaplacianMatrix:
    """``L(E)``: ``-eps[i,j]`` on the support of ``L``, symmetric, zero row sums."""
    if L.directed:
        raise TypeError("use directed_structural_perturbation for nonsymmetric Laplacians")
    _check_mode(L, eps)
    support = L.support()
    for key in eps:
        if key not in support:
            raise SupportViolation(f"pair {key} is not in the support")
    return _assemble(L.n, ((i, j, e) for (i, j), e in eps.items()), L.exact, directed=False)


def directed_structural_perturbation(L: LaplacianMatrix, eps: dict) -> LaplacianMatrix:
    """Directed analogue: ``-eps[i,j]`` at matrix position ``(i, j)`` on the support, no symmetry."""
    if not L.directed:
        raise TypeError("use structural_perturbation for symmetric Laplacians")
    _check_mode(L, eps)
    support = L.support()
    for key in eps:
        if key not in support:
            raise SupportViolation(f"position {key} is not in the support")
    return _assemble(L.n, ((i, j, e) for (i, j), e in eps.items()), L.exact, directed=True)


def apply_perturbation(L: LaplacianMatrix, eps: dict) -> LaplacianMatrix:
    """``L + L(E)``.  The result is a Laplacian of a subgraph iff ``is_laplacian``."""
    if L.directed:
        delta = directed_structural_perturbation(L, eps)
    else:
        delta = structural_perturbation(L, eps)
    return LaplacianMatrix(L.entries + delta.entries, exact=L.exact, directed=L.directed)


def matrix_norm(M) -> float:
    """Max-absolute-entry norm."""
    a = np.asarray(M.entries if isinstance(M, LaplacianMatrix) else M)
    if a.size == 0:
        return 0.0
    return float(max(abs(x) for x in a.flat)) if a.dtype == object else float(np.abs(a).max())


def perturbation_norm(L: LaplacianMatrix, eps: dict) -> float:
    """``matrix_norm(L(E))`` without building the matrix twice."""
    if L.directed:
        return matrix_norm(directed_structural_perturbation(L, eps))
    return matrix_norm(structural_perturbation(L, eps))


def support_equal(L1: LaplacianMatrix, L2: LaplacianMatrix) -> bool:
    if L1.n != L2.n:
        raise ValueError("size mismatch")
    return L1.support() == L2.support()


def rationalize(L: LaplacianMatrix, max_denominator=10**6) -> LaplacianMatrix:
    """Round off-diagonal weights to rationals with bounded denominator; diagonal re-derived."""
    if L.exact:
        return L
    a = L.entries
    n = L.n
    pairs = []
    keys = L.support()
    for i, j in sorted(keys):
        w = Fraction(-a[i - 1, j - 1]).limit_denominator(max_denominator)
        pairs.append((i, j, w))
    return _assemble(n, pairs, True, L.directed)
