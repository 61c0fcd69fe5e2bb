"""Exact polynomial certificates over the rationals.

Characteristic polynomials come from the Faddeev-LeVerrier trace recursion run
on an integer-scaled copy of the matrix; resultants are Sylvester determinants
evaluated by fraction-free (Bareiss) elimination.  Python integers carry all
intermediate values, so every verdict here is exact.

Sylvester convention: for ``P`` of degree ``m`` and ``Q`` of degree ``d`` the
matrix has ``d`` shifted rows of ``P``'s coefficients (highest degree first)
followed by ``m`` shifted rows of ``Q``'s, which gives
``Res(P, Q) = lead(P)^d lead(Q)^m prod(alpha_i - beta_j)``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import XNotARoot, ZeroPolynomial
from .laplacian import LaplacianMatrix


@dataclass(frozen=True)
class Polynomial:
    """Rational polynomial, coefficients in ascending degree; zero is ``()``."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial(0)"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c:
                terms.append(f"{c}" + ("" if k == 0 else "*X" if k == 1 else f"*X^{k}"))
        return "Polynomial(" + " + ".join(terms) + ")"


def _common_denominator(values):
    d = 1
    for x in values:
        d = d * x.denominator // math.gcd(d, x.denominator)
    return d


def _as_fraction_matrix(M):
    if isinstance(M, LaplacianMatrix):
        if not M.exact:
            raise TypeError("exact certificates need a rational Laplacian")
        M = M.entries
    a = np.asarray(M, dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        if isinstance(x, float):
            raise TypeError("floating-point entry in exact computation")
        out[idx] = Fraction(x)
    return out


def _integer_charpoly(B, with_adjugate=False):
    """Faddeev-LeVerrier on an integer matrix; all divisions are exact.

    Returns ascending integer coefficients and, optionally, the matrices
    ``M_1..M_n`` with ``adj(XI - B) = sum_k M_k X^(n-k)``.
    """
    n = B.shape[0]
    c = [0] * (n + 1)
    c[n] = 1
    eye = np.zeros((n, n), dtype=object)
    eye.fill(0)
    for i in range(n):
        eye[i, i] = 1
    M = np.zeros((n, n), dtype=object)
    M.fill(0)
    mats = []
    for k in range(1, n + 1):
        M = B.dot(M) + c[n - k + 1] * eye
        if with_adjugate:
            mats.append(M)
        tr = int(np.trace(B.dot(M)))
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")  # cannot happen for integer B
        c[n - k] = q
    return c, mats


def char_poly(M) -> Polynomial:
    """``det(XI - M)`` exactly, for a matrix of rationals."""
    a = _as_fraction_matrix(M)
    n = a.shape[0]
    if n == 0:
        return Polynomial((1,))
    d = _common_denominator(a.flat)
    B = np.vectorize(lambda x: int(x * d), otypes=[object])(a)
    c, _ = _integer_charpoly(B)
    # chi_M(X) = d^-n chi_B(dX), so coefficient k picks up d^(k-n)
    return Polynomial(tuple(Fraction(ck, d ** (n - k)) for k, ck in enumerate(c)))


def bareiss_determinant(rows) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def sylvester_matrix(P: Polynomial, Q: Polynomial):
    m, d = P.degree, Q.degree
    size = m + d
    p_desc = list(reversed(P.coeffs))
    q_desc = list(reversed(Q.coeffs))
    rows = []
    for r in range(d):
        rows.append([0] * r + p_desc + [0] * (size - r - len(p_desc)))
    for r in range(m):
        rows.append([0] * r + q_desc + [0] * (size - r - len(q_desc)))
    return rows


def _integer_scaled(P: Polynomial):
    d = _common_denominator(P.coeffs)
    return d, Polynomial(tuple(c * d for c in P.coeffs))


def sylvester_resultant(P: Polynomial, Q: Polynomial) -> Fraction:
    """Exact ``Res(P, Q)``; zero iff ``P`` and ``Q`` share a root."""
    if P.is_zero() or Q.is_zero():
        raise ZeroPolynomial("resultant of the zero polynomial")
    dp, Pi = _integer_scaled(P)
    dq, Qi = _integer_scaled(Q)
    rows = sylvester_matrix(Pi, Qi)
    det = bareiss_determinant([[int(x) for x in r] for r in rows])
    # Res(dp P, dq Q) = dp^deg(Q) dq^deg(P) Res(P, Q)
    return Fraction(det, dp ** Q.degree * dq ** P.degree)


def discriminant(P: Polynomial) -> Fraction:
    """``(-1)^(d(d-1)/2) Res(P, P') / lead(P)``; zero iff ``P`` has a multiple root."""
    if P.is_zero():
        raise ZeroPolynomial("discriminant of the zero polynomial")
    d = P.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * sylvester_resultant(P, P.derivative()) / P.lead


def polynomial_divide_by_x(P: Polynomial) -> Polynomial:
    if P.is_zero() or P.coeffs[0] != 0:
        raise XNotARoot(f"{P!r} is not divisible by X")
    return Polynomial(P.coeffs[1:])


@dataclass(frozen=True)
class Certificate:
    kind: str  # "simplicity" | "subgraph-disjoint"
    value: Fraction
    verdict: bool
    context: str


def matrix_digest(a) -> str:
    """Short stable hash of a rational matrix (for certificate context)."""
    h = hashlib.sha256()
    for x in np.asarray(a, dtype=object).flat:
        h.update(str(Fraction(x)).encode())
        h.update(b",")
    return h.hexdigest()[:16]


def simplicity_certificate(L: LaplacianMatrix) -> Certificate:
    """Exact verdict on whether every eigenvalue of ``L`` is simple."""
    a = _as_fraction_matrix(L)
    chi = char_poly(a)
    value = discriminant(chi)
    return Certificate("simplicity", value, value != 0, f"n={a.shape[0]};{matrix_digest(a)}")


def induced_laplacian(L: LaplacianMatrix, drop_node: int) -> LaplacianMatrix:
    """Laplacian of the subgraph induced by all nodes except ``drop_node`` (degrees recomputed)."""
    a = _as_fraction_matrix(L)
    n = a.shape[0]
    if not 1 <= drop_node <= n:
        raise IndexError(f"drop_node {drop_node} out of range 1..{n}")
    keep = [k for k in range(n) if k != drop_node - 1]
    sub = a[np.ix_(keep, keep)].copy()
    for r in range(len(keep)):
        sub[r, r] = Fraction(0)
        sub[r, r] = -sum((sub[r, c] for c in range(len(keep)) if c != r), Fraction(0))
    return LaplacianMatrix(sub, exact=True, directed=L.directed)


def subgraph_disjoint_certificate(L: LaplacianMatrix, drop_node: Optional[int] = None) -> Certificate:
    """Exact verdict on whether ``L`` and its node-deleted induced Laplacian share only the eigenvalue 0."""
    a = _as_fraction_matrix(L)
    n = a.shape[0]
    if drop_node is None:
        drop_node = n
    if n < 2:
        raise ValueError("need at least two nodes")
    sub = induced_laplacian(L, drop_node)
    p_full = polynomial_divide_by_x(char_poly(a))
    p_sub = polynomial_divide_by_x(char_poly(sub.entries))
    value = sylvester_resultant(p_sub, p_full)
    return Certificate(
        "subgraph-disjoint", value, value != 0, f"n={n};drop={drop_node};{matrix_digest(a)}"
    )


# --- modular fast path -------------------------------------------------------
# A value that is nonzero modulo a prime is nonzero over the integers, so these
# helpers certify "nonzero" verdicts cheaply; a zero residue falls back to the
# exact computation above.

MODULUS = 2**61 - 1


def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def resultant_mod(p, q, mod=MODULUS):
    """``Res(p, q) mod mod`` for ascending integer coefficient lists (Euclidean algorithm)."""
    p = _poly_trim([x % mod for x in p])
    q = _poly_trim([x % mod for x in q])
    if not p or not q:
        return 0
    res = 1
    while True:
        dp, dq = len(p) - 1, len(q) - 1
        if dq == 0:
            return res * pow(q[0], dp, mod) % mod
        if dp < dq:
            if (dp * dq) % 2:
                res = -res % mod
            p, q = q, p
            continue
        # p = s*q + r  =>  Res(p, q) = (-1)^(dp dq) lead(q)^(dp - deg r) Res(r, q)
        inv = pow(q[-1], mod - 2, mod)
        r = p[:]
        for shift in range(dp - dq, -1, -1):
            f = r[shift + dq] * inv % mod
            if f:
                for k in range(dq + 1):
                    r[shift + k] = (r[shift + k] - f * q[k]) % mod
        r = _poly_trim(r[:dq])
        if not r:
            return 0
        dr = len(r) - 1
        res = res * pow(q[-1], dp - dr, mod) % mod
        if (dp * dq) % 2:
            res = -res % mod
        p, q = q, r


def integer_matrix(L: LaplacianMatrix):
    """``(d, B)`` with ``B = d * L`` an integer object array."""
    a = _as_fraction_matrix(L)
    d = _common_denominator(a.flat)
    return d, np.vectorize(lambda x: int(x * d), otypes=[object])(a)


def charpoly_mod(B, mod=MODULUS):
    """Characteristic polynomial of an integer matrix modulo a prime, via Hessenberg reduction."""
    n = B.shape[0]
    H = [[int(x) % mod for x in row] for row in B]
    for k in range(n - 2):
        piv = next((i for i in range(k + 1, n) if H[i][k]), None)
        if piv is None:
            continue
        if piv != k + 1:
            H[piv], H[k + 1] = H[k + 1], H[piv]
            for row in H:
                row[piv], row[k + 1] = row[k + 1], row[piv]
        inv = pow(H[k + 1][k], mod - 2, mod)
        for i in range(k + 2, n):
            f = H[i][k] * inv % mod
            if f:
                Hi, Hk = H[i], H[k + 1]
                for j in range(n):
                    Hi[j] = (Hi[j] - f * Hk[j]) % mod
                for row in H:
                    row[k + 1] = (row[k + 1] + f * row[i]) % mod
    # characteristic polynomials of leading principal blocks of the Hessenberg form
    polys = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [0] + prev  # X * p_{m-1}
        h = H[m - 1][m - 1]
        for k in range(len(prev)):
            cur[k] = (cur[k] - h * prev[k]) % mod
        t = 1
        for i in range(1, m):
            t = t * H[m - i][m - i - 1] % mod
            coef = t * H[m - i - 1][m - 1] % mod
            if coef:
                pp = polys[m - i - 1]
                for k in range(len(pp)):
                    cur[k] = (cur[k] - coef * pp[k]) % mod
        polys.append(cur)
    return polys[n]


SMALL_MODULUS = 67108859  # largest prime below 2**26: int64 matmuls cannot overflow for n < 2**11


def _charpoly_minors_mod(B, mod=SMALL_MODULUS):
    """Faddeev-LeVerrier modulo a word-size prime, vectorised in int64.

    Returns ``chi`` and, for each ``i``, the principal minor polynomial
    ``chi_{B(i|i)}`` read off the diagonal of the adjugate expansion.
    """
    n = B.shape[0]
    A = np.array([[int(x) % mod for x in row] for row in B], dtype=np.int64)
    c = [0] * (n + 1)
    c[n] = 1
    M = np.zeros((n, n), dtype=np.int64)
    diag = np.zeros((n, n), dtype=np.int64)  # diag[k-1] = diagonal of M_k
    for k in range(1, n + 1):
        M = (A @ M) % mod
        M[np.diag_indices(n)] = (M[np.diag_indices(n)] + c[n - k + 1]) % mod
        diag[k - 1] = np.diag(M)
        tr = int(np.trace((A @ M) % mod)) % mod
        c[n - k] = (-tr * pow(k, mod - 2, mod)) % mod
    minors = [[int(diag[n - 1 - j, i]) for j in range(n)] for i in range(n)]
    return c, minors


def discriminant_is_zero(L: LaplacianMatrix) -> bool:
    """Exact test ``Discr(chi_L) == 0`` with a modular shortcut for the common nonzero case."""
    _, B = integer_matrix(L)
    chi, _ = _charpoly_minors_mod(B, SMALL_MODULUS)
    if resultant_mod(chi, [k * c for k, c in enumerate(chi)][1:], SMALL_MODULUS) != 0:
        return False
    chi = charpoly_mod(B)
    deriv = [k * c for k, c in enumerate(chi)][1:]
    if resultant_mod(chi, deriv) != 0:
        return False
    return not simplicity_certificate(L).verdict


def eigvec_zero_free(L: LaplacianMatrix) -> bool:
    """Exact certificate that no eigenvector of a simple-spectrum ``L`` has a zero entry.

    For a simple eigenvalue ``lam`` with unit eigenvector ``v``,
    ``chi_{L(i|i)}(lam) = chi_L'(lam) v_i^2``, so ``v_i = 0`` forces a common root
    of ``chi_L`` and the principal minor polynomial ``chi_{L(i|i)}``.  The
    minors come for free from the Faddeev-LeVerrier adjugate expansion.
    Returns ``False`` when some resultant vanishes exactly.
    """
    d, B = integer_matrix(L)
    n = B.shape[0]
    chi, minors = _charpoly_minors_mod(B, SMALL_MODULUS)
    if all(resultant_mod(chi, m, SMALL_MODULUS) for m in minors):
        return True
    chi, mats = _integer_charpoly(B, with_adjugate=True)
    for i in range(n):
        # adj(XI - B)_ii = sum_k (M_k)_ii X^(n-k)
        minor = [0] * n
        for k, Mk in enumerate(mats, start=1):
            minor[n - k] = int(Mk[i, i])
        if resultant_mod(chi, minor) != 0:
            continue
        exact = sylvester_resultant(Polynomial(tuple(chi)), Polynomial(tuple(minor)))
        if exact == 0:
            return False
    return True


def subgraph_spectra_intersect(L: LaplacianMatrix, drop_node: Optional[int] = None) -> bool:
    """Exact ``not subgraph_disjoint_certificate(L, drop_node).verdict`` with a modular shortcut."""
    n = L.n
    if drop_node is None:
        drop_node = n
    d, B = integer_matrix(L)
    keep = [k for k in range(n) if k != drop_node - 1]
    S = B[np.ix_(keep, keep)].copy()
    for r in range(len(keep)):
        S[r, r] = 0
        S[r, r] = -sum(S[r, c] for c in range(len(keep)) if c != r)
    p_full = charpoly_mod(B)
    p_sub = charpoly_mod(S)
    if p_full[0] % MODULUS or p_sub[0] % MODULUS:
        raise XNotARoot("characteristic polynomial is not divisible by X")
    if resultant_mod(p_sub[1:], p_full[1:]) != 0:
        return False
    return not subgraph_disjoint_certificate(L, drop_node).verdict
