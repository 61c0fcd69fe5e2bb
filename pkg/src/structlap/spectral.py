"""Numerical spectra, gap statistics, Fiedler vectors and eigenvalue derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, DegenerateLambda, DegenerateLambda2, Disconnected, SupportViolation
from .laplacian import LaplacianMatrix

TAU_GAP = 1e-8
TAU_V = 1e-8
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns aligned with eigenvalues
    residuals: np.ndarray
    symmetric: bool = True


@dataclass(frozen=True)
class GapReport:
    min_gap: float
    scale: float
    simple: bool
    tau_gap: float = TAU_GAP


def _real_matrix(L):
    if isinstance(L, LaplacianMatrix):
        return L.to_real().entries
    return np.asarray(L, dtype=float)


def _residuals(a, vals, vecs):
    norm = max(1.0, float(np.abs(vals).max(initial=0.0)))
    r = a @ vecs - vecs * vals
    return np.linalg.norm(r, axis=0) / norm


def sym_spectrum(L) -> SpectralDecomposition:
    """Full eigendecomposition of a symmetric Laplacian, ascending.

    LAPACK ``dsyev`` (Householder tridiagonalisation followed by implicit QL/QR)
    does the work.  The eigenvalue of the constant direction (the one closest
    to zero) is reported as exactly 0.
    """
    a = _real_matrix(L)
    n = a.shape[0]
    try:
        vals, vecs = scipy.linalg.eigh(a, driver="ev")
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(exc), {"n": n}) from exc
    vals = np.array(vals)
    if n:
        vals[int(np.abs(vals).argmin())] = 0.0
    res = _residuals(a, vals, vecs)
    worst = float(res.max(initial=0.0))
    if worst > RESIDUAL_TOL:
        raise ConvergenceFailure(
            f"residual {worst:.3e} exceeds {RESIDUAL_TOL:.0e}",
            {"n": n, "worst_residual": worst, "worst_index": int(res.argmax()) + 1},
        )
    return SpectralDecomposition(vals, vecs, res, symmetric=True)


def general_spectrum(L) -> SpectralDecomposition:
    """Complex spectrum of a (possibly nonsymmetric) Laplacian via LAPACK ``dgeev``.

    Sorted by (real, imag); eigenvectors are scaled to unit 2-norm.
    """
    a = _real_matrix(L)
    n = a.shape[0]
    try:
        vals, vecs = scipy.linalg.eig(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise ConvergenceFailure(str(exc), {"n": n}) from exc
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    vecs = vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    res = _residuals(a, vals, vecs)
    worst = float(res.max(initial=0.0))
    if worst > RESIDUAL_TOL:
        raise ConvergenceFailure(f"residual {worst:.3e} exceeds {RESIDUAL_TOL:.0e}", {"n": n})
    return SpectralDecomposition(vals, vecs, res, symmetric=False)


def spectrum(L: LaplacianMatrix) -> SpectralDecomposition:
    return general_spectrum(L) if L.directed else sym_spectrum(L)


def min_spacing(values) -> float:
    """Smallest distance between two entries (consecutive for sorted reals, pairwise for complex)."""
    v = np.asarray(values)
    if v.size < 2:
        return math.inf
    if np.iscomplexobj(v):
        d = np.abs(v[:, None] - v[None, :])
        d[np.diag_indices_from(d)] = np.inf
        return float(d.min())
    return float(np.diff(np.sort(v)).min())


def spectral_scale(values) -> float:
    return max(1.0, float(np.abs(np.asarray(values)).max(initial=0.0)))


def gap_report(s: SpectralDecomposition, tau_gap: float = TAU_GAP) -> GapReport:
    gap = min_spacing(s.eigenvalues)
    scale = spectral_scale(s.eigenvalues)
    return GapReport(gap, scale, bool(gap > tau_gap * scale), tau_gap)


def canonical_sign(v, tau_v: float = TAU_V):
    """Flip ``v`` so its first entry with ``|v_i| > tau_v * ||v||_inf`` is positive."""
    v = np.array(v, dtype=float)
    cut = tau_v * np.abs(v).max(initial=0.0)
    for x in v:
        if abs(x) > cut:
            return v if x > 0 else -v
    return v


def fiedler(L, tau_gap: float = TAU_GAP, tau_v: float = TAU_V, s: SpectralDecomposition = None):
    """Algebraic connectivity and a sign-canonical unit Fiedler vector.

    Raises :class:`Disconnected` when ``lambda_2`` is zero at tolerance and
    :class:`DegenerateLambda2` (carrying the non-canonical vector) when it is
    not simple.
    """
    if s is None:
        s = sym_spectrum(L)
    vals = s.eigenvalues
    if vals.size < 2:
        raise Disconnected("a single node has no algebraic connectivity")
    scale = spectral_scale(vals)
    cut = tau_gap * scale
    lam2 = float(vals[1])
    if lam2 <= cut:
        raise Disconnected(f"lambda_2 = {lam2:.3e} is zero at tolerance")
    v = canonical_sign(s.eigenvectors[:, 1], tau_v)
    if vals.size > 2 and vals[2] - lam2 <= cut:
        raise DegenerateLambda2(f"lambda_2 = {lam2:.6g} is not simple", value=lam2, vector=v)
    return lam2, v


def min_abs_entry(v):
    """``(min |v_i|, i)`` with the first (1-based) index attaining it."""
    a = np.abs(np.asarray(v, dtype=float))
    k = int(a.argmin())
    return float(a[k]), k + 1


def path_closed_form(p: int, which: str = "eigenvalues"):
    """Unit-weight path on ``p`` nodes.

    ``eigenvalues``: ``2 - 2cos(k pi / p)`` for ``k = 0..p-1``.
    ``eigenvectors``: list indexed ``k = 1..p`` (position ``k-1``) of unnormalised
    vectors with entries ``cos(pi(k-1)i/p - pi(k-1)/(2p))``, ``i = 1..p``.
    """
    if p < 2:
        raise ValueError("path needs at least 2 nodes")
    if which == "eigenvalues":
        return [2.0 - 2.0 * math.cos(k * math.pi / p) for k in range(p)]
    if which == "eigenvectors":
        return [
            [math.cos(math.pi * (k - 1) * i / p - math.pi * (k - 1) / (2 * p)) for i in range(1, p + 1)]
            for k in range(1, p + 1)
        ]
    raise ValueError(f"unknown selector {which!r}")


def eigenvalue_weight_derivative(L, k: int, pair, tau_gap: float = TAU_GAP, s: SpectralDecomposition = None):
    """First-order derivative of ``lambda_k`` with respect to the weight on ``pair``: ``(v_i - v_j)^2``."""
    i, j = pair
    if isinstance(L, LaplacianMatrix) and (min(i, j), max(i, j)) not in L.support():
        raise SupportViolation(f"pair {pair} is not in the support")
    if s is None:
        s = sym_spectrum(L)
    vals = s.eigenvalues
    n = vals.size
    if not 1 <= k <= n:
        raise IndexError(f"eigen-index {k} out of range 1..{n}")
    cut = tau_gap * spectral_scale(vals)
    lam = vals[k - 1]
    if (k > 1 and lam - vals[k - 2] <= cut) or (k < n and vals[k] - lam <= cut):
        raise DegenerateLambda(f"lambda_{k} = {lam:.6g} is not simple", value=float(lam))
    v = s.eigenvectors[:, k - 1]
    return float((v[i - 1] - v[j - 1]) ** 2)


def zero_multiplicity(s: SpectralDecomposition, tau_gap: float = TAU_GAP) -> int:
    cut = tau_gap * spectral_scale(s.eigenvalues)
    return int((np.abs(s.eigenvalues) <= cut).sum())
