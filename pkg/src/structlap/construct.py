"""Constructive same-support perturbations.

The undirected pipeline follows the spanning-tree argument: weight a diameter
path of a spanning tree with distinct weights, attach the remaining tree edges
one at a time with smaller weights, then add the non-tree edges with smaller
weights still.  Every step is checked numerically instead of relying on the
existence of "small enough" constants.  The resulting reference Laplacian
``L*`` has the support of the input and a simple spectrum; ``L + t L*`` is then
simple for all but finitely many ``t``, and a short line search finds one
inside the norm budget.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BudgetExhausted, DegenerateFiedler, NoDivergingTree, NotConnected, ScheduleExhausted
from .exact import Certificate, simplicity_certificate
from .graphs import (
    Digraph,
    WeightedGraph,
    branch_schedule,
    diverging_spanning_tree,
    induced_subgraph,
    is_connected,
    longest_path,
    spanning_tree,
)
from .laplacian import (
    LaplacianMatrix,
    apply_perturbation,
    digraph_laplacian,
    digraph_of,
    graph_of,
    laplacian,
    matrix_norm,
    perturbation_norm,
    rationalize,
    support_equal,
)
from .spectral import (
    TAU_GAP,
    TAU_V,
    GapReport,
    fiedler,
    gap_report,
    general_spectrum,
    min_spacing,
    spectral_scale,
    sym_spectrum,
)

log = logging.getLogger(__name__)

RHO = 1e-2
MAX_RETRIES = 50
MAX_HALVINGS = 60
MAX_ROUNDS = 50


@dataclass(frozen=True)
class TraceStep:
    stage: str  # "path" | "branch" | "extra" | "tree" | "search" | "round"
    edge: Optional[tuple]
    weight: float
    min_gap: float
    components: int = 1
    retries: int = 0
    info: dict = field(default_factory=dict)


@dataclass
class PerturbationResult:
    perturbation: dict
    result: LaplacianMatrix
    achieved_norm: float
    gap: GapReport
    min_fiedler_entry: Optional[float]
    attempts: int
    certified: Optional[Certificate] = None
    trace: list = field(default_factory=list)


def _partial_ok(vals, components, tau_gap):
    """Spectrum of a forest-plus-path stage: exactly ``components`` zeros, the rest simple."""
    scale = spectral_scale(vals)
    cut = tau_gap * scale
    order = np.argsort(np.abs(vals), kind="stable")
    vals = np.asarray(vals)[order]
    zeros = int((np.abs(vals) <= cut).sum())
    gap = min_spacing(vals[components - 1 :])
    return zeros == components and gap > cut, gap


def _spectrum_values(L):
    return general_spectrum(L).eigenvalues if L.directed else sym_spectrum(L).eigenvalues


def _check_stage(n, weights, components, tau_gap, directed=False):
    if directed:
        L = digraph_laplacian(Digraph(n, tuple((i, j, w) for (i, j), w in weights.items())), exact=False)
    else:
        L = laplacian(WeightedGraph.from_edges(n, [(i, j, w) for (i, j), w in weights.items()]), exact=False)
    return _partial_ok(_spectrum_values(L), components, tau_gap)


def _attach(n, weights, key, w0, stage, components, tau_gap, trace, directed=False):
    """Add ``key`` with weight ``w0``, shrinking by 10 until the stage check passes."""
    w = w0
    gap = float("nan")
    for retry in range(MAX_RETRIES + 1):
        weights[key] = w
        ok, gap = _check_stage(n, weights, components, tau_gap, directed)
        if ok:
            trace.append(TraceStep(stage, key, w, gap, components, retry))
            return
        w /= 10.0
    raise ScheduleExhausted(f"{stage} edge {key}: no admissible weight after {MAX_RETRIES} retries (last gap {gap:.3e})")


def build_simple_support_laplacian(g: WeightedGraph, tau_gap: float = TAU_GAP, rho: float = RHO):
    """Real Laplacian with exactly ``g``'s edge set and a numerically simple spectrum.

    Path edges get weights ``1..p-1``; the ``B`` branch edges get the decreasing
    geometric weights ``rho^((k+1)/(B+1))`` and the ``M`` non-tree edges
    ``rho^(1+(k+1)/(M+1))``.  Returns ``(L, trace)``.
    """
    if not is_connected(g):
        raise NotConnected("construction needs a connected graph")
    n = g.n
    trace = []
    if n == 1:
        return laplacian(g, exact=False), trace
    tree = spanning_tree(g)
    path = longest_path(tree)
    schedule = branch_schedule(tree, path)
    weights = {}
    for k, (a, b) in enumerate(zip(path, path[1:])):
        weights[min(a, b), max(a, b)] = float(k + 1)
    comps = n - len(path) + 1
    ok, gap = _check_stage(n, weights, comps, tau_gap)
    if not ok:  # unreduced tridiagonal blocks are always simple
        raise ScheduleExhausted(f"path stage is not simple (gap {gap:.3e})")
    trace.append(TraceStep("path", tuple(path), float(len(path) - 1), gap, comps))

    B = len(schedule)
    for k, att in enumerate(schedule):
        comps -= 1
        _attach(n, weights, att.edge, rho ** ((k + 1) / (B + 1)), "branch", comps, tau_gap, trace)

    tree_keys = set(weights)
    extras = [(i, j) for i, j, _ in g.edges if (i, j) not in tree_keys]
    M = len(extras)
    for k, key in enumerate(extras):
        _attach(n, weights, key, rho ** (1 + (k + 1) / (M + 1)), "extra", 1, tau_gap, trace)

    L = laplacian(WeightedGraph.from_edges(n, [(i, j, w) for (i, j), w in weights.items()]), exact=False)
    return L, trace


def build_simple_support_digraph_laplacian(dg: Digraph, tau_gap: float = TAU_GAP, rho: float = RHO):
    """Directed analogue on a diverging spanning tree.

    Along the out-tree every non-root node has a single incoming arc, so the
    tree Laplacian is triangular in BFS order and its spectrum is ``{0}`` plus
    the arc weights: distinct weights give a simple spectrum outright.
    Remaining arcs are then added with small verified weights.
    """
    found = diverging_spanning_tree(dg)
    if found is None:
        raise NoDivergingTree("no diverging rooted spanning tree")
    root, tree = found
    n = dg.n
    trace = []
    if n == 1:
        return digraph_laplacian(dg, exact=False), trace
    children = tree.out_neighbors()
    parent = {j: i for i, j, _ in tree.arcs}
    depth = {root: 0}
    queue = deque([root])
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in children[u]:
            depth[v] = depth[u] + 1
            queue.append(v)
    deepest = min(depth, key=lambda v: (-depth[v], v))
    path = [deepest]
    while path[-1] != root:
        path.append(parent[path[-1]])
    path.reverse()
    weights = {}
    for k, (a, b) in enumerate(zip(path, path[1:])):
        weights[a, b] = float(k + 1)
    on_path = set(weights)
    branch_arcs = [(parent[v], v) for v in order[1:] if (parent[v], v) not in on_path]
    B = len(branch_arcs)
    for k, key in enumerate(branch_arcs):
        weights[key] = rho ** ((k + 1) / (B + 1))
    ok, gap = _check_stage(n, weights, 1, tau_gap, directed=True)
    if not ok:
        raise ScheduleExhausted(f"triangular tree stage is not simple (gap {gap:.3e})")
    trace.append(TraceStep("tree", tuple(path), float(len(path) - 1), gap, 1, info={"root": root}))

    extras = [(i, j) for i, j, _ in dg.arcs if (i, j) not in weights]
    M = len(extras)
    for k, key in enumerate(extras):
        _attach(n, weights, key, rho ** (1 + (k + 1) / (M + 1)), "extra", 1, tau_gap, trace, directed=True)
    L = digraph_laplacian(Digraph(n, tuple((i, j, w) for (i, j), w in weights.items())), exact=False)
    return L, trace


def _position_weights(L_star: LaplacianMatrix):
    """Perturbation keys (matrix positions) of ``L*`` mapped to their weights."""
    a = L_star.entries
    return {(i, j): float(-a[i - 1, j - 1]) for i, j in sorted(L_star.support())}


def _min_fiedler(L, s, tau_gap, tau_v):
    try:
        _, v = fiedler(L, tau_gap, tau_v, s=s)
    except Exception:
        return None
    return float(np.abs(v).min())


def _line_search(L, L_star, eps0, tau_gap, seed, trace):
    """First ``t = eps0/||L*|| 2^-m`` with ``L + t L*`` simple; seeded jitter as a fallback."""
    rng = np.random.default_rng(seed)
    star = _position_weights(L_star)
    norm_star = matrix_norm(L_star)
    best_gap = 0.0
    for m in range(1, MAX_HALVINGS + 1):
        t = eps0 / norm_star * 2.0**-m
        candidates = [{k: t * w for k, w in star.items()}]
        # seeded jitter, only consulted if the pure direction leaves a tie
        candidates.append({k: e + t * rng.uniform(0.0, 1.0) * 1e-3 * norm_star for k, e in candidates[0].items()})
        for jittered, eps in enumerate(candidates):
            cand = apply_perturbation(L, eps)
            gap = gap_report(general_spectrum(cand) if cand.directed else sym_spectrum(cand), tau_gap)
            best_gap = max(best_gap, gap.min_gap / gap.scale)
            norm = perturbation_norm(L, eps)
            if gap.simple and norm < eps0 and support_equal(L, cand):
                trace.append(TraceStep("search", None, t, gap.min_gap, info={"m": m, "jitter": bool(jittered)}))
                return eps, cand, norm, m
    raise BudgetExhausted(
        f"no simple candidate after {MAX_HALVINGS} halvings (best relative gap {best_gap:.3e})", best_gap
    )


def _finish(L_in, eps, cand, norm, attempts, tau_gap, tau_v, trace, certify):
    s = general_spectrum(cand) if cand.directed else sym_spectrum(cand)
    mf = None if cand.directed else _min_fiedler(cand, s, tau_gap, tau_v)
    cert = simplicity_certificate(rationalize(cand)) if certify else None
    return PerturbationResult(eps, cand, norm, gap_report(s, tau_gap), mf, attempts, cert, trace)


def perturb_to_simple(
    L: LaplacianMatrix,
    eps0: float = 1e-2,
    tau_gap: float = TAU_GAP,
    seed=0,
    tau_v: float = TAU_V,
    certify: bool = False,
) -> PerturbationResult:
    """Same-support perturbation of norm ``< eps0`` giving a simple spectrum."""
    if L.directed:
        raise TypeError("use perturb_to_simple_directed")
    L = L.to_real()
    g = graph_of(L)
    if not is_connected(g):
        raise NotConnected("Laplacian of a disconnected graph")
    if gap_report(sym_spectrum(L), tau_gap).simple:
        return _finish(L, {}, L, 0.0, 0, tau_gap, tau_v, [], certify)
    L_star, trace = build_simple_support_laplacian(g, tau_gap)
    eps, cand, norm, m = _line_search(L, L_star, eps0, tau_gap, seed, trace)
    return _finish(L, eps, cand, norm, m, tau_gap, tau_v, trace, certify)


def perturb_to_simple_directed(
    L: LaplacianMatrix, eps0: float = 1e-2, tau_gap: float = TAU_GAP, seed=0, certify: bool = False
) -> PerturbationResult:
    """Directed version; the digraph must have a diverging rooted spanning tree."""
    if not L.directed:
        raise TypeError("use perturb_to_simple")
    L = L.to_real()
    dg = digraph_of(L)
    if diverging_spanning_tree(dg) is None:
        raise NoDivergingTree("no diverging rooted spanning tree")
    if gap_report(general_spectrum(L), tau_gap).simple:
        return _finish(L, {}, L, 0.0, 0, tau_gap, TAU_V, [], certify)
    L_star, trace = build_simple_support_digraph_laplacian(dg, tau_gap)
    eps, cand, norm, m = _line_search(L, L_star, eps0, tau_gap, seed, trace)
    return _finish(L, eps, cand, norm, m, tau_gap, TAU_V, trace, certify)


def _relative_min_entry(v):
    v = np.asarray(v)
    return float(np.abs(v).min() / np.abs(v).max())


def _fiedler_ok(L, tau_gap, tau_v):
    s = sym_spectrum(L)
    try:
        _, v = fiedler(L, tau_gap, tau_v, s=s)
    except Exception:
        return False, 0.0, s
    r = _relative_min_entry(v)
    return r > tau_v, r, s


def _basis_ok(L, tau_gap, tau_v):
    s = sym_spectrum(L)
    if not gap_report(s, tau_gap).simple:
        return False, 0.0, s
    r = min(_relative_min_entry(s.eigenvectors[:, k]) for k in range(1, L.n)) if L.n > 1 else 1.0
    return r > tau_v, r, s


def _edge_derivatives(L, s, k=2):
    """``(v_i - v_j)^2`` for every support edge and eigenvector ``k`` (the first-order weight sensitivities)."""
    v = s.eigenvectors[:, k - 1]
    return {f"{i}-{j}": float((v[i - 1] - v[j - 1]) ** 2) for i, j in sorted(L.support())}


def _random_rounds(L, eps0, tau_gap, tau_v, seed, predicate, label):
    first = perturb_to_simple(L, eps0 / 2, tau_gap, seed, tau_v)
    base = first.result
    eps1 = first.perturbation
    trace = list(first.trace)
    ok, r, s = predicate(base, tau_gap, tau_v)
    if ok:
        return PerturbationResult(eps1, base, first.achieved_norm, first.gap, first.min_fiedler_entry, first.attempts, None, trace)
    Lr = L.to_real()
    deg = max(sum(1 for e in Lr.support() if u in e) for u in range(1, L.n + 1))
    budget0 = 0.99 * (eps0 - first.achieved_norm) / deg
    rng = np.random.default_rng([0 if seed is None else seed, 1])
    diag = _edge_derivatives(base, s) if L.n > 1 else {}
    for m in range(MAX_ROUNDS):
        budget = budget0 * 2.0**-m
        eps = dict(eps1)
        for key in sorted(Lr.support()):
            eps[key] = eps.get(key, 0.0) + (budget - rng.uniform(0.0, budget))  # (0, budget]
        cand = apply_perturbation(Lr, eps)
        ok, r, s = predicate(cand, tau_gap, tau_v)
        trace.append(TraceStep("round", None, budget, r, info={"target": label, "derivatives": diag}))
        norm = perturbation_norm(Lr, eps)
        if ok and norm < eps0 and support_equal(Lr, cand):
            g = gap_report(s, tau_gap)
            mf = _min_fiedler(cand, s, tau_gap, tau_v)
            return PerturbationResult(eps, cand, norm, g, mf, first.attempts + m + 1, None, trace)
        if ok:
            log.debug("round %d accepted spectrally but failed norm/support check", m)
    raise BudgetExhausted(f"{label}: no admissible perturbation after {MAX_ROUNDS} rounds")


def perturb_fiedler_nonzero(L: LaplacianMatrix, eps0: float = 1e-2, tau_v: float = TAU_V, seed=0, tau_gap: float = TAU_GAP):
    """Same-support perturbation with simple ``lambda_2`` and a Fiedler vector free of zeros."""
    return _random_rounds(L, eps0, tau_gap, tau_v, seed, _fiedler_ok, "fiedler")


def perturb_basis_nonzero(L: LaplacianMatrix, eps0: float = 1e-2, tau_v: float = TAU_V, seed=0, tau_gap: float = TAU_GAP):
    """As :func:`perturb_fiedler_nonzero` but for every eigenvector of a nonzero eigenvalue."""
    return _random_rounds(L, eps0, tau_gap, tau_v, seed, _basis_ok, "basis")


@dataclass(frozen=True)
class FiedlerCut:
    positive: tuple
    negative: tuple
    cut_edges: tuple
    positive_connected: bool
    negative_connected: bool
    lambda2: float
    vector: tuple


def fiedler_cut(L: LaplacianMatrix, tau_gap: float = TAU_GAP, tau_v: float = TAU_V) -> FiedlerCut:
    """Sign partition of a zero-free Fiedler vector, with connectivity of both sides checked."""
    L = L.to_real()
    lam2, v = fiedler(L, tau_gap, tau_v)
    if np.abs(v).min() <= tau_v * np.abs(v).max():
        raise DegenerateFiedler(f"Fiedler vector has a zero entry at node {int(np.abs(v).argmin()) + 1}")
    pos = tuple(i + 1 for i in range(L.n) if v[i] > 0)
    neg = tuple(i + 1 for i in range(L.n) if v[i] < 0)
    cut = tuple(sorted((i, j) for i, j in L.support() if v[i - 1] * v[j - 1] < 0))
    g = graph_of(L)
    return FiedlerCut(
        pos,
        neg,
        cut,
        is_connected(induced_subgraph(g, pos)),
        is_connected(induced_subgraph(g, neg)),
        lam2,
        tuple(float(x) for x in v),
    )
