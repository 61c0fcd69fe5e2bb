"""Seeded Monte Carlo probes of the measure-zero statements.

Each trial draws an independent perturbation of the edge weights, forms the
perturbed Laplacian and records whether the property under study fails.
Trial ``k`` uses its own generator seeded with ``(seed, k)``, so counts do
not depend on how trials are split between workers.

In exact mode perturbations are sampled on the lattice ``k / 10^6`` and
verdicts come from exact polynomial certificates ("rational lattice probe");
otherwise they are continuous draws checked numerically ("continuum probe").
"""

from __future__ import annotations

import csv
import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .errors import DegenerateLambda2, Disconnected, NotConnected
from .exact import discriminant_is_zero, eigvec_zero_free, subgraph_spectra_intersect
from .graphs import WeightedGraph, is_connected
from .jsonio import canonical_dumps
from .laplacian import LaplacianMatrix
from .spectral import TAU_GAP, TAU_V, fiedler, gap_report, spectral_scale, sym_spectrum

LATTICE = 10**6
EXPERIMENTS = ("simplicity", "fiedler-zero", "fiedler-distinct", "subgraph-disjoint")
COUNT_KEYS = (
    "degenerate_spectrum",
    "degenerate_lambda2_skipped",
    "fiedler_zero",
    "fiedler_repeated",
    "subgraph_intersection",
    "subgraph_near_intersection",
    "exact_degenerate",
    "exact_eigvec_zero",
)
HIST_LO, HIST_HI = -17, 1


@dataclass(frozen=True)
class TrialConfig:
    graph: WeightedGraph
    trials: int = 1000
    eps0: float = 0.1
    distribution: str = "relative"  # "relative": (-w/2, eps0]; "uniform": (0, eps0]
    tau_gap: float = TAU_GAP
    tau_v: float = TAU_V
    seed: int = 0
    exact_mode: bool = False
    drop_node: Optional[int] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.eps0 < 0:
            raise ValueError("eps0 must be >= 0 (0 disables the perturbation)")
        if self.distribution not in ("relative", "uniform"):
            raise ValueError(f"unknown distribution {self.distribution!r}")

    def echo(self):
        g = self.graph
        digest = hashlib.sha256(repr(tuple((i, j, str(w)) for i, j, w in g.edges)).encode()).hexdigest()
        return {
            "n": g.n,
            "m": g.m,
            "graph_sha256": digest,
            "trials": self.trials,
            "eps0": self.eps0,
            "distribution": self.distribution,
            "tau_gap": self.tau_gap,
            "tau_v": self.tau_v,
            "seed": self.seed,
            "exact_mode": self.exact_mode,
            "drop_node": self.drop_node,
        }


@dataclass
class TrialReport:
    experiment: str
    probe: str
    trials: int
    counts: dict
    min_gap: Optional[float]
    min_entry: Optional[float]
    histograms: dict
    config: dict
    anomalies: list = field(default_factory=list)
    wall_time: float = 0.0  # informational; not serialised
    per_trial: list = field(default_factory=list, repr=False)  # (min_gap, min_entry) per trial

    def to_dict(self):
        d = {
            "experiment": self.experiment,
            "probe": self.probe,
            "trials": self.trials,
            "counts": dict(self.counts),
            "min_gap": self.min_gap,
            "min_entry": self.min_entry,
            "histograms": self.histograms,
            "config": self.config,
            "anomalies": list(self.anomalies),
            "version": __version__,
        }
        if self.experiment == "fiedler-distinct":
            d["label"] = "CONJECTURE: generic Fiedler vectors have pairwise distinct coordinates"
        return d


def report_serialize(r: TrialReport) -> str:
    """Canonical key-sorted JSON, byte-stable for a fixed (config, seed)."""
    return canonical_dumps(r.to_dict())


def write_trials_csv(r: TrialReport, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "min_gap", "min_entry"])
        for k, (g, e) in enumerate(r.per_trial):
            w.writerow([k, "" if g is None else format(g, ".17g"), "" if e is None else format(e, ".17g")])


# --- sampling -----------------------------------------------------------------


def _sample(cfg: TrialConfig, index: int):
    """Perturbed edge weights for trial ``index`` (Fractions in exact mode)."""
    rng = np.random.default_rng([cfg.seed, index])
    out = []
    for i, j, w in cfg.graph.edges:
        if cfg.exact_mode:
            w = Fraction(w)
            hi = math.floor(Fraction(cfg.eps0) * LATTICE)
            if cfg.eps0 == 0:
                e = Fraction(0)
            else:
                lo = 1 if cfg.distribution == "uniform" else math.floor(-w * LATTICE / 2) + 1
                e = Fraction(int(rng.integers(lo, hi + 1)), LATTICE)
        else:
            w = float(w)
            if cfg.eps0 == 0:
                e = 0.0
            elif cfg.distribution == "uniform":
                e = cfg.eps0 - rng.uniform(0.0, cfg.eps0)
            else:
                e = cfg.eps0 - rng.uniform(0.0, cfg.eps0 + w / 2)
        out.append((i, j, w + e))
    return out


def _assemble(n, weighted, exact):
    if exact:
        a = np.empty((n, n), dtype=object)
        a.fill(Fraction(0))
    else:
        a = np.zeros((n, n))
    for i, j, w in weighted:
        a[i - 1, j - 1] -= w
        a[j - 1, i - 1] -= w
        a[i - 1, i - 1] += w
        a[j - 1, j - 1] += w
    return LaplacianMatrix(a, exact=exact)


# --- single trials --------------------------------------------------------------


def _fiedler_stats(L, s, cfg):
    try:
        _, v = fiedler(L, cfg.tau_gap, cfg.tau_v, s=s)
    except (DegenerateLambda2, Disconnected):
        return None
    return v


def _run_trial(cfg: TrialConfig, experiment: str, index: int):
    weighted = _sample(cfg, index)
    n = cfg.graph.n
    Lx = _assemble(n, weighted, True) if cfg.exact_mode else None
    L = Lx.to_real() if cfg.exact_mode else _assemble(n, weighted, False)
    s = sym_spectrum(L)
    hits = dict.fromkeys(COUNT_KEYS, 0)
    gap = gap_report(s, cfg.tau_gap)
    rel_gap = gap.min_gap / gap.scale if math.isfinite(gap.min_gap) else None
    rel_entry = None

    if experiment == "simplicity":
        hits["degenerate_spectrum"] = int(not gap.simple)
        if cfg.exact_mode and n > 1:
            hits["exact_degenerate"] = int(discriminant_is_zero(Lx))

    elif experiment == "fiedler-zero":
        v = _fiedler_stats(L, s, cfg)
        if v is None:
            hits["degenerate_lambda2_skipped"] = 1
        else:
            rel_entry = float(np.abs(v).min() / np.abs(v).max())
            hits["fiedler_zero"] = int(rel_entry <= cfg.tau_v)
        if cfg.exact_mode and n > 1:
            if discriminant_is_zero(Lx):
                hits["exact_degenerate"] = 1
            else:
                hits["exact_eigvec_zero"] = int(not eigvec_zero_free(Lx))

    elif experiment == "fiedler-distinct":
        v = _fiedler_stats(L, s, cfg)
        if v is None:
            # a multiple lambda_2 always admits an eigenvector with two equal coordinates
            hits["degenerate_lambda2_skipped"] = 1
            hits["fiedler_repeated"] = 1
        else:
            spread = np.diff(np.sort(v)).min() if n > 1 else math.inf
            rel_entry = float(spread / np.abs(v).max())
            hits["fiedler_repeated"] = int(rel_entry <= cfg.tau_v)

    elif experiment == "subgraph-disjoint":
        drop = cfg.drop_node or n
        keep = [k for k in range(n) if k != drop - 1]
        sub = np.array(L.entries[np.ix_(keep, keep)])
        np.fill_diagonal(sub, 0.0)
        np.fill_diagonal(sub, -sub.sum(axis=1))
        mu = sym_spectrum(sub).eigenvalues if keep else np.zeros(0)
        lam = np.delete(s.eigenvalues, np.abs(s.eigenvalues).argmin())
        mu = np.delete(mu, np.abs(mu).argmin()) if mu.size else mu
        if lam.size and mu.size:
            cross = float(np.abs(lam[:, None] - mu[None, :]).min())
            scale = spectral_scale(np.concatenate([lam, mu]))
            rel_gap = cross / scale
            hits["subgraph_near_intersection"] = int(cross <= cfg.tau_gap * scale)
        else:
            rel_gap = None
        # The verdict is the exact certificate; float samples are exact dyadic rationals.
        if n > 1:
            if Lx is None:
                Lx = _assemble(n, [(i, j, Fraction(w)) for i, j, w in weighted], True)
            hits["subgraph_intersection"] = int(subgraph_spectra_intersect(Lx, drop))
    else:
        raise ValueError(f"unknown experiment {experiment!r}")
    return index, hits, rel_gap, rel_entry


def _run_chunk(args):
    cfg, experiment, lo, hi = args
    return [_run_trial(cfg, experiment, k) for k in range(lo, hi)]


def _bucket(x):
    if x is None:
        return None
    if x <= 0:
        return f"<=1e{HIST_LO}"
    e = min(HIST_HI, max(HIST_LO, math.floor(math.log10(x))))
    return f"1e{e}"


def run_experiment(cfg: TrialConfig, experiment: str, workers: int = 1) -> TrialReport:
    if experiment not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {experiment!r}")
    if not is_connected(cfg.graph):
        raise NotConnected("campaigns need a connected graph")
    start = time.perf_counter()
    if workers > 1 and cfg.trials > 1:
        bounds = np.linspace(0, cfg.trials, workers + 1).astype(int)
        jobs = [(cfg, experiment, int(a), int(b)) for a, b in zip(bounds, bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [r for chunk in pool.map(_run_chunk, jobs) for r in chunk]
    else:
        rows = _run_chunk((cfg, experiment, 0, cfg.trials))
    rows.sort(key=lambda r: r[0])

    counts = dict.fromkeys(COUNT_KEYS, 0)
    hist_gap, hist_entry = {}, {}
    gaps, entries, per_trial = [], [], []
    for _, hits, g, e in rows:
        for k, v in hits.items():
            counts[k] += v
        per_trial.append((g, e))
        if g is not None:
            gaps.append(g)
            b = _bucket(g)
            hist_gap[b] = hist_gap.get(b, 0) + 1
        if e is not None:
            entries.append(e)
            b = _bucket(e)
            hist_entry[b] = hist_entry.get(b, 0) + 1

    anomalies = []
    for key in ("exact_degenerate", "exact_eigvec_zero", "subgraph_intersection"):
        if counts[key] and cfg.eps0 > 0:
            anomalies.append(f"{key}: {counts[key]} exact hit(s) on a measure-zero set")
    config = cfg.echo()
    config["experiment"] = experiment
    return TrialReport(
        experiment=experiment,
        probe="rational lattice probe" if cfg.exact_mode else "continuum probe",
        trials=cfg.trials,
        counts=counts,
        min_gap=min(gaps) if gaps else None,
        min_entry=min(entries) if entries else None,
        histograms={"min_gap": hist_gap, "min_entry": hist_entry},
        config=config,
        anomalies=anomalies,
        wall_time=time.perf_counter() - start,
        per_trial=per_trial,
    )


def mc_simplicity(cfg: TrialConfig, workers: int = 1) -> TrialReport:
    return run_experiment(cfg, "simplicity", workers)


def mc_fiedler_zero(cfg: TrialConfig, workers: int = 1) -> TrialReport:
    return run_experiment(cfg, "fiedler-zero", workers)


def mc_fiedler_distinct(cfg: TrialConfig, workers: int = 1) -> TrialReport:
    return run_experiment(cfg, "fiedler-distinct", workers)


def mc_subgraph_disjoint(cfg: TrialConfig, drop_node: Optional[int] = None, workers: int = 1) -> TrialReport:
    if drop_node is not None and drop_node != cfg.drop_node:
        cfg = TrialConfig(**{**cfg.__dict__, "drop_node": drop_node})
    return run_experiment(cfg, "subgraph-disjoint", workers)
