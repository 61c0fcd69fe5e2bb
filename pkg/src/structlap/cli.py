"""``structlap`` command-line interface.

Exit codes: 0 success, 2 parse error, 3 budget exhausted, 4 structural
precondition failed, 5 degenerate input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .construct import (
    fiedler_cut,
    perturb_basis_nonzero,
    perturb_fiedler_nonzero,
    perturb_to_simple,
    perturb_to_simple_directed,
)
from .errors import DegenerateFiedler, DegenerateLambda, Disconnected, InvalidGraph, StructlapError
from .exact import simplicity_certificate
from .fileio import format_graph, graph_laplacian, matrix_market, read_graph, sha256_file, write_graph
from .generators import FAMILIES, generate
from .graphs import Digraph, components
from .jsonio import canonical_dumps
from .lab import EXPERIMENTS, TrialConfig, run_experiment, write_trials_csv
from .laplacian import digraph_of, graph_of
from .spectral import TAU_GAP, TAU_V, fiedler, gap_report, spectrum

log = logging.getLogger("structlap")

PERTURB_MODES = ("simple", "fiedler", "basis", "directed-simple")


def manifest(args) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    path = getattr(args, "file", None)
    return {
        "command": args.command,
        "args": flags,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "input_sha256": sha256_file(path) if path else None,
    }


def _emit(args, payload: dict):
    payload = dict(payload)
    payload["manifest"] = manifest(args)
    sys.stdout.write(canonical_dumps(payload))


def _values(vals):
    if np.iscomplexobj(vals):
        return [[float(z.real), float(z.imag)] for z in vals]
    return [float(x) for x in vals]


def _gap(g):
    return {"min_gap": g.min_gap, "scale": g.scale, "simple": g.simple, "tau_gap": g.tau_gap}


# --- subcommands -----------------------------------------------------------------


def cmd_spectrum(args):
    g = read_graph(args.file)
    L = graph_laplacian(g)
    s = spectrum(L)
    rep = gap_report(s, args.tol)
    out = {"n": L.n, "directed": L.directed, "eigenvalues": _values(s.eigenvalues), "gap": _gap(rep)}
    warnings = []
    if not L.directed:
        k = len(components(g))
        out["components"] = k
        if k > 1:
            warnings.append(f"graph is not connected: eigenvalue 0 has multiplicity {k}")
        try:
            lam2, v = fiedler(L, args.tol, args.tol_v, s=s)
            out["fiedler"] = {"lambda2": lam2, "vector": [float(x) for x in v]}
        except (Disconnected, DegenerateLambda) as exc:
            out["fiedler"] = None
            warnings.append(f"no Fiedler vector: {exc}")
    if args.exact:
        cert = simplicity_certificate(L)
        out["certificate"] = {
            "kind": cert.kind,
            "value": cert.value,
            "verdict": "SIMPLE" if cert.verdict else "DEGENERATE",
            "context": cert.context,
        }
    out["warnings"] = warnings
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.json:
        _emit(args, out)
        return 0
    print("eigenvalues:")
    for x in out["eigenvalues"]:
        print(f"  {x if not isinstance(x, list) else complex(*x)!r}")
    print(f"min gap: {rep.min_gap!r} (scale {rep.scale!r}) -> {'simple' if rep.simple else 'not simple'}")
    if out.get("fiedler"):
        print(f"lambda2: {out['fiedler']['lambda2']!r}")
        print("fiedler vector: " + " ".join(repr(x) for x in out["fiedler"]["vector"]))
    if args.exact:
        c = out["certificate"]
        print(f"{c['verdict']} (Discr = {c['value']})")
    return 0


def cmd_perturb(args):
    g = read_graph(args.file)
    L = graph_laplacian(g)
    if args.mode == "directed-simple":
        if not L.directed:
            raise InvalidGraph("directed-simple needs a directed graph file")
        res = perturb_to_simple_directed(L, args.eps, args.tol, args.seed, certify=args.certify)
    else:
        if L.directed:
            raise InvalidGraph(f"mode {args.mode} needs an undirected graph file")
        if args.mode == "simple":
            res = perturb_to_simple(L, args.eps, args.tol, args.seed, args.tol_v, certify=args.certify)
        elif args.mode == "fiedler":
            res = perturb_fiedler_nonzero(L, args.eps, args.tol_v, args.seed, args.tol)
        else:
            res = perturb_basis_nonzero(L, args.eps, args.tol_v, args.seed, args.tol)
    out_graph = digraph_of(res.result) if res.result.directed else graph_of(res.result)
    if args.out:
        write_graph(out_graph, args.out)
    payload = {
        "mode": args.mode,
        "perturbation": [[i, j, float(e)] for (i, j), e in sorted(res.perturbation.items())],
        "achieved_norm": res.achieved_norm,
        "gap": _gap(res.gap),
        "min_fiedler_entry": res.min_fiedler_entry,
        "attempts": res.attempts,
        "eigenvalues": _values(spectrum(res.result).eigenvalues),
        "graph": format_graph(out_graph),
        "certificate": None,
    }
    if res.certified is not None:
        payload["certificate"] = {
            "kind": res.certified.kind,
            "value": res.certified.value,
            "verdict": "SIMPLE" if res.certified.verdict else "DEGENERATE",
            "context": res.certified.context,
        }
    _emit(args, payload)
    return 0


def cmd_partition(args):
    g = read_graph(args.file)
    if isinstance(g, Digraph):
        raise InvalidGraph("partition needs an undirected graph")
    L = graph_laplacian(g)
    perturbed = None
    try:
        cut = fiedler_cut(L, args.tol, args.tol_v)
    except (DegenerateFiedler, DegenerateLambda):
        if not args.auto_perturb:
            raise
        res = perturb_fiedler_nonzero(L, args.eps, args.tol_v, args.seed, args.tol)
        perturbed = res
        cut = fiedler_cut(res.result, args.tol, args.tol_v)
    payload = {
        "positive": list(cut.positive),
        "negative": list(cut.negative),
        "cut_edges": [list(e) for e in cut.cut_edges],
        "positive_connected": cut.positive_connected,
        "negative_connected": cut.negative_connected,
        "lambda2": cut.lambda2,
        "vector": list(cut.vector),
        "perturbed": perturbed is not None,
        "perturbation": None
        if perturbed is None
        else [[i, j, float(e)] for (i, j), e in sorted(perturbed.perturbation.items())],
    }
    _emit(args, payload)
    return 0


def cmd_mc(args):
    g = read_graph(args.file)
    if isinstance(g, Digraph):
        raise InvalidGraph("campaigns need an undirected graph")
    cfg = TrialConfig(
        graph=g,
        trials=args.trials,
        eps0=args.eps,
        distribution=args.distribution,
        tau_gap=args.tol,
        tau_v=args.tol_v,
        seed=args.seed,
        exact_mode=args.exact,
        drop_node=args.drop_node,
    )
    rep = run_experiment(cfg, args.experiment, workers=args.threads)
    if args.csv:
        write_trials_csv(rep, args.csv)
    for a in rep.anomalies:
        print(f"ANOMALY: {a}", file=sys.stderr)
    _emit(args, rep.to_dict())
    return 0


def cmd_gen(args):
    g = generate(args.family, args.n, p=args.p, seed=args.seed, weights=args.weights)
    text = format_graph(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_export(args):
    g = read_graph(args.file)
    text = matrix_market(graph_laplacian(g))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# --- parser ------------------------------------------------------------------------


def _tolerances(p):
    p.add_argument("--tol", type=float, default=TAU_GAP, help="relative eigenvalue-gap tolerance")
    p.add_argument("--tol-v", type=float, default=TAU_V, help="relative eigenvector-entry tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="structlap", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"structlap {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues, gap report and Fiedler vector")
    p.add_argument("file")
    p.add_argument("--exact", action="store_true", help="add the exact discriminant certificate")
    p.add_argument("--json", action="store_true")
    _tolerances(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("perturb", help="same-support perturbation")
    p.add_argument("file")
    p.add_argument("mode", choices=PERTURB_MODES)
    p.add_argument("--eps", type=float, default=1e-2, help="norm budget (max-abs entry)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the perturbed graph file here")
    p.add_argument("--certify", action="store_true", help="exact certificate after rationalisation")
    _tolerances(p)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("partition", help="Fiedler sign cut")
    p.add_argument("file")
    p.add_argument("--auto-perturb", action="store_true", help="perturb first if the Fiedler vector has zeros")
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--seed", type=int, default=0)
    _tolerances(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("mc", help="Monte Carlo measure-zero probe")
    p.add_argument("file")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="rational lattice sampling with exact verdicts")
    p.add_argument("--drop-node", type=int, default=None)
    p.add_argument("--distribution", choices=("relative", "uniform"), default="relative")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--csv", help="per-trial (min_gap, min_entry) CSV")
    _tolerances(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("n", type=int)
    p.add_argument("--p", type=float, default=None, help="edge probability for gnp")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", choices=("unit", "random"), default="unit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("export", help="Laplacian as a Matrix Market file")
    p.add_argument("file")
    p.add_argument("--format", choices=("matrix-market",), default="matrix-market")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except StructlapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
