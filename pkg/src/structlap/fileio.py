"""Plain-text graph files and Matrix Market export.

Graph file layout::

    n m [directed]
    i j w        (m lines, 1-based nodes, w decimal or "p/q")

Blank lines and lines starting with ``#`` are ignored.  Weights are parsed as
exact :class:`~fractions.Fraction` values, so rational pipelines never touch
floating point.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from pathlib import Path

from .errors import GraphParseError, InvalidGraph
from .graphs import Digraph, WeightedGraph
from .laplacian import LaplacianMatrix, digraph_laplacian, laplacian


def parse_weight(token: str, line=None) -> Fraction:
    try:
        w = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise GraphParseError(f"bad weight {token!r}", line) from None
    if w <= 0:
        raise GraphParseError(f"weight {token} must be strictly positive", line)
    return w


def _int(token, what, line):
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"{what} {token!r} is not an integer", line) from None


def parse_graph(text: str):
    """Parse graph-file text into a :class:`WeightedGraph` or :class:`Digraph`."""
    rows = [
        (k, ln.split())
        for k, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not rows:
        raise GraphParseError("empty file: expected header 'n m [directed]'", 1)
    hline, head = rows[0]
    if len(head) not in (2, 3) or (len(head) == 3 and head[2] != "directed"):
        raise GraphParseError("header must be 'n m' or 'n m directed'", hline)
    n, m = _int(head[0], "node count", hline), _int(head[1], "edge count", hline)
    if n < 1 or m < 0:
        raise GraphParseError("header needs n >= 1 and m >= 0", hline)
    directed = len(head) == 3
    body = rows[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] if body else hline)
        raise GraphParseError(f"header announces {m} edges, found {len(body)}", where)

    edges, seen = [], set()
    for k, tok in body:
        if len(tok) != 3:
            raise GraphParseError("edge line must be 'i j w'", k)
        i, j = _int(tok[0], "node", k), _int(tok[1], "node", k)
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphParseError(f"node index out of range 1..{n}", k)
        if i == j:
            raise GraphParseError(f"self-loop at node {i}", k)
        key = (i, j) if directed else (min(i, j), max(i, j))
        if key in seen:
            raise GraphParseError(f"duplicate edge ({i}, {j})", k)
        seen.add(key)
        edges.append((i, j, parse_weight(tok[2], k)))
    try:
        return Digraph(n, tuple(edges)) if directed else WeightedGraph.from_edges(n, edges)
    except InvalidGraph as exc:  # pragma: no cover - guarded above
        raise GraphParseError(str(exc), hline) from exc


def read_graph(path):
    return parse_graph(Path(path).read_text())


def format_weight(w) -> str:
    if isinstance(w, Fraction):
        return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"
    if isinstance(w, int):
        return str(w)
    return repr(float(w))


def format_graph(g) -> str:
    if isinstance(g, Digraph):
        lines = [f"{g.n} {g.m} directed"] + [f"{i} {j} {format_weight(w)}" for i, j, w in g.arcs]
    else:
        lines = [f"{g.n} {g.m}"] + [f"{i} {j} {format_weight(w)}" for i, j, w in g.edges]
    return "\n".join(lines) + "\n"


def write_graph(g, path):
    Path(path).write_text(format_graph(g))


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def graph_laplacian(g) -> LaplacianMatrix:
    return digraph_laplacian(g) if isinstance(g, Digraph) else laplacian(g)


def decimal_string(x) -> str:
    """Exact decimal for terminating rationals, otherwise 17 significant digits."""
    if not isinstance(x, Fraction):
        x = Fraction(x) if isinstance(x, int) else None
        if x is None:
            raise TypeError("decimal_string expects an exact value")
    q, a, b = x.denominator, 0, 0
    while q % 2 == 0:
        q //= 2
        a += 1
    while q % 5 == 0:
        q //= 5
        b += 1
    if q != 1:
        return format(float(x), ".17g")
    k = max(a, b)
    digits = abs(x.numerator) * 10**k // x.denominator
    sign = "-" if x < 0 else ""
    if k == 0:
        return f"{sign}{digits}"
    whole, frac = divmod(digits, 10**k)
    return f"{sign}{whole}.{frac:0{k}d}".rstrip("0").rstrip(".")


def _mm_value(v, exact):
    return decimal_string(v) if exact else repr(float(v))


def matrix_market(L: LaplacianMatrix) -> str:
    """Coordinate Matrix Market text: ``symmetric`` (lower triangle) or ``general``."""
    a = L.entries
    n = L.n
    kind = "general" if L.directed else "symmetric"
    entries = []
    for i in range(n):
        for j in range(n):
            if a[i, j] != 0 and (L.directed or i >= j):
                entries.append(f"{i + 1} {j + 1} {_mm_value(a[i, j], L.exact)}")
    if not L.directed:
        entries.sort(key=lambda s: (int(s.split()[1]), int(s.split()[0])))  # column-major
    head = [f"%%MatrixMarket matrix coordinate real {kind}", f"{n} {n} {len(entries)}"]
    return "\n".join(head + entries) + "\n"
