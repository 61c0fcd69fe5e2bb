"""Weighted graphs, digraphs and the tree/path machinery used by the constructions.

Node labels are 1-based everywhere in this module.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import NamedTuple, Optional, Sequence

from .errors import InvalidGraph, InvalidPermutation, NotATree, NotConnected, PathNotInTree

Weight = Real  # float, int or Fraction


def _check_weight(w, where):
    if isinstance(w, bool) or not isinstance(w, Real):
        raise InvalidGraph(f"{where}: weight {w!r} is not a real number")
    if not w > 0:
        raise InvalidGraph(f"{where}: weight {w!r} must be strictly positive")


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected simple graph on nodes ``1..n``; edges stored as ``(i, j, w)`` with ``i < j``."""

    n: int
    edges: tuple

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGraph(f"node count must be positive, got {self.n}")
        edges = tuple(tuple(e) for e in self.edges)
        seen = set()
        for i, j, w in edges:
            if not (1 <= i < j <= self.n):
                raise InvalidGraph(f"edge ({i}, {j}) must satisfy 1 <= i < j <= {self.n}")
            if (i, j) in seen:
                raise InvalidGraph(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            _check_weight(w, f"edge ({i}, {j})")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n, edges):
        """Build from edges in any orientation; ``(j, i, w)`` is stored as ``(i, j, w)``."""
        norm = []
        for i, j, w in edges:
            if i == j:
                raise InvalidGraph(f"self-loop at node {i}")
            norm.append((min(i, j), max(i, j), w))
        return cls(n, tuple(sorted(norm, key=lambda e: (e[0], e[1]))))

    @property
    def m(self):
        return len(self.edges)

    def weight_map(self):
        return {(i, j): w for i, j, w in self.edges}

    def neighbors(self):
        """Adjacency lists indexed by node (index 0 unused), sorted ascending."""
        adj = [[] for _ in range(self.n + 1)]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for a in adj:
            a.sort()
        return adj

    def is_exact(self):
        return all(isinstance(w, (int, Fraction)) for _, _, w in self.edges)


@dataclass(frozen=True)
class Digraph:
    """Directed simple graph on ``1..n``; arcs ``(i, j, w)`` mean ``i -> j``."""

    n: int
    arcs: tuple

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGraph(f"node count must be positive, got {self.n}")
        arcs = tuple(tuple(a) for a in self.arcs)
        seen = set()
        for i, j, w in arcs:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InvalidGraph(f"arc ({i}, {j}) out of range 1..{self.n}")
            if i == j:
                raise InvalidGraph(f"self-loop at node {i}")
            if (i, j) in seen:
                raise InvalidGraph(f"duplicate arc ({i}, {j})")
            seen.add((i, j))
            _check_weight(w, f"arc ({i}, {j})")
        object.__setattr__(self, "arcs", arcs)

    @property
    def m(self):
        return len(self.arcs)

    def out_neighbors(self):
        adj = [[] for _ in range(self.n + 1)]
        for i, j, _ in self.arcs:
            adj[i].append(j)
        for a in adj:
            a.sort()
        return adj

    def weight_map(self):
        return {(i, j): w for i, j, w in self.arcs}

    def is_exact(self):
        return all(isinstance(w, (int, Fraction)) for _, _, w in self.arcs)


class Attachment(NamedTuple):
    """One branch edge ``edge = (i, j)`` attached at the already-covered node ``anchor``."""

    edge: tuple
    anchor: int


def _bfs(adj, start, n):
    """Distances and parents from ``start``; neighbors visited in list order."""
    dist = [-1] * (n + 1)
    parent = [0] * (n + 1)
    dist[start] = 0
    order = [start]
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                parent[v] = u
                order.append(v)
                queue.append(v)
    return dist, parent, order


def components(g: WeightedGraph):
    """Connected components as sorted node lists, ordered by smallest node."""
    adj = g.neighbors()
    seen = [False] * (g.n + 1)
    comps = []
    for s in range(1, g.n + 1):
        if seen[s]:
            continue
        _, _, order = _bfs(adj, s, g.n)
        for v in order:
            seen[v] = True
        comps.append(sorted(order))
    return comps


def is_connected(g: WeightedGraph) -> bool:
    dist, _, _ = _bfs(g.neighbors(), 1, g.n)
    return all(d >= 0 for d in dist[1:])


def spanning_tree(g: WeightedGraph) -> WeightedGraph:
    """BFS tree from node 1 with index-ordered neighbor visits."""
    adj = g.neighbors()
    dist, parent, order = _bfs(adj, 1, g.n)
    if len(order) != g.n:
        raise NotConnected(f"graph has {len(components(g))} components")
    w = g.weight_map()
    edges = []
    for v in order[1:]:
        u = parent[v]
        i, j = min(u, v), max(u, v)
        edges.append((i, j, w[i, j]))
    return WeightedGraph.from_edges(g.n, edges)


def is_tree(g: WeightedGraph) -> bool:
    return g.m == g.n - 1 and is_connected(g)


def longest_path(t: WeightedGraph) -> tuple:
    """Diameter path of a tree (node count maximal).

    Ties go to the lexicographically smallest ``(start, end)`` pair, with the
    path oriented from ``start`` to ``end``.
    """
    if not is_tree(t):
        raise NotATree("input is not a tree")
    adj = t.neighbors()
    if t.n == 1:
        return (1,)
    # double sweep gives the diameter length
    dist, _, _ = _bfs(adj, 1, t.n)
    far = max(range(1, t.n + 1), key=lambda v: (dist[v], -v))
    dist, _, _ = _bfs(adj, far, t.n)
    diameter = max(dist[1:])
    # smallest start with eccentricity == diameter, then smallest end
    for s in range(1, t.n + 1):
        dist, parent, _ = _bfs(adj, s, t.n)
        if max(dist[1:]) == diameter:
            e = min(v for v in range(1, t.n + 1) if dist[v] == diameter)
            path = [e]
            while path[-1] != s:
                path.append(parent[path[-1]])
            return tuple(reversed(path))
    raise AssertionError("unreachable")


def _is_path_in(t: WeightedGraph, path: Sequence[int]) -> bool:
    if len(path) == 0 or len(set(path)) != len(path):
        return False
    if any(not 1 <= v <= t.n for v in path):
        return False
    w = t.weight_map()
    return all((min(a, b), max(a, b)) in w for a, b in zip(path, path[1:]))


def branch_schedule(t: WeightedGraph, path: Sequence[int]) -> list:
    """Order in which tree edges off ``path`` are attached.

    Breadth-first outward from the path, seeding the queue with the path
    nodes in path order (so branches nearer the root ``path[0]`` come first).
    Each entry has exactly one endpoint already covered.
    """
    if not _is_path_in(t, path):
        raise PathNotInTree(f"{list(path)} is not a path of the tree")
    adj = t.neighbors()
    covered = [False] * (t.n + 1)
    for v in path:
        covered[v] = True
    queue = deque(path)
    schedule = []
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not covered[v]:
                covered[v] = True
                schedule.append(Attachment((min(u, v), max(u, v)), u))
                queue.append(v)
    if not all(covered[1:]):
        raise NotATree("tree is not connected")
    return schedule


def diverging_spanning_tree(dg: Digraph) -> Optional[tuple]:
    """Smallest root reaching every node along arcs, with its BFS out-tree; else ``None``."""
    adj = dg.out_neighbors()
    w = dg.weight_map()
    for r in range(1, dg.n + 1):
        dist, parent, order = _bfs(adj, r, dg.n)
        if len(order) == dg.n:
            arcs = tuple((parent[v], v, w[parent[v], v]) for v in order[1:])
            return r, Digraph(dg.n, arcs)
    return None


def underlying_graph(dg: Digraph) -> WeightedGraph:
    """Orientation dropped; antiparallel arcs merge with summed weight."""
    acc = {}
    for i, j, w in dg.arcs:
        key = (min(i, j), max(i, j))
        acc[key] = acc.get(key, 0) + w
    return WeightedGraph(dg.n, tuple((i, j, w) for (i, j), w in sorted(acc.items())))


def is_weakly_connected(dg: Digraph) -> bool:
    return is_connected(underlying_graph(dg))


def reorder_nodes(g: WeightedGraph, perm: Sequence[int]) -> WeightedGraph:
    """Relabel node ``i`` as ``perm[i-1]``."""
    perm = list(perm)
    if sorted(perm) != list(range(1, g.n + 1)):
        raise InvalidPermutation(f"{perm} is not a permutation of 1..{g.n}")
    return WeightedGraph.from_edges(g.n, [(perm[i - 1], perm[j - 1], w) for i, j, w in g.edges])


def induced_subgraph(g: WeightedGraph, keep: Sequence[int]) -> WeightedGraph:
    """Subgraph induced on ``keep``, relabeled ``1..len(keep)`` in the given order."""
    index = {v: k + 1 for k, v in enumerate(keep)}
    edges = [(index[i], index[j], w) for i, j, w in g.edges if i in index and j in index]
    return WeightedGraph.from_edges(len(keep), edges)
