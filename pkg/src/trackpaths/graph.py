"""Undirected simple graphs with terminals, and the path primitives built on them.

Vertex ids are non-negative integers. Anything that has to pick "some" vertex
picks the smallest id, and anything that lists paths lists them in
lexicographic order of their vertex sequences, so every routine here is
deterministic.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import GraphError, ModulatorError, PathCapExceeded

Path = tuple  # tuple[int, ...]; kept as a plain tuple for speed
Edge = tuple  # (u, v) with u < v


def edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable undirected simple graph with a source ``s`` and sink ``t``.

    Derived data (sorted neighbour tuples, cached query results) is stored on
    the instance; since the graph never changes after construction that is
    safe to share.
    """

    __slots__ = ("_adj", "_nbrs", "s", "t", "_hash", "memo")

    def __init__(self, adjacency: Mapping[int, Iterable[int]], s: int, t: int):
        adj = {v: frozenset(ns) for v, ns in adjacency.items()}
        if s == t:
            raise GraphError("source and sink must differ")
        for term in (s, t):
            if term not in adj:
                raise GraphError(f"terminal {term} is not a vertex")
        for v, ns in adj.items():
            if v in ns:
                raise GraphError(f"self-loop at vertex {v}")
            for u in ns:
                if u not in adj:
                    raise GraphError(f"vertex {v} has unknown neighbour {u}")
                if v not in adj[u]:
                    raise GraphError(f"adjacency not symmetric on ({v}, {u})")
        self._adj = adj
        self._nbrs = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self.s = s
        self.t = t
        self._hash = None
        self.memo: dict = {}

    # -- basic queries -------------------------------------------------

    @property
    def vertices(self) -> frozenset:
        return frozenset(self._adj)

    def sorted_vertices(self) -> list[int]:
        return sorted(self._adj)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def neighbors(self, v: int) -> tuple:
        """Neighbours of ``v`` in ascending order."""
        return self._nbrs[v]

    def neighbor_set(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> list[Edge]:
        return sorted((u, v) for u, ns in self._adj.items() for v in ns if u < v)

    def num_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def adjacency(self) -> dict[int, set[int]]:
        """A mutable copy of the adjacency map."""
        return {v: set(ns) for v, ns in self._adj.items()}

    def induced(self, keep: Iterable[int]) -> dict[int, set[int]]:
        keep = set(keep)
        return {v: self._adj[v] & keep for v in keep}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.s == other.s and self.t == other.t and self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.s, self.t, frozenset(self.edges()), frozenset(self._adj)))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={len(self)}, m={self.num_edges()}, s={self.s}, t={self.t})"


def build_graph(edges: Iterable[Sequence[int]], s: int, t: int,
                vertices: Iterable[int] = ()) -> Graph:
    """Build a graph from an edge list; duplicate edges collapse.

    ``vertices`` declares extra (possibly isolated) vertices. The terminals
    must appear in an edge or be declared.
    """
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for pair in edges:
        u, v = pair
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    if s == t:
        raise GraphError("source and sink must differ")
    for term in (s, t):
        if term not in adj:
            raise GraphError(f"terminal {term} does not occur in any edge and was not declared")
    return Graph(adj, s, t)


def is_simple_path(g: Graph, p: Sequence[int]) -> bool:
    if not p or len(set(p)) != len(p) or any(v not in g for v in p):
        return False
    return all(g.has_edge(a, b) for a, b in zip(p, p[1:]))


# -- instances ---------------------------------------------------------


class Kind(str, enum.Enum):
    DCM = "dcm"
    VC = "vc"
    CVD = "cvd"


@dataclass(frozen=True)
class Instance:
    graph: Graph
    modulator: frozenset
    kind: Kind = Kind.DCM

    def __post_init__(self):
        object.__setattr__(self, "modulator", frozenset(self.modulator))
        object.__setattr__(self, "kind", Kind(self.kind))
        stray = self.modulator - self.graph.vertices
        if stray:
            raise ModulatorError(f"modulator vertices not in graph: {sorted(stray)}")

    @property
    def k(self) -> int:
        return len(self.modulator)

    def validate(self) -> None:
        """Raise ModulatorError when the modulator lacks its kind's property."""
        g, S = self.graph, self.modulator
        if self.kind is Kind.VC:
            bad = uncovered_edge(g, S)
            if bad is not None:
                raise ModulatorError(f"edge {bad} has no endpoint in the vertex cover", bad)
        else:
            for comp in component_structure(g, S):
                if not comp.is_clique:
                    raise ModulatorError(
                        f"component {sorted(comp.vertices)} of G-S is not a clique",
                        sorted(comp.vertices))
            if self.kind is Kind.DCM:
                for v in g.sorted_vertices():
                    if v not in S and len(g.neighbor_set(v) & S) < 2:
                        raise ModulatorError(
                            f"vertex {v} has fewer than two neighbours in the modulator", v)


def uncovered_edge(g: Graph, S) -> Edge | None:
    for u, v in g.edges():
        if u not in S and v not in S:
            return (u, v)
    return None


# -- components --------------------------------------------------------


@dataclass(frozen=True)
class Component:
    vertices: frozenset
    is_clique: bool
    is_tree: bool


def component_structure(g: Graph, exclude: Iterable[int] = ()) -> list[Component]:
    """Connected components of ``g - exclude`` ordered by smallest vertex."""
    exclude = set(exclude)
    seen: set[int] = set()
    out = []
    for root in g.sorted_vertices():
        if root in exclude or root in seen:
            continue
        comp = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in exclude and y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        edges2 = sum(len(g.neighbor_set(v) & comp) for v in comp)
        n = len(comp)
        out.append(Component(frozenset(comp), edges2 == n * (n - 1), edges2 == 2 * (n - 1)))
    return out


def is_forest(g: Graph, exclude: Iterable[int] = ()) -> bool:
    return all(c.is_tree for c in component_structure(g, exclude))


def induces_forest(g: Graph, keep: Iterable[int]) -> bool:
    keep = set(keep)
    return is_forest(g, g.vertices - keep)


def components_of(adj: Mapping[int, Iterable[int]]) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for root in sorted(adj):
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(comp)
    return out


# -- paths -------------------------------------------------------------


def iter_simple_paths(g: Graph, u: int, v: int, avoid: Iterable[int] = ()) -> Iterator[Path]:
    """Yield simple u-v paths in lexicographic order of vertex sequence."""
    if u == v:
        yield (u,)
        return
    blocked = set(avoid)
    if u in blocked or v in blocked:
        return
    path = [u]
    on_path = {u}
    stack = [iter(g.neighbors(u))]
    while stack:
        for y in stack[-1]:
            if y in on_path or y in blocked:
                continue
            if y == v:
                yield tuple(path) + (v,)
                continue
            path.append(y)
            on_path.add(y)
            stack.append(iter(g.neighbors(y)))
            break
        else:
            stack.pop()
            on_path.discard(path.pop())


def enumerate_simple_paths(g: Graph, u: int, v: int, cap: int | None = None) -> list[Path]:
    """All simple u-v paths, lexicographically ordered.

    Raises PathCapExceeded as soon as more than ``cap`` paths have been found.
    """
    if u not in g or v not in g:
        raise GraphError(f"unknown endpoint in ({u}, {v})")
    out = []
    for p in iter_simple_paths(g, u, v):
        out.append(p)
        if cap is not None and len(out) > cap:
            raise PathCapExceeded(cap)
    return out


def _bfs_path(g: Graph, src: int, dst: int, blocked) -> Path | None:
    if src in blocked or dst in blocked:
        return None
    if src == dst:
        return (src,)
    parent = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y in parent or y in blocked:
                continue
            parent[y] = x
            if y == dst:
                out = [y]
                while parent[out[-1]] is not None:
                    out.append(parent[out[-1]])
                return tuple(reversed(out))
            queue.append(y)
    return None


def _reachable(g: Graph, src: int, dst: int, blocked) -> bool:
    if src in blocked or dst in blocked:
        return False
    if src == dst:
        return True
    seen = {src}
    stack = [src]
    while stack:
        x = stack.pop()
        for y in g.neighbors(x):
            if y == dst:
                return True
            if y not in seen and y not in blocked:
                seen.add(y)
                stack.append(y)
    return False


def _linked_pair(g: Graph, s1: int, t1: int, s2: int, t2: int,
                 forbidden=frozenset(), shared: int | None = None):
    """Search for an s1-t1 path and an s2-t2 path with no common vertex.

    ``shared`` names one vertex both paths may contain (used for the
    vertex-participation query where t1 == s2). The first path is found by
    depth-first search in lexicographic order; every partial path is pruned
    as soon as the second pair is separated or t1 becomes unreachable.
    """
    forbidden = set(forbidden)
    if s1 in forbidden or t1 in forbidden or s2 in forbidden or t2 in forbidden:
        return None
    keep_out = {s2, t2} - {shared}
    if s1 in keep_out or t1 in keep_out:
        return None

    def second(on_path):
        blocked = forbidden | (on_path - {shared})
        return _bfs_path(g, s2, t2, blocked)

    if s1 == t1:
        p2 = second({s1})
        return ((s1,), p2) if p2 is not None else None

    blocked1 = forbidden | keep_out
    path = [s1]
    on_path = {s1}
    if not _reachable(g, s1, t1, blocked1) or second(on_path) is None:
        return None
    stack = [iter(g.neighbors(s1))]
    while stack:
        for y in stack[-1]:
            if y in on_path or y in blocked1:
                continue
            on_path.add(y)
            if y == t1:
                p2 = second(on_path)
                if p2 is not None:
                    return tuple(path) + (t1,), p2
                on_path.discard(y)
                continue
            if second(on_path) is None or not _reachable(g, y, t1, blocked1 | on_path - {y}):
                on_path.discard(y)
                continue
            path.append(y)
            stack.append(iter(g.neighbors(y)))
            break
        else:
            stack.pop()
            on_path.discard(path.pop())
    return None


def two_disjoint_paths(g: Graph, s1: int, t1: int, s2: int, t2: int,
                       forbidden: Iterable[int] = ()):
    """Vertex-disjoint s1-t1 and s2-t2 paths avoiding ``forbidden``, or None.

    A path may be a single vertex when its endpoints coincide.
    """
    forbidden = frozenset(forbidden)
    ends = (s1, t1, s2, t2)
    for v in ends:
        if v not in g:
            raise GraphError(f"unknown vertex {v}")
    if forbidden & set(ends):
        raise GraphError("path endpoints may not be forbidden")
    if s1 == s2 or t1 == t2:
        raise GraphError("coinciding endpoints must be resolved by the caller")
    key = ("2dp", s1, t1, s2, t2, forbidden)
    memo = g.memo
    if key not in memo:
        memo[key] = _linked_pair(g, s1, t1, s2, t2, forbidden)
    return memo[key]


def is_local_st_pair(g: Graph, subgraph_vertices: Iterable[int], a: int, b: int) -> bool:
    """Whether ``a`` is a local source and ``b`` a local destination.

    True iff there are vertex-disjoint paths s->a and b->t that meet the
    subgraph only in a and b respectively. When a == s (b == t) the path is
    the single vertex.
    """
    sub = frozenset(subgraph_vertices)
    if a == b:
        raise GraphError("a local pair needs two distinct vertices")
    if a not in sub or b not in sub:
        raise GraphError("local pair vertices must lie in the subgraph")
    key = ("lp", sub, a, b)
    memo = g.memo
    hit = memo.get(key)
    if hit is not None:
        return hit
    s, t = g.s, g.t
    forbidden = sub - {a, b}
    if s in forbidden or t in forbidden or a == t or b == s:
        ok = False
    else:
        ok = _linked_pair(g, s, a, b, t, forbidden) is not None
    memo[key] = ok
    return ok


def is_local_pair_any(g: Graph, sub: Iterable[int], a: int, b: int) -> bool:
    """Local pair in either orientation."""
    sub = frozenset(sub)
    return is_local_st_pair(g, sub, a, b) or is_local_st_pair(g, sub, b, a)


def participates(g: Graph, element) -> bool:
    """Whether a vertex (int) or an edge (pair) lies on some simple s-t path."""
    s, t = g.s, g.t
    if isinstance(element, tuple):
        u, v = element
        if not g.has_edge(u, v):
            raise GraphError(f"({u}, {v}) is not an edge")
        key = ("pe", edge(u, v))
        if key not in g.memo:
            found = False
            for a, b in ((u, v), (v, u)):
                # s..a, edge (a, b), b..t
                if a == t or b == s:
                    continue
                if _linked_pair(g, s, a, b, t) is not None:
                    found = True
                    break
            g.memo[key] = found
        return g.memo[key]
    v = element
    if v not in g:
        raise GraphError(f"unknown vertex {v}")
    key = ("pv", v)
    if key not in g.memo:
        if v in (s, t):
            g.memo[key] = _reachable(g, s, t, ())
        else:
            g.memo[key] = _linked_pair(g, s, v, v, t, shared=v) is not None
    return g.memo[key]


def common_neighbors(g: Graph, u: int, v: int) -> frozenset:
    return g.neighbor_set(u) & g.neighbor_set(v)


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    """All triangles as ascending vertex triples."""
    key = ("triangles",)
    if key not in g.memo:
        out = []
        for u in g.sorted_vertices():
            for v in g.neighbors(u):
                if v <= u:
                    continue
                for w in sorted(g.neighbor_set(u) & g.neighbor_set(v)):
                    if w > v:
                        out.append((u, v, w))
        g.memo[key] = out
    return g.memo[key]


def pairs(items) -> Iterator[tuple]:
    return combinations(sorted(items), 2)
