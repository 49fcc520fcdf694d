"""Preprocessing rules applied to a fixpoint, with a replayable trace.

RR1 drops vertices and edges that lie on no simple s-t path, RR2 handles
pendant terminals (and the empty core), RR3 contracts one of two adjacent
degree-2 vertices. The ``vc`` and ``cvd`` variants of RR3 keep the modulator
a vertex cover / cluster vertex deletion set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .errors import SolverInvariantError
from .graph import Graph, Instance, Kind, component_structure, edge, participates, uncovered_edge


class Variant(str, enum.Enum):
    PLAIN = "plain"
    VC = "vc"
    CVD = "cvd"


def default_variant(kind: Kind) -> Variant:
    return Variant.VC if kind is Kind.VC else Variant.CVD


@dataclass(frozen=True)
class Step:
    rule: str
    removed_vertices: tuple = ()
    removed_edges: tuple = ()
    added_edges: tuple = ()
    new_s: int | None = None
    new_t: int | None = None
    mod_removed: tuple = ()
    mod_added: tuple = ()

    def to_line(self) -> str:
        parts = [self.rule]
        if self.removed_vertices:
            parts.append("del=" + ",".join(map(str, self.removed_vertices)))
        if self.removed_edges:
            parts.append("cut=" + ",".join(f"{u}-{v}" for u, v in self.removed_edges))
        if self.added_edges:
            parts.append("add=" + ",".join(f"{u}-{v}" for u, v in self.added_edges))
        if self.new_s is not None:
            parts.append(f"s={self.new_s}")
        if self.new_t is not None:
            parts.append(f"t={self.new_t}")
        if self.mod_removed or self.mod_added:
            delta = "".join(f"-{v}" for v in self.mod_removed) + "".join(f"+{v}" for v in self.mod_added)
            parts.append("S:" + delta)
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "Step":
        rule, *fields = line.split()
        kw: dict = {}

        def ints(txt):
            return tuple(int(x) for x in txt.split(",") if x)

        def edges(txt):
            return tuple(tuple(int(x) for x in e.split("-")) for e in txt.split(",") if e)

        for f in fields:
            name, _, val = f.partition("=") if "=" in f else f.partition(":")
            if name == "del":
                kw["removed_vertices"] = ints(val)
            elif name == "cut":
                kw["removed_edges"] = edges(val)
            elif name == "add":
                kw["added_edges"] = edges(val)
            elif name == "s":
                kw["new_s"] = int(val)
            elif name == "t":
                kw["new_t"] = int(val)
            elif name == "S":
                rem, add = [], []
                for tok in val.replace("-", " -").replace("+", " +").split():
                    (rem if tok[0] == "-" else add).append(int(tok[1:]))
                kw["mod_removed"], kw["mod_added"] = tuple(rem), tuple(add)
            else:
                raise ValueError(f"unknown trace field {f!r}")
        return cls(rule, **kw)


@dataclass
class RuleTrace:
    steps: list = field(default_factory=list)

    def to_text(self) -> str:
        return "".join(step.to_line() + "\n" for step in self.steps)

    @classmethod
    def from_text(cls, text: str) -> "RuleTrace":
        return cls([Step.from_line(ln) for ln in text.splitlines() if ln.strip()])

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for st in self.steps:
            out[st.rule] = out.get(st.rule, 0) + 1
        return out


@dataclass(frozen=True)
class ReducedInstance:
    instance: Instance
    trace: RuleTrace
    solved_trivially: bool = False

    @property
    def graph(self) -> Graph:
        return self.instance.graph

    @property
    def modulator(self) -> frozenset:
        return self.instance.modulator


class _Work:
    """Mutable working copy of an instance that records every change."""

    def __init__(self, inst: Instance):
        g = inst.graph
        self.adj = g.adjacency()
        self.s, self.t = g.s, g.t
        self.S = set(inst.modulator)
        self.kind = inst.kind
        self.steps: list[Step] = []

    def graph(self) -> Graph:
        return Graph(self.adj, self.s, self.t)

    def instance(self) -> Instance:
        return Instance(self.graph(), frozenset(self.S), self.kind)

    def apply(self, step: Step) -> None:
        for u, v in step.removed_edges:
            self.adj[u].discard(v)
            self.adj[v].discard(u)
        for v in step.removed_vertices:
            for u in self.adj.pop(v):
                self.adj[u].discard(v)
        for u, v in step.added_edges:
            self.adj[u].add(v)
            self.adj[v].add(u)
        if step.new_s is not None:
            self.s = step.new_s
        if step.new_t is not None:
            self.t = step.new_t
        self.S.difference_update(step.mod_removed)
        self.S.update(step.mod_added)
        self.steps.append(step)

    def delete(self, rule: str, vertices: Iterable[int] = (), edges: Iterable = (), **kw) -> None:
        vertices = tuple(sorted(vertices))
        self.apply(Step(rule, removed_vertices=vertices, removed_edges=tuple(sorted(edges)),
                        mod_removed=tuple(v for v in vertices if v in self.S), **kw))


def rr1_prune(work: _Work) -> bool:
    g = work.graph()
    dead_v = [v for v in g.sorted_vertices() if v not in (g.s, g.t) and not participates(g, v)]
    dead = set(dead_v)
    dead_e = [e for e in g.edges()
              if e[0] not in dead and e[1] not in dead and not participates(g, e)]
    if not dead_v and not dead_e:
        return False
    work.delete("RR1", dead_v, dead_e)
    return True


def rr2_terminal(work: _Work) -> bool | None:
    """Returns None when the instance is trivially solved (only s and t left)."""
    if set(work.adj) == {work.s, work.t}:
        return None
    changed = False
    while len(work.adj[work.s]) == 1 and work.adj[work.s] != {work.t}:
        (nxt,) = work.adj[work.s]
        work.delete("RR2", [work.s], new_s=nxt)
        changed = True
    while len(work.adj[work.t]) == 1 and work.adj[work.t] != {work.s}:
        (nxt,) = work.adj[work.t]
        work.delete("RR2", [work.t], new_t=nxt)
        changed = True
    if set(work.adj) == {work.s, work.t}:
        return None
    return changed


def find_contraction(adj, s, t, S, variant: Variant):
    """The first (v, u, w) for RR3: delete v, join u to w; None if no pair applies.

    Pairs touching a terminal are left alone, as are pairs whose contraction
    would create a parallel edge.
    """
    for v in sorted(adj):
        if v in (s, t) or len(adj[v]) != 2:
            continue
        for u in sorted(adj[v]):
            if u in (s, t) or len(adj[u]) != 2:
                continue
            (w,) = adj[v] - {u}
            if u in adj[w]:
                continue
            if variant is Variant.CVD and v in S and u not in S:
                # the vertex outside S is the one that has to go
                continue
            return v, u, w
    return None


def rr3_contract(work: _Work, variant: Variant) -> bool:
    hit = find_contraction(work.adj, work.s, work.t, work.S, variant)
    if hit is None:
        return False
    v, u, w = hit
    mod_rem, mod_add = (), ()
    if v in work.S:
        mod_rem = (v,)
        if variant is Variant.VC and u not in work.S and w not in work.S:
            mod_add = (min(u, w),)
    work.apply(Step("RR3", removed_vertices=(v,), added_edges=(edge(u, w),),
                    mod_removed=mod_rem, mod_added=mod_add))
    return True


def _apply_rules(work: _Work, variant: Variant) -> bool:
    """Run RR1 -> RR2 -> RR3 until nothing applies. Returns True if trivially solved."""
    while True:
        rr1_prune(work)
        r2 = rr2_terminal(work)
        if r2 is None:
            return True
        if r2:
            continue
        if not rr3_contract(work, variant):
            return False


def reduce_fixpoint(instance: Instance, variant: Variant | str | None = None) -> ReducedInstance:
    variant = default_variant(instance.kind) if variant is None else Variant(variant)
    work = _Work(instance)
    trivial = _apply_rules(work, variant)
    red = ReducedInstance(work.instance(), RuleTrace(list(work.steps)), trivial)
    audit_reduced(red, variant)
    return red


def continue_reduction(red: ReducedInstance, delete: Iterable[int], rule: str,
                       variant: Variant | str) -> ReducedInstance:
    """Delete ``delete`` from a reduced instance and reduce again, extending the trace."""
    variant = Variant(variant)
    work = _Work(red.instance)
    work.steps = list(red.trace.steps)
    work.delete(rule, delete)
    trivial = _apply_rules(work, variant)
    out = ReducedInstance(work.instance(), RuleTrace(list(work.steps)), trivial)
    audit_reduced(out, variant)
    return out


def replay(instance: Instance, trace: RuleTrace) -> Instance:
    work = _Work(instance)
    for step in trace.steps:
        work.apply(step)
    return work.instance()


def unguarded_degree_two_pairs(g: Graph, S=frozenset(), variant: Variant = Variant.PLAIN):
    return find_contraction(g.adjacency(), g.s, g.t, set(S), Variant(variant))


def audit_reduced(red: ReducedInstance, variant: Variant) -> None:
    """Check the reduced-graph invariants; raise SolverInvariantError on a breach."""
    g = red.graph
    S = red.modulator
    if red.solved_trivially:
        if g.vertices != {g.s, g.t}:
            raise SolverInvariantError("trivially solved instance still has inner vertices")
        return
    low = [v for v in g.sorted_vertices() if g.degree(v) <= 1]
    if low:
        raise SolverInvariantError(f"vertices of degree <= 1 after reduction: {low}")
    for v in g.sorted_vertices():
        if not participates(g, v):
            raise SolverInvariantError(f"vertex {v} lies on no s-t path after reduction")
    for e in g.edges():
        if not participates(g, e):
            raise SolverInvariantError(f"edge {e} lies on no s-t path after reduction")
    if unguarded_degree_two_pairs(g, S, variant) is not None:
        raise SolverInvariantError("RR3 still applicable after reduction")
    if variant is Variant.VC and uncovered_edge(g, S) is not None:
        raise SolverInvariantError("reduction broke the vertex cover")
    if variant is Variant.CVD and not all(c.is_clique for c in component_structure(g, S)):
        raise SolverInvariantError("reduction broke the cluster structure of G - S")
