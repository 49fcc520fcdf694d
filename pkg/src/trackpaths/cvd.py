"""Cluster vertex deletion front end.

``G - S`` is a disjoint union of cliques, but its vertices may have fewer than
two neighbours in ``S``. After clique marking each component keeps at most two
unmarked vertices; these are sorted into the candidate universe ``X`` (enough
modulator neighbours for the guess machinery), the reserve ``Y`` (near the
terminals), partners that ride along with an ``X`` vertex, and vertices that
can be ignored outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

from .dcm import (SearchContext, Solution, SolveStats, finish, local_pairs, prepare_base,
                  run_guess_loop, trivial_solution)
from .errors import ModulatorError, SolverInvariantError
from .graph import Graph, Instance, component_structure
from .reductions import Variant, reduce_fixpoint
from .verify import DEFAULT_PATH_CAP, path_system


@dataclass(frozen=True)
class VirtualVertex:
    id: int
    a: int
    b: int
    c: int
    d: int

    def realizations(self) -> tuple[frozenset, ...]:
        """Real stand-ins, smallest first: one endpoint, then endpoint plus its modulator neighbour."""
        return (frozenset((self.a,)), frozenset((self.b,)),
                frozenset((self.a, self.c)), frozenset((self.b, self.d)))


@dataclass
class ComponentInfo:
    vertices: frozenset
    attachments: frozenset
    local_pairs: list
    contains_s: bool
    contains_t: bool
    unmarked: frozenset
    case: str = ""
    x: tuple = ()
    y: tuple = ()
    partner: dict = field(default_factory=dict)
    ignored: tuple = ()
    virtual: VirtualVertex | None = None

    def describe(self) -> str:
        parts = [f"component {sorted(self.vertices)}", f"case={self.case}"]
        if self.x:
            parts.append(f"X+={list(self.x)}")
        if self.y:
            parts.append(f"Y+={list(self.y)}")
        for v, p in sorted(self.partner.items()):
            parts.append(f"partner({v})={p}")
        if self.ignored:
            parts.append(f"ignored={list(self.ignored)}")
        if self.virtual:
            vv = self.virtual
            parts.append(f"virtual {vv.id} for ({vv.a},{vv.b}) via ({vv.c},{vv.d})")
        return " ".join(parts)


@dataclass
class CandidateUniverse:
    X: set = field(default_factory=set)
    Y: set = field(default_factory=set)
    partner: dict = field(default_factory=dict)
    ignored: set = field(default_factory=set)
    virtual: list = field(default_factory=list)
    components: list = field(default_factory=list)


def validate_cvd(g: Graph, S) -> bool:
    return all(c.is_clique for c in component_structure(g, frozenset(S)))


def _deg_S(g: Graph, S, v) -> int:
    return len(g.neighbor_set(v) & S)


def _info(g: Graph, S, comp, marks) -> ComponentInfo:
    vs = comp.vertices
    return ComponentInfo(
        vertices=vs,
        attachments=frozenset(v for v in vs if g.neighbor_set(v) & S),
        local_pairs=local_pairs(g, vs) if len(vs) > 1 else [],
        contains_s=g.s in vs,
        contains_t=g.t in vs,
        unmarked=frozenset(v for v in vs if v not in marks and v not in (g.s, g.t)),
    )


def analyze_terminal_components(g: Graph, S, marks, universe: CandidateUniverse | None = None):
    """Components holding s or t: their unmarked inner vertices go to X or Y."""
    S = frozenset(S)
    universe = universe or CandidateUniverse()
    for comp in component_structure(g, S):
        if g.s not in comp.vertices and g.t not in comp.vertices:
            continue
        info = _info(g, S, comp, marks)
        if len(comp.vertices) > 1 and not info.local_pairs:
            raise SolverInvariantError(f"terminal component {sorted(comp.vertices)} has no local pair")
        info.case = "terminal"
        for v in sorted(info.unmarked):
            if _deg_S(g, S, v) >= 2:
                info.x += (v,)
            else:
                info.y += (v,)
        universe.X.update(info.x)
        universe.Y.update(info.y)
        universe.components.append(info)
    if len(universe.Y) > 2:
        raise SolverInvariantError(f"reserve set {sorted(universe.Y)} has more than two vertices")
    return universe


def analyze_cluster_components(g: Graph, S, marks, universe: CandidateUniverse | None = None,
                               next_id: int | None = None):
    """Sort the unmarked vertices of the other components; may create virtual vertices."""
    S = frozenset(S)
    universe = universe or CandidateUniverse()
    next_id = max(g.vertices) + 1 if next_id is None else next_id
    for comp in component_structure(g, S):
        if g.s in comp.vertices or g.t in comp.vertices:
            continue
        info = _info(g, S, comp, marks)
        U = sorted(info.unmarked)
        if len(U) > 2:
            raise SolverInvariantError(
                f"component {sorted(comp.vertices)} keeps {len(U)} unmarked vertices")
        if not U:
            info.case = "marked"
        elif len(U) == 1:
            (v,) = U
            if len(comp.vertices) == 1:
                info.case, info.x = "singleton", (v,)
            elif _deg_S(g, S, v) >= 2:
                info.case, info.x = "single-unmarked", (v,)
            else:
                info.case, info.ignored = "single-unmarked", (v,)
        else:
            a, b = U
            da, db = _deg_S(g, S, a), _deg_S(g, S, b)
            if da >= 2 and db >= 2:
                info.case, info.x = "pair", (a, b)
            elif da >= 2 or db >= 2:
                keep, other = (a, b) if da >= 2 else (b, a)
                info.case, info.x = "pair-partner", (keep,)
                info.partner = {keep: other}
            else:
                (c,) = g.neighbor_set(a) & S
                (d,) = g.neighbor_set(b) & S
                vv = VirtualVertex(next_id, a, b, c, d)
                next_id += 1
                info.case, info.x, info.virtual = "virtual", (vv.id,), vv
                universe.virtual.append(vv)
        universe.X.update(info.x)
        universe.partner.update(info.partner)
        universe.ignored.update(info.ignored)
        universe.components.append(info)
    return universe


def with_virtual_vertices(g: Graph, virtual) -> Graph:
    if not virtual:
        return g
    adj = g.adjacency()
    for vv in virtual:
        adj[vv.id] = {vv.c} | {vv.d}
        adj[vv.c].add(vv.id)
        adj[vv.d].add(vv.id)
    return Graph(adj, g.s, g.t)


def make_realizer(virtual):
    """Map a tracker set that may hold virtual vertices to real alternatives, first choice first."""
    by_id = {vv.id: vv for vv in virtual}

    def realize(trackers: frozenset) -> list[frozenset]:
        hit = sorted(v for v in trackers if v in by_id)
        if not hit:
            return [trackers]
        base = trackers - set(hit)
        out = []
        for choice in product(*(by_id[v].realizations() for v in hit)):
            real = base.union(*choice)
            if real not in out:
                out.append(real)
        return out

    return realize


def account(g: Graph, S, marks, universe: CandidateUniverse) -> None:
    """Every vertex outside S is a terminal, marked, or sorted somewhere."""
    sorted_somewhere = (universe.X | universe.Y | set(universe.partner.values())
                        | universe.ignored)
    for vv in universe.virtual:
        sorted_somewhere |= {vv.a, vv.b}
    for v in g.vertices - S - {g.s, g.t}:
        if v not in marks and v not in sorted_somewhere:
            raise SolverInvariantError(f"vertex {v} left unaccounted by the component analysis")


def solve_cvd(instance: Instance, path_cap: int | None = DEFAULT_PATH_CAP) -> Solution:
    g, S = instance.graph, instance.modulator
    if not validate_cvd(g, S):
        bad = next(c for c in component_structure(g, S) if not c.is_clique)
        raise ModulatorError(f"component {sorted(bad.vertices)} of G - S is not a clique",
                             bad.vertices)
    red = reduce_fixpoint(instance, Variant.CVD)
    if red.solved_trivially:
        return trivial_solution(red, path_cap)
    g, S = red.graph, red.modulator
    base, interiors = prepare_base(g, S)
    universe = analyze_terminal_components(g, S, base)
    analyze_cluster_components(g, S, base, universe)
    account(g, S, base, universe)
    k = len(S)
    ctx = SearchContext(with_virtual_vertices(g, universe.virtual), S, base,
                        path_system(g, path_cap),
                        universe=frozenset(universe.X), reserve=frozenset(universe.Y),
                        partner=dict(universe.partner),
                        realize=make_realizer(universe.virtual) if universe.virtual else None,
                        candidate_bound=10 * math.comb(k, 2) + 2)
    stats = SolveStats(kept_interiors=sorted(interiors))
    incumbent, winner = run_guess_loop(ctx, stats)
    sol = finish(ctx, stats, red, path_cap, incumbent, winner)
    sol.universe = universe
    return sol
