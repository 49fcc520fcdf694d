"""Exact tracking sets parameterised by a dual connected modulator.

Every vertex outside the modulator ``S`` has at least two neighbours in ``S``
and ``G - S`` is a disjoint union of cliques. The solver guesses which part
``T'`` of ``S`` is in the tracking set (``A = S - T'`` is then excluded),
rejects guesses that cannot work, marks vertices of ``B = V - S`` that are
forced, and finally tries subsets of the few vertices that remain undecided.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from .errors import ModulatorError, PathCapExceeded, SolverInvariantError
from .graph import (Graph, Instance, Kind, component_structure, induces_forest,
                    is_local_pair_any, is_local_st_pair, iter_simple_paths, triangles)
from .reductions import ReducedInstance, Variant, reduce_fixpoint
from .verify import (DEFAULT_PATH_CAP, PathSystem, Verdict, min_tracking_set_bruteforce,
                     path_system)

log = logging.getLogger(__name__)


class GuessRejected(Exception):
    def __init__(self, rule: str, detail: str = ""):
        super().__init__(f"{rule}: {detail}" if detail else rule)
        self.rule = rule


@dataclass(frozen=True)
class Guess:
    t_prime: frozenset
    a_set: frozenset

    @classmethod
    def from_mask(cls, S_sorted, mask: int) -> "Guess":
        tp = frozenset(v for i, v in enumerate(S_sorted) if mask >> i & 1)
        return cls(tp, frozenset(S_sorted) - tp)


@dataclass
class MarkState:
    base_marks: frozenset
    guess_marks: set = field(default_factory=set)
    soft_marks: set = field(default_factory=set)  # arbitrary picks left to the subset search
    v3_prime: set = field(default_factory=set)
    candidates: frozenset = frozenset()
    partner: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def marked(self, v) -> bool:
        return v in self.base_marks or v in self.guess_marks or v in self.soft_marks

    def mark(self, *vs) -> None:
        self.guess_marks.update(v for v in vs if v not in self.base_marks)

    @property
    def marks(self) -> frozenset:
        return self.base_marks | self.guess_marks


@dataclass(frozen=True)
class BClassification:
    v1: frozenset
    v2: frozenset
    v3: frozenset
    v3_only: frozenset  # V3 vertices without any neighbour in A


@dataclass
class GuessRecord:
    mask: int
    t_prime: tuple
    rejected: str | None = None
    candidates: int = 0
    v3_prime: int = 0
    v1_common: int = 0
    v2_common: int = 0
    best: int | None = None
    diagnostics: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"mask": self.mask, "t_prime": list(self.t_prime), "rejected": self.rejected,
                "candidates": self.candidates, "v3_prime": self.v3_prime, "best": self.best,
                "v1_common": self.v1_common, "v2_common": self.v2_common,
                "diagnostics": list(self.diagnostics)}


@dataclass
class SolveStats:
    modulator_size: int = 0
    guesses_tried: int = 0
    guesses_expected: int = 0
    rejected: dict = field(default_factory=dict)
    max_candidates: int = 0
    candidate_bound: int = 0
    records: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    virtual_attempts: list = field(default_factory=list)
    kept_interiors: list = field(default_factory=list)


@dataclass
class Solution:
    trackers: frozenset
    verdict: Verdict
    stats: SolveStats
    t_prime: frozenset = frozenset()
    base_marks: frozenset = frozenset()
    trivially_solved: bool = False
    fallback_used: bool = False
    reduced: ReducedInstance | None = None
    universe: object = None  # CVD candidate universe, for reports

    @property
    def size(self) -> int:
        return len(self.trackers)


# -- modulator checks --------------------------------------------------


def check_dcm(instance: Instance) -> bool:
    g, S = instance.graph, instance.modulator
    if any(len(g.neighbor_set(v) & S) < 2 for v in g.vertices - S):
        return False
    return all(c.is_clique for c in component_structure(g, S))


# -- guess-independent marking ---------------------------------------------


def forced_by_triangles(g: Graph) -> list[tuple[int, tuple[int, int]]]:
    """(c, (a, b)) for every triangle abc in which (a, b) is a local pair.

    The two paths through ab and through acb differ only in c, so c is needed.
    """
    key = ("rr5",)
    if key not in g.memo:
        out = []
        for tri in triangles(g):
            for c in tri:
                a, b = (x for x in tri if x != c)
                if is_local_pair_any(g, tri, a, b):
                    out.append((c, (a, b)))
        g.memo[key] = out
    return g.memo[key]


def rr5_triangle_mark(g: Graph, S, t_prime=None, marks=frozenset()) -> frozenset:
    """Global mode (``t_prime`` None): add forced triangle apexes outside S.

    Per-guess mode: raise GuessRejected when a forced apex lies in S - T'.
    """
    S = frozenset(S)
    if t_prime is None:
        return frozenset(marks) | {c for c, _ in forced_by_triangles(g) if c not in S}
    a_set = S - frozenset(t_prime)
    for c, ab in forced_by_triangles(g):
        if c in a_set:
            raise GuessRejected("RR5", f"triangle apex {c} over local pair {ab} lies in A")
    return frozenset(marks)


def local_pairs(g: Graph, vertices) -> list[tuple[int, int]]:
    """Unordered local pairs (ascending) of the subgraph on ``vertices``."""
    vs = frozenset(vertices)
    return [(a, b) for a, b in combinations(sorted(vs), 2) if is_local_pair_any(g, vs, a, b)]


def rr6_clique_mark(g: Graph, S, marks=frozenset()):
    """Mark everything of a clique component of G - S outside each of its local pairs.

    Returns (marks, deletions); components with exactly one local pair lose
    their interior.
    """
    marks = set(marks)
    deletions: set[int] = set()
    for comp in component_structure(g, S):
        if len(comp.vertices) < 3 or not comp.is_clique:
            continue
        lps = local_pairs(g, comp.vertices)
        for a, b in lps:
            marks |= comp.vertices - {a, b}
        if len(lps) == 1:
            a, b = lps[0]
            deletions |= comp.vertices - {a, b}
    return frozenset(marks), frozenset(deletions)


# -- per-guess rejection -----------------------------------------------


def rr4_forest_check(g: Graph, a_set) -> None:
    if not induces_forest(g, a_set):
        raise GuessRejected("RR4", "S - T' induces a cycle")


def rr7_cycle_guard(g: Graph, t_prime, a_set) -> None:
    """Reject when two vertices of T' are a local pair of a cycle whose rest is in A."""
    a_set = frozenset(a_set)
    for a, b in combinations(sorted(t_prime), 2):
        avoid = g.vertices - a_set - {a, b}
        routes = list(iter_simple_paths(g, a, b, avoid))
        for p1, p2 in combinations(routes, 2):
            inner1, inner2 = set(p1[1:-1]), set(p2[1:-1])
            if inner1 & inner2:
                continue
            cycle = inner1 | inner2 | {a, b}
            if is_local_pair_any(g, cycle, a, b):
                raise GuessRejected("RR7", f"{a} and {b} close a tracker-free cycle through A")


# -- classification and the three case machines ----------------------------


def classify_B(g: Graph, S, a_set, universe=None) -> BClassification:
    S, a_set = frozenset(S), frozenset(a_set)
    rest = S - a_set
    B = (g.vertices - S) if universe is None else frozenset(universe) - S
    v1, v2, v3, v3o = set(), set(), set(), set()
    for b in B:
        na = len(g.neighbor_set(b) & a_set)
        nr = len(g.neighbor_set(b) & rest)
        if na + nr < 2:
            raise ModulatorError(f"vertex {b} has fewer than two neighbours in the modulator", b)
        if na >= 2:
            v1.add(b)
        if na >= 1 and nr >= 1:
            v2.add(b)
        if nr >= 2:
            v3.add(b)
            if na == 0:
                v3o.add(b)
    return BClassification(frozenset(v1), frozenset(v2), frozenset(v3), frozenset(v3o))


def _arbitrary_one(g: Graph, options) -> int:
    """Pick from interchangeable candidates, preferring degree >= 3, then the smaller id."""
    return min(options, key=lambda v: (g.degree(v) < 3, v))


def twins(g: Graph, vs) -> bool:
    """True when swapping any two of ``vs`` is an automorphism fixing s and t."""
    vs = list(vs)
    if g.s in vs or g.t in vs:
        return False
    return all(g.neighbor_set(a) - {b} == g.neighbor_set(b) - {a}
               for a, b in combinations(vs, 2))


def mark_arbitrary(g: Graph, st: MarkState, options, count: int = 1) -> list[int]:
    """Mark ``count`` of ``options`` where any choice would do.

    Among twins the choice really is free. Otherwise the picks are only soft
    marks: the case machines treat them as trackers, but the final subset
    search may still leave them out.
    """
    if count == 1:
        picks = [_arbitrary_one(g, options)]
    else:
        picks = sorted(options)[:count]
    if twins(g, options):
        st.mark(*picks)
    else:
        st.soft_marks.update(v for v in picks if not st.marked(v))
    return picks


def process_V1(g: Graph, guess: Guess, cls: BClassification, st: MarkState) -> None:
    """Leave every pair of A with at most one unmarked common V1 neighbour."""
    for u, v in combinations(sorted(guess.a_set), 2):
        common = sorted(g.neighbor_set(u) & g.neighbor_set(v) & cls.v1)
        for w, x in combinations(common, 2):
            if st.marked(w) or st.marked(x):
                continue
            C = frozenset((u, v, w, x))
            if is_local_pair_any(g, C, w, x):
                raise GuessRejected("V1", f"{w},{x} joined only through A-vertices {u},{v}")
            side = [(p, q) for p in (u, v) for q in (w, x) if is_local_pair_any(g, C, p, q)]
            if side:
                for _, q in side:
                    st.mark(x if q == w else w)
                continue
            if is_local_pair_any(g, C, u, v):
                if g.has_edge(u, v) or g.has_edge(w, x):
                    st.mark(w, x)
                else:
                    mark_arbitrary(g, st, (w, x))
                continue
            st.diagnostics.append(f"V1: no local pair in C4 {sorted(C)}")


def process_V2(g: Graph, guess: Guess, cls: BClassification, st: MarkState) -> None:
    """Leave every (T', A) pair with at most two unmarked common V2 neighbours."""
    for u in sorted(guess.t_prime):
        for v in sorted(guess.a_set):
            common = sorted(g.neighbor_set(u) & g.neighbor_set(v) & cls.v2)
            for trip in combinations(common, 3):
                if any(st.marked(b) for b in trip):
                    continue
                Gp = frozenset((u, v) + trip)
                uv = g.has_edge(u, v)
                hits = [(p, q) for p, q in combinations(trip, 2) if is_local_pair_any(g, Gp, p, q)]
                if hits:
                    if uv:
                        raise GuessRejected("V2", f"{hits[0]} separated only by {v} in A")
                    for p, q in hits:
                        st.mark(*(b for b in trip if b not in (p, q)))
                    continue
                hits = [b for b in trip if is_local_pair_any(g, Gp, u, b)]
                if hits:
                    if uv:
                        raise GuessRejected("V2", f"({u},{hits[0]}) separated only by {v} in A")
                    for b in hits:
                        st.mark(*(y for y in trip if y != b))
                    continue
                hits = [b for b in trip if is_local_pair_any(g, Gp, v, b)]
                if hits:
                    others = [y for y in trip if y != hits[0]]
                    if uv:
                        st.mark(*others)
                    else:
                        mark_arbitrary(g, st, others)
                    continue
                if is_local_pair_any(g, Gp, u, v):
                    if uv:
                        st.mark(*trip)
                    elif all(g.degree(b) == 2 for b in trip):
                        mark_arbitrary(g, st, trip, 2)
                    else:
                        mark_arbitrary(g, st, trip)
                    continue
                st.diagnostics.append(f"V2: no local pair in K23 {sorted(Gp)}")


def _short_routes(g: Graph, u: int, v: int, pool) -> list[tuple]:
    """Interiors of u-v paths with one or two interior vertices, all from ``pool``."""
    nu = g.neighbor_set(u) & pool
    nv = g.neighbor_set(v) & pool
    out = [(w,) for w in sorted(nu & nv)]
    for w in sorted(nu):
        for x in sorted(g.neighbor_set(w) & nv):
            if x != w:
                out.append((w, x))
    return sorted(out)


def process_V3(g: Graph, guess: Guess, cls: BClassification, st: MarkState) -> None:
    """Mark what V3 forces and collect the retained set V3'."""
    tp = sorted(guess.t_prime)
    for u, v in combinations(tp, 2):
        common = sorted(g.neighbor_set(u) & g.neighbor_set(v) & cls.v3_only)
        for w, x in combinations(common, 2):
            if st.marked(w) or st.marked(x):
                continue
            C = frozenset((u, v, w, x))
            if g.has_edge(u, v):
                for p in (u, v):
                    for q in (w, x):
                        if is_local_pair_any(g, C, p, q):
                            st.mark(x if q == w else w)
            if st.marked(w) or st.marked(x):
                continue
            if is_local_pair_any(g, C, u, v):
                if g.has_edge(u, v) or g.has_edge(w, x):
                    st.mark(w, x)
                else:
                    (pick,) = mark_arbitrary(g, st, (w, x))
                    st.v3_prime.add(x if pick == w else w)
    for u, v in combinations(tp, 2):
        common = [b for b in g.neighbor_set(u) & g.neighbor_set(v) & cls.v3_only if not st.marked(b)]
        if len(common) == 1:
            st.v3_prime.add(common[0])
    # two tracker-free short routes between a local pair of T'
    changed = True
    while changed:
        changed = False
        pool = frozenset(b for b in cls.v3_only if not st.marked(b))
        for u, v in combinations(tp, 2):
            routes = _short_routes(g, u, v, pool)
            for r1, r2 in combinations(routes, 2):
                if set(r1) & set(r2):
                    continue
                if is_local_pair_any(g, frozenset((u, v) + r1 + r2), u, v):
                    if len(r1) == len(r2) == 1:
                        (pick,) = mark_arbitrary(g, st, r1 + r2)
                    else:
                        pick = min(r1)
                        st.soft_marks.add(pick)
                    st.v3_prime.update(r2 if pick in r1 else r1)
                    changed = True
                    break
            if changed:
                break
    st.v3_prime -= st.marks | st.soft_marks


def pair_multiplicities(g: Graph, guess: Guess, cls: BClassification, st: MarkState) -> tuple[int, int]:
    """Largest number of unmarked common V1 neighbours of an A-pair, and of V2 neighbours of a mixed pair."""
    def unmarked(u, v, pool):
        return sum(1 for b in g.neighbor_set(u) & g.neighbor_set(v) & pool
                   if not st.marked(b) and b not in (g.s, g.t))

    v1 = max((unmarked(u, v, cls.v1) for u, v in combinations(sorted(guess.a_set), 2)), default=0)
    v2 = max((unmarked(u, v, cls.v2) for u in guess.t_prime for v in guess.a_set), default=0)
    return v1, v2


def multiplicity_violations(g: Graph, guess: Guess, cls: BClassification, st: MarkState) -> list[str]:
    v1, v2 = pair_multiplicities(g, guess, cls, st)
    out = []
    if v1 > 1:
        out.append(f"an A-pair keeps {v1} unmarked common V1 neighbours")
    if v2 > 2:
        out.append(f"a mixed pair keeps {v2} unmarked common V2 neighbours")
    k = len(guess.t_prime) + len(guess.a_set)
    if len(st.v3_prime) > 2 * math.comb(k, 2):
        out.append(f"|V3'| = {len(st.v3_prime)} exceeds 2*C({k},2)")
    return out


# -- search --------------------------------------------------------------


@dataclass
class SearchContext:
    """Everything the guess loop needs; the CVD front end fills in the extras."""

    graph: Graph                      # graph the marking rules inspect
    modulator: frozenset
    base_marks: frozenset
    checker: PathSystem               # verifies candidate sets on a real graph
    universe: frozenset | None = None
    reserve: frozenset = frozenset()
    partner: dict = field(default_factory=dict)
    realize: Callable | None = None   # tracker set -> list of real alternatives
    candidate_bound: int = 0


def candidate_set(ctx: SearchContext, cls: BClassification, st: MarkState) -> list[int]:
    g = ctx.graph
    pool = (cls.v1 | cls.v2 | st.v3_prime | st.soft_marks) - st.marks - {g.s, g.t}
    pool |= (ctx.reserve - st.marks)
    pool |= {ctx.partner[v] for v in pool if v in ctx.partner} - st.marks
    return sorted(pool - ctx.modulator)


def _realizations(ctx: SearchContext, trackers: frozenset) -> list[frozenset]:
    """Real tracker sets for ``trackers``; terminals are dropped since they track nothing."""
    ends = {ctx.graph.s, ctx.graph.t}
    options = [trackers] if ctx.realize is None else ctx.realize(trackers)
    return [real - ends for real in options]


def assemble_search(ctx: SearchContext, guess: Guess, st: MarkState, candidates,
                    incumbent: tuple | None, stats: SolveStats):
    """Smallest valid T' + marks + subset over ``candidates``; None if nothing beats the incumbent.

    ``incumbent`` is (size, sorted tracker tuple). Subsets go by size, then
    lexicographically; a valid set of size r ends the search once every larger
    raw subset is already too big.
    """
    fixed = (frozenset(guess.t_prime) | st.marks) - {ctx.graph.s, ctx.graph.t}
    limit = incumbent[0] if incumbent else None
    best = None
    for r in range(len(candidates) + 1):
        floor = len(fixed) + r
        bound = best[0] if best else limit
        if bound is not None and floor > bound:
            break
        for combo in combinations(candidates, r):
            raw = fixed | frozenset(combo)
            for real in _realizations(ctx, raw):
                verdict = ctx.checker.check(real)
                if ctx.realize is not None and real != raw:
                    stats.virtual_attempts.append((sorted(raw), sorted(real), verdict.valid))
                if not verdict.valid:
                    continue
                key = (len(real), tuple(sorted(real)))
                cap = best or incumbent
                if cap is None or key < cap:
                    best = key
        if best is not None and ctx.realize is None:
            break
    return best


def run_guess_loop(ctx: SearchContext, stats: SolveStats):
    g, S = ctx.graph, ctx.modulator
    S_sorted = sorted(S)
    stats.modulator_size = len(S_sorted)
    stats.guesses_expected = 2 ** len(S_sorted)
    stats.candidate_bound = ctx.candidate_bound
    incumbent = None
    winner = None
    for mask in range(2 ** len(S_sorted)):
        guess = Guess.from_mask(S_sorted, mask)
        rec = GuessRecord(mask, tuple(sorted(guess.t_prime)))
        stats.records.append(rec)
        stats.guesses_tried += 1
        st = MarkState(ctx.base_marks)
        try:
            rr4_forest_check(g, guess.a_set)
            rr5_triangle_mark(g, S, guess.t_prime)
            rr7_cycle_guard(g, guess.t_prime, guess.a_set)
            cls = classify_B(g, S, guess.a_set, ctx.universe)
            process_V1(g, guess, cls, st)
            process_V2(g, guess, cls, st)
            process_V3(g, guess, cls, st)
        except GuessRejected as rej:
            rec.rejected = rej.rule
            stats.rejected[rej.rule] = stats.rejected.get(rej.rule, 0) + 1
            continue
        if st.marks & guess.a_set:
            raise SolverInvariantError("marked a vertex of A")
        cands = candidate_set(ctx, cls, st)
        st.candidates = frozenset(cands)
        rec.candidates = len(cands)
        rec.v3_prime = len(st.v3_prime)
        rec.v1_common, rec.v2_common = pair_multiplicities(g, guess, cls, st)
        rec.diagnostics = st.diagnostics + multiplicity_violations(g, guess, cls, st)
        if ctx.candidate_bound and len(cands) > ctx.candidate_bound:
            rec.diagnostics.append(f"{len(cands)} candidates exceed the bound {ctx.candidate_bound}")
        stats.diagnostics.extend(rec.diagnostics)
        stats.max_candidates = max(stats.max_candidates, len(cands))
        found = assemble_search(ctx, guess, st, cands, incumbent, stats)
        if found is not None:
            rec.best = found[0]
            if incumbent is None or found < incumbent:
                incumbent = found
                winner = (guess, st)
    return incumbent, winner


def prepare_base(g: Graph, S):
    """Guess-independent marks from triangles and clique components.

    Returns (marks, clique interiors that a single local pair would allow to
    delete). The interiors are only marked: deleting them also removes the
    paths that other trackers are needed to tell apart.
    """
    marks = rr5_triangle_mark(g, S)
    return rr6_clique_mark(g, S, marks)


def finish(ctx: SearchContext, stats: SolveStats, red: ReducedInstance,
           path_cap: int | None, incumbent, winner) -> Solution:
    if incumbent is None:
        stats.diagnostics.append("no guess produced a tracking set; fell back to brute force")
        log.warning("guess loop found no tracking set; using the brute-force oracle")
        trackers = min_tracking_set_bruteforce(red.graph, path_cap)
        return Solution(trackers, ctx.checker.check(trackers), stats, fallback_used=True, reduced=red)
    trackers = frozenset(incumbent[1])
    guess, st = winner
    return Solution(trackers, ctx.checker.check(trackers), stats, t_prime=guess.t_prime,
                    base_marks=st.base_marks, reduced=red)


def trivial_solution(red: ReducedInstance, path_cap: int | None = DEFAULT_PATH_CAP) -> Solution:
    stats = SolveStats(modulator_size=len(red.modulator))
    verdict = path_system(red.graph, path_cap).check(())
    return Solution(frozenset(), verdict, stats, trivially_solved=True, reduced=red)


def solve_dcm_reduced(red: ReducedInstance, path_cap: int | None = DEFAULT_PATH_CAP) -> Solution:
    """Guess loop on an already reduced instance whose modulator is a DCM."""
    g, S = red.graph, red.modulator
    base, interiors = prepare_base(g, S)
    k = len(S)
    ctx = SearchContext(g, S, base, path_system(g, path_cap),
                        candidate_bound=5 * math.comb(k, 2))
    stats = SolveStats(kept_interiors=sorted(interiors))
    incumbent, winner = run_guess_loop(ctx, stats)
    return finish(ctx, stats, red, path_cap, incumbent, winner)


def solve_dcm(instance: Instance, path_cap: int | None = DEFAULT_PATH_CAP) -> Solution:
    """Minimum tracking set of a graph with a dual connected modulator."""
    red = reduce_fixpoint(instance, Variant.CVD)
    if red.solved_trivially:
        return trivial_solution(red, path_cap)
    if not check_dcm(red.instance):
        raise ModulatorError("modulator is not a dual connected modulator of the reduced graph")
    return solve_dcm_reduced(red, path_cap)
