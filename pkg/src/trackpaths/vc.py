"""Vertex cover front end: reduce with the cover-preserving rule, then run the DCM solver."""

from __future__ import annotations

from .dcm import Solution, check_dcm, solve_dcm_reduced, trivial_solution
from .errors import ModulatorError, SolverInvariantError
from .graph import Graph, Instance, Kind, uncovered_edge
from .reductions import Variant, reduce_fixpoint
from .verify import DEFAULT_PATH_CAP


def validate_vertex_cover(g: Graph, S) -> bool:
    return uncovered_edge(g, frozenset(S)) is None


def minimum_vertex_cover(g: Graph) -> frozenset:
    """Exact minimum vertex cover by branching on uncovered edges.

    Ties go to the cover found first when branching on the smaller endpoint.
    """
    edges = g.edges()
    best = frozenset(g.vertices)

    def branch(cover: frozenset, budget: int) -> frozenset | None:
        e = next(((u, v) for u, v in edges if u not in cover and v not in cover), None)
        if e is None:
            return cover
        if budget == 0:
            return None
        for x in e:
            found = branch(cover | {x}, budget - 1)
            if found is not None:
                return found
        return None

    for k in range(len(g.vertices) + 1):
        found = branch(frozenset(), k)
        if found is not None:
            return found
    return best


def solve_vc(instance: Instance, path_cap: int | None = DEFAULT_PATH_CAP) -> Solution:
    g, S = instance.graph, instance.modulator
    if not validate_vertex_cover(g, S):
        u, v = uncovered_edge(g, S)
        raise ModulatorError(f"edge ({u},{v}) is not covered", (u, v))
    red = reduce_fixpoint(instance, Variant.VC)
    if red.solved_trivially:
        return trivial_solution(red, path_cap)
    if len(red.modulator) > len(S):
        raise SolverInvariantError("the cover grew during reduction")
    if not check_dcm(red.instance):
        raise SolverInvariantError("reduced vertex cover is not a dual connected modulator")
    return solve_dcm_reduced(red, path_cap)


def solve_vc_auto(g: Graph, path_cap: int | None = DEFAULT_PATH_CAP) -> Solution:
    """Solve with a computed minimum vertex cover as the modulator."""
    return solve_vc(Instance(g, minimum_vertex_cover(g), Kind.VC), path_cap)
