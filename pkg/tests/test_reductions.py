import random

import pytest

from conftest import random_graph
from helpers import A, B, C, D, S, T, c4, g_from
from trackpaths.graph import Instance, Kind, build_graph, component_structure, uncovered_edge
from trackpaths.reductions import (RuleTrace, Step, Variant, audit_reduced, find_contraction,
                                   reduce_fixpoint, replay)
from trackpaths.verify import min_tracking_set_bruteforce


def inst(g, S_=(), kind=Kind.DCM):
    return Instance(g, frozenset(S_), kind)


def test_rr1_pendant():
    red = reduce_fixpoint(inst(g_from([(S, T), (S, A)])), Variant.PLAIN)
    assert red.solved_trivially and red.graph.vertices == {S, T}
    assert red.trace.steps[0].rule == "RR1"


def test_rr1_c4_unchanged():
    red = reduce_fixpoint(inst(c4()), Variant.PLAIN)
    assert red.graph == c4() and red.trace.steps == []


def test_rr1_removes_unreachable_clique():
    g = g_from([(S, A), (A, T), (S, B), (B, T), (C, D), (D, 6), (C, 6)])
    red = reduce_fixpoint(inst(g, {A, B}, Kind.CVD), Variant.CVD)
    assert red.graph.vertices == {S, A, B, T}


def test_rr2_trivial_edge():
    red = reduce_fixpoint(inst(g_from([(S, T)])), Variant.PLAIN)
    assert red.solved_trivially


def test_rr2_moves_terminal():
    # s-u then a C4 u-a-t-b
    u = 9
    g = build_graph([(S, u), (u, A), (A, T), (T, B), (B, u)], S, T)
    red = reduce_fixpoint(inst(g), Variant.PLAIN)
    assert red.graph.s == u and S not in red.graph.vertices


def test_rr2_leaves_high_degree_terminal():
    g = build_graph([(S, A), (S, B), (S, C), (A, T), (B, T), (C, T)], S, T)
    red = reduce_fixpoint(inst(g), Variant.PLAIN)
    assert red.graph == g


def test_chain_reduces_to_edge():
    u, v, w = A, B, C
    g = g_from([(S, u), (u, v), (v, w), (w, T)])
    red = reduce_fixpoint(inst(g, {u, w}, Kind.VC), Variant.VC)
    assert red.solved_trivially and red.graph.num_edges() == 1
    assert [s.rule for s in red.trace.steps] == ["RR2", "RR2", "RR2"]


def test_rr3_guard_on_triangle():
    # u, v of degree 2 in triangle u-v-w: contraction would double (u, w)
    adj = {1: {2, 3}, 2: {1, 3}, 3: {1, 2, 4}, 4: {3}}
    assert find_contraction(adj, 98, 99, set(), Variant.PLAIN) is None


def test_rr3_cover_untouched_when_u_w_in_cover():
    # 10-3-1-4-11 beside 10-7-11 with cover {3, 4, 7}: v=1 goes, 3-4 appears, S unchanged
    g = build_graph([(10, 3), (3, 1), (1, 4), (4, 11), (10, 7), (7, 11)], 10, 11)
    red = reduce_fixpoint(inst(g, {3, 4, 7}, Kind.VC), Variant.VC)
    assert red.trace.steps[0].to_line() == "RR3 del=1 add=3-4"


def test_rr3_vc_repairs_cover():
    # s-x-u-v-w-y-t with cover {x, v, y}: contracting v adds the smaller of u, w
    x, u, v, w, y = 1, 2, 3, 4, 6
    g = build_graph([(S, x), (x, u), (u, v), (v, w), (w, y), (y, T), (S, 7), (7, T), (x, 7), (y, 7)], S, T)
    i = inst(g, {x, v, y, 7}, Kind.VC)
    i.validate()
    red = reduce_fixpoint(i, Variant.VC)
    assert uncovered_edge(red.graph, red.modulator) is None
    assert len(red.modulator) <= 4


def test_trace_round_trip_and_replay():
    rng = random.Random(5)
    for _ in range(40):
        g = random_graph(rng, rng.randint(4, 9), 0.35)
        i = inst(g)
        red = reduce_fixpoint(i, Variant.PLAIN)
        text = red.trace.to_text()
        again = RuleTrace.from_text(text)
        assert again.to_text() == text
        assert replay(i, again).graph == red.graph


def test_step_line_format():
    st = Step("RR3", removed_vertices=(5,), added_edges=((3, 7),), mod_removed=(5,), mod_added=(3,))
    assert st.to_line() == "RR3 del=5 add=3-7 S:-5+3"
    assert Step.from_line(st.to_line()) == st


def test_idempotent():
    rng = random.Random(8)
    for _ in range(40):
        g = random_graph(rng, rng.randint(4, 9), 0.4)
        red = reduce_fixpoint(inst(g), Variant.PLAIN)
        if red.solved_trivially:
            continue
        again = reduce_fixpoint(red.instance, Variant.PLAIN)
        assert again.graph == red.graph and again.trace.steps == []


def test_cvd_variant_keeps_cliques():
    from trackpaths.generators import generate_instance
    for seed in range(60):
        i = generate_instance("cvd", 11, 2, seed)
        red = reduce_fixpoint(i, Variant.CVD)
        assert all(c.is_clique for c in component_structure(red.graph, red.modulator))


def test_vc_variant_establishes_dcm():
    from trackpaths.dcm import check_dcm
    from trackpaths.generators import generate_instance
    for seed in range(60):
        i = generate_instance("vc", 10, 3, seed, density=0.3)
        red = reduce_fixpoint(i, Variant.VC)
        assert len(red.modulator) <= 3
        if not red.solved_trivially:
            assert check_dcm(red.instance)


def test_terminal_neighbour_not_contracted():
    # contracting next to a terminal changes the optimum (kept as a regression case)
    edges = [(0, 2), (0, 6), (1, 4), (1, 5), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6)]
    g = build_graph(edges, 0, 1)
    red = reduce_fixpoint(inst(g), Variant.PLAIN)
    assert len(min_tracking_set_bruteforce(red.graph)) == len(min_tracking_set_bruteforce(g)) == 3
