import random

import pytest

from helpers import A, B, C, D, S, T, c4, g_from, k4_sabt
from trackpaths.dcm import (Guess, GuessRejected, MarkState, SearchContext,
                            assemble_search, check_dcm, classify_B, process_V1, process_V2,
                            process_V3, rr4_forest_check, rr5_triangle_mark, rr6_clique_mark,
                            rr7_cycle_guard, solve_dcm, SolveStats, twins)
from trackpaths.errors import ModulatorError
from trackpaths.graph import Instance, Kind, build_graph
from trackpaths.verify import min_tracking_set_bruteforce, path_system


def dcm(g, S_):
    return Instance(g, frozenset(S_), Kind.DCM)


def guess(tp, a):
    return Guess(frozenset(tp), frozenset(a))


# -- check_dcm -------------------------------------------------------------

def test_check_dcm_c4():
    assert check_dcm(dcm(c4(), {A, B}))


def test_check_dcm_degree_shortfall():
    assert not check_dcm(dcm(g_from([(S, C), (C, T)]), {C}))


def test_check_dcm_needs_cliques():
    # remainder s-x-y is an induced path
    g = g_from([(S, 6), (6, 7), (S, A), (S, B), (6, A), (6, B), (7, A), (7, B), (T, A), (T, B)],
               extra=[7])
    assert not check_dcm(dcm(g, {A, B}))


# -- rejection rules -------------------------------------------------------

def test_rr4():
    g = g_from([(A, B), (B, C), (A, C), (S, A), (C, T)])
    with pytest.raises(GuessRejected):
        rr4_forest_check(g, {A, B, C})
    rr4_forest_check(g, {A, B})
    rr4_forest_check(g, set())


def _tri():
    return g_from([(A, B), (B, C), (A, C), (S, A), (B, T)])


def test_rr5_global_marks_apex():
    assert rr5_triangle_mark(_tri(), {A, B}) == {C}


def test_rr5_per_guess_rejects_apex_in_A():
    with pytest.raises(GuessRejected):
        rr5_triangle_mark(_tri(), {A, B, C}, t_prime={A, B})
    rr5_triangle_mark(_tri(), {A, B, C}, t_prime={C})


def test_rr5_no_local_pair_no_mark():
    # triangle hanging off one vertex: no pair reaches both terminals disjointly
    g = g_from([(S, A), (A, T), (A, B), (B, C), (A, C)])
    assert rr5_triangle_mark(g, set()) == frozenset()


def test_rr6_unique_pair_marks_interior():
    # clique {a,b,c,d} entered only at a and left only at b
    g = g_from([(A, B), (A, C), (A, D), (B, C), (B, D), (C, D), (S, A), (B, T),
                (S, 8), (8, T)])
    marks, interiors = rr6_clique_mark(g, {S, T, 8})
    assert marks >= {C, D} and interiors == {C, D}


def test_rr6_single_edge_component():
    g = g_from([(S, A), (A, B), (B, T), (S, 8), (8, T)])
    marks, interiors = rr6_clique_mark(g, {S, T, 8})
    assert not ({A, B} & marks) and not interiors


def test_rr6_two_disjoint_pairs_mark_everything():
    # K4 on a,b,c,d with s-a, b-t, s-c, d-t: (a,b) and (c,d) are both local pairs
    g = g_from([(A, B), (A, C), (A, D), (B, C), (B, D), (C, D), (S, A), (B, T), (S, C), (D, T)])
    marks, interiors = rr6_clique_mark(g, {S, T})
    assert marks == {A, B, C, D} and not interiors


def test_rr7_rejects_cycle_through_A():
    x, y = 6, 7
    g = g_from([(S, A), (B, T), (A, x), (x, B), (A, y), (y, B)], extra=[x, y])
    with pytest.raises(GuessRejected):
        rr7_cycle_guard(g, {A, B}, {x, y})


def test_rr7_independent_A_passes():
    g = g_from([(S, A), (B, T), (A, 6), (6, 7), (S, 7), (B, 7)])
    rr7_cycle_guard(g, {A, B}, {6})
    rr7_cycle_guard(g, set(), {6, 7})


# -- classification -------------------------------------------------------

def test_classify_B():
    u, v, w = 1, 2, 3
    g = build_graph([(10, u), (10, v), (11, u), (11, w), (12, u), (12, v), (12, w),
                     (u, 0), (v, 9)], 0, 9)
    cls = classify_B(g, {u, v, w}, {u, v}, universe={10, 11, 12})
    assert 10 in cls.v1 and 10 not in cls.v2 | cls.v3
    assert 11 in cls.v2 and 11 not in cls.v1 | cls.v3
    cls = classify_B(g, {u, v, w}, {u}, universe={12})
    assert 12 in cls.v2 and 12 in cls.v3


def test_classify_B_rejects_non_dcm():
    g = build_graph([(0, 1), (1, 2)], 0, 2)
    with pytest.raises(ModulatorError):
        classify_B(g, {1}, set(), universe={0})


# -- case machines ----------------------------------------------------------

U, V, W, X, Y = 1, 2, 3, 4, 6


def _c4(extra_edges):
    return build_graph([(U, W), (W, V), (V, X), (X, U)] + extra_edges, 0, 5)


def _run_v1(g, gs):
    cls = classify_B(g, {U, V}, gs.a_set, universe={W, X})
    st = MarkState(frozenset())
    process_V1(g, gs, cls, st)
    return st


def test_v1_side_pair_marks_other():
    st = _run_v1(_c4([(0, U), (W, 5)]), guess((), {U, V}))
    assert st.guess_marks == {X}


def test_v1_rejects_when_w_x_local():
    with pytest.raises(GuessRejected):
        _run_v1(_c4([(0, W), (X, 5)]), guess((), {U, V}))


def test_v1_nothing_to_do():
    g = build_graph([(U, W), (W, V), (0, U), (V, 5)], 0, 5)
    cls = classify_B(g, {U, V}, {U, V}, universe={W})
    st = MarkState(frozenset())
    process_V1(g, guess((), {U, V}), cls, st)
    assert not st.guess_marks and not st.soft_marks


def _k23(extra_edges):
    return build_graph([(U, W), (U, X), (U, Y), (V, W), (V, X), (V, Y)] + extra_edges, 0, 5)


def _run_v2(g):
    gs = guess({U}, {V})
    cls = classify_B(g, {U, V}, gs.a_set, universe={W, X, Y})
    st = MarkState(frozenset())
    process_V2(g, gs, cls, st)
    return st


def test_v2_case_two_marks_other_two():
    st = _run_v2(_k23([(0, U), (W, 5)]))
    assert st.guess_marks == {X, Y}


def test_v2_case_one_with_chord_rejects():
    with pytest.raises(GuessRejected):
        _run_v2(_k23([(0, W), (X, 5), (U, V)]))


def test_v2_nothing_to_do():
    g = build_graph([(U, W), (U, X), (V, W), (V, X), (0, U), (V, 5)], 0, 5)
    gs = guess({U}, {V})
    st = MarkState(frozenset())
    process_V2(g, gs, classify_B(g, {U, V}, gs.a_set, universe={W, X}), st)
    assert not st.guess_marks


def _run_v3(g, universe):
    gs = guess({U, V}, ())
    cls = classify_B(g, {U, V}, gs.a_set, universe=universe)
    st = MarkState(frozenset())
    process_V3(g, gs, cls, st)
    return st


def test_v3_uv_local_marks_one_keeps_other():
    st = _run_v3(_c4([(0, U), (V, 5)]), {W, X})
    assert st.guess_marks == {W} and st.v3_prime == {X}


def test_v3_chord_and_side_pair_marks_other():
    st = _run_v3(_c4([(0, U), (W, 5), (U, V)]), {W, X})
    assert X in st.guess_marks


def test_v3_unique_pair_joins_v3_prime():
    g = build_graph([(U, W), (W, V), (0, U), (V, 5), (0, V)], 0, 5)
    st = _run_v3(g, {W})
    assert st.v3_prime == {W}


def test_twins():
    g = _c4([(0, U), (V, 5)])
    assert twins(g, (W, X))
    assert not twins(_c4([(0, W), (V, 5)]), (W, X))


# -- assembly and the full solver -----------------------------------------

def test_assemble_triangle():
    g = g_from([(S, C), (C, T), (S, T)])
    ctx = SearchContext(g, frozenset({C}), frozenset(), path_system(g))
    found = assemble_search(ctx, guess({C}, ()), MarkState(frozenset()), [], None, SolveStats())
    assert found == (1, (C,))


def test_assemble_nothing_valid():
    g = c4()
    ctx = SearchContext(g, frozenset({A, B}), frozenset(), path_system(g))
    assert assemble_search(ctx, guess((), {A, B}), MarkState(frozenset()), [], None,
                           SolveStats()) is None


def test_assemble_respects_incumbent():
    g = c4()
    ctx = SearchContext(g, frozenset({A, B}), frozenset(), path_system(g))
    st = MarkState(frozenset())
    assert assemble_search(ctx, guess({A, B}, ()), st, [], (1, (A,)), SolveStats()) is None


def test_solve_c4():
    sol = solve_dcm(dcm(c4(), {A, B}))
    assert sol.size == 1 and sol.verdict.valid
    assert sol.stats.guesses_tried == 4 == sol.stats.guesses_expected


def test_solve_single_edge_trivial():
    sol = solve_dcm(dcm(g_from([(S, T)]), set()))
    assert sol.trivially_solved and sol.trackers == frozenset()


def test_solve_k4():
    sol = solve_dcm(dcm(k4_sabt(), {A, B}))
    assert sol.trackers == {A, B}


def test_solution_meets_winning_guess():
    rng = random.Random(3)
    from trackpaths.generators import generate_instance
    for seed in range(40):
        inst = generate_instance("vc", rng.randint(5, 10), rng.randint(2, 4), seed)
        sol = solve_dcm(Instance(inst.graph, inst.modulator, Kind.DCM))
        if sol.trivially_solved:
            continue
        S_ = sol.reduced.modulator - {sol.reduced.graph.s, sol.reduced.graph.t}
        assert sol.trackers & S_ == sol.t_prime - {sol.reduced.graph.s, sol.reduced.graph.t}
        assert sol.trackers >= sol.base_marks - {sol.reduced.graph.s, sol.reduced.graph.t}


def test_oracle_equivalence_small_dcm():
    rng = random.Random(11)
    checked = 0
    while checked < 150:
        k = rng.randint(2, 3)
        n = rng.randint(k + 2, 8)
        Sx = list(range(k))
        edges = [(a, b) for a in Sx for b in Sx if a < b and rng.random() < 0.3]
        rest = list(range(k, n))
        while rest:
            q, rest = rest[:rng.randint(1, 2)], rest[len(rest[:rng.randint(1, 2)]):]
            edges += [(a, b) for a in q for b in q if a < b]
            for v in q:
                edges += [(v, c) for c in rng.sample(Sx, rng.randint(2, k))]
        s, t = rng.sample(range(n), 2)
        g = build_graph(edges, s, t, vertices=range(n))
        inst = dcm(g, Sx)
        if not check_dcm(inst):
            continue
        try:
            sol = solve_dcm(inst)
        except ModulatorError:
            continue
        checked += 1
        assert sol.size == len(min_tracking_set_bruteforce(g)) and not sol.fallback_used
