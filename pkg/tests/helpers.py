"""Small graphs used across the tests, with letters mapped to ids."""

from trackpaths.graph import build_graph

S, A, B, C, D, T = 0, 1, 2, 3, 4, 5


def g_from(edges, s=S, t=T, extra=()):
    return build_graph(edges, s, t, vertices=extra)


def c4():
    """s-a-t-b-s."""
    return g_from([(S, A), (A, T), (T, B), (B, S)])


def triangle_sct():
    return g_from([(S, C), (C, T), (S, T)])


def k4_sabt():
    return g_from([(S, A), (S, B), (S, T), (A, B), (A, T), (B, T)])
