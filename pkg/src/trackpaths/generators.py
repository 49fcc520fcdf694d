"""Seeded random instances with a planted modulator. Vertex ids are 1..n."""

from __future__ import annotations

import random

from .errors import TrackPathsError
from .graph import Graph, Instance, Kind, build_graph, component_structure, uncovered_edge
from .verify import DEFAULT_PATH_CAP

MAX_TRIES = 200


class GeneratorError(TrackPathsError, ValueError):
    pass


def _connected(g: Graph) -> bool:
    seen, stack = {g.s}, [g.s]
    while stack:
        for w in g.neighbors(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return g.t in seen


def _vc_attempt(rng: random.Random, n: int, k: int, density: float):
    cover = list(range(1, k + 1))
    edges = [(u, v) for i, u in enumerate(cover) for v in cover[i + 1:] if rng.random() < density]
    for x in range(k + 1, n + 1):
        for c in rng.sample(cover, rng.randint(2, k)):
            edges.append((c, x))
    s, t = rng.sample(range(k + 1, n + 1), 2)
    return edges, s, t, cover


def _cvd_attempt(rng: random.Random, n: int, k: int, density: float, max_clique: int):
    S = list(range(1, k + 1))
    edges = [(u, v) for i, u in enumerate(S) for v in S[i + 1:] if rng.random() < density]
    rest = list(range(k + 1, n + 1))
    cliques = []
    while rest:
        size = min(len(rest), rng.randint(1, max_clique))
        cliques.append(rest[:size])
        rest = rest[size:]
    for q in cliques:
        edges += [(u, v) for i, u in enumerate(q) for v in q[i + 1:]]
        if S:
            hooked = False
            for v in q:
                for c in S:
                    if rng.random() < density / 2:
                        edges.append((v, c))
                        hooked = True
            if not hooked:
                edges.append((rng.choice(q), rng.choice(S)))
    if k == 0:
        big = [q for q in cliques if len(q) >= 2]
        if not big:
            return None
        s, t = rng.sample(rng.choice(big), 2)
    else:
        s, t = rng.sample(range(1, n + 1), 2)
    return edges, s, t, S


def generate_instance(kind: Kind | str, n: int, k: int, seed: int, density: float = 0.5,
                      max_clique: int = 4) -> Instance:
    """Deterministic random instance whose s-t pair is connected.

    ``vc``: a random graph on k cover vertices plus an independent set whose
    members each see at least two of them; s and t lie outside the cover.
    ``cvd``: k modulator vertices plus random cliques of size at most
    ``max_clique``, wired randomly to the modulator.
    """
    kind = Kind(kind)
    if not n > k >= 0:
        raise GeneratorError(f"need n > k >= 0, got n={n}, k={k}")
    if kind is Kind.VC and (k < 2 or n - k < 2):
        raise GeneratorError("a vc instance needs k >= 2 and two vertices outside the cover")
    if kind is Kind.CVD and n < 2:
        raise GeneratorError("a cvd instance needs at least two vertices")
    if kind is Kind.DCM:
        raise GeneratorError("no generator for generic dual connected modulators; use vc")
    rng = random.Random(seed)
    for _ in range(MAX_TRIES):
        if kind is Kind.VC:
            edges, s, t, S = _vc_attempt(rng, n, k, density)
        else:
            attempt = _cvd_attempt(rng, n, k, density, max_clique)
            if attempt is None:
                continue
            edges, s, t, S = attempt
        g = build_graph(edges, s, t, vertices=range(1, n + 1))
        if not _connected(g):
            continue
        inst = Instance(g, frozenset(S), kind)
        inst.validate()
        return inst
    raise GeneratorError(f"no connected instance after {MAX_TRIES} tries (n={n}, k={k}, seed={seed})")
