"""Tracking-set semantics by exhaustive path enumeration.

A set ``T`` tracks ``G`` when no two distinct simple s-t paths leave the same
ordered sequence of ``T``-vertices behind.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import PathCapExceeded
from .graph import Graph, Path, enumerate_simple_paths

DEFAULT_PATH_CAP = 100_000


class Status(str, enum.Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: tuple[Path, Path] | None = None

    @property
    def valid(self) -> bool:
        return self.status is Status.VALID

    def __bool__(self) -> bool:
        return self.valid


VALID = Verdict(Status.VALID)
UNKNOWN = Verdict(Status.UNKNOWN)


def tracker_sequence(p: Sequence[int], trackers: Iterable[int]) -> tuple:
    trackers = trackers if isinstance(trackers, (set, frozenset)) else set(trackers)
    return tuple(v for v in p if v in trackers)


class PathSystem:
    """All simple s-t paths of a graph, enumerated once and queried many times."""

    def __init__(self, g: Graph, path_cap: int | None = DEFAULT_PATH_CAP):
        self.graph = g
        self.paths = enumerate_simple_paths(g, g.s, g.t, path_cap)

    def check(self, trackers: Iterable[int]) -> Verdict:
        T = frozenset(trackers)
        seen: dict[tuple, int] = {}
        for i, p in enumerate(self.paths):
            key = tuple(v for v in p if v in T)
            j = seen.setdefault(key, i)
            if j != i:
                return Verdict(Status.INVALID, (self.paths[j], p))
        return VALID

    def is_valid(self, trackers: Iterable[int]) -> bool:
        return self.check(trackers).valid


def path_system(g: Graph, path_cap: int | None = DEFAULT_PATH_CAP) -> PathSystem:
    """Cached PathSystem for ``g``; raises PathCapExceeded past the cap."""
    key = ("paths", path_cap)
    hit = g.memo.get(key)
    if hit is None:
        try:
            hit = PathSystem(g, path_cap)
        except PathCapExceeded as exc:
            hit = exc
        g.memo[key] = hit
    if isinstance(hit, PathCapExceeded):
        raise hit
    return hit


def is_tracking_set(g: Graph, trackers: Iterable[int],
                    path_cap: int | None = DEFAULT_PATH_CAP) -> Verdict:
    try:
        ps = path_system(g, path_cap)
    except PathCapExceeded:
        return UNKNOWN
    return ps.check(trackers)


def min_tracking_set_bruteforce(g: Graph, path_cap: int | None = DEFAULT_PATH_CAP) -> frozenset:
    """A minimum tracking set by trying subsets of V - {s, t} by size.

    Within a size, subsets are tried in lexicographic order, so the result is
    the lexicographically smallest minimum. Raises PathCapExceeded when the
    graph has too many s-t paths to enumerate.
    """
    ps = path_system(g, path_cap)
    inner = [v for v in g.sorted_vertices() if v not in (g.s, g.t)]
    # vertices on no s-t path never help
    used = set()
    for p in ps.paths:
        used.update(p)
    inner = [v for v in inner if v in used]
    for r in range(len(inner) + 1):
        for combo in combinations(inner, r):
            if ps.is_valid(combo):
                return frozenset(combo)
    raise AssertionError("V - {s, t} is always a tracking set")
