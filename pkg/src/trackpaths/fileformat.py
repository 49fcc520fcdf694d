"""Instance files, result records and DOT export.

Instance grammar, one item per line, ``#`` or ``c`` starts a comment::

    p tp <n> <m>
    s <id>
    t <id>
    k vc|cvd|dcm
    m <id> [<id> ...]      (repeatable)
    e <u> <v>

Vertex ids are 1-based; vertices 1..n exist even when isolated.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable

from .errors import InstanceFormatError
from .graph import Instance, Kind, build_graph


def _ints(tokens, lineno, first_col, what):
    out = []
    col = first_col
    for tok in tokens:
        try:
            v = int(tok)
        except ValueError:
            raise InstanceFormatError(f"expected an integer {what}, got {tok!r}", lineno, col) from None
        out.append((v, col))
        col += len(tok) + 1
    return out


def _columns(line: str) -> list[tuple[str, int]]:
    out, i = [], 0
    for tok in line.split():
        i = line.index(tok, i)
        out.append((tok, i + 1))
        i += len(tok)
    return out


def parse_instance(text: str, validate: bool = True) -> Instance:
    """Parse an instance file; with ``validate`` the modulator property is checked too."""
    header = None
    s = t = kind = None
    edges: list[tuple[int, int]] = []
    modulator: set[int] = set()
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        last_line = lineno
        toks = _columns(raw)
        if not toks or toks[0][0].startswith("#") or toks[0][0] == "c":
            continue
        tag, col = toks[0]
        args = [tok for tok, _ in toks[1:]]
        argcol = toks[1][1] if len(toks) > 1 else col + len(tag) + 1

        def ids(expect=None):
            if header is None:
                raise InstanceFormatError(f"'{tag}' line before the 'p tp' header", lineno, col)
            vals = _ints(args, lineno, argcol, "vertex id")
            if expect is not None and len(vals) != expect:
                raise InstanceFormatError(f"'{tag}' takes {expect} id(s), got {len(vals)}", lineno, col)
            for v, c in vals:
                if not 1 <= v <= header[0]:
                    raise InstanceFormatError(f"vertex id {v} outside 1..{header[0]}", lineno, c)
            return [v for v, _ in vals]

        if tag == "p":
            if header is not None:
                raise InstanceFormatError("duplicate 'p' header", lineno, col)
            if len(args) != 3 or args[0] != "tp":
                raise InstanceFormatError("header must read 'p tp <n> <m>'", lineno, col)
            (n, _), (m, _) = _ints(args[1:], lineno, toks[2][1], "count")
            if n < 2 or m < 0:
                raise InstanceFormatError("need n >= 2 and m >= 0", lineno, col)
            header = (n, m, lineno)
        elif tag in ("s", "t"):
            (v,) = ids(1)
            if (s if tag == "s" else t) is not None:
                raise InstanceFormatError(f"duplicate '{tag}' line", lineno, col)
            if tag == "s":
                s = v
            else:
                t = v
        elif tag == "e":
            u, v = ids(2)
            if u == v:
                raise InstanceFormatError(f"self-loop on vertex {u}", lineno, col)
            edges.append((u, v))
        elif tag == "m":
            modulator.update(ids())
        elif tag == "k":
            if kind is not None:
                raise InstanceFormatError("duplicate 'k' line", lineno, col)
            if len(args) != 1 or args[0] not in {k.value for k in Kind}:
                raise InstanceFormatError("kind must be one of vc, cvd, dcm", lineno, argcol)
            kind = Kind(args[0])
        else:
            raise InstanceFormatError(f"unknown line tag {tag!r}", lineno, col)
    if header is None:
        raise InstanceFormatError("missing 'p tp <n> <m>' header", last_line or 1, 1)
    for name, val in (("s", s), ("t", t), ("k", kind)):
        if val is None:
            raise InstanceFormatError(f"missing '{name}' line", last_line or 1, 1)
    if s == t:
        raise InstanceFormatError("s and t must differ", last_line, 1)
    n, m, hline = header
    g = build_graph(edges, s, t, vertices=range(1, n + 1))
    if g.num_edges() != m:
        raise InstanceFormatError(f"header declares {m} edges, file has {g.num_edges()}", hline, 1)
    inst = Instance(g, frozenset(modulator), kind)
    if validate:
        inst.validate()
    return inst


def serialize_instance(inst: Instance) -> str:
    g = inst.graph
    lines = [f"p tp {max(g.vertices)} {g.num_edges()}", f"s {g.s}", f"t {g.t}", f"k {inst.kind.value}"]
    if inst.modulator:
        lines.append("m " + " ".join(map(str, sorted(inst.modulator))))
    lines += [f"e {u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_instance(path, validate: bool = True) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), validate)


def trace_digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class ResultRecord:
    solver: str
    trackers: list
    verified: bool
    stats: dict = field(default_factory=dict)
    trace_digest: str = ""
    extra: dict = field(default_factory=dict)
    wall_time: float | None = None

    @property
    def size(self) -> int:
        return len(self.trackers)

    def as_dict(self) -> dict:
        out = {"solver": self.solver, "trackers": sorted(self.trackers), "size": self.size,
               "verified": self.verified, "stats": self.stats, "trace_digest": self.trace_digest}
        out.update(self.extra)
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def write_result(record: ResultRecord) -> str:
    """Canonical JSON text: sorted keys, sorted tracker ids, trailing newline."""
    return json.dumps(record.as_dict(), sort_keys=True, indent=2) + "\n"


def read_trackers(text: str) -> list[int]:
    """Tracker ids from a result record or from a plain comma/space separated list."""
    text = text.strip()
    if text.startswith("{"):
        return sorted(json.loads(text)["trackers"])
    return sorted(int(x) for x in text.replace(",", " ").split())


def export_dot(inst: Instance, trackers: Iterable[int] | None = None) -> str:
    """Graphviz text: terminals double-circled, modulator boxed, trackers filled.

    Only real vertices of the instance are written.
    """
    g = inst.graph
    T = set(trackers or ()) & g.vertices
    lines = ["graph tracking {", "  node [shape=circle];"]
    for v in g.sorted_vertices():
        attrs = []
        if v in (g.s, g.t):
            attrs.append("shape=doublecircle")
        elif v in inst.modulator:
            attrs.append("shape=box")
        if v in inst.modulator and v in (g.s, g.t):
            attrs.append("penwidth=2")
        if v in T:
            attrs.append('style=filled fillcolor="gray70"')
        label = "s" if v == g.s else "t" if v == g.t else None
        if label:
            attrs.append(f'xlabel="{label}"')
        lines.append(f"  {v}" + (f" [{' '.join(attrs)}]" if attrs else "") + ";")
    lines += [f"  {u} -- {v};" for u, v in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"

