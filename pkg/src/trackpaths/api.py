"""One entry point over the three front ends, plus result records for the CLI."""

from __future__ import annotations

import time
from dataclasses import replace

from .cvd import solve_cvd
from .dcm import Solution, solve_dcm
from .fileformat import ResultRecord, trace_digest
from .graph import Instance, Kind
from .vc import solve_vc
from .verify import DEFAULT_PATH_CAP, is_tracking_set, min_tracking_set_bruteforce

SOLVERS = {Kind.VC: solve_vc, Kind.CVD: solve_cvd, Kind.DCM: solve_dcm}


def solve(instance: Instance, kind: Kind | str | None = None,
          path_cap: int | None = DEFAULT_PATH_CAP) -> Solution:
    """Minimum tracking set, using ``kind`` (default: the instance's own) as parameterization."""
    if kind is not None and Kind(kind) is not instance.kind:
        instance = replace(instance, kind=Kind(kind))
        instance.validate()
    return SOLVERS[instance.kind](instance, path_cap)


def solution_stats(sol: Solution, per_guess: bool = False) -> dict:
    st = sol.stats
    out = {
        "modulator_size": st.modulator_size,
        "guesses_tried": st.guesses_tried,
        "guesses_expected": st.guesses_expected,
        "rejected": dict(sorted(st.rejected.items())),
        "max_candidates": st.max_candidates,
        "candidate_bound": st.candidate_bound,
        "diagnostics": list(st.diagnostics),
        "trivially_solved": sol.trivially_solved,
        "fallback_used": sol.fallback_used,
    }
    if sol.reduced is not None:
        out["rules"] = dict(sorted(sol.reduced.trace.counts().items()))
    if per_guess:
        out["guesses"] = [r.as_dict() for r in st.records]
    return out


def solve_record(instance: Instance, kind: Kind | str | None = None,
                 path_cap: int | None = DEFAULT_PATH_CAP, per_guess: bool = False,
                 timing: bool = False) -> tuple[ResultRecord, Solution]:
    """Solve and re-verify on the input graph; the record carries the verdict."""
    start = time.perf_counter()
    sol = solve(instance, kind, path_cap)
    elapsed = time.perf_counter() - start
    verified = is_tracking_set(instance.graph, sol.trackers, path_cap).valid
    trace = sol.reduced.trace.to_text() if sol.reduced else ""
    used = Kind(kind) if kind is not None else instance.kind
    rec = ResultRecord(used.value, sorted(sol.trackers), verified, solution_stats(sol, per_guess),
                       trace_digest(trace), wall_time=elapsed if timing else None)
    return rec, sol


def oracle_record(instance: Instance, path_cap: int | None = DEFAULT_PATH_CAP) -> ResultRecord:
    T = min_tracking_set_bruteforce(instance.graph, path_cap)
    return ResultRecord("oracle", sorted(T), is_tracking_set(instance.graph, T, path_cap).valid)


def compare_record(instance: Instance, kind: Kind | str | None = None,
                   path_cap: int | None = DEFAULT_PATH_CAP) -> ResultRecord:
    rec, _ = solve_record(instance, kind, path_cap)
    orc = oracle_record(instance, path_cap)
    rec.extra = {"oracle_size": orc.size, "oracle_trackers": orc.trackers,
                 "equal": rec.size == orc.size}
    return rec
