"""Command line front end: ``trackpaths <command> ...``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import api
from .errors import PathCapExceeded, TrackPathsError
from .fileformat import (export_dot, read_instance, read_trackers, serialize_instance,
                         write_result)
from .generators import generate_instance
from .verify import DEFAULT_PATH_CAP, Status, is_tracking_set

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN = 0, 1, 2


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _param(value: str | None):
    return None if value in (None, "auto") else value


def cmd_solve(args) -> int:
    inst = read_instance(args.input, validate=args.param in (None, "auto"))
    rec, sol = api.solve_record(inst, _param(args.param), args.path_cap, per_guess=args.stats,
                                timing=args.timing)
    if args.seed is not None:
        rec.extra["seed"] = args.seed
    if args.trace:
        _emit(sol.reduced.trace.to_text() if sol.reduced else "", args.trace)
    _emit(write_result(rec), args.output)
    return EXIT_OK if rec.verified else EXIT_FAIL


def cmd_verify(args) -> int:
    inst = read_instance(args.input, validate=False)
    verdict = is_tracking_set(inst.graph, read_trackers(args.trackers), args.path_cap)
    print(verdict.status.value)
    if verdict.status is Status.INVALID:
        p1, p2 = verdict.witness
        print("witness: " + " ".join(map(str, p1)))
        print("witness: " + " ".join(map(str, p2)))
        return EXIT_FAIL
    return EXIT_OK if verdict.valid else EXIT_UNKNOWN


def cmd_oracle(args) -> int:
    inst = read_instance(args.input, validate=False)
    _emit(write_result(api.oracle_record(inst, args.path_cap)), args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    inst = read_instance(args.input, validate=False)
    rec = api.compare_record(inst, _param(args.param), args.path_cap)
    _emit(write_result(rec), args.output)
    return EXIT_OK if rec.extra["equal"] and rec.verified else EXIT_FAIL


def cmd_generate(args) -> int:
    inst = generate_instance(args.kind, args.n, args.k, args.seed, density=args.density,
                             max_clique=args.max_clique)
    _emit(serialize_instance(inst), args.output)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    inst = read_instance(args.input, validate=False)
    trackers = None
    if args.solution:
        with open(args.solution, encoding="utf-8") as fh:
            trackers = read_trackers(fh.read())
    _emit(export_dot(inst, trackers), args.output)
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import run_batch, write_report

    rows = run_batch(args.kind, args.count, args.n, args.k, args.seed, oracle=not args.no_oracle,
                     path_cap=args.path_cap)
    csv_path, png_path = write_report(rows, args.out_dir, args.stem)
    bad = sum(1 for r in rows if r.equal is False or not r.verified)
    print(f"{len(rows)} instances, {bad} mismatches; wrote {csv_path} and {png_path}")
    return EXIT_OK if bad == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trackpaths", description="Exact minimum tracking sets.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def cap(sp):
        sp.add_argument("--path-cap", type=int, default=DEFAULT_PATH_CAP,
                        help="give up when the graph has more s-t paths than this")

    sp = sub.add_parser("solve", help="solve an instance file")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-o", "--output")
    sp.add_argument("--param", choices=["vc", "cvd", "dcm", "auto"], default="auto")
    sp.add_argument("--seed", type=int, help="recorded in the result; the solver is deterministic")
    sp.add_argument("--stats", action="store_true", help="include per-guess records")
    sp.add_argument("--trace", help="write the reduction trace here")
    sp.add_argument("--timing", action="store_true", help="add wall time (breaks byte-identity)")
    cap(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="check a tracker set")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--trackers", required=True, help='e.g. "1,4,7"')
    cap(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("oracle", help="brute-force minimum tracking set")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-o", "--output")
    cap(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("compare", help="solver against brute force")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-o", "--output")
    sp.add_argument("--param", choices=["vc", "cvd", "dcm", "auto"], default="auto")
    cap(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("generate", help="random instance with a planted modulator")
    sp.add_argument("--kind", choices=["vc", "cvd"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--density", type=float, default=0.5)
    sp.add_argument("--max-clique", type=int, default=4)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("export-dot", help="Graphviz rendering of an instance")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--solution", help="result record or tracker list")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_export_dot)

    sp = sub.add_parser("report", help="batch run: CSV table and PNG figure")
    sp.add_argument("--kind", choices=["vc", "cvd"], required=True)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--no-oracle", action="store_true")
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--stem", default="report")
    cap(sp)
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PathCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (TrackPathsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
