"""Batch runs over generated instances: a CSV table and a summary figure."""

from __future__ import annotations

import csv
import os
import time
from dataclasses import asdict, dataclass

from .api import solve
from .generators import generate_instance
from .verify import DEFAULT_PATH_CAP, is_tracking_set, min_tracking_set_bruteforce

COLUMNS = ["seed", "kind", "n", "m", "k", "size", "oracle_size", "equal", "verified",
           "guesses", "rejected", "max_candidates", "candidate_bound", "fallback", "seconds"]


@dataclass
class Row:
    seed: int
    kind: str
    n: int
    m: int
    k: int
    size: int
    oracle_size: int | None
    equal: bool | None
    verified: bool
    guesses: int
    rejected: int
    max_candidates: int
    candidate_bound: int
    fallback: bool
    seconds: float


def run_batch(kind: str, count: int, n: int, k: int, seed: int = 0, oracle: bool = True,
              path_cap: int | None = DEFAULT_PATH_CAP) -> list[Row]:
    rows = []
    for i in range(count):
        inst = generate_instance(kind, n, k, seed + i)
        start = time.perf_counter()
        sol = solve(inst, path_cap=path_cap)
        seconds = time.perf_counter() - start
        osize = len(min_tracking_set_bruteforce(inst.graph, path_cap)) if oracle else None
        st = sol.stats
        rows.append(Row(seed + i, kind, len(inst.graph.vertices), inst.graph.num_edges(), inst.k,
                        sol.size, osize, None if osize is None else osize == sol.size,
                        is_tracking_set(inst.graph, sol.trackers, path_cap).valid,
                        st.guesses_tried, sum(st.rejected.values()), st.max_candidates,
                        st.candidate_bound, sol.fallback_used, round(seconds, 6)))
    return rows


def write_csv(rows: list[Row], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        w.writeheader()
        for r in rows:
            w.writerow(asdict(r))


def plot_rows(rows: list[Row], path) -> None:
    """Solver size against oracle size, and candidates per instance against the bound."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    have_oracle = [r for r in rows if r.oracle_size is not None]
    if have_oracle:
        xs = [r.oracle_size for r in have_oracle]
        ys = [r.size for r in have_oracle]
        ax1.scatter(xs, ys, s=18, alpha=0.6)
        top = max(xs + ys) + 1
        ax1.plot([0, top], [0, top], color="gray", lw=0.8, ls="--")
    ax1.set_xlabel("oracle size")
    ax1.set_ylabel("solver size")
    ax1.set_title("tracking set size")

    seeds = [r.seed for r in rows]
    ax2.bar(seeds, [r.max_candidates for r in rows], color="tab:blue", label="max candidates")
    ax2.scatter(seeds, [r.candidate_bound for r in rows], color="tab:red", marker="_", s=200,
                label="bound")
    ax2.set_xlabel("seed")
    ax2.set_ylabel("vertices")
    ax2.set_title("candidate set per instance")
    ax2.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(rows: list[Row], out_dir, stem: str = "report") -> tuple[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, stem + ".csv")
    png_path = os.path.join(out_dir, stem + ".png")
    write_csv(rows, csv_path)
    plot_rows(rows, png_path)
    return csv_path, png_path
