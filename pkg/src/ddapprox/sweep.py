"""Benchmark sweeps: trade-off curves over a frozen base diagram.

Each sweep point copies the base diagram, applies one strategy at one
fraction, and records predicted fidelity, measured fidelity against a
dense reference (when one is available), and the memory ratio. Points
run in a thread pool; DDAPPROX_THREADS caps the worker count. Rows are
emitted sorted by fraction so identical inputs produce identical CSV
apart from the wall-clock timing column.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .contribution import compute_contributions
from .dd import DecisionDiagram, fidelity
from .replace import ApproxResult, StrategySpec, remove_nodes_baseline, run_strategy

CSV_HEADER = "benchmark,N,X,f,matcher,fid_measured,fid_predicted,mem_ratio,match_ms,seed"

MATCHER_REMOVAL = "removal"


@dataclass(slots=True)
class SweepRecord:
    benchmark: str
    n_levels: int
    x_blocks: int
    f: float
    matcher: str
    fid_measured: float | None
    fid_predicted: float
    mem_ratio: float
    match_ms: float
    seed: int

    def csv_row(self) -> str:
        measured = "" if self.fid_measured is None else f"{self.fid_measured:.12g}"
        return ",".join([
            self.benchmark,
            str(self.n_levels),
            str(self.x_blocks),
            f"{self.f:.12g}",
            self.matcher,
            measured,
            f"{self.fid_predicted:.12g}",
            f"{self.mem_ratio:.12g}",
            f"{self.match_ms:.3f}",
            str(self.seed),
        ])


def default_fractions(count: int = 40) -> list[float]:
    """Geometric grid in (0, 0.995], densest at the high-fidelity end."""
    return [float(f) for f in np.geomspace(0.005, 0.995, count)]


def worker_count() -> int:
    env = os.environ.get("DDAPPROX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"DDAPPROX_THREADS={env!r} is not an integer")
    return min(4, os.cpu_count() or 1)


def _measure(result: ApproxResult, reference: np.ndarray | None) -> float | None:
    if reference is None:
        return None
    return fidelity(reference, result.dd.to_statevector())


def sweep_strategy(dd: DecisionDiagram, block_size: int, block_count: int,
                   matcher: str, fractions, *,
                   reference: np.ndarray | None = None,
                   benchmark: str = "", seed: int = 0,
                   contributions: dict[int, float] | None = None,
                   max_workers: int | None = None) -> list[SweepRecord]:
    if contributions is None:
        contributions = compute_contributions(dd)
    fracs = sorted(float(f) for f in fractions)

    def point(f: float) -> SweepRecord:
        spec = StrategySpec(block_size, block_count, f, matcher)
        result = run_strategy(dd, spec, contributions, lsh_seed=seed)
        result.measured_fidelity = _measure(result, reference)
        return SweepRecord(benchmark, block_size, block_count, f, matcher,
                           result.measured_fidelity, result.predicted_fidelity,
                           result.memory.ratio, result.match_ms, seed)

    workers = max_workers if max_workers is not None else worker_count()
    if workers <= 1 or len(fracs) <= 1:
        return [point(f) for f in fracs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, fracs))


def sweep_removal(dd: DecisionDiagram, budgets, *,
                  reference: np.ndarray | None = None,
                  benchmark: str = "", seed: int = 0,
                  max_workers: int | None = None) -> list[SweepRecord]:
    """Removal baseline curve; ``f`` holds the per-level budget."""
    grid = sorted(float(b) for b in budgets)

    def point(budget: float) -> SweepRecord:
        result = remove_nodes_baseline(dd, budget)
        result.measured_fidelity = _measure(result, reference)
        return SweepRecord(benchmark, 0, 0, budget, MATCHER_REMOVAL,
                           result.measured_fidelity, result.predicted_fidelity,
                           result.memory.ratio, 0.0, seed)

    workers = max_workers if max_workers is not None else worker_count()
    if workers <= 1 or len(grid) <= 1:
        return [point(b) for b in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, grid))


def write_csv(records: list[SweepRecord], out) -> None:
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w") as fh:
            write_csv(records, fh)
        return
    out.write(CSV_HEADER + "\n")
    for rec in records:
        out.write(rec.csv_row() + "\n")


def csv_text(records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def rmse(xs, ys) -> float:
    xs = list(xs)
    ys = list(ys)
    if len(xs) != len(ys) or not xs:
        raise ValueError("need two equal-length non-empty series")
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(xs, ys)) / len(xs))


def lsh_comparable_fractions(dd: DecisionDiagram, block_size: int,
                             fractions) -> list[float]:
    """Fractions at which an lsh sweep is comparable to an exhaustive one.

    Leaf buckets hold at most ceil(sqrt(N)) members, so a level of N
    nodes splits into at least N / ceil(sqrt(N)) leaves. Once the
    candidate pool (1 - f) * N is smaller than the bucket cap, most
    leaves cannot contain a candidate whatever the vector geometry, and
    the lsh run measures its skip policy rather than match quality.
    The cap is taken from the bottom block-top level, the most populous
    level a strategy touches.
    """
    levels = dd.reachable_by_level()
    n0 = len(levels.get(block_size - 1, ()))
    if n0 < 2:
        return sorted(float(f) for f in fractions)
    cap = 1.0 - math.ceil(math.sqrt(n0)) / n0
    return sorted(float(f) for f in fractions if f <= cap)
