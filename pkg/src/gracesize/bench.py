"""Benchmark grid over tree families, sizes and seeds, written as CSV."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from dataclasses import astuple, dataclass
from typing import Iterable, Sequence

from .families import gen_family
from .pipeline import PipelineConfig, near_graceful

__all__ = ["BenchRow", "CSV_HEADER", "stage_digest", "run_cell", "run_bench", "rows_to_csv", "read_csv"]

CSV_HEADER = ("family", "n", "epsilon", "seed", "distinct", "fraction", "max_label", "elapsed_ms", "digest")


@dataclass(frozen=True)
class BenchRow:
    family: str
    n: int
    epsilon: float
    seed: int
    distinct: int
    fraction: float
    max_label: int
    elapsed_ms: float
    digest: str

    def __post_init__(self):
        if self.n > 1:
            assert 0 < self.fraction <= 1, "fraction outside (0, 1]"
        assert self.distinct <= max(self.n - 1, 0), "more colours than edges"

    def key(self):
        return self.family, self.n, self.seed


def stage_digest(stage_log) -> str:
    blob = json.dumps([list(p) for p in stage_log]).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def run_cell(family: str, n: int, epsilon: float, seed: int, config: PipelineConfig | None = None) -> BenchRow:
    tree = gen_family(family, n, seed)
    t0 = time.perf_counter()
    _, rep = near_graceful(tree, epsilon, seed, config=config)
    elapsed = (time.perf_counter() - t0) * 1000
    return BenchRow(
        family, n, epsilon, seed, rep.distinct_colours, rep.fraction, rep.max_label,
        round(elapsed, 1), stage_digest(rep.stage_log),
    )


def run_bench(
    families: Sequence[str],
    sizes: Sequence[int],
    seeds: Iterable[int],
    epsilon: float = 0.2,
    config: PipelineConfig | None = None,
    jobs: int = 1,
) -> list[BenchRow]:
    """Run every (family, n, seed) cell; rows come back sorted by that key."""
    cells = [(f, n, epsilon, s) for f in families for n in sizes for s in seeds]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(run_cell, *zip(*cells), [config] * len(cells)))
    else:
        rows = [run_cell(*c, config) for c in cells]
    return sorted(rows, key=BenchRow.key)


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sorted(rows, key=BenchRow.key):
        w.writerow(astuple(r))
    return buf.getvalue()


def read_csv(text: str) -> list[BenchRow]:
    rd = csv.reader(io.StringIO(text))
    header = tuple(next(rd))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    out = []
    for row in rd:
        f, n, eps, seed, distinct, frac, mx, ms, dg = row
        out.append(BenchRow(f, int(n), float(eps), int(seed), int(distinct), float(frac), int(mx), float(ms), dg))
    return out
