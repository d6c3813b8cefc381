"""Corpus runner: every file under a directory times every engine.

Each run gets its own solver process, so instances are independent and can
be dispatched in parallel.  Failures of any kind (parse errors, solver
trouble, crashes) are recorded as unknown verdicts and never abort the
batch.  Results go to a CSV with one row per (file, engine); when both bmc
and abmc-b are among the engines a second CSV pairs their bounds per
instance, restricted to instances both proved unsafe.
"""

from __future__ import annotations

import csv
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .engine import Engine, EngineConfig, Verdict, run
from .frontend import load_problem
from .solver import SolverConfig


@dataclass(frozen=True)
class BenchRow:
    file: str
    engine: str
    verdict: str
    bound: Optional[int]
    learned: int
    wall_ms: float
    cex_len: Optional[int]
    detail: str = ""


CSV_COLUMNS = ("file", "engine", "verdict", "bound", "learned", "wall_ms", "cex_len")


def discover(directory: str) -> List[str]:
    root = Path(directory)
    files = [p for p in root.iterdir() if p.suffix in (".sp", ".smt2")]
    return [str(p) for p in sorted(files)]


def run_one(path: str, engine: Engine, max_bound: int,
            timeout_ms: Optional[int], solver_cmd: Optional[Sequence[str]],
            seed: Optional[int], validate: bool) -> BenchRow:
    name = Path(path).name
    try:
        problem = load_problem(path)
        cfg = EngineConfig(
            max_bound=max_bound,
            timeout_ms=timeout_ms,
            solver=SolverConfig(command=solver_cmd,
                                per_query_timeout_ms=timeout_ms,
                                random_seed=seed),
            validate=validate,
        )
        res = run(problem, engine, cfg)
        cex_len = len(res.expanded) if res.expanded is not None else None
        return BenchRow(name, engine.value, res.verdict.value, res.bound,
                        res.learned, res.wall_ms, cex_len, res.detail)
    except Exception:
        return BenchRow(name, engine.value, Verdict.UNKNOWN.value, None, 0,
                        0.0, None, traceback.format_exc(limit=1).strip())


def run_bench(files: Sequence[str], engines: Sequence[Engine], max_bound: int,
              timeout_ms: Optional[int], solver_cmd: Optional[Sequence[str]],
              seed: Optional[int], jobs: int = 1,
              validate: bool = True) -> List[BenchRow]:
    tasks = [(f, e) for f in files for e in engines]
    if jobs <= 1:
        return [run_one(f, e, max_bound, timeout_ms, solver_cmd, seed, validate)
                for f, e in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(
            lambda t: run_one(t[0], t[1], max_bound, timeout_ms, solver_cmd,
                              seed, validate),
            tasks))


def write_csv(rows: Sequence[BenchRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([r.file, r.engine, r.verdict,
                        "" if r.bound is None else r.bound,
                        r.learned, f"{r.wall_ms:.1f}",
                        "" if r.cex_len is None else r.cex_len])


def scatter_pairs(rows: Sequence[BenchRow]) -> List[Tuple[str, int, int]]:
    """(file, bmc bound, abmc-b bound) for instances both proved unsafe."""
    by_file: Dict[str, Dict[str, BenchRow]] = {}
    for r in rows:
        by_file.setdefault(r.file, {})[r.engine] = r
    out: List[Tuple[str, int, int]] = []
    for fname in sorted(by_file):
        pair = by_file[fname]
        a, b = pair.get(Engine.BMC.value), pair.get(Engine.ABMC_B.value)
        if a and b and a.verdict == b.verdict == Verdict.UNSAFE.value:
            out.append((fname, a.bound, b.bound))
    return out


def write_scatter_csv(rows: Sequence[BenchRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("file", "bmc_bound", "abmc_b_bound"))
        for fname, bb, ab in scatter_pairs(rows):
            w.writerow((fname, bb, ab))


def summarize(rows: Sequence[BenchRow]) -> str:
    engines = []
    for r in rows:
        if r.engine not in engines:
            engines.append(r.engine)
    lines = ["engine      safe  unsafe  unknown"]
    for e in engines:
        counts = {v: 0 for v in ("safe", "unsafe", "unknown")}
        for r in rows:
            if r.engine == e:
                counts[r.verdict] += 1
        lines.append(f"{e:<10} {counts['safe']:>5} {counts['unsafe']:>7} "
                     f"{counts['unknown']:>8}")
    pairs = scatter_pairs(rows)
    if pairs:
        lines.append("")
        lines.append("unsafe bounds (bmc vs abmc-b):")
        for fname, bb, ab in pairs:
            lines.append(f"  {fname}: {bb} vs {ab}")
    return "\n".join(lines)
