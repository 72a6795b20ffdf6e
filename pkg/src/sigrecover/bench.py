"""Scaling benchmark: wall clock and exact multiplication counts per dimension."""

from __future__ import annotations

import math
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

from .io import InstanceFile
from .matrix import random_invertible
from .recovery import NotInOrbit, RecoveryConfig, recover
from .tensor import congruence_act, core_tensor


def generate_instance(d: int, seed: int, bound: int = 5) -> InstanceFile:
    """Random integer invertible ``A`` with entries in ``[-bound, bound]`` and ``G = A * C``."""
    if d < 1:
        raise ValueError("dimension must be positive")
    a = random_invertible(d, 1, bound, seed)
    return InstanceFile(congruence_act(a, core_tensor(d)), a, seed, bound)


def trial_seed(seed: int, d: int, trial: int) -> int:
    """Independent per-trial seed; does not depend on scheduling order."""
    return random.Random(f"{seed}:{d}:{trial}").getrandbits(62)


@dataclass(frozen=True)
class TrialRecord:
    dim: int
    trial: int
    seed: int
    seconds: float
    mul_count: int
    retries: int
    success: bool
    error: str | None = None


@dataclass(frozen=True)
class DimSummary:
    dim: int
    trials: int
    mean_seconds: float
    mean_mul_count: float
    total_retries: int
    success_rate: float


class BenchFailure(RuntimeError):
    def __init__(self, record: TrialRecord):
        super().__init__(
            f"d={record.dim} trial={record.trial} seed={record.seed} failed: {record.error}"
        )
        self.record = record


def run_trial(d: int, trial: int, seed: int, bound: int = 5) -> TrialRecord:
    inst = generate_instance(d, seed, bound)
    start = time.perf_counter()
    try:
        a, trace = recover(inst.tensor, RecoveryConfig(rng_seed=seed))
    except NotInOrbit as exc:
        return TrialRecord(d, trial, seed, time.perf_counter() - start, 0, 0, False, str(exc))
    elapsed = time.perf_counter() - start
    ok = a == inst.matrix
    return TrialRecord(
        d, trial, seed, elapsed, trace.mul_count, trace.total_retries(), ok,
        None if ok else "recovered matrix differs from ground truth",
    )


def _run(args: tuple[int, int, int, int]) -> TrialRecord:
    return run_trial(*args)


@dataclass
class BenchReport:
    records: list[TrialRecord]
    seed: int
    bound: int

    @property
    def dims(self) -> list[int]:
        return sorted({r.dim for r in self.records})

    def summary(self) -> list[DimSummary]:
        out = []
        for d in self.dims:
            rs = [r for r in self.records if r.dim == d]
            out.append(DimSummary(
                d,
                len(rs),
                statistics.fmean(r.seconds for r in rs),
                statistics.fmean(r.mul_count for r in rs),
                sum(r.retries for r in rs),
                sum(r.success for r in rs) / len(rs),
            ))
        return out

    def mul_count_slope(self, dims: Sequence[int] | None = None) -> float:
        rows = [s for s in self.summary() if dims is None or s.dim in dims]
        return loglog_slope([s.dim for s in rows], [s.mean_mul_count for s in rows])

    def to_dict(self) -> dict:
        summary = self.summary()
        return {
            "format": "sigrecover/bench",
            "version": 1,
            "seed": self.seed,
            "bound": self.bound,
            "summary": [asdict(s) for s in summary],
            "mul_count_slope": self.mul_count_slope() if len(summary) > 1 else None,
            "records": [asdict(r) for r in self.records],
        }

    def format_table(self) -> str:
        lines = [f"{'d':>4} {'trials':>6} {'mean s':>10} {'mean mults':>14} {'retries':>7} {'success':>8}"]
        for s in self.summary():
            lines.append(
                f"{s.dim:>4} {s.trials:>6} {s.mean_seconds:>10.3f} {s.mean_mul_count:>14.0f} "
                f"{s.total_retries:>7} {s.success_rate:>7.0%}"
            )
        if len(self.dims) > 1:
            lines.append(f"log-log slope of multiplication counts: {self.mul_count_slope():.3f}")
        return "\n".join(lines)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    if len(xs) < 2:
        raise ValueError("need at least two points for a slope")
    slope, _ = statistics.linear_regression([math.log(x) for x in xs], [math.log(y) for y in ys])
    return slope


def run_bench(
    dims: Sequence[int],
    trials: int,
    seed: int = 0,
    bound: int = 5,
    jobs: int = 1,
    stop_on_failure: bool = True,
) -> BenchReport:
    if trials < 1:
        raise ValueError("trials must be positive")
    if any(d < 2 for d in dims):
        raise ValueError("all dimensions must be at least 2")
    tasks = [(d, t, trial_seed(seed, d, t), bound) for d in dims for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run, tasks))
    else:
        records = []
        for task in tasks:
            rec = _run(task)
            records.append(rec)
            if stop_on_failure and not rec.success:
                break
    if stop_on_failure:
        for rec in records:
            if not rec.success:
                raise BenchFailure(rec)
    return BenchReport(records, seed, bound)
