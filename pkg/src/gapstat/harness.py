"""Repeated-trial sensitivity experiments.

Each (sweep value, trial) pair gets its own seed from
:func:`derive_trial_seed`, so trials are independent and can run in any
order or in parallel.  Per-trial p-values are collected in a fixed order
and reduced with ``math.fsum``; the output is therefore byte-identical for
any degree of parallelism.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import IO, Iterable, List, Sequence, Tuple, Union

import numpy as np

from .datagen import gen_band_excluded, gen_regular, gen_truncated_normal, gen_uniform
from .errors import ExperimentError
from .rng import GOLDEN, MASK64, mix64
from .testkit import Method, SignificanceConfig, decide, run_test

EXPERIMENTS = ("uniform_null", "variance_sweep", "missing_band_sweep", "regularity_sweep")

DEFAULT_SWEEPS = {
    "uniform_null": (0.0,),
    "variance_sweep": (0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0),
    "missing_band_sweep": (0.0, 1e-4, 2.5e-4, 5e-4, 1e-3, 2.5e-3, 5e-3, 1e-2),
    "regularity_sweep": (1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000),
}

DEFAULT_METHODS = (Method.CHI_SQUARE, Method.MAX_GAP)
DEFAULT_TRIALS = 2000
PAPER_TRIALS = 1_000_000

CSV_COLUMNS = (
    "experiment", "sweep_value", "method", "mean_p_one_sided", "mean_p_two_sided",
    "stderr", "reject_rate", "trials", "n", "base_seed",
)


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    n: int = 10_000
    trials: int = DEFAULT_TRIALS
    base_seed: int = 0
    sweep: Tuple[float, ...] = ()
    methods: Tuple[Method, ...] = DEFAULT_METHODS
    alpha: float = 0.05
    band_center: float = 0.5

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.name!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not self.sweep:
            object.__setattr__(self, "sweep", DEFAULT_SWEEPS[self.name])
        object.__setattr__(self, "sweep", tuple(self.sweep))
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        if not self.methods:
            raise ValueError("at least one method is required")
        SignificanceConfig(self.alpha)


@dataclass(frozen=True)
class TrialRecord:
    sweep_value: float
    trial_index: int
    method: str
    statistic: float
    p_one_sided: float
    p_two_sided: float


@dataclass(frozen=True)
class CurvePoint:
    sweep_value: float
    method: str
    mean_p_one_sided: float
    mean_p_two_sided: float
    stderr: float
    reject_rate_at_alpha: float


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    points: List[CurvePoint]
    records: List[TrialRecord] = field(default_factory=list)


def derive_trial_seed(base_seed: int, sweep_index: int, trial_index: int) -> int:
    h = mix64(base_seed + GOLDEN)
    h = mix64(h ^ ((sweep_index + 1) * 0xD1B54A32D192ED03 & MASK64))
    return mix64(h ^ ((trial_index + 1) * 0x8CB92BA72F3D8DD7 & MASK64))


def make_sample(spec: ExperimentSpec, sweep_value, seed: int):
    if spec.name == "uniform_null":
        return gen_uniform(spec.n, seed)
    if spec.name == "variance_sweep":
        return gen_truncated_normal(spec.n, float(sweep_value), seed)
    if spec.name == "missing_band_sweep":
        return gen_band_excluded(spec.n, float(sweep_value), spec.band_center, seed)
    return gen_regular(spec.n, int(sweep_value), seed)


def _run_block(spec: ExperimentSpec, sweep_index: int, start: int, stop: int) -> np.ndarray:
    """Trials [start, stop) at one sweep point -> array (trials, methods, 3)."""
    value = spec.sweep[sweep_index]
    cfg = SignificanceConfig(spec.alpha)
    out = np.empty((stop - start, len(spec.methods), 3))
    for row, t in enumerate(range(start, stop)):
        try:
            sample = make_sample(spec, value, derive_trial_seed(spec.base_seed, sweep_index, t))
            for j, method in enumerate(spec.methods):
                res = run_test(method, sample, cfg)
                out[row, j] = (res.statistic, res.p_one_sided, res.p_two_sided)
        except ExperimentError:
            raise
        except Exception as exc:
            raise ExperimentError(value, t, exc) from exc
    return out


def _blocks(spec: ExperimentSpec, block_size: int):
    for i in range(len(spec.sweep)):
        for start in range(0, spec.trials, block_size):
            yield i, start, min(start + block_size, spec.trials)


def _aggregate(spec: ExperimentSpec, value, j: int, table: np.ndarray) -> CurvePoint:
    p1 = table[:, j, 1].tolist()
    p2 = table[:, j, 2].tolist()
    t = len(p1)
    mean1 = math.fsum(p1) / t
    mean2 = math.fsum(p2) / t
    if t > 1:
        var = math.fsum((p - mean1) ** 2 for p in p1) / (t - 1)
        stderr = math.sqrt(var / t)
    else:
        stderr = 0.0
    cfg = SignificanceConfig(spec.alpha)
    rejects = sum(1 for p in p1 if not decide(p, cfg))
    return CurvePoint(float(value), spec.methods[j].value, mean1, mean2, stderr, rejects / t)


def run_experiment(
    spec: ExperimentSpec,
    parallel: int = 1,
    keep_records: bool = False,
    block_size: int = 250,
) -> ExperimentResult:
    """Run every trial of ``spec`` and reduce to mean-p curves."""
    blocks = list(_blocks(spec, block_size))
    if parallel > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            futures = [pool.submit(_run_block, spec, *b) for b in blocks]
            parts = [f.result() for f in futures]
    else:
        parts = [_run_block(spec, *b) for b in blocks]

    points, records = [], []
    pos = 0
    for i, value in enumerate(spec.sweep):
        chunk = []
        while pos < len(blocks) and blocks[pos][0] == i:
            chunk.append(parts[pos])
            pos += 1
        table = np.concatenate(chunk)
        for j, method in enumerate(spec.methods):
            points.append(_aggregate(spec, value, j, table))
            if keep_records:
                records.extend(
                    TrialRecord(float(value), t, method.value, *map(float, table[t, j]))
                    for t in range(spec.trials)
                )
    return ExperimentResult(spec, points, records)


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".9g")


def csv_rows(points: Sequence[CurvePoint], spec: ExperimentSpec) -> Iterable[List[str]]:
    yield list(CSV_COLUMNS)
    for pt in points:
        yield [
            spec.name, _fmt(pt.sweep_value), pt.method,
            _fmt(pt.mean_p_one_sided), _fmt(pt.mean_p_two_sided), _fmt(pt.stderr),
            _fmt(pt.reject_rate_at_alpha), _fmt(spec.trials), _fmt(spec.n), _fmt(spec.base_seed),
        ]


def emit_csv(points: Sequence[CurvePoint], spec: ExperimentSpec, destination: Union[str, os.PathLike, IO[str]]) -> None:
    """Write one row per curve point; numbers carry 9 significant digits."""
    if isinstance(destination, (str, os.PathLike)):
        try:
            with open(destination, "w", newline="", encoding="utf-8") as fh:
                csv.writer(fh, lineterminator="\n").writerows(csv_rows(points, spec))
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write CSV: {exc.strerror}", os.fspath(destination)) from exc
    else:
        csv.writer(destination, lineterminator="\n").writerows(csv_rows(points, spec))


def csv_text(points: Sequence[CurvePoint], spec: ExperimentSpec) -> str:
    buf = io.StringIO()
    emit_csv(points, spec, buf)
    return buf.getvalue()


def emit_jsonl(records: Sequence[TrialRecord], destination: Union[str, os.PathLike, IO[str]]) -> None:
    """Raw per-trial dump, one JSON object per line."""
    def write(fh):
        for rec in records:
            fh.write(json.dumps(asdict(rec)) + "\n")

    if isinstance(destination, (str, os.PathLike)):
        try:
            with open(destination, "w", encoding="utf-8") as fh:
                write(fh)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write records: {exc.strerror}", os.fspath(destination)) from exc
    else:
        write(destination)
