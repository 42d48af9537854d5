"""gapstat command line.

    gapstat test --input data.txt [--method max-gap] [--format lines|csv:COL|f64le]
                 [--range LO HI] [--alpha 0.05] [--sided one|two]
                 [--min-gap-law exact|paper] [--json]
    gapstat experiment --name uniform|variance|missing-band|regularity
                 [--n 10000] [--trials 2000] [--seed 0] [--sweep v1,v2,...]
                 [--methods chi2,max-gap] [--alpha 0.05] [--out PATH]
                 [--records PATH] [--parallel P] [--paper-scale]

Exit codes: 0 pass, 1 reject, 2 usage or data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import dist
from .errors import GapstatError, ParseError
from .gaps import SampleSet, validate_samples
from .harness import PAPER_TRIALS, ExperimentSpec, csv_text, emit_jsonl, run_experiment
from .testkit import Method, MinGapLaw, SignificanceConfig, TestOutcome, run_test

EXIT_PASS, EXIT_REJECT, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

METHOD_NAMES = {"chi2": Method.CHI_SQUARE, "max-gap": Method.MAX_GAP, "min-gap": Method.MIN_GAP}
EXPERIMENT_NAMES = {
    "uniform": "uniform_null",
    "variance": "variance_sweep",
    "missing-band": "missing_band_sweep",
    "regularity": "regularity_sweep",
}

PAPER_LAW_NOTE = (
    "note: the paper-form min-gap law is not a valid distribution "
    "(its CDF is ~0.5 at x=0 and its mean exceeds the max-gap mean); "
    "use --min-gap-law exact for decisions"
)


@dataclass(frozen=True)
class InputFormat:
    kind: str
    column: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> "InputFormat":
        if text in ("lines", "f64le"):
            return cls(text)
        if text.startswith("csv:"):
            try:
                col = int(text[4:])
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad csv column in {text!r}") from None
            if col < 0:
                raise argparse.ArgumentTypeError("csv column must be 0-based and non-negative")
            return cls("csv", col)
        raise argparse.ArgumentTypeError(f"unknown format {text!r}; use lines, csv:COL or f64le")


@dataclass(frozen=True)
class RangeSpec:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"range needs lo < hi, got {self.lo} {self.hi}")


def _parse_float(token: str, location: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(location, f"not a number: {token!r}") from None


def _parse_lines(data: bytes) -> List[float]:
    text = data.decode("utf-8")
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        token = line.strip()
        if token:
            out.append(_parse_float(token, f"line {lineno}"))
    return out


def _parse_csv(data: bytes, column: int) -> List[float]:
    rows = csv.reader(io.StringIO(data.decode("utf-8")))
    out = []
    for rowno, row in enumerate(rows, 1):
        if not row or all(not c.strip() for c in row):
            continue
        if column >= len(row):
            raise ParseError(f"row {rowno}", f"no column {column}")
        cell = row[column].strip()
        if rowno == 1:
            try:
                out.append(float(cell))
            except ValueError:
                pass  # header row
            continue
        out.append(_parse_float(cell, f"row {rowno}"))
    return out


def parse_input(source, fmt: InputFormat, value_range: Optional[RangeSpec] = None) -> SampleSet:
    """Read raw bytes (path, binary stream, or bytes) into a validated sample."""
    if isinstance(source, bytes):
        data = source
    elif hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as fh:
            data = fh.read()

    if fmt.kind == "lines":
        values = np.array(_parse_lines(data), dtype=np.float64)
    elif fmt.kind == "csv":
        values = np.array(_parse_csv(data, fmt.column), dtype=np.float64)
    elif fmt.kind == "f64le":
        if len(data) % 8:
            raise ParseError(f"byte {len(data) - len(data) % 8}", "trailing partial float64")
        values = np.frombuffer(data, dtype="<f8").astype(np.float64)
    else:
        raise ValueError(f"unknown input format {fmt.kind!r}")

    if value_range is not None:
        values = (values - value_range.lo) / (value_range.hi - value_range.lo)
    return validate_samples(values)


def _expected_statistic(out: TestOutcome) -> float:
    if out.method is Method.CHI_SQUARE:
        return float(out.n_gaps_or_df)
    if out.method is Method.MAX_GAP:
        return dist.expected_max_gap(out.n_gaps_or_df)
    return dist.expected_min_gap_exact(out.n_gaps_or_df)


def _outcome_dict(out: TestOutcome, sided: str) -> dict:
    d = {
        "method": out.method.value,
        "statistic": out.statistic,
        ("df" if out.method is Method.CHI_SQUARE else "n_gaps"): out.n_gaps_or_df,
        "p_one_sided": out.p_one_sided,
        "p_two_sided": out.p_two_sided,
        "sided": sided,
        "decision": "pass" if out.passed else "reject",
        "expected_statistic": _expected_statistic(out),
    }
    if out.witness is not None:
        d["witness"] = list(out.witness)
    return d


def _print_text(outcomes, sample: SampleSet, boundary: int, cfg, law, stream):
    print(f"observations: {sample.count}  boundary values (0 or 1): {boundary}", file=stream)
    print(f"alpha: {cfg.alpha}  sided: {cfg.sidedness.value}", file=stream)
    for out in outcomes:
        d = _outcome_dict(out, cfg.sidedness.value)
        print(f"\n[{d['method']}]", file=stream)
        if out.method is Method.CHI_SQUARE:
            print(f"  df: {out.n_gaps_or_df}", file=stream)
        else:
            print(f"  N (gaps): {out.n_gaps_or_df}", file=stream)
        print(f"  statistic: {out.statistic!r}", file=stream)
        print(f"  expected under null: {d['expected_statistic']!r}", file=stream)
        print(f"  p one-sided: {out.p_one_sided!r}", file=stream)
        print(f"  p two-sided: {out.p_two_sided!r}", file=stream)
        if out.witness is not None:
            print(f"  witness pair: {out.witness[0]!r} .. {out.witness[1]!r}", file=stream)
        print(f"  decision: {d['decision'].upper()}", file=stream)
        if out.method is Method.MIN_GAP and law is MinGapLaw.PAPER:
            print(f"  {PAPER_LAW_NOTE}", file=stream)


def cmd_test(args, stdout=None, stderr=None) -> int:
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    try:
        cfg = SignificanceConfig(args.alpha, "one_sided" if args.sided == "one" else "two_sided")
        value_range = RangeSpec(*args.range) if args.range else None
    except ValueError as exc:
        print(f"gapstat: error: {exc}", file=stderr)
        return EXIT_USAGE

    try:
        source = sys.stdin.buffer if args.input == "-" else args.input
        sample = parse_input(source, args.format, value_range)
    except OSError as exc:
        print(f"gapstat: error: cannot read {args.input}: {exc.strerror or exc}", file=stderr)
        return EXIT_IO
    except (GapstatError, UnicodeDecodeError) as exc:
        print(f"gapstat: error: {args.input}: {exc}", file=stderr)
        return EXIT_USAGE

    methods = [METHOD_NAMES[args.method]] if args.method else list(METHOD_NAMES.values())
    law = MinGapLaw(args.min_gap_law)
    outcomes = []
    for method in methods:
        kwargs = {"law": law} if method is Method.MIN_GAP else {}
        try:
            outcomes.append(run_test(method, sample, cfg, **kwargs))
        except GapstatError as exc:
            print(f"gapstat: error: {method.value}: {exc}", file=stderr)
            return EXIT_USAGE

    boundary = int(np.count_nonzero((sample.values == 0.0) | (sample.values == 1.0)))
    if args.json:
        report = {
            "observations": sample.count,
            "boundary_values": boundary,
            "alpha": cfg.alpha,
            "results": [_outcome_dict(o, cfg.sidedness.value) for o in outcomes],
        }
        if law is MinGapLaw.PAPER and any(o.method is Method.MIN_GAP for o in outcomes):
            report["note"] = PAPER_LAW_NOTE
        print(json.dumps(report, indent=2), file=stdout)
    else:
        _print_text(outcomes, sample, boundary, cfg, law, stdout)
    return EXIT_PASS if all(o.passed for o in outcomes) else EXIT_REJECT


def _sweep_values(text: str, name: str):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sweep list {text!r}") from None
    if name == "regularity_sweep":
        if any(v != int(v) for v in values):
            raise argparse.ArgumentTypeError("regularity sweep values must be integers")
        return tuple(int(v) for v in values)
    return tuple(values)


def cmd_experiment(args, stdout=None, stderr=None) -> int:
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    name = EXPERIMENT_NAMES[args.name]
    try:
        sweep = _sweep_values(args.sweep, name) if args.sweep else ()
        methods = tuple(METHOD_NAMES[m.strip()] for m in args.methods.split(",") if m.strip())
        spec = ExperimentSpec(
            name=name,
            n=args.n,
            trials=PAPER_TRIALS if args.paper_scale else args.trials,
            base_seed=args.seed,
            sweep=sweep,
            methods=methods,
            alpha=args.alpha,
        )
    except KeyError as exc:
        print(f"gapstat: error: unknown method {exc.args[0]!r}", file=stderr)
        return EXIT_USAGE
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"gapstat: error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.parallel < 1:
        print("gapstat: error: --parallel must be at least 1", file=stderr)
        return EXIT_USAGE

    try:
        result = run_experiment(spec, parallel=args.parallel, keep_records=bool(args.records))
    except GapstatError as exc:
        print(f"gapstat: error: {exc}", file=stderr)
        return EXIT_USAGE

    text = csv_text(result.points, spec)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        if args.records:
            emit_jsonl(result.records, args.records)
    except OSError as exc:
        print(f"gapstat: error: {exc}", file=stderr)
        return EXIT_IO
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gapstat", description="Gap-statistic uniformity tests.")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser(
        "test",
        help="test a dataset for uniformity on [0, 1]",
        description=(
            "Run the chi-square, max-gap and/or min-gap uniformity tests. "
            "With no --method all three run and the joint exit code rejects if any rejects. "
            "The expected max gap shown is the large-N value (gamma + ln N)/N; "
            "it is only accurate for large N."
        ),
    )
    t.add_argument("--method", choices=sorted(METHOD_NAMES))
    t.add_argument("--input", required=True, help="path, or - for stdin")
    t.add_argument("--format", type=InputFormat.parse, default=InputFormat("lines"),
                   help="lines (default), csv:COL (0-based) or f64le")
    t.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"),
                   help="affinely map [LO, HI] onto [0, 1] before testing")
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--sided", choices=("one", "two"), default="one")
    t.add_argument("--min-gap-law", choices=[m.value for m in MinGapLaw], default="exact")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_test)

    e = sub.add_parser("experiment", help="run a repeated-trial sensitivity experiment, CSV out")
    e.add_argument("--name", required=True, choices=sorted(EXPERIMENT_NAMES))
    e.add_argument("--n", type=int, default=10_000)
    e.add_argument("--trials", type=int, default=2000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--sweep", help="comma-separated parameter values")
    e.add_argument("--methods", default="chi2,max-gap")
    e.add_argument("--alpha", type=float, default=0.05)
    e.add_argument("--out")
    e.add_argument("--records", help="also write per-trial JSON lines here")
    e.add_argument("--parallel", type=int, default=1)
    e.add_argument("--paper-scale", action="store_true",
                   help=f"use {PAPER_TRIALS:,} trials per sweep point (slow)")
    e.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
