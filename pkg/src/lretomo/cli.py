"""``tomo`` command line front end.

Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import sys
import warnings

import numpy as np

from . import bench
from .errors import (
    InsufficientCopies, NotHermitian, NotUnitTrace, ParseError, ShapeMismatch, SingularGram,
    Unsupported,
)
from .lre import lre_estimate
from .measurement_design import BUILTIN_SETS, builtin_set, load_set
from .mle import MleOptions
from .sampling import load_record, simulate_record
from .states import load_state

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_qubits(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad qubit range {text!r}")
    return lo, hi


def parse_grid(text: str) -> tuple[float, ...]:
    """``start:stop:step`` (inclusive) or a comma list."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            k = int(round((stop - start) / step))
            values = [round(start + i * step, 12) for i in range(k + 1)]
        else:
            values = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:STOP:STEP or a comma list, got {text!r}") from None
    if any(not 0 <= v <= 1 for v in values):
        raise argparse.ArgumentTypeError("q values must lie in [0, 1]")
    return tuple(values)


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("values must be positive")
    return values


def parse_names(text: str) -> tuple[str, ...]:
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [x for x in names if x not in BUILTIN_SETS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown set(s) {bad}; choose from {sorted(BUILTIN_SETS)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tomo", description="Linear regression estimation for quantum state tomography.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--no-timestamp", action="store_true", help="omit the generated_at field")

    sp = sub.add_parser("bound-report", help="analytic MSE bounds of the built-in measurement sets")
    sp.add_argument("--sets", type=parse_names, default=bench.DEFAULT_BOUND_SETS)
    common(sp)

    sp = sub.add_parser("scaling", help="LRE vs MLE runtime and MSE on random n-qubit states")
    sp.add_argument("--qubits", type=parse_qubits, default=(2, 4))
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--copies-rule", default=bench.DEFAULT_COPIES_RULE)
    sp.add_argument("--mle-iterations", type=int, default=500)
    sp.add_argument("--mask-timings", action="store_true",
                    help="write zero timings so reruns are byte-identical")
    common(sp)

    sp = sub.add_parser("werner", help="LRE and PLRE mean squared error on Werner states")
    sp.add_argument("--q", type=parse_grid, default=bench.BenchmarkConfig().q_grid)
    sp.add_argument("--copies", type=parse_int_list, default=(36000,))
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = sub.add_parser("estimate", help="estimate one state from a simulated or supplied record")
    sp.add_argument("--state", help="DensityMatrix JSON (truth; required unless --record-in)")
    sp.add_argument("--set", required=True, dest="set_name",
                    help="built-in set name or path to a MeasurementSet JSON")
    sp.add_argument("--copies", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--record-in", help="MeasurementRecord JSON to estimate from instead of simulating")
    sp.add_argument("--out")
    return p


def _timestamp():
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _csv_text(rows, columns, stamp):
    buf = io.StringIO()
    if stamp:
        buf.write(f"# generated_at: {stamp}\n")
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r[k] is None else r[k]) for k in columns})
    return buf.getvalue()


def _summary_path(path):
    stem, dot, ext = path.rpartition(".")
    return f"{stem}_summary.{ext}" if dot else f"{path}_summary"


def emit(rows, columns, summary, args, meta):
    stamp = None if args.no_timestamp else _timestamp()
    if args.format == "json":
        doc = dict(meta)
        if stamp:
            doc["generated_at"] = stamp
        doc["rows"] = rows
        if summary is not None:
            doc["summary"] = summary
        text = json.dumps(doc, indent=1) + "\n"
        _write(args.out, text)
        return
    _write(args.out, _csv_text(rows, columns, stamp))
    if summary:
        cols = list(summary[0])
        if args.out:
            _write(_summary_path(args.out), _csv_text(summary, cols, stamp))
        else:
            sys.stderr.write(_csv_text(summary, cols, None))


def _write(path, text):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_bound_report(args):
    cfg = bench.BenchmarkConfig(experiment="bound_report", sets=args.sets)
    emit(bench.run_bound_report(cfg), bench.BOUND_COLUMNS, None, args, {"experiment": "bound_report"})


def cmd_scaling(args):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    cfg = bench.BenchmarkConfig(
        experiment="scaling", qubit_range=args.qubits, copies_rule=args.copies_rule,
        trials=args.trials, base_seed=args.seed, mask_timings=args.mask_timings,
        mle_options=MleOptions(max_iterations=args.mle_iterations),
    )
    for n in range(args.qubits[0], args.qubits[1] + 1):
        try:
            bench.eval_copies_rule(args.copies_rule, n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    rows = bench.run_scaling(cfg)
    meta = {"experiment": "scaling", "copies_rule": args.copies_rule, "base_seed": args.seed,
            "mle_max_iterations": args.mle_iterations}
    emit(rows, bench.SCALING_COLUMNS, bench.summarize_scaling(rows), args, meta)


def cmd_werner(args):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    cfg = bench.BenchmarkConfig(experiment="werner", q_grid=args.q, copies_list=args.copies,
                                trials=args.trials, base_seed=args.seed)
    rows = bench.run_werner(cfg)
    meta = {"experiment": "werner", "measurement_set": "cube2", "base_seed": args.seed}
    emit(rows, bench.WERNER_COLUMNS, bench.summarize_werner(rows), args, meta)


def _resolve_set(name):
    if name in BUILTIN_SETS:
        return builtin_set(name)
    try:
        return load_set(name)
    except FileNotFoundError:
        raise UsageError(f"--set {name!r} is neither a built-in set nor a readable file") from None


def cmd_estimate(args):
    mset = _resolve_set(args.set_name)
    truth = load_state(args.state) if args.state else None
    if args.record_in:
        record = load_record(args.record_in)
    else:
        if truth is None or args.copies is None:
            raise UsageError("--state and --copies are required unless --record-in is given")
        record = simulate_record(truth, mset, args.copies, args.seed)
    if truth is not None and truth.shape != (mset.dim, mset.dim):
        raise ShapeMismatch(f"state dimension {truth.shape[0]} does not match set dimension {mset.dim}")
    report = lre_estimate(record, mset, truth=truth)
    doc = {"set_label": mset.label, "record": record.to_dict(), **report.to_dict()}
    _write(args.out, json.dumps(doc, indent=1) + "\n")


COMMANDS = {"bound-report": cmd_bound_report, "scaling": cmd_scaling,
            "werner": cmd_werner, "estimate": cmd_estimate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            COMMANDS[args.command](args)
    except (UsageError, Unsupported) as exc:
        print(f"tomo: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ShapeMismatch, InsufficientCopies, OSError) as exc:
        print(f"tomo: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (SingularGram, NotHermitian, NotUnitTrace, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"tomo: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
