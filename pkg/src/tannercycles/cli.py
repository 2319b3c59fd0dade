"""
Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 runtime error, 3 enumeration cap
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .census import census_any
from .ensembles import DEFAULT_MAX_ATTEMPTS, EnsembleKind, EnsembleSpec, draw
from .experiment import ExperimentConfig, run_experiment
from .graph import DegreeSequence, EdgeDistribution, Protograph, read_alist, write_alist
from .rng import RngStream
from .tables import TABLE_IDS, ScaleOptions, reproduce_table
from .theory import (
    MeanBounds,
    cyclic_lift_mean_bounds,
    expected_cycles_biregular,
    expected_cycles_irregular,
    tbc_bound_biregular,
    tbc_count_complete,
)
from .walks import DEFAULT_ENUMERATION_CAP, EnumerationCapError, partition_walks, rooted_tbc_count, tbc_count

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_CAP = 0, 1, 2, 3
THREADS_ENV = "TANNERCYCLES_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",")]


def _c_range(text: str) -> range:
    lo, _, hi = text.partition(":")
    lo_i, hi_i = int(lo), int(hi or lo)
    if lo_i < 4 or lo_i % 2 or hi_i < lo_i:
        raise argparse.ArgumentTypeError("expected LO:HI with even LO >= 4 and HI >= LO")
    return range(lo_i, hi_i + 1, 2)


def _load_base(text: str) -> Protograph:
    if text.startswith("complete:"):
        a, _, b = text[len("complete:"):].partition("x")
        return Protograph.complete(int(a), int(b))
    return Protograph.from_json(Path(text).read_text())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: "" if v is None else v for k, v in r.items()})
    return buf.getvalue()


def _rows(rows: list[dict], fmt: str) -> str:
    return json.dumps(rows, indent=2) if fmt == "json" else _rows_csv(rows)


# ---------------------------------------------------------------------------
# ensemble arguments
# ---------------------------------------------------------------------------

def _add_ensemble_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ensemble", required=True, choices=[k.value for k in EnsembleKind])
    p.add_argument("--n", type=int, help="number of U nodes (degree-sequence ensembles)")
    p.add_argument("--du", type=int, help="U degree for bi-regular sequences")
    p.add_argument("--dw", type=int, help="W degree for bi-regular sequences")
    p.add_argument("--lam", type=_floats, help="edge-perspective lambda coefficients by power of x")
    p.add_argument("--rho", type=_floats, help="edge-perspective rho coefficients by power of x")
    p.add_argument("--base", help="protograph JSON file or complete:AxB")
    p.add_argument("--N", type=int, help="lifting degree")
    p.add_argument("--max-attempts", type=int, default=DEFAULT_MAX_ATTEMPTS)


def _spec_from_args(args) -> tuple[EnsembleSpec, list[str]]:
    kind = EnsembleKind(args.ensemble)
    if kind in (EnsembleKind.RANDOM_LIFT, EnsembleKind.CYCLIC_LIFT):
        if not args.base or not args.N:
            raise UsageError(f"--ensemble {kind.value} needs --base and --N")
        return EnsembleSpec(kind, protograph=_load_base(args.base), lifting_degree=args.N), []
    if not args.n:
        raise UsageError(f"--ensemble {kind.value} needs --n")
    if args.du and args.dw:
        seq, notes = DegreeSequence.biregular(args.n, args.du, args.dw), []
    elif args.lam and args.rho:
        seq, notes = EdgeDistribution.from_polynomials(args.lam, args.rho).realize(args.n)
    else:
        raise UsageError("give --du/--dw or --lam/--rho")
    return EnsembleSpec(kind, degree_sequence=seq, max_attempts=args.max_attempts), notes


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_sample(args) -> int:
    spec, notes = _spec_from_args(args)
    g, P = draw(spec, RngStream(args.seed, args.stream))
    sidecar = {"kind": spec.kind.value, "seed": args.seed, "stream": args.stream, "notes": notes}
    if P is not None:
        sidecar["exponent_matrix"] = json.loads(P.to_json())
    text = write_alist(g)
    if args.out:
        Path(args.out).write_text(text)
        Path(args.out + ".json").write_text(json.dumps(sidecar, indent=2))
    else:
        sys.stdout.write(text)
        sys.stderr.write(json.dumps(sidecar) + "\n")
    return EXIT_OK


def cmd_census(args) -> int:
    text = sys.stdin.read() if args.alist == "-" else Path(args.alist).read_text()
    g = read_alist(text)
    census = census_any(g, args.max_length, chordless=args.chordless)
    rows = []
    for c in sorted(census.counts):
        row = {"c": c, "count": census.counts[c]}
        if census.chordless_counts is not None:
            row["chordless"] = census.chordless_counts[c]
        rows.append(row)
    _emit(_rows(rows, args.format), args.out)
    return EXIT_OK


def cmd_walks(args) -> int:
    base = _load_base(args.base)
    rows = []
    for c in args.c_range:
        if args.partition or args.list_prime:
            rows.append(partition_walks(base, c, cap=args.cap, list_prime_zp=args.list_prime).as_dict())
        else:
            t = tbc_count(base, c)
            rows.append({"c": c, "rooted": rooted_tbc_count(base, c), "T": f"{t.numerator}/{t.denominator}"})
    if args.format == "csv":
        for r in rows:
            r.pop("prime_zp", None)
            r.pop("note", None)
    _emit(_rows(rows, args.format), args.out)
    return EXIT_OK


def cmd_theory(args) -> int:
    rows = []
    for c in args.c_range:
        ens = args.ensemble
        if ens == "biregular":
            v = expected_cycles_biregular(_need(args, "du"), _need(args, "dw"), c)
            b = MeanBounds(c, v, v, v)
        elif ens == "irregular":
            if not args.lam or not args.rho:
                raise UsageError("--ensemble irregular needs --lam and --rho")
            b = expected_cycles_irregular(EdgeDistribution.from_polynomials(args.lam, args.rho), c)
        elif ens == "complete-lift":
            v = float(tbc_count_complete(_need(args, "a"), _need(args, "b"), c))
            b = MeanBounds(c, v, v, v)
        elif ens == "biregular-lift":
            v = tbc_bound_biregular(_need(args, "n_u"), _need(args, "du"), _need(args, "dw"), c)
            b = MeanBounds(c, 0.0, v, v)
        else:
            if not args.base:
                raise UsageError("--ensemble cyclic-lift needs --base")
            b = cyclic_lift_mean_bounds(_load_base(args.base), c, _need(args, "N"), cap=args.cap)
        rows.append(b.as_row())
    _emit(_rows(rows, args.format), args.out)
    return EXIT_OK


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--ensemble {args.ensemble} needs --{name.replace('_', '-')}")
    return value


def cmd_experiment(args) -> int:
    spec, notes = _spec_from_args(args)
    cfg = ExperimentConfig(
        spec=spec,
        trials=args.trials,
        max_cycle_length=args.max_length or (18 if spec.protograph is not None else 10),
        master_seed=args.seed,
        chordless=args.chordless,
        format=args.format,
        threads=args.threads,
        notes=tuple(notes),
    )
    report = run_experiment(cfg)
    text = report.to_json() if args.format == "json" else report.to_csv(chordless=args.chordless)
    _emit(text, args.out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    opts = ScaleOptions(
        columns=tuple(args.columns) if args.columns else None,
        trials=args.trials,
        master_seed=args.seed,
        threads=args.threads,
        max_length=args.max_length,
    )
    report = reproduce_table(args.table, opts)
    if args.format == "csv":
        _emit(report.to_csv(), args.out)
    elif args.format == "json":
        _emit(report.to_json(), args.out)
    else:
        _emit(report.format(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (64-bit unsigned)")
    common.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv; json for walks, a text table for reproduce-table)")
    common.add_argument("--out", help="output path (default stdout)")

    parser = _Parser(prog="tannercycles", description="Short-cycle statistics of random Tanner graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", parents=[common], help="draw one graph, write alist plus provenance")
    _add_ensemble_args(p)
    p.add_argument("--stream", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("census", parents=[common], help="count cycles of an alist graph")
    p.add_argument("--alist", "--input", dest="alist", required=True, help="alist file or - for stdin")
    p.add_argument("--max-length", "--max-len", dest="max_length", type=int, default=10)
    p.add_argument("--chordless", action="store_true")
    p.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    p.add_argument("--csv", dest="format", action="store_const", const="csv", help="same as --format csv")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("walks", parents=[common], help="partition TBC walks of a protograph")
    p.add_argument("--base", required=True, help="protograph JSON file or complete:AxB")
    p.add_argument("--length", "--c-range", dest="c_range", type=_c_range, default=_c_range("4:12"),
                   help="walk length C or range LO:HI")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--partition", action="store_true", help="enumerate classes and split into T1/T2/T3")
    p.add_argument("--list-prime-zp", "--list-prime", dest="list_prime", action="store_true",
                   help="list prime ZP walks (implies --partition)")
    p.set_defaults(func=cmd_walks, default_format="json")

    p = sub.add_parser("theory", parents=[common], help="analytic expectations and bounds")
    p.add_argument(
        "--ensemble", required=True,
        choices=("biregular", "irregular", "complete-lift", "biregular-lift", "cyclic-lift"),
    )
    p.add_argument("--du", type=int)
    p.add_argument("--dw", type=int)
    p.add_argument("--lam", type=_floats)
    p.add_argument("--rho", type=_floats)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--n-u", type=int)
    p.add_argument("--base")
    p.add_argument("--N", type=int)
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.add_argument("--c-range", type=_c_range, default=_c_range("4:10"))
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("experiment", parents=[common], help="Monte Carlo cycle statistics")
    _add_ensemble_args(p)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--max-length", type=int, help="default 10, or 18 for lift ensembles")
    p.add_argument("--chordless", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("reproduce-table", parents=[common], help="rebuild a published table")
    p.add_argument("--table", required=True, choices=TABLE_IDS)
    p.add_argument("--columns", type=int, nargs="+", help="block lengths or lifting degrees")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--max-length", type=int)
    p.set_defaults(func=cmd_reproduce, default_format="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "default_format", "csv")
    try:
        if args.threads is None:
            args.threads = _default_threads()
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"tannercycles: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationCapError as exc:
        print(f"tannercycles: {exc}", file=sys.stderr)
        return EXIT_CAP
    except Exception as exc:
        print(f"tannercycles: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
