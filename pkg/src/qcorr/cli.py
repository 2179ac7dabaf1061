"""qcorr command-line interface.

Exit codes: 0 success (table1: every comparison MATCH or a known
discrepancy), 1 any reconciliation MISMATCH, 2 input error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import QcorrError
from .measures import MeasureReport
from .report import (
    FAMILY_THRESHOLDS,
    SweepSpec,
    analyze_file,
    emit_csv,
    emit_figures,
    emit_reconciliation_csv,
    emit_svg,
    reconciliation_lines,
    run_sweep,
    table1_reconciliation,
)
from .states import (
    BELL,
    BELL_KINDS,
    COMPUTATIONAL,
    KET_LABELS,
    SWEEP_FAMILY_KINDS,
    StateFamily,
)

_REPORT_FIELDS = MeasureReport.NUMERIC_FIELDS + (
    "useful_for_teleportation",
    "violates_chsh",
    "is_ppt_separable_candidate",
)


def _basis(name: str):
    return BELL if name == "bell" else COMPUTATIONAL


def _report_items(report: MeasureReport) -> list[tuple[str, str]]:
    items = []
    for name in _REPORT_FIELDS:
        value = getattr(report, name)
        if isinstance(value, bool):
            items.append((name, "true" if value else "false"))
        else:
            items.append((name, format(float(value), ".12g")))
    items.append(("basis", report.basis_used.label))
    return items


def _cmd_analyze(args) -> int:
    try:
        report = analyze_file(args.file, _basis(args.basis))
    except (QcorrError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    items = _report_items(report)
    for key, value in items:
        print(f"{key}={value}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(k for k, _ in items) + "\n")
            fh.write(",".join(v for _, v in items) + "\n")
    return 0


def _cmd_sweep(args) -> int:
    family = StateFamily(
        args.family, bell_kind=args.bell_kind, filler=args.filler
    )
    spec = SweepSpec(
        family,
        start=args.start,
        stop=args.stop,
        steps=args.steps,
        basis=_basis(args.basis),
    )
    try:
        rows = run_sweep(spec)
        emit_csv(rows, args.out)
        if args.svg:
            emit_svg(
                rows,
                args.svg,
                spec.measures,
                title=f"{args.family} sweep, {args.basis} basis",
                thresholds=FAMILY_THRESHOLDS.get(args.family, ()),
            )
    except (QcorrError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}" + (f" and {args.svg}" if args.svg else ""))
    return 0


def _cmd_table1(args) -> int:
    rec = table1_reconciliation()
    for line in reconciliation_lines(rec):
        print(line)
    if args.out:
        try:
            emit_reconciliation_csv(rec, args.out)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"wrote {args.out}")
    return rec.exit_code()


def _cmd_figures(args) -> int:
    try:
        written = emit_figures(args.out_dir)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorr",
        description=(
            "coherence, entanglement, mixedness, teleportation fidelity and "
            "Bell-CHSH analysis for two-qubit mixed states"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="report every measure for a state file")
    p.add_argument("--file", required=True, help="density-matrix text file")
    p.add_argument(
        "--basis", choices=("computational", "bell"), default="computational"
    )
    p.add_argument("--csv", help="also write the report as a single-row CSV")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sweep", help="sweep a family's mixing parameter")
    p.add_argument("--family", required=True, choices=SWEEP_FAMILY_KINDS)
    p.add_argument("--bell-kind", choices=BELL_KINDS, default="phi+")
    p.add_argument("--filler", choices=KET_LABELS, default=None)
    p.add_argument(
        "--basis", choices=("computational", "bell"), default="computational"
    )
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", help="optional SVG chart path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser(
        "table1", help="recompute the reference summary table and reconcile"
    )
    p.add_argument("--out", help="write the reconciliation as CSV")
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("figures", help="regenerate the six sweep figures")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_figures)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
