"""Command-line interface: ``qsync {construct,table,simulate,exhaustive,oracle}``.

Exit codes: 0 ok, 1 usage or input error, 2 contract violation found,
3 enumeration or state-vector budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from qsync import oracle
from qsync.cyclic import CyclicCode, bch_code
from qsync.experiments import (
    CSV_HEADER,
    BudgetExceeded,
    SimulationConfig,
    run_agreement,
    run_exhaustive,
    run_simulation,
    summarize,
)
from qsync.frame_sim import DecodeReport, Status
from qsync.gf2 import BitPoly
from qsync.qsync_code import ConstructionError, QsyncCode, build

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load_descriptor(path: str) -> QsyncCode:
    try:
        desc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read descriptor {path}: {exc}") from exc
    try:
        return QsyncCode.from_descriptor(desc)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"invalid descriptor {path}: {exc}") from exc


def _emit(payload: dict, path: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _slip_range(text: str | None):
    if text is None or text == "all":
        return None
    lo, _, hi = text.partition(":")
    return range(int(lo), int(hi or lo) + 1)


def _branches(text: str):
    return "all" if text == "all" else int(text)


def cmd_construct(args) -> int:
    if args.m is not None:
        if args.d1 is None or args.d2 is None:
            raise UsageError("--m needs both --d1 and --d2")
        C, D = bch_code(args.m, args.d1), bch_code(args.m, args.d2)
    elif args.n is not None:
        if args.gc is None or args.gd is None:
            raise UsageError("--n needs both --gc and --gd")
        C, D = CyclicCode(args.n, BitPoly.parse(args.gc)), CyclicCode(args.n, BitPoly.parse(args.gd))
    else:
        raise UsageError("give either --m/--d1/--d2 or --n/--gc/--gd")
    code = build(C, D, args.al, args.ar)
    desc = code.to_descriptor()
    if args.output:
        Path(args.output).write_text(json.dumps(desc, indent=2) + "\n", encoding="utf-8")
    print(f"{code.label} code: C=[{code.n},{code.k1}], D=[{code.n},{code.k2}], f={code.f}")
    print(f"phase errors corrected: {code.phase_radius}; bit errors per length-{code.n} window: {code.bit_radius}")
    return EXIT_OK


def cmd_table(args) -> int:
    code = load_descriptor(args.descriptor)
    print(f"{code.label}  f = {code.f}")
    print(f"{'slip':>5}  {'x^a mod f':<28}  device window remainder x^-a mod f")
    for a in code.slips:
        print(f"{a:>5}  {str(code.sync_table[a]):<28}  {code.window_table[a]}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    code = load_descriptor(args.descriptor)
    slip = args.slip if args.slip == "uniform" else int(args.slip)
    try:
        cfg = SimulationConfig(
            trials=args.trials,
            seed=args.seed,
            p_bit=args.p_bit,
            p_phase=args.p_phase,
            slip_policy=slip,
            channel=args.channel,
            max_bit_per_window=args.max_bit_per_window,
            max_phase=args.max_phase,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    records = run_simulation(code, cfg)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())
    if args.csv:
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    summary = summarize(code, cfg, records)
    _emit(summary, args.summary)
    if args.summary:
        print(f"{code.label}: success rate {summary['success_rate']:.6f} over {summary['trials']} trials")
    return EXIT_OK


def cmd_exhaustive(args) -> int:
    code = load_descriptor(args.descriptor)
    report = run_exhaustive(
        code,
        args.max_bit_weight,
        args.max_phase_weight,
        _slip_range(args.slips),
        _branches(args.branches),
        args.budget,
    )
    _emit(
        {
            "code": code.label,
            "cases": report.cases,
            "within_contract": report.within_contract,
            "by_status": dict(report.by_status),
            "beyond_contract_failures": report.beyond_contract_failures,
            "violations": report.violations[: args.max_report],
            "violation_count": len(report.violations),
            "contract_holds": report.contract_holds,
        },
        args.output,
    )
    return EXIT_OK if report.contract_holds else EXIT_VIOLATION


def _off_by_one(code: QsyncCode, case, report: DecodeReport) -> DecodeReport:
    """Negative control: move the phase correction one qubit over but keep the verdict."""
    n = code.n
    moved = ((report.phase_correction << 1) | (report.phase_correction >> (n - 1))) & ((1 << n) - 1)
    if moved == report.phase_correction:
        moved ^= 1
    return DecodeReport(**{**report.__dict__, "phase_correction": moved, "status": Status.SUCCESS})


def cmd_oracle(args) -> int:
    code = load_descriptor(args.descriptor)
    if code.n_ext > oracle.MAX_QUBITS:
        raise oracle.BudgetExceeded(f"n_ext={code.n_ext} exceeds the {oracle.MAX_QUBITS}-qubit budget")
    agreement = run_agreement(
        code,
        args.max_bit_weight,
        args.max_phase_weight,
        _slip_range(args.slips),
        _branches(args.branches),
        args.budget,
        tamper=_off_by_one if args.inject_bug else None,
    )
    _emit(
        {
            "code": code.label,
            "cases": agreement.cases,
            "certified": agreement.certified,
            "uncertifiable_sync_failures": agreement.uncertifiable,
            "max_fidelity_deviation_on_success": agreement.max_success_deviation,
            "min_fidelity_gap_on_failure": agreement.min_failure_gap,
            "disagreements": agreement.disagreements[: args.max_report],
            "disagreement_count": len(agreement.disagreements),
            "agrees": agreement.agrees,
        },
        args.output,
    )
    return EXIT_OK if agreement.agrees else EXIT_VIOLATION


def _add_suite_args(p: argparse.ArgumentParser, budget: int):
    p.add_argument("descriptor")
    p.add_argument("--max-bit-weight", type=int, default=0)
    p.add_argument("--max-phase-weight", type=int, default=1)
    p.add_argument("--slips", default="all", help="'all', or LO:HI inclusive")
    p.add_argument("--branches", default="all", help="'all' C^perp branches, or a count of sampled ones")
    p.add_argument("--budget", type=int, default=budget)
    p.add_argument("--max-report", type=int, default=20, help="cap on listed reproduction tuples")
    p.add_argument("-o", "--output")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsync", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and write its JSON descriptor")
    p.add_argument("--m", type=int, help="BCH shorthand: n = 2^m - 1")
    p.add_argument("--d1", type=int, help="designed distance of C")
    p.add_argument("--d2", type=int, help="designed distance of D")
    p.add_argument("--n", type=int, help="length for explicit generators")
    p.add_argument("--gc", help="generator of C, e.g. 'x^3+x+1' or 0xb")
    p.add_argument("--gd", help="generator of D")
    p.add_argument("--al", type=int, default=0)
    p.add_argument("--ar", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("table", help="print the synchronization table")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("simulate", help="seeded Monte Carlo run")
    p.add_argument("descriptor")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--p-bit", type=float, default=0.0)
    p.add_argument("--p-phase", type=float, default=0.0)
    p.add_argument("--slip", default="uniform", help="'uniform' over the tolerance, or a fixed integer")
    p.add_argument("--channel", choices=("iid", "bounded"), default="iid")
    p.add_argument("--max-bit-per-window", type=int, help="bounded channel: cap per length-n window")
    p.add_argument("--max-phase", type=int, help="bounded channel: cap on total phase flips")
    p.add_argument("--csv")
    p.add_argument("--summary")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("exhaustive", help="enumerate bounded-weight cases and check the guarantee")
    _add_suite_args(p, 5_000_000)
    p.set_defaults(func=cmd_exhaustive)

    p = sub.add_parser("oracle", help="cross-check the frame simulator against state vectors")
    _add_suite_args(p, 200_000)
    p.add_argument("--inject-bug", action="store_true", help="negative control: corrupt every phase correction")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (BudgetExceeded, oracle.BudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConstructionError as exc:
        print(f"construction rejected: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
