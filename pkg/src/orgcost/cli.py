"""``orgcost`` command-line front end.

Exit codes: 0 success, 1 input/validation errors (details on stderr), 2 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import decimal
import io
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from orgcost import scenario_io
from orgcost.analysis import (
    SweepTable,
    optimize_allocation,
    sensitivity,
    sweep_depth,
    sweep_substitution,
    uniform_grid,
)
from orgcost.core import (
    CostBreakdown,
    Decomposition,
    ValidationError,
    Violation,
    bottom_level_decomposition,
    combined_cost_rate,
)

_DISPLAY = decimal.Context(prec=400, rounding=decimal.ROUND_HALF_EVEN)
_QUANTUM = decimal.Decimal("0.0001")


class InputError(Exception):
    pass


def fmt(value: Any) -> str:
    """Table-mode number display: 4 decimals, round half to even."""
    if value is None:
        return "-"
    if isinstance(value, bool) or not isinstance(value, float):
        return str(value)
    return str(decimal.Decimal(repr(value)).quantize(_QUANTUM, context=_DISPLAY))


def _render_table(header: Sequence[str], rows: Sequence[Sequence[Any]], styled: bool) -> str:
    cells = [[fmt(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(r[k]) for r in cells]) for k, h in enumerate(header)]
    head = "  ".join(h.rjust(w) for h, w in zip(header, widths))
    if styled:
        head = f"\x1b[1m{head}\x1b[0m"
    lines = [head, "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def render_table(result: Any, styled: bool = False) -> str:
    if isinstance(result, CostBreakdown):
        header, rows = scenario_io.csv_rows(result)
        body = _render_table(header, rows, styled)
        summary = [("human_rate", result.human_rate), ("bot_rate", result.bot_rate),
                   ("kappa", result.kappa), ("combined_rate", result.combined_rate)]
        return body + "\n" + _render_table(("quantity", "value"), summary, styled)
    if isinstance(result, SweepTable):
        header, rows = scenario_io.csv_rows(result)
        return _render_table((result.axis_name,) + header[1:], rows, styled)
    if isinstance(result, Decomposition):
        return _render_table(("term", "value"), list(vars(result).items()), styled)
    header, rows = scenario_io.csv_rows(result)
    return _render_table(header, rows, styled)


def _read(path: str | None) -> bytes:
    if path is None or path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError([Violation("--grid", text, "comma-separated numbers")]) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", metavar="FILE", help="input document (default: stdin)")
    common.add_argument("-o", "--output", metavar="FILE", help="output file (default: stdout)")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--stamp", action="store_true", help="add a creation timestamp to json output")

    parser = argparse.ArgumentParser(prog="orgcost", description="Human/bot hierarchical workforce cost engine.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("evaluate", parents=[common], help="combined cost rate with all intermediates")
    sub.add_parser("decompose", parents=[common], help="line-worker base/skill decomposition")
    sub.add_parser("validate", parents=[common], help="report every violation in a scenario or problem file")

    p = sub.add_parser("sweep-depth", parents=[common], help="combined rate over a depth range")
    p.add_argument("--min", type=int, required=True, dest="d_min")
    p.add_argument("--max", type=int, required=True, dest="d_max")

    p = sub.add_parser("sweep-substitution", parents=[common], help="combined rate over a global bot share")
    p.add_argument("--problem", metavar="FILE", help="allocation problem file (or use -i)")
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--grid", help='comma list of shares, e.g. "0,0.5,1"')
    grid.add_argument("--steps", type=int, help="uniform grid with STEPS intervals on [0, 1]")

    p = sub.add_parser("sensitivity", parents=[common], help="analytic vs finite-difference derivative")
    p.add_argument("--param", required=True, metavar="ID",
                   help="min_wage|delta_wage|r_base.{human,bot} or skill[INDEX]")

    p = sub.add_parser("optimize", parents=[common], help="minimize cost over per-level bot shares")
    p.add_argument("--problem", metavar="FILE", help="allocation problem file (or use -i)")
    p.add_argument("--grid-points", type=int, default=11)
    p.add_argument("--refine", type=int, default=3)
    return parser


def _validate_report(raw: bytes) -> tuple[bool, list[Violation]]:
    try:
        decoded = scenario_io.decode_document(raw)
        if isinstance(decoded, dict) and "levels" in decoded:
            scenario_io.read_problem(raw)
        else:
            scenario_io.read_scenario(raw)
    except ValidationError as exc:
        return False, list(exc.violations)
    return True, []


def _emit(args: argparse.Namespace, payload: bytes | str) -> None:
    if isinstance(payload, str):
        payload = payload.encode("utf-8")
    if args.output:
        try:
            Path(args.output).write_bytes(payload)
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror or exc}") from None
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _styled(args: argparse.Namespace) -> bool:
    return not args.output and os.environ.get("ORGCOST_NO_COLOR") != "1" and sys.stdout.isatty()


def _compute(args: argparse.Namespace) -> tuple[Any, bytes]:
    if args.command in ("sweep-substitution", "optimize"):
        raw = _read(args.problem or args.input)
        problem = scenario_io.read_problem(raw).problem
        if args.command == "optimize":
            return optimize_allocation(problem, args.grid_points, args.refine), raw
        grid = uniform_grid(args.steps) if args.steps is not None else _parse_grid(args.grid)
        return sweep_substitution(problem, grid), raw

    raw = _read(args.input)
    scenario = scenario_io.read_scenario(raw).scenario
    if args.command == "evaluate":
        return combined_cost_rate(scenario), raw
    if args.command == "decompose":
        return bottom_level_decomposition(scenario), raw
    if args.command == "sweep-depth":
        return sweep_depth(scenario, args.d_min, args.d_max), raw
    return sensitivity(scenario, args.param), raw


def _run_validate(args: argparse.Namespace) -> int:
    ok, violations = _validate_report(_read(args.input))
    if args.format == "json":
        body = scenario_io.canonical_dumps({
            "valid": ok,
            "violations": [{"path": v.path, "value": repr(v.value), "rule": v.rule} for v in violations],
        })
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("path", "rule", "value"))
        writer.writerows((v.path, v.rule, repr(v.value)) for v in violations)
        body = buf.getvalue()
    else:
        body = "valid\n" if ok else "".join(f"{v}\n" for v in violations)
    _emit(args, body)
    if not ok:
        print(f"orgcost: {len(violations)} violation(s)", file=sys.stderr)
    return 0 if ok else 1


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command == "validate":
            return _run_validate(args)
        result, raw = _compute(args)
        if args.format == "json":
            meta = None
            if args.stamp:
                now = datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0)
                meta = {"created": now.isoformat().replace("+00:00", "Z")}
            payload = scenario_io.write_result(result, scenario_io.input_digest(raw), meta)
        elif args.format == "csv":
            payload = scenario_io.write_csv(result)
        else:
            payload = render_table(result, _styled(args)).encode("utf-8")
        _emit(args, payload)
    except ValidationError as exc:
        for v in exc.violations:
            print(f"orgcost: {v}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"orgcost: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
