"""Versioned JSON file formats and canonical result serialization.

Parsing is strict: unknown keys are errors, reported with ``$``-rooted paths
alongside any model validation errors. Serialization is canonical (sorted
keys, shortest round-trip floats, trailing newline) so equal values give
equal bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import re
from dataclasses import dataclass, field
from typing import Any, Mapping

from orgcost.analysis import (
    AllocationProblem,
    AllocationSolution,
    LevelWork,
    SensitivityReport,
    SweepTable,
    validate_problem,
)
from orgcost.core import (
    ClassParams,
    CostBreakdown,
    Decomposition,
    Employee,
    LevelMode,
    OrgShape,
    Scenario,
    ValidationError,
    Violation,
    WorkforceClass,
    validate_scenario,
)

FORMAT_VERSION = 1
SWEEP_CSV_HEADER = ("axis", "combined_rate", "human_rate", "bot_rate", "kappa")
METADATA_KEYS = ("name", "description", "author", "created")
_UTC_STAMP = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|\+00:00)$")


@dataclass(frozen=True)
class ScenarioDocument:
    scenario: Scenario
    currency_unit: str = "USD/hour"
    metadata: Mapping[str, str] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION


@dataclass(frozen=True)
class ProblemDocument:
    problem: AllocationProblem
    currency_unit: str = "USD/hour"
    metadata: Mapping[str, str] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION


# -- parsing ---------------------------------------------------------------


class _Reader:
    """Collects schema violations while walking a decoded JSON value."""

    def __init__(self) -> None:
        self.errors: list[Violation] = []

    def fail(self, path: str, value: Any, rule: str) -> None:
        self.errors.append(Violation(path, value, rule))

    def obj(self, value: Any, path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict | None:
        if not isinstance(value, dict):
            self.fail(path, value, "must be an object")
            return None
        for key in value:
            if key not in required and key not in optional:
                self.fail(f"{path}.{key}", value[key], "unknown key")
        for key in required:
            if key not in value:
                self.fail(f"{path}.{key}", None, "missing required key")
        return value

    def number(self, value: Any, path: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, value, "must be a number")
            return math.nan
        return float(value)

    def integer(self, value: Any, path: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(path, value, "must be an integer")
            return -1
        return value

    def string(self, value: Any, path: str) -> str:
        if not isinstance(value, str):
            self.fail(path, value, "must be a string")
            return ""
        return value

    def choice(self, value: Any, path: str, enum_type):
        try:
            return enum_type(value)
        except ValueError:
            allowed = ", ".join(e.value for e in enum_type)
            self.fail(path, value, f"one of {{{allowed}}}")
            return None


def decode_document(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ValidationError([Violation("$", None, f"not UTF-8: {exc}")]) from None
    try:
        return json.loads(data, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ValidationError([Violation("$", None, f"malformed JSON: {exc}")]) from None


def _reject_constant(name: str) -> Any:
    raise json.JSONDecodeError(f"non-finite number {name}", name, 0)


def _header(r: _Reader, doc: dict) -> tuple[str, dict]:
    if "format_version" in doc:
        v = doc["format_version"]
        if isinstance(v, bool) or v != FORMAT_VERSION:
            r.fail("$.format_version", v, f"format_version == {FORMAT_VERSION}")
    unit = r.string(doc.get("currency_unit", ""), "$.currency_unit") if "currency_unit" in doc else ""
    metadata: dict = {}
    if "metadata" in doc:
        raw = r.obj(doc["metadata"], "$.metadata", (), METADATA_KEYS)
        for key in METADATA_KEYS:
            if raw is not None and key in raw:
                metadata[key] = r.string(raw[key], f"$.metadata.{key}")
        stamp = metadata.get("created")
        if stamp is not None and isinstance(stamp, str) and not _UTC_STAMP.match(stamp):
            r.fail("$.metadata.created", stamp, "ISO-8601 UTC timestamp")
    return unit, metadata


def _shape_and_params(r: _Reader, doc: dict) -> tuple[OrgShape, ClassParams, ClassParams]:
    depth = -1
    shape = r.obj(doc.get("shape"), "$.shape", ("depth",)) if "shape" in doc else None
    if shape is not None and "depth" in shape:
        depth = r.integer(shape["depth"], "$.shape.depth")
    params = []
    for key, label in (("human_params", WorkforceClass.HUMAN), ("bot_params", WorkforceClass.BOT)):
        raw = r.obj(doc.get(key), f"$.{key}", ("min_wage", "delta_wage", "r_base")) if key in doc else None
        values = {}
        for name in ("min_wage", "delta_wage", "r_base"):
            values[name] = r.number(raw[name], f"$.{key}.{name}") if raw and name in raw else math.nan
        params.append(ClassParams(label, **values))
    return OrgShape(depth), params[0], params[1]


def _finish(r: _Reader, build, validate) -> Any:
    errors = list(r.errors)
    value = None
    try:
        value = build()
        validate(value)
    except ValidationError as exc:
        # Skip model errors on fields that already failed the schema check.
        for v in map(_rooted, exc.violations):
            if not any(v.path.startswith(e.path) or e.path.startswith(v.path) for e in r.errors):
                errors.append(v)
    except (KeyError, TypeError):
        if not errors:
            raise
    if errors:
        raise ValidationError(errors)
    return value


def _rooted(v: Violation) -> Violation:
    path = v.path if v.path.startswith("$") else f"$.{v.path}"
    return Violation(path, v.value, v.rule)


_TOP_KEYS = ("format_version", "currency_unit", "shape", "human_params", "bot_params")


def read_scenario(data: bytes | str) -> ScenarioDocument:
    """Parse and validate a scenario document; all problems are reported together."""
    r = _Reader()
    doc = r.obj(decode_document(data), "$", _TOP_KEYS + ("roster",), ("metadata",))
    if doc is None:
        raise ValidationError(r.errors)
    unit, metadata = _header(r, doc)
    shape, human, bot = _shape_and_params(r, doc)
    roster = []
    raw_roster = doc.get("roster", [])
    if not isinstance(raw_roster, list):
        r.fail("$.roster", raw_roster, "must be an array")
        raw_roster = []
    for i, item in enumerate(raw_roster):
        path = f"$.roster[{i}]"
        e = r.obj(item, path, ("class", "level", "skill", "time"), ("level_mode",))
        if e is None:
            continue
        label = r.choice(e.get("class"), f"{path}.class", WorkforceClass) if "class" in e else None
        mode = r.choice(e.get("level_mode", "from_bottom"), f"{path}.level_mode", LevelMode)
        level = r.integer(e["level"], f"{path}.level") if "level" in e else -1
        skill = r.number(e["skill"], f"{path}.skill") if "skill" in e else math.nan
        time = r.number(e["time"], f"{path}.time") if "time" in e else math.nan
        roster.append(Employee(label, level, skill, time, mode))
    return _finish(
        r,
        lambda: ScenarioDocument(Scenario(shape, human, bot, tuple(roster)), unit, metadata),
        lambda d: validate_scenario(d.scenario),
    )


def read_problem(data: bytes | str) -> ProblemDocument:
    """Parse an allocation problem document.

    ``levels`` lists each level once, addressed from the bottom by default
    (offset 0 is the line-worker level).
    """
    r = _Reader()
    doc = r.obj(decode_document(data), "$", _TOP_KEYS + ("levels",), ("metadata", "min_coverage"))
    if doc is None:
        raise ValidationError(r.errors)
    unit, metadata = _header(r, doc)
    shape, human, bot = _shape_and_params(r, doc)
    depth = shape.depth
    slots: dict[int, LevelWork] = {}
    raw_levels = doc.get("levels", [])
    if not isinstance(raw_levels, list):
        r.fail("$.levels", raw_levels, "must be an array")
        raw_levels = []
    for i, item in enumerate(raw_levels):
        path = f"$.levels[{i}]"
        e = r.obj(item, path, ("level", "hours", "human_skill", "bot_skill"),
                  ("level_mode", "bot_share_min", "bot_share_max"))
        if e is None:
            continue
        mode = r.choice(e.get("level_mode", "from_bottom"), f"{path}.level_mode", LevelMode)
        level = r.integer(e["level"], f"{path}.level") if "level" in e else -1
        work = LevelWork(
            hours=r.number(e["hours"], f"{path}.hours") if "hours" in e else math.nan,
            bot_share_min=r.number(e.get("bot_share_min", 0.0), f"{path}.bot_share_min"),
            bot_share_max=r.number(e.get("bot_share_max", 1.0), f"{path}.bot_share_max"),
            human_skill=r.number(e["human_skill"], f"{path}.human_skill") if "human_skill" in e else math.nan,
            bot_skill=r.number(e["bot_skill"], f"{path}.bot_skill") if "bot_skill" in e else math.nan,
        )
        if depth < 1 or level < 0 or mode is None:
            continue
        absolute = depth + 1 - level if mode is LevelMode.FROM_BOTTOM else level
        if not 1 <= absolute <= depth + 1:
            r.fail(f"{path}.level", level, "level within [1, depth+1] once resolved")
        elif absolute in slots:
            r.fail(f"{path}.level", level, "each level listed once")
        else:
            slots[absolute] = work
    if depth >= 1:
        for absolute in range(1, depth + 2):
            if absolute not in slots:
                r.fail("$.levels", depth + 1 - absolute, f"missing from_bottom level {depth + 1 - absolute}")
    coverage = r.number(doc.get("min_coverage", 0.0), "$.min_coverage")

    def build() -> ProblemDocument:
        levels = tuple(slots[a] for a in range(1, depth + 2))
        return ProblemDocument(AllocationProblem(shape, human, bot, levels, coverage), unit, metadata)

    return _finish(r, build, lambda d: validate_problem(d.problem))


# -- serialization -----------------------------------------------------------


def canonical_dumps(value: Any) -> str:
    return json.dumps(value, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def input_digest(data: bytes | str) -> str:
    """SHA-256 of the input's canonical form, so whitespace edits keep the digest."""
    compact = json.dumps(decode_document(data), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(compact.encode("utf-8")).hexdigest()


def _params_dict(p: ClassParams) -> dict:
    return {"min_wage": p.min_wage, "delta_wage": p.delta_wage, "r_base": p.r_base}


def _header_dict(currency_unit: str, metadata: Mapping[str, str], format_version: int) -> dict:
    out: dict[str, Any] = {"format_version": format_version, "currency_unit": currency_unit}
    if metadata:
        out["metadata"] = dict(metadata)
    return out


def scenario_to_dict(doc: ScenarioDocument) -> dict:
    s = doc.scenario
    out = _header_dict(doc.currency_unit, doc.metadata, doc.format_version)
    out.update({
        "shape": {"depth": s.shape.depth},
        "human_params": _params_dict(s.human_params),
        "bot_params": _params_dict(s.bot_params),
        "roster": [
            {"class": e.class_label.value, "level_mode": e.level_mode.value, "level": e.level,
             "skill": e.skill, "time": e.time}
            for e in s.roster
        ],
    })
    return out


def write_scenario(doc: ScenarioDocument) -> bytes:
    return canonical_dumps(scenario_to_dict(doc)).encode("utf-8")


def problem_to_dict(doc: ProblemDocument) -> dict:
    p = doc.problem
    depth = p.shape.depth
    out = _header_dict(doc.currency_unit, doc.metadata, doc.format_version)
    out.update({
        "shape": {"depth": depth},
        "human_params": _params_dict(p.human_params),
        "bot_params": _params_dict(p.bot_params),
        "min_coverage": p.min_coverage,
        "levels": [
            {"level_mode": "from_bottom", "level": depth - i, "hours": lw.hours,
             "bot_share_min": lw.bot_share_min, "bot_share_max": lw.bot_share_max,
             "human_skill": lw.human_skill, "bot_skill": lw.bot_skill}
            for i, lw in enumerate(p.levels)
        ],
    })
    return out


def write_problem(doc: ProblemDocument) -> bytes:
    return canonical_dumps(problem_to_dict(doc)).encode("utf-8")


def result_kind(result: Any) -> str:
    kinds = {
        CostBreakdown: "cost_breakdown",
        Decomposition: "decomposition",
        SweepTable: "sweep_table",
        SensitivityReport: "sensitivity_report",
        AllocationSolution: "allocation_solution",
    }
    try:
        return kinds[type(result)]
    except KeyError:
        raise TypeError(f"not a result type: {type(result).__name__}") from None


def result_to_dict(result: Any) -> dict:
    kind = result_kind(result)
    if kind == "cost_breakdown":
        return {
            "per_employee": [
                {"index": c.index, "class": c.class_label.value, "level": c.level, "rate": c.rate,
                 "proportion": c.proportion, "weight": c.weight}
                for c in result.per_employee
            ],
            "human_rate": result.human_rate,
            "bot_rate": result.bot_rate,
            "human_active": result.human_active,
            "bot_active": result.bot_active,
            "kappa": result.kappa,
            "combined_rate": result.combined_rate,
            "per_level_totals": [{"level": t.level, "human": t.human, "bot": t.bot}
                                 for t in result.per_level_totals],
        }
    if kind == "sweep_table":
        return {
            "axis_name": result.axis_name,
            "rows": [{"axis": r.axis_value, "combined_rate": r.combined_rate, "human_rate": r.human_rate,
                      "bot_rate": r.bot_rate, "kappa": r.kappa} for r in result.rows],
        }
    if kind == "allocation_solution":
        return {"bot_share": list(result.bot_share), "combined_rate": result.combined_rate,
                "coverage": result.coverage, "status": result.status.value}
    return dict(vars(result))


def write_result(result: Any, digest: str | None = None, metadata: Mapping[str, str] | None = None) -> bytes:
    """Canonical JSON result document; ``digest`` echoes the input it came from."""
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "kind": result_kind(result),
        "input_digest": digest,
        "result": result_to_dict(result),
    }
    if metadata:
        doc["metadata"] = dict(metadata)
    return canonical_dumps(doc).encode("utf-8")


def csv_rows(result: Any) -> tuple[tuple[str, ...], list[tuple]]:
    kind = result_kind(result)
    if kind == "sweep_table":
        return SWEEP_CSV_HEADER, [(r.axis_value, r.combined_rate, r.human_rate, r.bot_rate, r.kappa)
                                  for r in result.rows]
    if kind == "cost_breakdown":
        return (("index", "class", "level", "rate", "proportion", "weight"),
                [(c.index, c.class_label.value, c.level, c.rate, c.proportion, c.weight)
                 for c in result.per_employee])
    if kind == "sensitivity_report":
        header = ("parameter_id", "analytic_derivative", "fd_derivative", "step", "agreement")
        return header, [tuple(getattr(result, k) for k in header)]
    if kind == "allocation_solution":
        rows = [("status", result.status.value), ("combined_rate", result.combined_rate),
                ("coverage", result.coverage)]
        rows += [(f"bot_share[{i + 1}]", s) for i, s in enumerate(result.bot_share)]
        return ("key", "value"), rows
    return ("key", "value"), list(vars(result).items())


def write_csv(result: Any) -> bytes:
    """CSV with LF line endings and shortest round-trip numbers."""
    header, rows = csv_rows(result)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row]
                     for row in rows)
    return buf.getvalue().encode("utf-8")
