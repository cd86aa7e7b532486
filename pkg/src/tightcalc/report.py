"""Report serialization and the search-free certificate audit."""

from __future__ import annotations

import json
from typing import List, Tuple

from .certify import ClaimChecker, iter_claims
from .errors import InputError

WALL_KEYS = ("wall_time_s",)


def to_json_text(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def strip_wall_times(obj):
    """Copy of ``obj`` without wall-time fields, for byte-level comparisons."""
    if isinstance(obj, dict):
        return {k: strip_wall_times(v) for k, v in obj.items() if k not in WALL_KEYS}
    if isinstance(obj, list):
        return [strip_wall_times(v) for v in obj]
    return obj


def to_text(report: dict) -> str:
    lines = [f"{report['tool']} {report['version']}  scenario={report['scenario']}  seed={report['seed']}"]
    b = report["bounds"]
    params = " ".join(f"{k}={v}" for k, v in report.get("params", {}).items())
    lines.append(f"bounds: E={b['E']} Q={b['Q']} pool={b['pool_size']}" + (f"  params: {params}" if params else ""))
    assumptions: List[str] = []
    for t in report["tasks"]:
        lines.append(f"[{t['status']:>8}] {t['name']}: {t['summary']}  ({t['wall_time_s']:.3f}s)")
        for a in t["assumptions"]:
            if a not in assumptions:
                assumptions.append(a)
    if assumptions:
        lines.append("assumptions:")
        lines.extend(f"  - {a}" for a in assumptions)
    for n in report.get("notes", ()):
        lines.append(f"note: {n}")
    lines.append(f"status: {report['status']} (exit {report['exit_code']})")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json_text(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown format {fmt!r}")


def load_report(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError("", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("tasks"), list):
        raise InputError("/tasks", "not a report: missing task list")
    return data


def check_report(report: dict) -> Tuple[int, List[str]]:
    """Re-decide every embedded claim by normal forms; returns (claims checked, failure messages).

    Failures name the task index and claim kind.
    """
    checker = ClaimChecker()
    seen = set()
    count = 0
    failures = []
    for i, task in enumerate(report["tasks"]):
        for claim in iter_claims(task.get("result")):
            key = json.dumps(claim, sort_keys=True)
            if key in seen:
                continue
            seen.add(key)
            count += 1
            try:
                ok, msg = checker.check(claim)
            except (KeyError, TypeError, ValueError) as exc:
                ok, msg = False, f"malformed claim: {exc!r}"
            if not ok:
                failures.append(f"/tasks/{i} ({task.get('name', '?')}): {claim.get('claim')}: {msg}")
    return count, failures
