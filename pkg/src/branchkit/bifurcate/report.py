"""JSON and CSV persistence of bifurcation reports.

Floats go to JSON through ``repr`` (shortest round-trip form) and to CSV with
17 significant digits, so repeated runs produce byte-identical files.
Non-finite numbers become JSON null.
"""

import csv
import dataclasses
import json
import math
from pathlib import Path

import numpy as np


def plain(obj):
    """Recursively convert numpy and dataclass values into JSON-ready builtins."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if f.name not in ("x", "fields")}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        return val if math.isfinite(val) else None
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def verdict_dict(verdict):
    return {"kind": verdict.kind, "fires": verdict.fires, "epsilon0": plain(verdict.epsilon0),
            "evidence": plain(verdict.evidence)}


def branch_dict(branch):
    return {
        "label": branch.label,
        "direction": branch.direction,
        "origin": plain(branch.origin),
        "points": [{"lambda": p.lam, "amplitude": p.amplitude,
                    "signed_amplitude": p.signed_amplitude, "residual": p.residual}
                   for p in branch.points],
    }


def report_to_dict(report):
    return {
        "model": report.model,
        "lambda0": plain(report.lambda0),
        "n": int(report.n),
        "bifurcation": bool(report.bifurcation),
        "verdicts": [verdict_dict(v) for v in report.verdicts],
        "potentiality": plain(report.potentiality),
        "diagnostics": plain(report.diagnostics),
        "extra": plain(report.extra),
        "branches": [branch_dict(b) for b in report.branches],
    }


def dumps(data):
    return json.dumps(plain(data), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(data), encoding="utf-8")
    return path


def write_report(path, report):
    return write_json(path, report_to_dict(report))


def fmt(value):
    return format(float(value), ".17g")


def write_rows(path, header, rows):
    """Comma-separated, header row, LF line endings; floats at 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def write_branch_csv(path, branches):
    """Columns lambda, amplitude, residual, direction; one row per branch point."""
    rows = []
    for b in branches:
        for p in b.points:
            rows.append((float(p.lam), float(p.amplitude), float(p.residual), b.direction))
    return write_rows(path, ["lambda", "amplitude", "residual", "direction"], rows)


def read_branch_csv(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return [{"lambda": float(r["lambda"]), "amplitude": float(r["amplitude"]),
                 "residual": float(r["residual"]), "direction": r["direction"]}
                for r in csv.DictReader(fh)]


__all__ = ["branch_dict", "dumps", "plain", "read_branch_csv", "report_to_dict",
           "verdict_dict", "write_branch_csv", "write_json", "write_report", "write_rows"]
