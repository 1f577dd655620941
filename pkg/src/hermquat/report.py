"""Check records and deterministic JSON/CSV rendering."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass(frozen=True)
class CheckRecord:
    check: str
    params: dict
    lhs: Any
    rhs: Any
    passed: bool
    note: str = ""


def as_text(x) -> Any:
    """Numbers become decimal strings; containers are converted recursively."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): as_text(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [as_text(v) for v in x]
    if x is None or isinstance(x, str):
        return x
    return str(x)


@dataclass
class Report:
    config: dict
    records: list[CheckRecord] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, rec: CheckRecord):
        self.records.append(rec)

    def extend(self, recs):
        self.records.extend(recs)

    @property
    def n_pass(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def n_fail(self) -> int:
        return sum(not r.passed for r in self.records)

    def to_dict(self) -> dict:
        out = {
            "config": as_text(self.config),
            "records": [
                {
                    "check": r.check,
                    "params": as_text(r.params),
                    "lhs": as_text(r.lhs),
                    "rhs": as_text(r.rhs),
                    "pass": r.passed,
                    **({"note": r.note} if r.note else {}),
                }
                for r in self.records
            ],
            "summary": {"pass": str(self.n_pass), "fail": str(self.n_fail)},
        }
        if self.data:
            out["data"] = as_text(self.data)
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "params", "lhs", "rhs", "pass"])
        for r in self.records:
            w.writerow([
                r.check,
                json.dumps(as_text(r.params), sort_keys=True),
                json.dumps(as_text(r.lhs)),
                json.dumps(as_text(r.rhs)),
                "true" if r.passed else "false",
            ])
        return buf.getvalue()
