"""Check records and reports shared by the norm checks and the suites."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field


def json_number(x):
    """inf/-inf become strings, nan becomes null; everything else passes through."""
    if isinstance(x, float):
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return json_number(obj)


@dataclass
class CheckRecord:
    """Outcome of one family of checks.

    ``constants`` holds measured quantities (name, value); ``intervals``
    holds certified (lower, upper) pairs that fed the verdicts. Cases whose
    hypothesis could not be evaluated (an infinite norm, say) count as
    ``vacuous`` and never as failures.
    """

    anchor: str
    suite: str
    cases: int = 0
    failures: int = 0
    vacuous: int = 0
    constants: list[tuple[str, float]] = field(default_factory=list)
    intervals: list[tuple[float, float]] = field(default_factory=list)
    messages: list[str] = field(default_factory=list)

    MAX_MESSAGES = 10

    def record(self, ok: bool, message: str | None = None) -> bool:
        self.cases += 1
        if not ok:
            self.failures += 1
            if message and len(self.messages) < self.MAX_MESSAGES:
                self.messages.append(message)
        return ok

    def skip(self, message: str | None = None):
        self.cases += 1
        self.vacuous += 1
        if message and len(self.messages) < self.MAX_MESSAGES:
            self.messages.append(message)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return _clean(
            {
                "anchor": self.anchor,
                "suite": self.suite,
                "cases": self.cases,
                "failures": self.failures,
                "vacuous": self.vacuous,
                "constants": [{"name": n, "value": v} for n, v in self.constants],
                "intervals": [list(iv) for iv in self.intervals],
                "messages": list(self.messages),
                "passed": self.passed,
            }
        )


@dataclass
class Report:
    records: list[CheckRecord] = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def extend(self, other: "Report"):
        self.records.extend(other.records)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "verdict": self.verdict,
            "cases": sum(r.cases for r in self.records),
            "failures": sum(r.failures for r in self.records),
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False)

    def constants_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "anchor", "name", "value"])
        for r in self.records:
            for name, value in r.constants:
                v = json_number(value)
                w.writerow([r.suite, r.anchor, name, repr(v) if isinstance(v, float) else v])
        return buf.getvalue()
