"""Pass/fail reports shared by the verifiers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

SCHEMA = "ladderlab.report/1"


@dataclass
class Check:
    name: str
    ok: bool
    detail: Any = None

    def to_json(self) -> dict:
        out = {"name": self.name, "ok": self.ok}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    precondition: str = ""  # non-empty when the verification could not run

    def add(self, name: str, ok: bool, detail: Any = None) -> bool:
        self.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.detail))
        if other.precondition and not self.precondition:
            self.precondition = other.precondition

    @property
    def passed(self) -> bool:
        return not self.precondition and all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def summary(self) -> str:
        if self.precondition:
            return f"{self.title}: precondition failed ({self.precondition})"
        bad = len(self.failures)
        return f"{self.title}: {len(self.checks) - bad}/{len(self.checks)} checks passed"

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "title": self.title,
            "passed": self.passed,
            "precondition": self.precondition or None,
            "info": self.info,
            "checks": [c.to_json() for c in self.checks],
        }


class Tally:
    """Aggregates repeated sample checks into one ``Check`` per name."""

    def __init__(self):
        self._runs: dict = {}

    def record(self, name: str, ok: bool, where: Any = None) -> bool:
        runs = self._runs.setdefault(name, [0, []])
        runs[0] += 1
        if not ok:
            runs[1].append(where)
        return bool(ok)

    def flush(self, report: Report, prefix: str = ""):
        for name, (count, failed) in self._runs.items():
            detail = {"samples": count}
            if failed:
                detail["failed"] = len(failed)
                detail["first_failures"] = failed[:5]
            report.add(prefix + name, not failed, detail)
        self._runs = {}
