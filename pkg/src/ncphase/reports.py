"""Plain, serialisable check records shared by the verification routines.

Reports are deliberately dumb containers: a list of named checks, each with
an expected value, a measured value, a tolerance and a pass flag, plus a
free-form ``meta`` dict for context (parameters, distances, totals).  They
convert losslessly to the JSON emitted by the command line tool.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckRecord:
    name: str
    expected: float | None
    measured: float | None
    tol: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "name": self.name,
            "expected": self.expected,
            "measured": self.measured,
            "tol": self.tol,
            "pass": self.passed,
        }
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass(frozen=True)
class CheckReport:
    """A named bundle of check records with optional context values."""

    kind: str
    checks: tuple[CheckRecord, ...]
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def __iter__(self):
        return iter(self.checks)

    def record(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "overall": self.overall,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "meta": dict(self.meta),
        }
