"""Structured pass/fail results shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    name: str
    params: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)  # sub-check name -> bool
    details: dict = field(default_factory=dict)

    def check(self, key: str, ok: bool, **info: Any) -> bool:
        self.checks[key] = bool(ok)
        if info:
            self.details[key] = info
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def __bool__(self) -> bool:
        return self.passed
