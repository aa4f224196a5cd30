from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Named pass/fail outcome with free-form details for reports."""

    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}
