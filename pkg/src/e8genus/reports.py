"""Structured pass/fail records shared by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class VerificationReport:
    check: str
    instance: dict
    status: str  # "pass" | "fail"
    witness: Any = None
    expected: Any = None
    got: Any = None
    elapsed_ms: float = 0.0
    details: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.status not in ("pass", "fail"):
            raise ValueError("status must be 'pass' or 'fail'")
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"
