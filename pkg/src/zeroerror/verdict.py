from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Outcome of a checker: ``accepted`` plus a diagnostic for rejections.

    Truthiness follows ``accepted`` so verdicts can be used directly in
    conditionals and assertions.
    """

    accepted: bool
    reason: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.accepted

    @classmethod
    def ok(cls, **details) -> "Verdict":
        return cls(True, "", details)

    @classmethod
    def reject(cls, reason: str, **details) -> "Verdict":
        return cls(False, reason, details)
