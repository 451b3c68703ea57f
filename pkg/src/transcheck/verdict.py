"""Verdict and result types returned by every checker."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional


class Verdict(NamedTuple):
    ok: bool
    reason: Optional[str] = None
    position: Optional[int] = None  # 1-based stream position, when known


ACCEPT = Verdict(True)


def reject(reason: str, position: Optional[int] = None) -> Verdict:
    return Verdict(False, reason, position)


@dataclass
class CheckResult:
    """Verdict plus the instrumentation every checker reports."""

    verdict: Verdict
    peak_cells: int = 0
    error_bound: float = 0.0

    @property
    def ok(self) -> bool:
        return self.verdict.ok

    @property
    def reason(self) -> Optional[str]:
        return self.verdict.reason

    @property
    def position(self) -> Optional[int]:
        return self.verdict.position
