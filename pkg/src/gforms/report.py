"""Machine-readable check reports shared by the property suites."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass
class CheckReport:
    check_id: str
    params: dict = field(default_factory=dict)
    attempted: int = 0
    nonvacuous: int = 0
    passes: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    runtime_ms: int = 0
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, witness: dict | None = None, nonvacuous: bool = True):
        self.attempted += 1
        if not nonvacuous:
            return
        self.nonvacuous += 1
        if ok:
            self.passes += 1
        else:
            self.failures.append(witness or {})

    def to_json(self) -> dict:
        return {
            "check": self.check_id,
            "params": self.params,
            "attempted": self.attempted,
            "nonvacuous": self.nonvacuous,
            "passes": self.passes,
            "skipped": self.skipped,
            "failures": self.failures,
            "runtime_ms": self.runtime_ms,
            "verdict": "pass" if self.passed else "fail",
            "data": self.data,
        }


@contextmanager
def timed(report: CheckReport):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.runtime_ms = int((time.perf_counter() - t0) * 1000)
