"""Report-style results for validators and oracle comparisons."""
from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
UNCHECKED = "unchecked"
INFO = "info"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    residual: float | None = None
    threshold: float | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        # "info" entries never gate an exit code
        return self.status != FAIL

    @classmethod
    def from_residual(cls, name, residual, threshold, detail=""):
        status = PASS if residual <= threshold else FAIL
        return cls(name, status, float(residual), float(threshold), detail)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residual": self.residual,
            "threshold": self.threshold,
            "detail": self.detail,
        }

    def format(self) -> str:
        res = "-" if self.residual is None else f"{self.residual:.3e}"
        thr = "-" if self.threshold is None else f"{self.threshold:.1e}"
        line = f"{self.name:<34s} {self.status:<9s} residual={res:<10s} threshold={thr}"
        if self.detail:
            line += f"  ({self.detail})"
        return line


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report | list[Check]") -> None:
        self.checks.extend(other.checks if isinstance(other, Report) else other)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __iter__(self):
        return iter(self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def worst(self) -> Check | None:
        """Failing check with the largest residual-to-threshold ratio."""
        failing = [c for c in self.failures() if c.residual is not None]
        if not failing:
            return None
        return max(failing, key=lambda c: c.residual / max(c.threshold or 0.0, 1e-300))

    def format(self) -> str:
        return "\n".join(c.format() for c in self.checks)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks]}
