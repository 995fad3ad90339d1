from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of a verification: failures are entries, never exceptions."""

    name: str
    passed: bool = True
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def fail(self, message: str) -> None:
        self.passed = False
        self.failures.append(message)

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def count(self, key: str, by: int = 1) -> None:
        self.stats[key] = self.stats.get(key, 0) + by

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "failures": list(self.failures),
            "warnings": list(self.warnings),
            "stats": dict(sorted(self.stats.items())),
        }

    def __bool__(self) -> bool:
        return self.passed
