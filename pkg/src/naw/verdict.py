from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Verdict:
    ok: bool
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @classmethod
    def of(cls, checks: dict, **details):
        return cls(all(checks.values()), dict(checks), details)

    def __bool__(self):
        return self.ok

    def failed(self):
        return [k for k, v in self.checks.items() if not v]
