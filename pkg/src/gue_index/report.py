"""Pass/fail bookkeeping shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    n: int | None
    ok: bool
    detail: str = ""
    label: str = "n"

    def line(self) -> str:
        where = "" if self.n is None else f" [{self.label}={self.n}]"
        status = "PASS" if self.ok else "FAIL"
        tail = f": {self.detail}" if self.detail else ""
        return f"{status} {self.name}{where}{tail}"


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, n: int | None, ok: bool, detail: str = "", label: str = "n") -> bool:
        self.checks.append(Check(name, n, bool(ok), detail, label))
        return bool(ok)

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def names(self) -> list[str]:
        seen: dict[str, None] = {}
        for c in self.checks:
            seen.setdefault(c.name, None)
        return list(seen)

    def summary(self) -> str:
        bad = len(self.failures())
        return f"{len(self.checks) - bad}/{len(self.checks)} checks passed"

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, c.label: c.n, "ok": c.ok, "detail": c.detail} for c in self.checks
            ],
        }
