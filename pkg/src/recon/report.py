"""Pass/fail reports that keep hypotheses apart from conclusions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

SCHEMA_TOOL_VERSION = "0.1.0"


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNMET = "hypothesis-unmet"
    UNVERIFIED = "not-verified"


@dataclass
class Clause:
    name: str
    status: Status
    detail: str = ""
    witness: Any = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status.value}
        if self.detail:
            d["detail"] = self.detail
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        return d


@dataclass
class Report:
    title: str
    clauses: list[Clause] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, witness: Any = None, detail: str = "") -> Clause:
        clause = Clause(name, Status.PASS if ok else Status.FAIL, detail, None if ok else witness)
        self.clauses.append(clause)
        return clause

    def add_status(self, name: str, status: Status, detail: str = "", witness: Any = None) -> Clause:
        clause = Clause(name, status, detail, witness)
        self.clauses.append(clause)
        return clause

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.clauses:
            self.clauses.append(Clause(prefix + c.name, c.status, c.detail, c.witness))

    def __getitem__(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.clauses)

    def status(self, name: str) -> Status:
        return self[name].status

    def passed(self, name: str) -> bool:
        return self[name].status is Status.PASS

    @property
    def ok(self) -> bool:
        return all(c.status is Status.PASS for c in self.clauses)

    @property
    def failures(self) -> list[Clause]:
        return [c for c in self.clauses if c.status is Status.FAIL]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "clauses": [c.to_dict() for c in self.clauses],
            **({"data": _jsonable(self.data)} if self.data else {}),
        }

    def summary(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'NOT PASSED'}"]
        for c in self.clauses:
            extra = f"  ({c.detail})" if c.detail else ""
            lines.append(f"  [{c.status.value:>16}] {c.name}{extra}")
        return "\n".join(lines)


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=lambda v: str(v))
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, enum.Enum):
        return x.value
    if hasattr(x, "ndim") and x.ndim > 0:
        return [_jsonable(v) for v in x.tolist()]
    if hasattr(x, "item") and callable(x.item):
        return x.item()
    return x
