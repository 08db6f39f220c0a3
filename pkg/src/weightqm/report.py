"""Pass/fail records shared by every verification routine."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    condition: str
    status: bool
    counterexample: Any = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"condition": self.condition, "status": "PASS" if self.status else "FAIL"}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        if self.detail:
            d.update(self.detail)
        return d


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, condition, status, counterexample=None, **detail) -> Check:
        c = Check(condition, bool(status), counterexample, detail)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.status for c in self.checks)

    def __getitem__(self, condition) -> Check:
        for c in self.checks:
            if c.condition == condition:
                return c
        raise KeyError(condition)

    def merge(self, other: "Report") -> "Report":
        """Combine two reports over disjoint samples, condition by condition."""
        out = Report(self.title, info={**self.info, **other.info})
        names = [c.condition for c in self.checks]
        names += [c.condition for c in other.checks if c.condition not in names]
        for name in names:
            parts = [r[name] for r in (self, other) if any(c.condition == name for c in r.checks)]
            bad = [c for c in parts if not c.status]
            out.add(name, not bad, bad[0].counterexample if bad else None)
        return out

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "status": "PASS" if self.passed else "FAIL",
            "checks": [c.to_dict() for c in self.checks],
            **({"info": self.info} if self.info else {}),
        }

    def to_json(self, **kw) -> str:
        return dumps(self.to_dict(), **kw)

    def table(self) -> str:
        width = max([len(c.condition) for c in self.checks] + [9])
        lines = [self.title]
        for c in self.checks:
            lines.append(f"  {c.condition:<{width}}  {'PASS' if c.status else 'FAIL'}")
        return "\n".join(lines)


def _default(o):
    if isinstance(o, (set, frozenset)):
        return sorted(o, key=repr)
    if hasattr(o, "to_dict"):
        return o.to_dict()
    if hasattr(o, "item"):  # numpy scalars
        return o.item()
    return str(o)


def dumps(obj, **kw) -> str:
    kw.setdefault("indent", 2)
    kw.setdefault("sort_keys", True)
    return json.dumps(obj, default=_default, **kw)
