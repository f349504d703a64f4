"""Check records and JSON reports shared by the CLI and the test-suite."""

from __future__ import annotations

import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Optional


def _num(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    x = float(x)
    return x if math.isfinite(x) else str(x)


@dataclass
class Check:
    """One verified quantity.

    ``mode`` says how value and reference are compared: "abs" means
    |value - reference| <= tol, "below" means value < tol (reference is
    then the ideal value, normally 0) and "exact" means equality.
    """
    name: str
    value: object
    reference: object
    tol: float
    basis: str
    mode: str = "abs"
    group: Optional[str] = None

    @property
    def passed(self) -> bool:
        v, r = self.value, self.reference
        if self.mode == "exact":
            return v == r
        if self.mode == "below":
            return bool(abs(float(v)) < self.tol)
        try:
            return bool(abs(float(v) - float(r)) <= self.tol)
        except (TypeError, ValueError):
            return False

    def to_dict(self) -> dict:
        d = {"name": self.name, "value": _num(self.value), "reference": _num(self.reference),
             "tol": _num(self.tol), "pass": self.passed, "basis": self.basis}
        if self.group is not None:
            d["group"] = self.group
        return d


@dataclass
class Report:
    command: list
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    result: object = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def extend(self, checks, label: str = None, started: float = None):
        self.checks.extend(checks)
        if label is not None and started is not None:
            self.timing[label] = round(time.perf_counter() - started, 3)

    def groups(self) -> dict:
        out = {}
        for c in self.checks:
            out.setdefault(c.group or c.name, []).append(c)
        return out

    def to_dict(self, with_timing: bool = True) -> dict:
        d = {"command": list(self.command)}
        if self.result is not None:
            d["result"] = self.result
        d["checks"] = [c.to_dict() for c in self.checks]
        d["pass"] = self.passed
        d["config"] = self.config
        if with_timing:
            d["timing"] = self.timing
        return d

    def to_json(self, with_timing: bool = True) -> str:
        return json.dumps(self.to_dict(with_timing), indent=2, ensure_ascii=False) + "\n"

    def table(self) -> str:
        if not self.checks:
            return ""
        w = min(max(len(c.name) for c in self.checks), 70)
        lines = []
        for c in self.checks:
            v = c.value if isinstance(c.value, (int, str)) else f"{float(c.value):.3e}"
            r = c.reference if isinstance(c.reference, (int, str)) else f"{float(c.reference):.3e}"
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name[:w]:<{w}}  {v:>11}  ref {r:>11}  tol {c.tol:.0e}")
        lines.append(f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks passed")
        return "\n".join(lines)

    def print_table(self, stream=None):
        text = self.table()
        if text:
            print(text, file=stream or sys.stderr)
