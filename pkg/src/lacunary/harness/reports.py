"""Report records, serialization, and the empirical-constant ledger."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "DEFAULT_BUDGET",
    "FIELDS",
    "ConstantLedger",
    "EigStats",
    "InequalityReport",
    "CheckResult",
    "make_report",
    "read_jsonl",
    "to_csv",
    "to_jsonl",
]

DEFAULT_BUDGET = 64.0
FIELDS = ("name", "instance", "lhs", "rhs_core", "ratio", "variant", "degenerate", "pass", "seed")
# rhs values below this (relative to lhs scale) count as a vanishing right side
_ZERO = 1e-12


@dataclass
class InequalityReport:
    name: str
    instance: str
    lhs: float
    rhs_core: float
    ratio: float | None
    variant: str = ""
    degenerate: bool = False
    passed: bool = True
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "instance": self.instance,
            "lhs": _clean(self.lhs),
            "rhs_core": _clean(self.rhs_core),
            "ratio": None if self.ratio is None else _clean(self.ratio),
            "variant": self.variant,
            "degenerate": self.degenerate,
            "pass": self.passed,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityReport":
        return cls(
            name=d["name"],
            instance=d["instance"],
            lhs=d["lhs"],
            rhs_core=d["rhs_core"],
            ratio=d["ratio"],
            variant=d.get("variant", ""),
            degenerate=d.get("degenerate", False),
            passed=d["pass"],
            seed=d.get("seed"),
        )

    @property
    def key(self) -> str:
        return f"{self.name}/{self.variant}" if self.variant else self.name


def _clean(x: float) -> float:
    # a fixed number of significant digits keeps reports byte-stable
    return float(f"{float(x):.12g}")


def make_report(
    name: str,
    instance: str,
    lhs: float,
    rhs_core: float,
    *,
    variant: str = "",
    budget: float = DEFAULT_BUDGET,
    seed: int | None = None,
    degenerate: bool = False,
) -> InequalityReport:
    """Build a report; a vanishing right side is flagged instead of divided by.

    A degenerate instance passes only when its left side vanishes too.
    """
    lhs = float(lhs)
    rhs_core = float(rhs_core)
    if lhs < 0:
        raise ValueError(f"{name}: negative left side {lhs}")
    if degenerate or rhs_core <= _ZERO * max(1.0, lhs):
        return InequalityReport(
            name, instance, lhs, rhs_core, None, variant, True, lhs <= 1e-9, seed
        )
    ratio = lhs / rhs_core
    return InequalityReport(name, instance, lhs, rhs_core, ratio, variant, False, ratio <= budget, seed)


@dataclass
class EigStats:
    eigenvalues: np.ndarray
    sum: float
    sum_sq: float
    centered_sum_sq: float
    count_large: int
    threshold: float
    instance: str = ""


@dataclass
class CheckResult:
    """Outcome of one exact-identity or structural check."""

    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}" + (f": {self.detail}" if self.detail else "")


def to_jsonl(reports, path=None) -> str:
    text = "".join(json.dumps(r.to_dict(), sort_keys=False) + "\n" for r in reports)
    if path is not None:
        Path(path).write_text(text)
    return text


def read_jsonl(path) -> list[InequalityReport]:
    out = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            out.append(InequalityReport.from_dict(json.loads(line)))
    return out


def to_csv(reports, path=None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.to_dict())
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


class ConstantLedger:
    """Largest observed ratio per inequality (and variant), merged by max."""

    def __init__(self, values: dict[str, float] | None = None):
        self.values: dict[str, float] = dict(values or {})

    def observe(self, report: InequalityReport):
        if report.ratio is None or not math.isfinite(report.ratio):
            return
        key = report.key
        self.values[key] = max(self.values.get(key, 0.0), report.ratio)

    def update(self, reports):
        for r in reports:
            self.observe(r)
        return self

    def merge(self, other: "ConstantLedger") -> "ConstantLedger":
        out = ConstantLedger(self.values)
        for k, v in other.values.items():
            out.values[k] = max(out.values.get(k, 0.0), v)
        return out

    def to_json(self) -> str:
        return json.dumps({k: _clean(v) for k, v in sorted(self.values.items())}, indent=2) + "\n"

    def save(self, path):
        """Write the ledger, max-merging with whatever is already on disk."""
        path = Path(path)
        merged = self
        if path.exists():
            merged = ConstantLedger.load(path).merge(self)
        path.write_text(merged.to_json())
        return merged

    @classmethod
    def load(cls, path) -> "ConstantLedger":
        return cls(json.loads(Path(path).read_text()))
