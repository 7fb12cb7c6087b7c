"""Ternary check reports shared by every verification pass.

UNKNOWN is a first-class outcome, not an error: a check that needed an
undefined product reports exactly which basis pairs were missing. Reports are
built deterministically so serialized output is byte-stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Check:
    """A single named identity with its outcome.

    FAIL carries both computed sides; UNKNOWN carries the missing basis pairs.
    """

    name: str
    verdict: Verdict
    lhs: str | None = None
    rhs: str | None = None
    missing: tuple[tuple[str, str], ...] = ()
    note: str = ""

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "verdict": self.verdict.value}
        if self.lhs is not None:
            out["lhs"] = self.lhs
        if self.rhs is not None:
            out["rhs"] = self.rhs
        if self.missing:
            out["missing"] = [list(pair) for pair in self.missing]
        if self.note:
            out["note"] = self.note
        return out

    def format_line(self) -> str:
        line = f"[{self.verdict.value}] {self.name}"
        if self.verdict is Verdict.FAIL and self.lhs is not None:
            line += f" :: lhs = {self.lhs} ; rhs = {self.rhs}"
        if self.verdict is Verdict.UNKNOWN and self.missing:
            pairs = ", ".join(f"({a},{b})" for a, b in self.missing)
            line += f" :: missing {pairs}"
        if self.note:
            line += f" :: {self.note}"
        return line


def passed(name: str, note: str = "") -> Check:
    return Check(name, Verdict.PASS, note=note)


def failed(name: str, lhs: str, rhs: str, note: str = "") -> Check:
    return Check(name, Verdict.FAIL, lhs=lhs, rhs=rhs, note=note)


def unknown(name: str, missing: Iterable[tuple[str, str]], note: str = "") -> Check:
    return Check(name, Verdict.UNKNOWN, missing=tuple(missing), note=note)


@dataclass(frozen=True)
class VerificationReport:
    """An ordered list of checks plus optional aggregate counters.

    Audit passes over large search spaces (associativity and friends) list
    only failures and unknowns and summarize passes in `stats`; identity-level
    passes (projector axioms, table entries) are listed individually so the
    report doubles as an identity catalogue.
    """

    title: str
    checks: tuple[Check, ...]
    stats: Mapping[str, int] = field(default_factory=dict)

    @property
    def n_fail(self) -> int:
        return sum(1 for c in self.checks if c.verdict is Verdict.FAIL)

    @property
    def n_unknown(self) -> int:
        return sum(1 for c in self.checks if c.verdict is Verdict.UNKNOWN)

    @property
    def n_pass(self) -> int:
        listed = sum(1 for c in self.checks if c.verdict is Verdict.PASS)
        return listed + self.stats.get("unlisted_pass", 0)

    @property
    def overall(self) -> Verdict:
        if self.n_fail:
            return Verdict.FAIL
        if self.n_unknown:
            return Verdict.UNKNOWN
        return Verdict.PASS

    @property
    def has_failures(self) -> bool:
        return self.n_fail > 0

    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if c.verdict is Verdict.FAIL)

    def unknowns(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if c.verdict is Verdict.UNKNOWN)

    def to_json(self) -> dict:
        out: dict = {
            "title": self.title,
            "overall": self.overall.value,
            "counts": {"pass": self.n_pass, "fail": self.n_fail, "unknown": self.n_unknown},
            "checks": [c.to_json() for c in self.checks],
        }
        if self.stats:
            out["stats"] = {k: self.stats[k] for k in sorted(self.stats)}
        return out

    def format_text(self) -> str:
        lines = [f"== {self.title}: {self.overall.value} "
                 f"(pass={self.n_pass} fail={self.n_fail} unknown={self.n_unknown})"]
        for key in sorted(self.stats):
            if key != "unlisted_pass":
                lines.append(f"   {key}: {self.stats[key]}")
        lines.extend("   " + c.format_line() for c in self.checks)
        return "\n".join(lines)


def merge_reports(title: str, reports: Iterable[VerificationReport]) -> VerificationReport:
    checks: list[Check] = []
    stats: dict[str, int] = {}
    for report in reports:
        prefix = f"{report.title}: " if report.title else ""
        checks.extend(Check(prefix + c.name, c.verdict, c.lhs, c.rhs, c.missing, c.note)
                      for c in report.checks)
        for key, value in report.stats.items():
            stats[key] = stats.get(key, 0) + value
    return VerificationReport(title, tuple(checks), stats)
