"""
Forbidden-pattern validity checks.

A partition belongs to SPM(n) exactly when it avoids
    plateau3            p, p, p                      (p > 0)
    plateau-staircase   p, p, p-1, ..., q+1, q, q    (p > q > 0)

and to IPM_k(n) exactly when it avoids
    long-plateau        p^[k+2]                          (p > 0)
    step                (p+1)^[k+1] p^[k+1]              (p > 0)
    staircase           (p+h)^[k+1] ... (p+1)^[k] p^[k+1] (h > 1, p > 0)

Reports always name the leftmost occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

from sandpile_staircase.model.configuration import Configuration


class PatternKind(StrEnum):
    PLATEAU3 = "plateau3"
    PLATEAU_STAIRCASE = "plateau-staircase"
    LONG_PLATEAU = "long-plateau"
    STEP = "step"
    STAIRCASE = "staircase"


@dataclass(frozen=True)
class ValidityReport:
    """Either valid, or the kind and start index of the leftmost forbidden pattern."""

    kind: PatternKind | None = None
    index: int | None = None

    @property
    def valid(self) -> bool:
        return self.kind is None

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        return f"invalid {self.kind} @ {self.index}"


VALID = ValidityReport()


def _run_length(c: Configuration, start: int, value: int, limit: int) -> int:
    run = 0
    while run < limit and c.at(start + run) == value:
        run += 1
    return run


def is_valid_spm(c: Configuration) -> ValidityReport:
    """Check a partition against both SPM forbidden patterns."""
    parts = c.parts
    for i, p in enumerate(parts):
        if c.at(i + 1) != p:
            continue
        if c.at(i + 2) == p:
            return ValidityReport(PatternKind.PLATEAU3, i)
        # descend through p-1, p-2, ... looking for a closing plateau
        j = i + 1
        while c.at(j + 1) == parts[j] - 1 and c.at(j + 1) > 0:
            j += 1
        if j >= i + 2 and c.at(j + 1) == parts[j]:
            return ValidityReport(PatternKind.PLATEAU_STAIRCASE, i)
    return VALID


def is_valid_ipm(c: Configuration, k: int) -> ValidityReport:
    """Check a partition against the three IPM_k forbidden patterns."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    for i, v in enumerate(c.parts):
        run = _run_length(c, i, v, k + 2)
        if run >= k + 2:
            return ValidityReport(PatternKind.LONG_PLATEAU, i)
        if run != k + 1:
            continue
        pos = i + k + 1
        current = v
        while current > 1:
            current -= 1
            block = _run_length(c, pos, current, k + 1)
            if block == k + 1:
                kind = PatternKind.STEP if v - current == 1 else PatternKind.STAIRCASE
                return ValidityReport(kind, i)
            if block < k:
                break
            pos += k
    return VALID
