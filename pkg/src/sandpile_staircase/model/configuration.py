"""
Sand pile configurations and the two evolution rules.

A configuration is a finite non-increasing sequence of column heights; the
infinite tail of empty columns is implicit, so every read past the end is 0.

Rules:
    FALL     - a grain drops from column l to l+1 when c[l] >= c[l+1] + 2
    SLIDE_k  - a grain slides from column l across a plateau of length k' < k
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import StrEnum
from math import isqrt

from sandpile_staircase.errors import NotAPartition, RuleNotApplicable, WeightMismatch


@dataclass(frozen=True, slots=True)
class Configuration:
    """A partition of n seen as a pile of grains, trailing zeros trimmed."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        previous = None
        for i, part in enumerate(parts):
            if not isinstance(part, int) or isinstance(part, bool) or part < 0:
                raise NotAPartition(f"part {i} must be a non-negative integer, got {part!r}")
            if previous is not None and part > previous:
                raise NotAPartition(f"parts must be non-increasing, got {part} after {previous} at index {i}")
            previous = part
        end = len(parts)
        while end and parts[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "parts", parts[:end])

    @classmethod
    def of(cls, *parts: int) -> Configuration:
        return cls(parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)

    def at(self, i: int) -> int:
        """Height of column i, 0 beyond the last non-empty column."""
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def energy(self) -> int:
        """Sum of i * c[i]; every FALL raises it by exactly one."""
        return sum(i * p for i, p in enumerate(self.parts))


class Order(StrEnum):
    """Outcome of a dominance comparison."""

    BELOW = "below"
    ABOVE = "above"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def _parts(c: Configuration | Sequence[int]) -> Sequence[int]:
    return c.parts if isinstance(c, Configuration) else c


def weight(c: Configuration | Sequence[int]) -> int:
    """Total number of grains."""
    return sum(_parts(c))


def move_count(c: Configuration) -> int:
    """Number of FALL moves on any path from (n) to c."""
    return c.energy


def apply_fall(c: Configuration, l: int) -> Configuration:
    """
    Move one grain from column l to column l+1.

    Raises:
        RuleNotApplicable: if c[l] < c[l+1] + 2.
    """
    if l < 0 or c.at(l) < c.at(l + 1) + 2:
        raise RuleNotApplicable(f"FALL at {l} needs c[{l}] >= c[{l + 1}] + 2 on ({c})")
    parts = list(c.parts)
    parts[l] -= 1
    if l + 1 < len(parts):
        parts[l + 1] += 1
    else:
        parts.append(1)
    return Configuration(tuple(parts))


def _slide_length(c: Configuration, l: int, k: int) -> int | None:
    """Plateau length k' for SLIDE_k at l, or None when the rule does not apply."""
    if l < 0:
        return None
    v = c.at(l) - 1
    if v < 1:
        return None
    run = 0
    while run < k and c.at(l + 1 + run) == v:
        run += 1
    if run < 1 or run >= k or c.at(l + run + 1) != v - 1:
        return None
    return run


def apply_slide(c: Configuration, l: int, k: int) -> tuple[Configuration, int]:
    """
    Slide one grain from column l across the plateau to its right.

    The plateau length k' is determined by the heights, so it is returned
    rather than taken as input. k' = 0 is FALL and is never produced here.

    Returns:
        The new configuration and k'.

    Raises:
        RuleNotApplicable: if no 1 <= k' < k fits c[l]-1 = c[l+1] = ... = c[l+k'] = c[l+k'+1]+1.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    kprime = _slide_length(c, l, k)
    if kprime is None:
        raise RuleNotApplicable(f"SLIDE_{k} at {l} does not apply to ({c})")
    parts = list(c.parts)
    target = l + kprime + 1
    parts[l] -= 1
    if target < len(parts):
        parts[target] += 1
    else:
        parts.append(1)
    return Configuration(tuple(parts)), kprime


def fall_targets(c: Configuration) -> list[int]:
    """Columns where FALL applies."""
    return [l for l in range(len(c)) if c.parts[l] >= c.at(l + 1) + 2]


def slide_targets(c: Configuration, k: int) -> list[tuple[int, int]]:
    """(column, k') pairs where SLIDE_k applies."""
    targets = []
    for l in range(len(c)):
        kprime = _slide_length(c, l, k)
        if kprime is not None:
            targets.append((l, kprime))
    return targets


def phi(n: int) -> Configuration:
    """The unique FALL fixed point of SPM(n): (k, k-1, ..., l+1, l, l, l-1, ..., 1)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    k = (isqrt(8 * n + 1) - 1) // 2
    l = n - k * (k + 1) // 2
    return Configuration((*range(k, l, -1), l, *range(l, 0, -1)))


def dominance_leq(s: Configuration, t: Configuration) -> Order:
    """
    Compare two configurations of equal weight in dominance order.

    s is below t when every prefix sum of s is >= the matching prefix sum of t
    (the initial column (n) is the bottom element).

    Raises:
        WeightMismatch: if the weights differ.
    """
    if s.weight != t.weight:
        raise WeightMismatch(f"cannot compare weight {s.weight} with weight {t.weight}")
    s_below = t_below = True
    s_sum = t_sum = 0
    for i in range(max(len(s), len(t))):
        s_sum += s.at(i)
        t_sum += t.at(i)
        if s_sum < t_sum:
            s_below = False
        elif s_sum > t_sum:
            t_below = False
    if s_below and t_below:
        return Order.EQUAL
    if s_below:
        return Order.BELOW
    if t_below:
        return Order.ABOVE
    return Order.INCOMPARABLE


def sequence_leq(s: Configuration | Iterable[int], t: Configuration | Sequence[int]) -> bool:
    """Componentwise comparison s[i] <= t[i]; the empty sequence is below everything."""
    t_parts = _parts(t)
    for i, x in enumerate(_parts(s) if isinstance(s, Configuration) else s):
        if x > (t_parts[i] if i < len(t_parts) else 0):
            return False
    return True
