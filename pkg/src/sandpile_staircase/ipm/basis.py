"""
Staircase bases and reduced forms for IPM_k.

The staircase s(w, l) has l columns of height w followed by k columns of each
height w-1, ..., 1. Bases are linearly ordered by (w, l), which matches the
componentwise order of their staircases. A configuration's reduced form is its
difference with the largest staircase below it, padded to l + k(w-1) + 1
entries (every column past those is empty).

Reduced tuples are checked against, with rho = l mod k,

    monotone   r[x] >= r[x+1] - 1  if x = rho - 1 (mod k),  r[x] >= r[x+1] otherwise
    spread     r[i] >= r[j] - 1    if i = rho - 1 (mod k),  r[i] >= r[j]   otherwise,
               for every j = i + kp + 1 with p >= 1
    anchor     some r[z] == 0 with z = rho (mod k)

A tuple passing the first two is augmented; adding the anchor makes it
extended; an extended tuple of full length is the reduced form of exactly one
configuration.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

from sandpile_staircase.errors import InvalidConfiguration, PeelUndefined, TrajectoryMismatch
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.model.patterns import is_valid_ipm

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class IpmBasis:
    """The staircase s(w, l) of IPM_k, 1 <= l <= k."""

    k: int
    w: int
    l: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.w < 1:
            raise ValueError(f"w must be positive, got {self.w}")
        if not 1 <= self.l <= self.k:
            raise ValueError(f"l must lie in 1..{self.k}, got {self.l}")

    @classmethod
    def first(cls, k: int) -> IpmBasis:
        return cls(k, 1, 1)

    @property
    def residue(self) -> int:
        """Residue class mod k of the columns a peel step touches."""
        return self.l % self.k

    @property
    def tuple_length(self) -> int:
        return self.l + self.k * (self.w - 1) + 1

    @property
    def weight(self) -> int:
        return self.l * self.w + self.k * self.w * (self.w - 1) // 2

    def successor(self) -> IpmBasis:
        if self.l < self.k:
            return IpmBasis(self.k, self.w, self.l + 1)
        return IpmBasis(self.k, self.w + 1, 1)

    def predecessor(self) -> IpmBasis:
        if self.l > 1:
            return IpmBasis(self.k, self.w, self.l - 1)
        if self.w == 1:
            raise ValueError(f"{self} is the smallest basis of IPM_{self.k}")
        return IpmBasis(self.k, self.w - 1, self.k)

    def heights(self) -> tuple[int, ...]:
        """Column heights of the staircase, length l + k(w-1)."""
        return ipm_staircase(self).parts

    def __str__(self) -> str:
        return f"({self.w},{self.l})"


def ipm_staircase(basis: IpmBasis) -> Configuration:
    """l copies of w, then k copies of each of w-1 down to 1."""
    parts = [basis.w] * basis.l
    for h in range(basis.w - 1, 0, -1):
        parts.extend([h] * basis.k)
    return Configuration(tuple(parts))


def _covers(c: Configuration, basis: IpmBasis) -> bool:
    return all(c.at(i) >= h for i, h in enumerate(basis.heights()))


def ipm_staircase_width(c: Configuration, k: int) -> IpmBasis:
    """
    sw(c): the largest basis whose staircase lies below c.

    Walks the bases upward and stops at the first one that no longer fits or
    weighs more than c.

    Raises:
        InvalidConfiguration: if c is empty or not in IPM_k(n).
    """
    report = is_valid_ipm(c, k)
    if not report:
        raise InvalidConfiguration(f"({c}) is not an IPM_{k} configuration: {report}")
    if not c.parts:
        raise InvalidConfiguration("the empty configuration has no staircase width")
    n = c.weight
    basis = IpmBasis.first(k)
    while True:
        nxt = basis.successor()
        if nxt.weight > n or not _covers(c, nxt):
            return basis
        basis = nxt


class IpmClass(StrEnum):
    REDUCED = "reduced"
    EXTENDED = "extended"
    AUGMENTED = "augmented"
    INVALID = "invalid"


@dataclass(frozen=True)
class IpmClassification:
    """Strongest class a tuple reaches; n is set for reduced tuples only."""

    kind: IpmClass
    n: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.kind is not IpmClass.INVALID

    def __str__(self) -> str:
        if self.kind is IpmClass.REDUCED:
            return f"reduced({self.n})"
        if self.kind is IpmClass.INVALID:
            return f"invalid: {self.reason}"
        return str(self.kind)


def _augmented_violation(entries: Sequence[int], k: int, residue: int) -> str | None:
    """First failure of the monotone or spread conditions, or None."""
    size = len(entries)
    slack_class = (residue - 1) % k
    for x in range(size - 1):
        slack = 1 if x % k == slack_class else 0
        if entries[x] < entries[x + 1] - slack:
            return f"entries[{x}] = {entries[x]} is below entries[{x + 1}] - {slack}"
    # reach[x] = max(entries[x], entries[x+k], entries[x+2k], ...)
    reach = list(entries)
    for x in range(size - k - 1, -1, -1):
        if reach[x + k] > reach[x]:
            reach[x] = reach[x + k]
    for i in range(size - k - 1):
        slack = 1 if i % k == slack_class else 0
        if entries[i] < reach[i + k + 1] - slack:
            return f"entries[{i}] = {entries[i]} is below a later entry at stride {k} minus {slack}"
    return None


def anchor_index(entries: Sequence[int], k: int, residue: int) -> int | None:
    """Smallest z = residue (mod k) with entries[z] == 0."""
    for z in range(residue, len(entries), k):
        if entries[z] == 0:
            return z
    return None


def is_ipm_reduced(entries: Sequence[int], basis: IpmBasis) -> IpmClassification:
    """
    Classify a tuple against the IPM reduced-form conditions at basis.

    Any length is accepted for the augmented and extended classes; reduced
    additionally needs exactly basis.tuple_length entries.
    """
    for i, x in enumerate(entries):
        if not isinstance(x, int) or x < 0:
            return IpmClassification(IpmClass.INVALID, reason=f"entry {i} must be a non-negative integer")
    violation = _augmented_violation(entries, basis.k, basis.residue)
    if violation:
        return IpmClassification(IpmClass.INVALID, reason=violation)
    if anchor_index(entries, basis.k, basis.residue) is None:
        return IpmClassification(IpmClass.AUGMENTED, reason=f"no zero at an index = {basis.residue} mod {basis.k}")
    if len(entries) != basis.tuple_length:
        return IpmClassification(IpmClass.EXTENDED, reason=f"length {len(entries)} != {basis.tuple_length}")
    return IpmClassification(IpmClass.REDUCED, n=sum(entries) + basis.weight)


@dataclass(frozen=True)
class IpmReducedForm:
    """A tuple together with the basis it is read against."""

    entries: tuple[int, ...]
    basis: IpmBasis

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def k(self) -> int:
        return self.basis.k

    @property
    def weight(self) -> int:
        return sum(self.entries)

    @property
    def classification(self) -> IpmClassification:
        return is_ipm_reduced(self.entries, self.basis)

    @property
    def kind(self) -> IpmClass:
        return self.classification.kind

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return f"({','.join(map(str, self.entries))}) at {self.basis}"


def ipm_reduce(c: Configuration, k: int) -> IpmReducedForm:
    """
    Subtract the staircase of sw(c) and pad to the basis tuple length.

    Raises:
        InvalidConfiguration: if c is empty or not in IPM_k(n).
    """
    basis = ipm_staircase_width(c, k)
    heights = basis.heights()
    entries = tuple(c.at(i) - (heights[i] if i < len(heights) else 0) for i in range(basis.tuple_length))
    return IpmReducedForm(entries, basis)


def ipm_expand(r: IpmReducedForm) -> Configuration:
    heights = r.basis.heights()
    return Configuration(tuple(x + (heights[i] if i < len(heights) else 0) for i, x in enumerate(r.entries)))


def pl(r: IpmReducedForm) -> IpmReducedForm:
    """
    Peel one residue class: decrement every entry at an index = l (mod k).

    The result is read against the successor basis and describes the same
    prefix of columns. A tuple with no index in the class peels vacuously.

    Raises:
        PeelUndefined: if some entry of the class is already 0.
    """
    k = r.basis.k
    residue = r.basis.residue
    entries = list(r.entries)
    for i in range(residue, len(entries), k):
        if entries[i] == 0:
            raise PeelUndefined(f"{r} has a zero at index {i} = {residue} mod {k}")
        entries[i] -= 1
    return IpmReducedForm(tuple(entries), r.basis.successor())


def _peelable(entries: Sequence[int], k: int, residue: int) -> bool:
    return all(entries[i] for i in range(residue, len(entries), k))


def peel_to_extended(r: IpmReducedForm) -> tuple[IpmReducedForm, int]:
    """
    Apply pl until it is undefined.

    Returns:
        The extended form where peeling stops and the number of peels. The
        empty tuple is returned unchanged with count 0.
    """
    if not r.entries:
        return r, 0
    entries = list(r.entries)
    basis = r.basis
    k = basis.k
    count = 0
    while _peelable(entries, k, basis.residue):
        for i in range(basis.residue, len(entries), k):
            entries[i] -= 1
        basis = basis.successor()
        count += 1
    return IpmReducedForm(tuple(entries), basis), count


def basis_after(basis: IpmBasis, c: int) -> IpmBasis:
    """The basis reached from basis after c peel steps."""
    steps = basis.l - 1 + c
    return IpmBasis(basis.k, basis.w + steps // basis.k, steps % basis.k + 1)


def aug(t_prime: IpmReducedForm, c: int, target_basis: IpmBasis) -> IpmReducedForm:
    """
    Undo c peel steps, landing on target_basis.

    Raises:
        TrajectoryMismatch: if c peels from target_basis do not reach t_prime's basis.
    """
    if c < 0:
        raise ValueError(f"peel count must be non-negative, got {c}")
    reached = basis_after(target_basis, c)
    if reached != t_prime.basis:
        raise TrajectoryMismatch(f"{c} peels from {target_basis} reach {reached}, not {t_prime.basis}")
    k = target_basis.k
    size = len(t_prime.entries)
    # every full cycle of k peels lifts each index once
    cycles, rest = divmod(c, k)
    lift = [cycles] * size
    basis = target_basis
    for _ in range(rest):
        for i in range(basis.residue, size, k):
            lift[i] += 1
        basis = basis.successor()
    return IpmReducedForm(tuple(x + y for x, y in zip(t_prime.entries, lift, strict=True)), target_basis)
