"""
Staircase bases, staircase width and reduced forms for SPM.

Every c in SPM(n) sits on a largest staircase s(w) = (w, w-1, ..., 1), its socle.
Subtracting (w, w-1, ..., 0) pointwise gives the reduced form, a (w+1)-tuple
with at least one zero and r[i] >= r[j] - 1 for all i < j.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from math import isqrt

from sandpile_staircase.errors import InvalidConfiguration, NotAReducedForm
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.model.patterns import is_valid_spm


def staircase(k: int) -> Configuration:
    """The staircase basis s(k) = (k, k-1, ..., 1)."""
    if k < 0:
        raise ValueError(f"staircase size must be non-negative, got {k}")
    return Configuration(tuple(range(k, 0, -1)))


def staircase_width(c: Configuration) -> int:
    """Largest w with s(w) <= c componentwise; 0 for the empty configuration."""
    # s(w) <= c  iff  w <= c[i] + i for every i < w
    width = 0
    bound = None
    i = 0
    while True:
        reach = c.at(i) + i
        bound = reach if bound is None else min(bound, reach)
        if i + 1 > bound:
            return width
        width = i + 1
        i += 1


def socle(c: Configuration) -> Configuration:
    return staircase(staircase_width(c))


def socle_weight(w: int) -> int:
    return w * (w + 1) // 2


def fiber_widths(n: int) -> range:
    """Widths w >= 1 with w(w+1) <= 2n, i.e. the non-empty fibers SPM(n, w)."""
    w_max = (isqrt(8 * n + 1) - 1) // 2 if n > 0 else 0
    return range(1, w_max + 1)


@dataclass(frozen=True)
class ReducedFormCheck:
    """Outcome of the reduced-form characterization."""

    ok: bool
    reason: str = ""
    n: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_reduced_form(entries: Sequence[int], w: int) -> ReducedFormCheck:
    """
    Check that entries form a reduced form of width w.

    Tests the length, the presence of a zero entry and r[i] >= r[j] - 1 for
    i < j. The weight condition is reported as the implied n.
    """
    if w < 0:
        return ReducedFormCheck(False, f"width must be non-negative, got {w}")
    if len(entries) != w + 1:
        return ReducedFormCheck(False, f"expected {w + 1} entries, got {len(entries)}")
    lowest = None
    for j, x in enumerate(entries):
        if not isinstance(x, int) or x < 0:
            return ReducedFormCheck(False, f"entry {j} must be a non-negative integer")
        if lowest is not None and lowest < x - 1:
            return ReducedFormCheck(False, f"an entry before {j} is below entries[{j}] - 1 = {x - 1}")
        lowest = x if lowest is None else min(lowest, x)
    if lowest != 0:
        return ReducedFormCheck(False, "no zero entry")
    return ReducedFormCheck(True, n=sum(entries) + socle_weight(w))


@dataclass(frozen=True)
class ReducedForm:
    """A configuration minus its socle, kept at full length width + 1."""

    entries: tuple[int, ...]
    width: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        check = is_reduced_form(self.entries, self.width)
        if not check:
            raise NotAReducedForm(f"{self.entries} at width {self.width}: {check.reason}")

    @classmethod
    def unchecked(cls, entries: tuple[int, ...], width: int) -> ReducedForm:
        """Build without validation; callers guarantee the invariants."""
        form = object.__new__(cls)
        object.__setattr__(form, "entries", entries)
        object.__setattr__(form, "width", width)
        return form

    @classmethod
    def zero(cls, width: int) -> ReducedForm:
        return cls.unchecked((0,) * (width + 1), width)

    @property
    def weight(self) -> int:
        return sum(self.entries)

    @property
    def n(self) -> int:
        return self.weight + socle_weight(self.width)

    def __str__(self) -> str:
        return f"({','.join(map(str, self.entries))}) at w={self.width}"


def reduce(c: Configuration, checked: bool = True) -> ReducedForm:
    """
    Subtract (w, w-1, ..., 0) from c, where w is its staircase width.

    Args:
        c: An SPM configuration.
        checked: Validate c against the SPM patterns first. The generator's
            hot path passes False.

    Raises:
        InvalidConfiguration: if checked and c is not in SPM(n).
    """
    if checked:
        report = is_valid_spm(c)
        if not report:
            raise InvalidConfiguration(f"({c}) is not an SPM configuration: {report}")
    w = staircase_width(c)
    return ReducedForm.unchecked(tuple(c.at(i) - (w - i) for i in range(w + 1)), w)


def expand(r: ReducedForm) -> Configuration:
    """Add the socle back: inverse of reduce."""
    w = r.width
    return Configuration(tuple(x + (w - i) for i, x in enumerate(r.entries)))
