"""
Generating sequences: certificates that a configuration is reachable.

A generating sequence lists the columns at which FALL is applied, starting
from (n). The canonical one builds the socle first (beta_1 ... beta_{w-1}) and
then the reduced form level by level along its decomposition.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from sandpile_staircase.errors import InvalidConfiguration, InvalidStep, RuleNotApplicable
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.model.patterns import is_valid_spm
from sandpile_staircase.structure.decompose import decompose_full
from sandpile_staircase.structure.staircase import ReducedForm, reduce

GeneratingSequence = tuple[int, ...]


def alpha(i: int) -> GeneratingSequence:
    """0, 1, ..., i-1: carries one grain from column 0 to column i."""
    if i < 0:
        raise ValueError(f"alpha index must be non-negative, got {i}")
    return tuple(range(i))


def beta(i: int) -> GeneratingSequence:
    """alpha_i . alpha_{i-1} ... alpha_1"""
    if i < 0:
        raise ValueError(f"beta index must be non-negative, got {i}")
    return tuple(x for j in range(i, 0, -1) for x in range(j))


def socle_prefix(w: int) -> GeneratingSequence:
    """beta_1 ... beta_{w-1}: turns (n) into (n - w(w-1)/2, w-1, ..., 1)."""
    if w < 1:
        raise ValueError(f"width must be positive, got {w}")
    return tuple(x for i in range(1, w) for x in beta(i))


def apply_fall_prime(entries: Sequence[int], x: int) -> tuple[int, ...]:
    """
    FALL on a reduced form: move a grain from x to x+1 when r[x] >= r[x+1] + 1.

    This is FALL on the configuration seen through the socle, valid while the
    move keeps the staircase width.
    """
    if x < 0 or x + 1 >= len(entries) or entries[x] < entries[x + 1] + 1:
        raise RuleNotApplicable(f"FALL' at {x} does not apply to {tuple(entries)}")
    moved = list(entries)
    moved[x] -= 1
    moved[x + 1] += 1
    return tuple(moved)


def path(r: ReducedForm) -> GeneratingSequence:
    """
    FALL' indices turning (p, 0, ..., 0) into r, one decomposition level at a time.

    Each level (l, u, m) sends a grain to every one-position of u, highest
    first, then lays m layers over columns 1..l-1; the residual reuses
    columns 0..l-1.
    """
    sequence: list[int] = []
    for step in decompose_full(r).steps:
        for j in range(len(step.u) - 1, -1, -1):
            if step.u[j]:
                sequence.extend(alpha(step.l + 1 + j))
        if step.l:
            layer = [x for i in range(step.l - 1, 0, -1) for x in range(i)]
            sequence.extend(layer * step.m)
    return tuple(sequence)


def generating_sequence(c: Configuration) -> GeneratingSequence:
    """
    A certificate that c is reachable from (n).

    Raises:
        InvalidConfiguration: if c is not in SPM(n).
    """
    report = is_valid_spm(c)
    if not report:
        raise InvalidConfiguration(f"({c}) is not an SPM configuration: {report}")
    if not c.parts:
        return ()
    r = reduce(c, checked=False)
    return socle_prefix(r.width) + path(r)


def verify_sequence(n: int, seq: Iterable[int]) -> Configuration:
    """
    Replay FALL from (n) along seq.

    Raises:
        InvalidStep: at the first position whose FALL is not applicable.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    columns = [n]
    for position, x in enumerate(seq):
        here = columns[x] if 0 <= x < len(columns) else 0
        right = columns[x + 1] if 0 <= x + 1 < len(columns) else 0
        if x < 0 or here < right + 2:
            raise InvalidStep(position, x)
        columns[x] -= 1
        if x + 1 < len(columns):
            columns[x + 1] += 1
        else:
            columns.append(1)
    return Configuration(tuple(columns))
