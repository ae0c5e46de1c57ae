"""
Recursive decomposition of SPM reduced forms.

A reduced form r of width w splits at its first zero l:

    r = (t_0, ..., t_{l-1}, 0, u_0, ..., u_{w-l-1})

u is a 0/1 sequence, m = min(t) (0 when t is empty) and the residual t - m is a
reduced form of width l-1. Steps are written (l, u, m) everywhere.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from sandpile_staircase.errors import InconsistentStep, NotAReducedForm
from sandpile_staircase.structure.staircase import ReducedForm, is_reduced_form


@dataclass(frozen=True)
class DecompStep:
    """One level of the decomposition: first zero l, dust grains u, layers m."""

    l: int
    u: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        if self.l < 0:
            raise InconsistentStep(f"l must be non-negative, got {self.l}")
        if any(b not in (0, 1) for b in self.u):
            raise InconsistentStep(f"u must be a 0/1 sequence, got {self.u}")
        if (self.l == 0) != (self.m == 0) or self.m < 0:
            raise InconsistentStep(f"m must be 0 exactly when l is 0, got l={self.l}, m={self.m}")

    @property
    def ones(self) -> int:
        return sum(self.u)

    @property
    def weight(self) -> int:
        """Grains this level contributes: dust plus l columns of m layers."""
        return self.ones + self.l * self.m

    def __str__(self) -> str:
        return f"({self.l};{''.join(map(str, self.u))};{self.m})"


@dataclass(frozen=True)
class DecompChain:
    """Full decomposition, outermost step first."""

    steps: tuple[DecompStep, ...]
    top_width: int

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise InconsistentStep("a chain needs at least one step")
        for outer, inner in zip(self.steps, self.steps[1:], strict=False):
            if inner.l >= outer.l:
                raise InconsistentStep(f"l values must strictly decrease, got {outer.l} then {inner.l}")
        if self.steps[-1].l != 0:
            raise InconsistentStep(f"a chain ends with l = 0, got l = {self.steps[-1].l}")

    @property
    def weight(self) -> int:
        return sum(step.weight for step in self.steps)

    def widths(self) -> list[int]:
        """Width of the reduced form each step decomposes."""
        widths = [self.top_width]
        for step in self.steps[:-1]:
            widths.append(step.l - 1)
        return widths


def _coerce(r: ReducedForm | Sequence[int], width: int | None = None) -> ReducedForm:
    if isinstance(r, ReducedForm):
        return r
    entries = tuple(r)
    return ReducedForm(entries, len(entries) - 1 if width is None else width)


def decompose_step(r: ReducedForm | Sequence[int]) -> tuple[DecompStep, ReducedForm | None]:
    """
    Split r at its first zero.

    Returns:
        The step (l, u, m) and the residual of width l-1, or None when l = 0.

    Raises:
        NotAReducedForm: if r is a raw tuple that is not a reduced form.
    """
    r = _coerce(r)
    entries = r.entries
    l = entries.index(0)
    t = entries[:l]
    m = min(t) if t else 0
    step = DecompStep(l, entries[l + 1 :], m)
    if l == 0:
        return step, None
    return step, ReducedForm.unchecked(tuple(x - m for x in t), l - 1)


def recompose_step(step: DecompStep, residual: ReducedForm | None, w: int) -> ReducedForm:
    """
    Inverse of decompose_step.

    Raises:
        InconsistentStep: if the pieces do not fit together into a width-w reduced form.
    """
    if len(step.u) != w - step.l:
        raise InconsistentStep(f"u has length {len(step.u)}, expected {w - step.l} for l={step.l}, w={w}")
    if step.l == 0:
        if residual is not None:
            raise InconsistentStep("a step with l = 0 has no residual")
        prefix: tuple[int, ...] = ()
    else:
        if residual is None or residual.width != step.l - 1:
            raise InconsistentStep(f"step with l={step.l} needs a residual of width {step.l - 1}")
        prefix = tuple(x + step.m for x in residual.entries)
    entries = (*prefix, 0, *step.u)
    check = is_reduced_form(entries, w)
    if not check:
        raise InconsistentStep(f"recomposed {entries} is not a reduced form: {check.reason}")
    if entries.index(0) != step.l:
        raise InconsistentStep(f"first zero of {entries} is not at {step.l}")
    return ReducedForm.unchecked(entries, w)


def decompose_full(r: ReducedForm | Sequence[int]) -> DecompChain:
    """Iterate decompose_step until no residual is left."""
    r = _coerce(r)
    steps = []
    current: ReducedForm | None = r
    while current is not None:
        step, current = decompose_step(current)
        steps.append(step)
    return DecompChain(tuple(steps), r.width)


def recompose_full(chain: DecompChain) -> ReducedForm:
    """Inverse of decompose_full, innermost step first."""
    widths = chain.widths()
    residual: ReducedForm | None = None
    for step, w in zip(reversed(chain.steps), reversed(widths), strict=True):
        residual = recompose_step(step, residual, w)
    return residual
