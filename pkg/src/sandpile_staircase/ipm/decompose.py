"""
Decomposition of extended IPM reduced forms.

An extended form r at basis (w, l) splits at its first zero z = l (mod k):

    r = (t_0, ..., t_{z-1}, 0, u_0, ..., u_{m})

u is 0 except at offsets = -1 (mod k), where it is 0 or 1. The prefix t is
augmented without a zero in its class, so peeling it ends on an extended form
t' after c >= 1 steps. The decomposition is written ((t', c), p, u) with
z = (l mod k) + k p. Iterating on t' until the prefix is empty gives the full
chain.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from sandpile_staircase.errors import InconsistentStep, NotExtended
from sandpile_staircase.ipm.basis import (
    IpmBasis,
    IpmClass,
    IpmReducedForm,
    anchor_index,
    aug,
    is_ipm_reduced,
    peel_to_extended,
)


def _check_tail(u: Sequence[int], k: int):
    for i, x in enumerate(u):
        allowed = (0, 1) if i % k == k - 1 else (0,)
        if x not in allowed:
            raise InconsistentStep(f"u[{i}] = {x} not in {allowed}")


@dataclass(frozen=True)
class IpmDecomp:
    """((t', c), p, u)"""

    t_prime: IpmReducedForm
    c: int
    p: int
    u: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        if self.c < 0 or self.p < 0:
            raise InconsistentStep(f"c and p must be non-negative, got c={self.c}, p={self.p}")
        _check_tail(self.u, self.t_prime.k)

    def __str__(self) -> str:
        return f"(({self.t_prime}, {self.c}), {self.p}, ({','.join(map(str, self.u))}))"


def ipm_decompose(r: IpmReducedForm) -> IpmDecomp:
    """
    Split an extended form at its first zero in the basis residue class.

    Raises:
        NotExtended: if r is not an extended form at its basis.
    """
    check = is_ipm_reduced(r.entries, r.basis)
    if check.kind not in (IpmClass.EXTENDED, IpmClass.REDUCED):
        raise NotExtended(f"{r} is not extended: {check}")
    k = r.basis.k
    z = anchor_index(r.entries, k, r.basis.residue)
    t = IpmReducedForm(r.entries[:z], r.basis)
    t_prime, c = peel_to_extended(t)
    return IpmDecomp(t_prime, c, (z - r.basis.residue) // k, r.entries[z + 1 :])


def ipm_recompose(d: IpmDecomp, basis: IpmBasis) -> IpmReducedForm:
    """
    Inverse of ipm_decompose.

    Raises:
        TrajectoryMismatch: if c peels from basis do not reach t'.basis.
        InconsistentStep: if the pieces cannot come from a decomposition at basis.
    """
    z = len(d.t_prime.entries)
    if z != basis.residue + basis.k * d.p:
        raise InconsistentStep(f"prefix length {z} does not put the zero at {basis.residue} + {basis.k}*{d.p}")
    if z and d.c == 0:
        raise InconsistentStep("a non-empty prefix is peeled at least once")
    if not z and d.c:
        raise InconsistentStep("an empty prefix carries no peels")
    t = aug(d.t_prime, d.c, basis)
    return IpmReducedForm((*t.entries, 0, *d.u), basis)


@dataclass(frozen=True)
class IpmLevel:
    """One level of the full chain: the basis it is read at and its (c, p, u)."""

    basis: IpmBasis
    c: int
    p: int
    u: tuple[int, ...]

    def __str__(self) -> str:
        return f"[{self.basis.w},{self.basis.l}] ({self.c};{self.p};{''.join(map(str, self.u))})"


def ipm_decompose_full(r: IpmReducedForm) -> list[IpmLevel]:
    """Decompose, then decompose t' again, until the prefix is empty."""
    levels = []
    current = r
    while True:
        d = ipm_decompose(current)
        levels.append(IpmLevel(current.basis, d.c, d.p, d.u))
        if not d.t_prime.entries:
            return levels
        current = d.t_prime


def ipm_recompose_full(levels: Sequence[IpmLevel]) -> IpmReducedForm:
    """
    Rebuild the outermost form from its chain.

    Raises:
        InconsistentStep: if the chain is empty or a level does not fit the next.
    """
    if not levels:
        raise InconsistentStep("a chain has at least one level")
    last = levels[-1]
    current = IpmReducedForm((), last.basis)
    for level in reversed(levels):
        current = ipm_recompose(IpmDecomp(current, level.c, level.p, level.u), level.basis)
    return current
