"""
Constant amortized time generation of SPM(n).

Every reduced form of width w and weight p is reached exactly once by the
recursion below, which follows the decomposition (l, u, m), residual:

    p = 0     -> yield the all-zero form
    l = 0     -> u of length w with p ones          (only if p <= w)
    l = 1     -> u of length w-1 with i ones, m = p-i (i < p), residual (0)
    l >= 2    -> u of length w-l with i ones, m >= 1, recurse on (p-i-lm, l-1)

Loops run l ascending, i ascending, u in cool-lex order, m ascending. The
current chain lives in one shared frame that is mutated in place; visitors
that want to keep anything must copy it.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass

from sandpile_staircase.enumeration.binary import constant_run, iter_fixed_weight_binary
from sandpile_staircase.errors import InconsistentStep, InvalidWidth
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.structure.decompose import DecompChain, DecompStep
from sandpile_staircase.structure.staircase import ReducedForm, fiber_widths, is_reduced_form, socle_weight

logger = logging.getLogger(__name__)

RawStep = tuple[int, Sequence[int], int]

END_STEP: RawStep = (0, (), 0)

# marks an l = 1 move, whose residual (0) closes the chain with END_STEP
_CLOSE = object()


@dataclass
class GenStats:
    """Counters of one traversal."""

    nodes: int = 0
    emitted: int = 0
    steps: int = 0
    peak_cells: int = 0
    live_cells: int = 0

    @property
    def work(self) -> int:
        return self.nodes + self.emitted + self.steps

    @property
    def nodes_per_object(self) -> float:
        return self.nodes / self.emitted if self.emitted else 0.0

    @property
    def work_per_object(self) -> float:
        return self.work / self.emitted if self.emitted else 0.0

    def merge(self, other: GenStats) -> GenStats:
        return GenStats(
            nodes=self.nodes + other.nodes,
            emitted=self.emitted + other.emitted,
            steps=self.steps + other.steps,
            peak_cells=max(self.peak_cells, other.peak_cells),
        )


class GenFrame:
    """
    The generator's shared chain array.

    chain[0:depth] is the decomposition of the form currently being visited.
    Entries hold references to live buffers, so a frame is only meaningful
    inside the visitor call that received it.
    """

    __slots__ = ("chain", "depth", "width")

    def __init__(self, width: int):
        self.width = width
        self.depth = 0
        self.chain: list[RawStep | None] = [None] * (width + 2)

    def raw_steps(self) -> list[RawStep]:
        return self.chain[: self.depth]

    def decomp_chain(self) -> DecompChain:
        """Copy of the current chain."""
        return DecompChain(tuple(DecompStep(l, tuple(u), m) for l, u, m in self.raw_steps()), self.width)

    def reduced_form(self) -> ReducedForm:
        return ReducedForm.unchecked(fill_entries(self.raw_steps(), self.width), self.width)

    def configuration(self) -> Configuration:
        w = self.width
        return Configuration(tuple(x + (w - i) for i, x in enumerate(fill_entries(self.raw_steps(), w))))


def fill_entries(steps: Sequence[RawStep], w: int) -> tuple[int, ...]:
    """Write every level's zero and dust at its offset; O(w)."""
    entries = [0] * (w + 1)
    offset = 0
    for l, u, m in steps:
        entries[l] = offset
        for j, bit in enumerate(u):
            entries[l + 1 + j] = offset + bit
        offset += m
    return tuple(entries)


def materialize(chain: DecompChain | Sequence[RawStep], w: int) -> ReducedForm:
    """
    Rebuild the reduced form a chain describes.

    Raises:
        InconsistentStep: if the chain does not describe a width-w reduced form.
    """
    steps = [(s.l, s.u, s.m) for s in chain.steps] if isinstance(chain, DecompChain) else list(chain)
    width = w
    for depth, (l, u, m) in enumerate(steps):
        if l > width or len(u) != width - l or (l == 0) != (m == 0):
            raise InconsistentStep(f"step {depth} ({l}, {tuple(u)}, {m}) does not fit width {width}")
        if l == 0 and depth != len(steps) - 1:
            raise InconsistentStep(f"step {depth} has l = 0 but is not the last step")
        width = l - 1
    if not steps or steps[-1][0] != 0:
        raise InconsistentStep("a chain ends with an l = 0 step")
    entries = fill_entries(steps, w)
    check = is_reduced_form(entries, w)
    if not check:
        raise InconsistentStep(f"chain yields {entries}: {check.reason}")
    return ReducedForm.unchecked(entries, w)


def _moves(p: int, w: int, stats: GenStats) -> Iterator[tuple[RawStep, object]]:
    """
    One node of the recursion: yields (step, child) pairs in emission order.

    child is None for a leaf, _CLOSE for an l = 1 leaf, or (p', w') to descend.
    """
    if p == 0:
        yield (0, constant_run(w, 0), 0), None
        return
    if p <= w:
        stats.live_cells += w
        for u in iter_fixed_weight_binary(w, p):
            stats.steps += 1
            yield (0, u, 0), None
        stats.live_cells -= w
    if w >= 1:
        stats.live_cells += w - 1
        for i in range(min(w - 1, p - 1) + 1):
            for u in iter_fixed_weight_binary(w - 1, i):
                stats.steps += 1
                yield (1, u, p - i), _CLOSE
        stats.live_cells -= w - 1
    for l in range(2, min(w, p) + 1):
        stats.live_cells += w - l
        for i in range(min(w - l, p - l) + 1):
            for u in iter_fixed_weight_binary(w - l, i):
                stats.steps += 1
                for m in range(1, (p - i) // l + 1):
                    yield (l, u, m), (p - i - l * m, l - 1)
        stats.live_cells -= w - l


def _emit(frame: GenFrame, depth: int, stats: GenStats):
    frame.depth = depth
    stats.emitted += 1
    cells = stats.live_cells + depth
    if cells > stats.peak_cells:
        stats.peak_cells = cells


def generate_reduced(
    p: int, w: int, visitor: Callable[[GenFrame], None], stats: GenStats | None = None
) -> GenStats:
    """
    Visit every reduced form of width w and weight p exactly once.

    The visitor receives the shared GenFrame; call frame.reduced_form() or
    frame.decomp_chain() to get an owned copy.

    Returns:
        The traversal counters.
    """
    if p < 0 or w < 0:
        raise ValueError(f"p and w must be non-negative, got p={p}, w={w}")
    stats = stats if stats is not None else GenStats()
    frame = GenFrame(w)
    _recurse(p, w, 0, frame, visitor, stats)
    return stats


def _recurse(p: int, w: int, d: int, frame: GenFrame, visitor: Callable[[GenFrame], None], stats: GenStats):
    stats.nodes += 1
    chain = frame.chain
    for step, child in _moves(p, w, stats):
        chain[d] = step
        if child is None:
            _emit(frame, d + 1, stats)
            visitor(frame)
        elif child is _CLOSE:
            chain[d + 1] = END_STEP
            _emit(frame, d + 2, stats)
            visitor(frame)
        else:
            _recurse(child[0], child[1], d + 1, frame, visitor, stats)


def iter_reduced(p: int, w: int, stats: GenStats | None = None) -> Iterator[GenFrame]:
    """
    External-iterator form of generate_reduced.

    Same order and counters; the recursion is kept on an explicit stack of
    node move streams, one per depth.
    """
    if p < 0 or w < 0:
        raise ValueError(f"p and w must be non-negative, got p={p}, w={w}")
    stats = stats if stats is not None else GenStats()
    frame = GenFrame(w)
    chain = frame.chain
    stats.nodes += 1
    stack = [_moves(p, w, stats)]
    while stack:
        d = len(stack) - 1
        move = next(stack[-1], None)
        if move is None:
            stack.pop()
            continue
        step, child = move
        chain[d] = step
        if child is None:
            _emit(frame, d + 1, stats)
            yield frame
        elif child is _CLOSE:
            chain[d + 1] = END_STEP
            _emit(frame, d + 2, stats)
            yield frame
        else:
            stats.nodes += 1
            stack.append(_moves(child[0], child[1], stats))


def _fiber_weight(n: int, w: int) -> int:
    if n == 0 and w == 0:
        return 0
    if w < 1 or w * (w + 1) > 2 * n:
        raise InvalidWidth(f"no configuration of weight {n} has staircase width {w}")
    return n - socle_weight(w)


def generate_spm_width(
    n: int, w: int, visitor: Callable[[Configuration], None], stats: GenStats | None = None
) -> GenStats:
    """Visit every configuration of SPM(n, w) once."""
    p = _fiber_weight(n, w)
    return generate_reduced(p, w, lambda frame: visitor(frame.configuration()), stats)


def generate_spm(n: int, visitor: Callable[[Configuration], None], stats: GenStats | None = None) -> GenStats:
    """Visit every configuration of SPM(n) once, fiber by fiber."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    stats = stats if stats is not None else GenStats()
    if n == 0:
        return generate_spm_width(0, 0, visitor, stats)
    for w in fiber_widths(n):
        generate_spm_width(n, w, visitor, stats)
    logger.debug(f"SPM({n}): {stats.emitted} objects, {stats.nodes} nodes, {stats.steps} steps")
    return stats


def iter_spm_width(n: int, w: int, stats: GenStats | None = None) -> Iterator[Configuration]:
    p = _fiber_weight(n, w)
    for frame in iter_reduced(p, w, stats):
        yield frame.configuration()


def iter_spm(n: int, stats: GenStats | None = None) -> Iterator[Configuration]:
    """Stream SPM(n) in the same order as generate_spm."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        yield from iter_spm_width(0, 0, stats)
        return
    for w in fiber_widths(n):
        yield from iter_spm_width(n, w, stats)
