"""
Ranking, unranking and uniform sampling of SPM(n).

Reduced forms of width w and weight p are ordered by the cells of the
counting recurrence: the l = 0 block first, then (l, i) blocks for l and i
ascending. Inside an (l, i) block the dust u is ranked lexicographically and
the layer count m ascends. A uniform configuration is the unranking of one
exact uniform integer below |SPM(n)|, which picks the width, every cell and
every u with probability proportional to its count.
"""

from __future__ import annotations

import logging

import numpy as np

from sandpile_staircase.enumeration.binary import rank_fixed_weight, unrank_fixed_weight
from sandpile_staircase.enumeration.counting import CountTable
from sandpile_staircase.enumeration.generation import fill_entries
from sandpile_staircase.errors import CapacityExceeded, EmptyDomain
from sandpile_staircase.model.configuration import Configuration
from sandpile_staircase.structure.decompose import decompose_full
from sandpile_staircase.structure.staircase import (
    ReducedForm,
    expand,
    fiber_widths,
    reduce,
    socle_weight,
)

try:
    from scipy import stats as scipy_stats

    HAS_SCIPY = True
except ImportError:
    HAS_SCIPY = False

logger = logging.getLogger(__name__)


class SeededStream:
    """
    Deterministic stream of exact uniform integers.

    Backed by numpy's PCG64, whose output for a given seed is the same on
    every platform. Bounds may exceed 64 bits: candidates are drawn from
    whole bytes and rejected until they fall below the bound.
    """

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._rng = np.random.Generator(np.random.PCG64(seed))

    def randbelow(self, bound: int) -> int:
        if bound <= 0:
            raise EmptyDomain(f"cannot draw below {bound}")
        bits = (bound - 1).bit_length()
        if bits == 0:
            return 0
        nbytes = (bits + 7) // 8
        mask = (1 << bits) - 1
        while True:
            candidate = int.from_bytes(self._rng.bytes(nbytes), "little") & mask
            if candidate < bound:
                return candidate


def _cells(p: int, w: int, table: CountTable):
    """(l, i, block size, layer total) for every non-empty l >= 1 cell, in rank order."""
    for l in range(1, min(w, p) + 1):
        for i in range(min(w - l, p - l) + 1):
            layers = table.layer(p - i - l, l)
            if layers:
                yield l, i, table.binomial(w - l, i) * layers, layers


def unrank_reduced(p: int, w: int, rank: int, table: CountTable) -> ReducedForm:
    """The rank-th reduced form of width w and weight p."""
    total = table.c(p, w)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range for c({p}, {w}) = {total}")
    steps = []
    width = w
    while True:
        if p <= width:
            block = table.binomial(width, p)
            if rank < block:
                steps.append((0, unrank_fixed_weight(width, p, rank), 0))
                break
            rank -= block
        for l, i, block, layers in _cells(p, width, table):
            if rank < block:
                break
            rank -= block
        else:
            raise AssertionError(f"rank overflow at p={p}, w={width}")
        dust_rank, rank = divmod(rank, layers)
        m = 1
        while True:
            inner = table.c(p - i - l * m, l - 1)
            if rank < inner:
                break
            rank -= inner
            m += 1
        steps.append((l, unrank_fixed_weight(width - l, i, dust_rank), m))
        p, width = p - i - l * m, l - 1
    return ReducedForm.unchecked(fill_entries(steps, w), w)


def rank_reduced(r: ReducedForm, table: CountTable) -> int:
    """Inverse of unrank_reduced."""
    rank = 0
    p = r.weight
    width = r.width
    for step in decompose_full(r).steps:
        if step.l == 0:
            rank += rank_fixed_weight(step.u)
            break
        if p <= width:
            rank += table.binomial(width, p)
        i = step.ones
        for l, ci, block, layers in _cells(p, width, table):
            if (l, ci) == (step.l, i):
                break
            rank += block
        rank += rank_fixed_weight(step.u) * layers
        for m in range(1, step.m):
            rank += table.c(p - i - step.l * m, step.l - 1)
        p, width = p - i - step.l * step.m, step.l - 1
    return rank


def _require(table: CountTable | None, n: int) -> CountTable:
    if table is None:
        return CountTable(n)
    if not table.covers(n):
        raise CapacityExceeded(f"count table covers n <= {table.n_max}, asked for {n}")
    return table


def unrank_spm(n: int, rank: int, table: CountTable | None = None) -> Configuration:
    """The rank-th configuration of SPM(n), fibers ordered by width."""
    table = _require(table, n)
    total = table.count_spm(n)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range for |SPM({n})| = {total}")
    if n == 0:
        return Configuration()
    for w in fiber_widths(n):
        size = table.count_spm_width(n, w)
        if rank < size:
            return expand(unrank_reduced(n - socle_weight(w), w, rank, table))
        rank -= size
    raise AssertionError(f"rank overflow for n={n}")


def rank_spm(c: Configuration, table: CountTable | None = None) -> int:
    """Position of c in the unrank_spm order."""
    n = c.weight
    table = _require(table, n)
    if n == 0:
        return 0
    r = reduce(c)
    offset = sum(table.count_spm_width(n, w) for w in range(1, r.width))
    return offset + rank_reduced(r, table)


def uniform_random_spm(n: int, table: CountTable | None = None, rng_seed: int | SeededStream = 0) -> Configuration:
    """
    Draw one configuration of SPM(n) uniformly.

    Args:
        n: Number of grains.
        table: Count table covering n; built on demand when omitted.
        rng_seed: A 64-bit seed, or a SeededStream to continue drawing from.
    """
    table = _require(table, n)
    stream = rng_seed if isinstance(rng_seed, SeededStream) else SeededStream(rng_seed)
    total = table.count_spm(n)
    if total == 0:
        raise EmptyDomain(f"SPM({n}) is empty")
    return unrank_spm(n, stream.randbelow(total), table)


def sample_spm(n: int, count: int, seed: int = 0, table: CountTable | None = None) -> list[Configuration]:
    """count independent uniform draws from one seed."""
    table = _require(table, n)
    stream = SeededStream(seed)
    samples = [uniform_random_spm(n, table, stream) for _ in range(count)]
    logger.debug(f"drew {count} samples of SPM({n}) with seed {seed}")
    return samples


def uniformity_pvalue(n: int, samples: list[Configuration], table: CountTable | None = None) -> float:
    """
    Chi-square goodness of fit of samples against the uniform law on SPM(n).

    Raises:
        RuntimeError: if scipy is not installed.
    """
    if not HAS_SCIPY:
        raise RuntimeError("scipy is required for the uniformity test (pip install 'sandpile-staircase[analysis]')")
    table = _require(table, n)
    total = table.count_spm(n)
    observed = np.zeros(total, dtype=np.int64)
    for c in samples:
        observed[rank_spm(c, table)] += 1
    expected = np.full(total, len(samples) / total)
    result = scipy_stats.chisquare(observed, expected)
    return float(result.pvalue)
