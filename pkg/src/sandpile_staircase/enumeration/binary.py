"""
Fixed-weight binary sequences.

Exhaustive listing uses cool-lex order, a loopless scheme where consecutive
sequences differ by at most four writes. Unranking uses the combinatorial
number system in lexicographic order.
"""

from collections.abc import Callable, Iterator, Sequence
from functools import lru_cache
from math import comb


@lru_cache(maxsize=None)
def constant_run(length: int, bit: int) -> tuple[int, ...]:
    """Shared all-zero or all-one sequence."""
    return (bit,) * length


def iter_fixed_weight_binary(length: int, ones: int) -> Iterator[Sequence[int]]:
    """
    Yield every 0/1 sequence of the given length with the given number of ones.

    WARNING: the yielded list is mutated in place between yields; copy it to keep it.
    The all-zero and all-one cases yield a shared tuple instead, so they cost
    no initialization.
    """
    if ones < 0 or ones > length:
        raise ValueError(f"need 0 <= ones <= length, got ones={ones}, length={length}")
    if ones == 0 or ones == length:
        yield constant_run(length, 1 if ones else 0)
        return
    bits = [1] * ones + [0] * (length - ones)
    yield bits
    x = y = ones - 1
    last = length - 1
    while x < last:
        bits[x] = 0
        bits[y] = 1
        x += 1
        y += 1
        if bits[x] == 0:
            bits[x] = 1
            bits[0] = 0
            if y > 1:
                x = 1
            y = 0
        yield bits


def gen_fixed_weight_binary(length: int, ones: int, visitor: Callable[[Sequence[int]], None]) -> None:
    """Call visitor once per sequence of iter_fixed_weight_binary."""
    for bits in iter_fixed_weight_binary(length, ones):
        visitor(bits)


def unrank_fixed_weight(length: int, ones: int, rank: int) -> tuple[int, ...]:
    """The rank-th sequence (0-based, lexicographic) with the given length and weight."""
    total = comb(length, ones)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range for C({length},{ones}) = {total}")
    bits = []
    remaining = ones
    for pos in range(length):
        with_zero = comb(length - pos - 1, remaining)
        if rank < with_zero:
            bits.append(0)
        else:
            bits.append(1)
            rank -= with_zero
            remaining -= 1
    return tuple(bits)


def rank_fixed_weight(bits: Sequence[int]) -> int:
    """Inverse of unrank_fixed_weight."""
    rank = 0
    remaining = sum(bits)
    length = len(bits)
    for pos, bit in enumerate(bits):
        if bit:
            rank += comb(length - pos - 1, remaining)
            remaining -= 1
    return rank
