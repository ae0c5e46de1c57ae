"""
Counting and generating IPM_k(n) through extended reduced forms.

Every configuration of IPM_k(n) other than the empty one is the expansion of
exactly one extended tuple of length L = l + k(w-1) + 1 and weight n - |s(w,l)|
at some basis (w, l). Only l mod k shapes the admissible tuples, so counts are
indexed by (tuple length, l, weight):

    E(L, l, q)   extended tuples: first class-l zero at z, a peelable prefix of
                 length z, free 0/1 tail entries at z + k, z + 2k, ...
    T(z, l, q)   prefixes with no class-l zero; one peel maps them onto A(z, l+1, .)
    A(L, l, q)   augmented tuples: sum over c >= 0 of E at the basis c peels on,
                 with the grains those peels removed

The generator walks the same recursion and skips every branch whose count is 0.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from itertools import combinations
from math import comb

from sandpile_staircase.enumeration.counting import DEFAULT_MAX_N
from sandpile_staircase.enumeration.generation import GenStats
from sandpile_staircase.errors import CapacityExceeded
from sandpile_staircase.ipm.basis import IpmBasis, IpmReducedForm, ipm_expand
from sandpile_staircase.model.configuration import Configuration

logger = logging.getLogger(__name__)


def ipm_bases(n: int, k: int) -> Iterator[IpmBasis]:
    """Bases of IPM_k whose staircase weighs at most n, in increasing order."""
    if n < 1:
        return
    basis = IpmBasis.first(k)
    while basis.weight <= n:
        yield basis
        basis = basis.successor()


class IpmCountTable:
    """
    Memoized E and A counts for one k.

    Same contract as CountTable: single writer while filling, read-only after
    freeze().
    """

    def __init__(self, k: int, n_max: int, max_capacity: int = DEFAULT_MAX_N):
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        if n_max < 0:
            raise ValueError(f"n_max must be non-negative, got {n_max}")
        if n_max > max_capacity:
            raise CapacityExceeded(f"IPM count table for n={n_max} exceeds the configured limit {max_capacity}")
        self.k = k
        self.n_max = n_max
        self.ops = 0
        self._frozen = False
        self._extended: dict[tuple[int, int, int], int] = {}
        self._augmented: dict[tuple[int, int, int], int] = {}
        logger.debug(f"IpmCountTable created for k={k}, n_max={n_max}")

    @property
    def frozen(self) -> bool:
        return self._frozen

    def covers(self, n: int) -> bool:
        return 0 <= n <= self.n_max

    def _successor(self, l: int) -> int:
        return l % self.k + 1

    def _class_size(self, size: int, l: int) -> int:
        """Indices below size in the residue class of l."""
        return len(range(l % self.k, size, self.k))

    def _missing(self, what: str, key: tuple[int, int, int]) -> int:
        if self._frozen:
            raise CapacityExceeded(f"{what}{key} missing from a frozen table")
        if key[2] > self.n_max:
            raise CapacityExceeded(f"weight {key[2]} exceeds table capacity {self.n_max}")
        return 0

    def extended(self, size: int, l: int, q: int) -> int:
        """E(size, l, q): extended tuples of that length and weight at class l."""
        if q < 0:
            return 0
        key = (size, l, q)
        value = self._extended.get(key)
        if value is not None:
            return value
        value = self._missing("E", key)
        k = self.k
        for z in range(l % k, size, k):
            free = len(range(z + k, size, k))
            for i in range(min(free, q) + 1):
                value += comb(free, i) * self.strict(z, l, q - i)
                self.ops += 1
        self._extended[key] = value
        return value

    def strict(self, z: int, l: int, q: int) -> int:
        """T(z, l, q): augmented prefixes of length z with no zero in class l."""
        if q < 0:
            return 0
        if z == 0:
            return 1 if q == 0 else 0
        return self.augmented(z, self._successor(l), q - self._class_size(z, l))

    def augmented(self, size: int, l: int, q: int) -> int:
        """A(size, l, q): all augmented tuples of that length and weight at class l."""
        if q < 0:
            return 0
        if size == 0:
            return 1 if q == 0 else 0
        key = (size, l, q)
        value = self._augmented.get(key)
        if value is not None:
            return value
        value = self._missing("A", key)
        # walk the peel trajectory; class 0 always holds index 0, so spent grows
        current = l
        spent = 0
        while spent <= q:
            value += self.extended(size, current, q - spent)
            self.ops += 1
            spent += self._class_size(size, current)
            current = self._successor(current)
        self._augmented[key] = value
        return value

    def count_basis(self, n: int, basis: IpmBasis) -> int:
        """|IPM_k(n, w, l)|."""
        if basis.k != self.k:
            raise ValueError(f"basis {basis} belongs to IPM_{basis.k}, table is for IPM_{self.k}")
        if basis.weight > n:
            return 0
        return self.extended(basis.tuple_length, basis.l, n - basis.weight)

    def count(self, n: int) -> int:
        """|IPM_k(n)|, with |IPM_k(0)| = 1 for the empty configuration."""
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        if n > self.n_max:
            raise CapacityExceeded(f"n={n} exceeds table capacity {self.n_max}")
        if n == 0:
            return 1
        return sum(self.count_basis(n, b) for b in ipm_bases(n, self.k))

    def basis_counts(self, n: int) -> dict[IpmBasis, int]:
        return {b: self.count_basis(n, b) for b in ipm_bases(n, self.k)}

    def freeze(self) -> IpmCountTable:
        """Fill every count up to n_max, then refuse further writes."""
        if not self._frozen:
            for n in range(self.n_max + 1):
                self.count(n)
            self._frozen = True
            logger.debug(f"IpmCountTable k={self.k} frozen after {self.ops} operations")
        return self


def _require(table: IpmCountTable | None, n: int, k: int) -> IpmCountTable:
    if table is None:
        return IpmCountTable(k, max(n, 0))
    if table.k != k:
        raise ValueError(f"table is for IPM_{table.k}, asked for IPM_{k}")
    if not table.covers(n):
        raise CapacityExceeded(f"IPM count table covers n <= {table.n_max}, asked for {n}")
    return table


def ipm_count(n: int, k: int, table: IpmCountTable | None = None) -> int:
    return _require(table, n, k).count(n)


def _extended(table: IpmCountTable, size: int, l: int, q: int, stats: GenStats) -> Iterator[tuple[int, ...]]:
    stats.nodes += 1
    k = table.k
    for z in range(l % k, size, k):
        slots = range(z + k, size, k)
        for i in range(min(len(slots), q) + 1):
            if not table.strict(z, l, q - i):
                continue
            for prefix in _strict(table, z, l, q - i, stats):
                for ones in combinations(slots, i):
                    tail = [0] * (size - z - 1)
                    for pos in ones:
                        tail[pos - z - 1] = 1
                    stats.steps += 1
                    yield (*prefix, 0, *tail)


def _strict(table: IpmCountTable, z: int, l: int, q: int, stats: GenStats) -> Iterator[tuple[int, ...]]:
    if z == 0:
        yield ()
        return
    k = table.k
    residue = l % k
    for shape in _augmented(table, z, residue + 1, q - len(range(residue, z, k)), stats):
        lifted = list(shape)
        for i in range(residue, z, k):
            lifted[i] += 1
        yield tuple(lifted)


def _augmented(table: IpmCountTable, size: int, l: int, q: int, stats: GenStats) -> Iterator[tuple[int, ...]]:
    k = table.k
    lift = [0] * size
    current = l
    spent = 0
    while spent <= q:
        if table.extended(size, current, q - spent):
            for base in _extended(table, size, current, q - spent, stats):
                yield tuple(x + y for x, y in zip(base, lift, strict=True))
        for i in range(current % k, size, k):
            lift[i] += 1
        spent += len(range(current % k, size, k))
        current = current % k + 1


def iter_ipm_reduced(
    n: int, k: int, stats: GenStats | None = None, table: IpmCountTable | None = None
) -> Iterator[IpmReducedForm]:
    """
    Stream the reduced forms of IPM_k(n), bases in increasing order.

    The empty configuration (n = 0) has no reduced form and yields nothing.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    table = _require(table, n, k)
    stats = stats if stats is not None else GenStats()
    for basis in ipm_bases(n, k):
        q = n - basis.weight
        if not table.extended(basis.tuple_length, basis.l, q):
            continue
        for entries in _extended(table, basis.tuple_length, basis.l, q, stats):
            stats.emitted += 1
            yield IpmReducedForm(entries, basis)


def iter_ipm(
    n: int, k: int, stats: GenStats | None = None, table: IpmCountTable | None = None
) -> Iterator[Configuration]:
    """Stream IPM_k(n), each configuration once."""
    if n == 0:
        if stats is not None:
            stats.emitted += 1
        yield Configuration()
        return
    for r in iter_ipm_reduced(n, k, stats, table):
        yield ipm_expand(r)


def ipm_generate(
    n: int,
    k: int,
    visitor: Callable[[Configuration], None],
    stats: GenStats | None = None,
    table: IpmCountTable | None = None,
) -> GenStats:
    """Visit every configuration of IPM_k(n) once."""
    stats = stats if stats is not None else GenStats()
    for c in iter_ipm(n, k, stats, table):
        visitor(c)
    logger.debug(f"IPM_{k}({n}): {stats.emitted} objects, {stats.nodes} nodes")
    return stats
