"""
Counting SPM(n) through its reduced forms.

c(p, w) is the number of reduced forms of width w and weight p, that is
|SPM(p + w(w+1)/2, w)|. It satisfies

    c(p, w) = C(w, p) + sum_{l=1..w} sum_{i=0..min(w-l, p-l)} sum_{m=1..(p-i)//l}
              C(w-l, i) * c(p-i-lm, l-1)

with c(0, w) = 1 and c(p, 0) = 0 for p > 0, and |SPM(n)| = sum over w of
c(n - w(w+1)/2, w). All values are Python ints.
"""

import logging
from math import isqrt

import numpy as np

from sandpile_staircase.errors import CapacityExceeded, InvalidWidth
from sandpile_staircase.structure.staircase import fiber_widths, socle_weight

logger = logging.getLogger(__name__)

DEFAULT_MAX_N = 2000


class CountTable:
    """
    Memoized c(p, w) with a precomputed binomial triangle.

    Entries are filled on demand. By default the innermost sum over m is read
    from strided partial sums layer(q, l) = sum_{j>=0} c(q - jl, l-1); with
    strided=False the triple sum is evaluated term by term. Both agree exactly;
    only the operation counter differs.

    The table is single-writer. After freeze() every entry is filled and the
    table is read-only, so concurrent readers need no locking.
    """

    def __init__(self, n_max: int, strided: bool = True, max_capacity: int = DEFAULT_MAX_N):
        if n_max < 0:
            raise ValueError(f"n_max must be non-negative, got {n_max}")
        if n_max > max_capacity:
            raise CapacityExceeded(f"count table for n={n_max} exceeds the configured limit {max_capacity}")
        self.n_max = n_max
        self.w_max = isqrt(2 * n_max)
        self.strided = strided
        self.ops = 0
        self._frozen = False

        self._binom: list[list[int]] = [[1]]
        for a in range(1, self.w_max + 1):
            prev = self._binom[-1]
            self._binom.append([1, *(prev[b - 1] + prev[b] for b in range(1, a)), 1])

        # memo[w][p]; None marks an unfilled cell
        self._memo: list[list[int | None]] = [[None] * (n_max + 1) for _ in range(self.w_max + 1)]
        for w in range(self.w_max + 1):
            self._memo[w][0] = 1
        for p in range(1, n_max + 1):
            self._memo[0][p] = 0
        self._layers: list[list[int | None]] = [[None] * (n_max + 1) for _ in range(self.w_max + 1)]

        logger.debug(f"CountTable created for n_max={n_max}, w_max={self.w_max}, strided={strided}")

    @property
    def frozen(self) -> bool:
        return self._frozen

    def covers(self, n: int) -> bool:
        return 0 <= n <= self.n_max

    def binomial(self, a: int, b: int) -> int:
        """C(a, b), 0 outside 0 <= b <= a."""
        if a < 0 or a > self.w_max:
            raise CapacityExceeded(f"binomial row {a} outside 0..{self.w_max}")
        if b < 0 or b > a:
            return 0
        return self._binom[a][b]

    def _check(self, p: int, w: int):
        if p < 0 or w < 0:
            raise ValueError(f"p and w must be non-negative, got p={p}, w={w}")
        if p > self.n_max or w > self.w_max:
            raise CapacityExceeded(f"c({p}, {w}) outside table bounds p<={self.n_max}, w<={self.w_max}")

    def c(self, p: int, w: int) -> int:
        """Number of reduced forms of width w and weight p."""
        self._check(p, w)
        value = self._memo[w][p]
        if value is None:
            if self._frozen:
                raise CapacityExceeded(f"c({p}, {w}) missing from a frozen table")
            value = self._compute(p, w)
            self._memo[w][p] = value
        return value

    def layer(self, q: int, l: int) -> int:
        """sum_{j>=0} c(q - j*l, l-1); 0 for q < 0."""
        if q < 0:
            return 0
        self._check(q, l)
        row = self._layers[l]
        if row[q] is not None:
            return row[q]
        if self._frozen:
            raise CapacityExceeded(f"layer({q}, {l}) missing from a frozen table")
        # walk down to a known cell, then fill upward; recursion depth stays in w
        pending = []
        cursor = q
        while cursor >= 0 and row[cursor] is None:
            pending.append(cursor)
            cursor -= l
        below = row[cursor] if cursor >= 0 else 0
        for cell in reversed(pending):
            below = self.c(cell, l - 1) + below
            self.ops += 1
            row[cell] = below
        return below

    def _compute(self, p: int, w: int) -> int:
        binom = self._binom
        total = binom[w][p] if p <= w else 0
        for l in range(1, min(w, p) + 1):
            row = binom[w - l]
            for i in range(min(w - l, p - l) + 1):
                if self.strided:
                    total += row[i] * self.layer(p - i - l, l)
                    self.ops += 1
                else:
                    for m in range(1, (p - i) // l + 1):
                        assert p - i - l * m < p or l - 1 < w
                        total += row[i] * self.c(p - i - l * m, l - 1)
                        self.ops += 1
        return total

    def count_spm_width(self, n: int, w: int) -> int:
        """
        |SPM(n, w)|.

        Raises:
            InvalidWidth: if w < 1 or the socle s(w) weighs more than n.
        """
        if w < 1 or w * (w + 1) > 2 * n:
            raise InvalidWidth(f"no configuration of weight {n} has staircase width {w}")
        return self.c(n - socle_weight(w), w)

    def count_spm(self, n: int) -> int:
        """|SPM(n)|, with |SPM(0)| = 1 for the empty configuration."""
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        if n > self.n_max:
            raise CapacityExceeded(f"n={n} exceeds table capacity {self.n_max}")
        if n == 0:
            return 1
        return sum(self.count_spm_width(n, w) for w in fiber_widths(n))

    def fiber_counts(self, n: int) -> dict[int, int]:
        """Mapping w -> |SPM(n, w)| over the non-empty fibers."""
        return {w: self.count_spm_width(n, w) for w in fiber_widths(n)}

    def freeze(self) -> "CountTable":
        """Fill every cell, then refuse further writes."""
        if not self._frozen:
            for w in range(self.w_max + 1):
                for p in range(self.n_max + 1):
                    self.c(p, w)
            for l in range(1, self.w_max + 1):
                for q in range(self.n_max + 1):
                    self.layer(q, l)
            self._frozen = True
            logger.debug(f"CountTable frozen after {self.ops} operations")
        return self


def _table_for(n: int, table: CountTable | None) -> CountTable:
    if table is None:
        return CountTable(max(n, 0))
    if n > table.n_max:
        raise CapacityExceeded(f"n={n} exceeds table capacity {table.n_max}")
    return table


def binomial(a: int, b: int, table: CountTable) -> int:
    return table.binomial(a, b)


def c(p: int, w: int, table: CountTable | None = None) -> int:
    if table is None:
        table = CountTable(p + socle_weight(w))
    return table.c(p, w)


def count_spm_width(n: int, w: int, table: CountTable | None = None) -> int:
    return _table_for(n, table).count_spm_width(n, w)


def count_spm(n: int, table: CountTable | None = None) -> int:
    return _table_for(n, table).count_spm(n)


def measure_operations(n: int, strided: bool = False) -> int:
    """Arithmetic operations spent computing |SPM(n)| from an empty table."""
    table = CountTable(n, strided=strided, max_capacity=max(n, DEFAULT_MAX_N))
    table.count_spm(n)
    return table.ops


def fit_cubic_log(samples: dict[int, int]) -> tuple[float, float]:
    """
    Fit ops ~ K * n^3 * log(n) through measured operation counts.

    Returns:
        The fitted constant K (geometric mean of the per-n ratios) and the
        largest factor by which any sample deviates from the fit.
    """
    ns = np.array(sorted(samples), dtype=float)
    ops = np.array([samples[int(n)] for n in ns], dtype=float)
    ratios = ops / (ns**3 * np.log(ns))
    k = float(np.exp(np.mean(np.log(ratios))))
    spread = float(np.max(np.maximum(ratios / k, k / ratios)))
    logger.debug(f"cubic-log fit K={k:.4g}, worst deviation x{spread:.3f} over n={list(samples)}")
    return k, spread

