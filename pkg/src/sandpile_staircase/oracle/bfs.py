"""
Brute-force reachability: breadth-first closure of the dynamics from (n).

This is ground truth for the tests and the `check` command, not an enumerator;
it refuses n beyond a configured bound.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import StrEnum

from sandpile_staircase.errors import CapacityExceeded
from sandpile_staircase.model.configuration import Configuration, apply_fall, apply_slide, fall_targets, slide_targets

logger = logging.getLogger(__name__)

DEFAULT_MAX_N = 40


class RuleTag(StrEnum):
    FALL = "fall"
    SLIDE = "slide"


@dataclass(frozen=True)
class Transition:
    """One rule application; kprime is the plateau length of a SLIDE, 0 for FALL."""

    source: Configuration
    target: Configuration
    rule: RuleTag
    index: int
    kprime: int = 0


@dataclass(frozen=True)
class ReachabilitySet:
    """
    Everything reachable from (n), with the edges that were followed.

    depth maps each member to its BFS distance from (n). For SPM every path
    has the same length, so this is also the FALL move count.
    """

    n: int
    k: int | None
    members: frozenset[Configuration]
    edges: tuple[Transition, ...] = ()
    depth: dict[Configuration, int] = field(default_factory=dict, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, c: object) -> bool:
        return c in self.members

    def successors(self, c: Configuration) -> list[Transition]:
        return [e for e in self.edges if e.source == c]

    def sinks(self, rule: RuleTag | None = None) -> list[Configuration]:
        """Members with no outgoing edge (of the given rule, if set)."""
        sources = {e.source for e in self.edges if rule is None or e.rule is rule}
        return sorted((c for c in self.members if c not in sources), key=lambda c: c.parts)


def _moves(c: Configuration, k: int | None) -> Iterator[Transition]:
    for l in fall_targets(c):
        yield Transition(c, apply_fall(c, l), RuleTag.FALL, l)
    if k is None:
        return
    for l, _ in slide_targets(c, k):
        target, kprime = apply_slide(c, l, k)
        yield Transition(c, target, RuleTag.SLIDE, l, kprime)


def _bfs(n: int, k: int | None, keep_edges: bool, max_n: int) -> ReachabilitySet:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n > max_n:
        raise CapacityExceeded(f"oracle is limited to n <= {max_n}, asked for {n}")
    start = Configuration((n,))
    depth = {start: 0}
    edges: list[Transition] = []
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for move in _moves(c, k):
            if keep_edges:
                edges.append(move)
            if move.target not in depth:
                depth[move.target] = depth[c] + 1
                queue.append(move.target)
    model = "SPM" if k is None else f"IPM_{k}"
    logger.debug(f"BFS {model}({n}): {len(depth)} members, {len(edges)} edges kept")
    return ReachabilitySet(n, k, frozenset(depth), tuple(edges), depth)


def bfs_spm(n: int, keep_edges: bool = True, max_n: int = DEFAULT_MAX_N) -> ReachabilitySet:
    """SPM(n) by closing {(n)} under FALL."""
    return _bfs(n, None, keep_edges, max_n)


def bfs_ipm(n: int, k: int, keep_edges: bool = True, max_n: int = DEFAULT_MAX_N) -> ReachabilitySet:
    """IPM_k(n) by closing {(n)} under FALL and SLIDE_k."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return _bfs(n, k, keep_edges, max_n)


def iter_partitions(n: int, largest: int | None = None) -> Iterator[Configuration]:
    """Every partition of n, parts non-increasing, in reverse lexicographic order."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    for parts in _partitions(n, n if largest is None else largest):
        yield Configuration(parts)


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first, *rest)
