"""Shared fixtures: oracle sets are cached because several modules sweep the same n."""

from functools import lru_cache

import pytest

from sandpile_staircase.oracle.bfs import ReachabilitySet, bfs_ipm, bfs_spm


@lru_cache(maxsize=None)
def spm_oracle(n: int) -> ReachabilitySet:
    return bfs_spm(n)


@lru_cache(maxsize=None)
def ipm_oracle(n: int, k: int) -> ReachabilitySet:
    return bfs_ipm(n, k)


@pytest.fixture
def spm_set():
    """Callable n -> SPM(n) as computed by breadth-first search."""
    return spm_oracle


@pytest.fixture
def ipm_set():
    """Callable (n, k) -> IPM_k(n) as computed by breadth-first search."""
    return ipm_oracle
