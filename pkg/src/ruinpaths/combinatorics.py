"""Exact Catalan and ballot counts with the recurrences that relate them.

C(n) counts first-passage walks from position 1 with n right steps; the
ballot count C_k(n) generalises this to start position k.  Everything here
is arbitrary-precision integer arithmetic; no result is ever rounded.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

# Arbitrary-precision nonnegative count.  Plain int already gives exactness
# at any magnitude, so no wrapper type is needed.
BallotCount = int


def _check_index(n: int, name: str = "n") -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"{name} must be an int, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"{name} must be >= 0, got {n}")


def _check_start(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool):
        raise TypeError(f"k must be an int, got {type(k).__name__}")
    if k < 1:
        # k = 0 means the walk is already absorbed; the count is undefined.
        raise ValueError(f"k must be >= 1, got {k}")


@lru_cache(maxsize=None)
def catalan(n: int) -> BallotCount:
    """n-th Catalan number (2n)! / (n! (n+1)!), exactly.

    Cached in a grow-only table; safe for concurrent readers because
    entries are only ever inserted, never mutated.
    """
    _check_index(n)
    return comb(2 * n, n) // (n + 1)


def ballot_count(k: int, n: int) -> BallotCount:
    """Number of first-passage walks from k with n right steps.

    Closed form k/(2n+k) * binomial(2n+k, n); the division is exact
    (the cycle-lemma argument guarantees it), so integer division loses
    nothing.
    """
    _check_start(k)
    _check_index(n)
    return k * comb(2 * n + k, n) // (2 * n + k)


def catalan_via_convolution(n: int) -> BallotCount:
    """C(n) rebuilt from the first-return convolution sum_{a=1..n} C(a-1) C(n-a).

    Rejects n = 0: the sum is empty there while C(0) = 1, and silently
    returning 1 would hide misuse.
    """
    _check_index(n)
    if n == 0:
        raise ValueError("convolution identity starts at n = 1; the n = 0 sum is empty")
    return sum(catalan(a - 1) * catalan(n - a) for a in range(1, n + 1))


@lru_cache(maxsize=None)
def _ballot_recursive(k: int, n: int) -> BallotCount:
    if k == 1:
        return catalan(n)
    if k == 2:
        return catalan(n + 1)
    return _ballot_recursive(k - 1, n + 1) - _ballot_recursive(k - 2, n + 1)


def ballot_via_recurrence(k: int, n: int) -> BallotCount:
    """C_k(n) computed from recurrences only, never the closed form.

    Base cases C_1(n) = C(n) and C_2(n) = C(n+1); for k >= 3 use
    C_k(n) = C_{k-1}(n+1) - C_{k-2}(n+1).  Must agree with ballot_count.
    """
    _check_start(k)
    _check_index(n)
    return _ballot_recursive(k, n)
