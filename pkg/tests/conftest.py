"""Shared oracles: brute-force implementations kept independent of the package
internals so the fast paths always have a second, dumb route to agree with."""

from __future__ import annotations

import numpy as np
import pytest

from mgms.core import BinaryWord


def brute_is_golden(bits: list[int]) -> bool:
    return all(not (a == 1 and b == 1) for a, b in zip(bits, bits[1:]))


def brute_is_multiplicative(bits: list[int]) -> bool:
    n = len(bits)
    for k in range(1, n // 2 + 1):
        if bits[k - 1] == 1 and bits[2 * k - 1] == 1:
            return False
    return True


def all_words(n: int):
    """Every 0/1 word of length n as a list of ints (lexicographic)."""
    for v in range(2**n):
        yield [(v >> (n - 1 - j)) & 1 for j in range(n)]


def brute_count_multiplicative(n: int) -> int:
    """Vectorized filter over all 2^n words; independent of chain logic.

    Encodes position j as bit j-1 (LSB first) and tests u_k & u_{2k}.
    """
    v = np.arange(2**n, dtype=np.uint32)
    ok = np.ones(v.shape, dtype=bool)
    for k in range(1, n // 2 + 1):
        ok &= ((v >> (k - 1)) & (v >> (2 * k - 1)) & 1) == 0
    return int(ok.sum())


def brute_count_golden(k: int) -> int:
    v = np.arange(2**k, dtype=np.uint32)
    ok = np.ones(v.shape, dtype=bool)
    for j in range(1, k):
        ok &= ((v >> (j - 1)) & (v >> j) & 1) == 0
    return int(ok.sum())


def word(s: str) -> BinaryWord:
    return BinaryWord.from_string(s)


@pytest.fixture(scope="session")
def p_val() -> float:
    from mgms.analytics import p_float

    return p_float()
