"""Counter-based random streams for reproducible, chain-parallel sampling.

Every uniform draw is a pure function of an integer key tuple, typically
(seed, trial, chain index, position). There is no generator state, so

  * substreams keyed by different chains are independent and may be
    consumed in any schedule (parallel or serial) with identical results,
  * extending a word keeps all previously drawn positions fixed,
  * the stream is stable across platforms and library versions (pure
    64-bit integer arithmetic, SplitMix64 finalizer).

The scalar path (`RandomStream`) and the vectorized path (`uniform_grid`)
share the same key-folding arithmetic; tests pin them against each other
and against frozen reference values.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SPREAD = 0xD1B54A32D192ED03
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z = (z + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def fold(h: int, v: int) -> int:
    """Absorb one key component into a running 64-bit hash."""
    return mix64(h ^ ((v * _SPREAD) & _MASK))


def key_of(*parts: int) -> int:
    h = 0
    for v in parts:
        h = fold(h, int(v) & _MASK)
    return h


def unit_double(h: int) -> float:
    """Map a 64-bit hash to a double in [0, 1) using its top 53 bits."""
    return (h >> 11) * 2.0**-53


class RandomStream:
    """A keyed substream; `uniform(pos)` is deterministic in (key, pos)."""

    __slots__ = ("_key",)

    def __init__(self, *key_parts: int):
        self._key = key_of(*key_parts)

    def uniform(self, pos: int) -> float:
        return unit_double(fold(self._key, pos))

    def substream(self, *key_parts: int) -> "RandomStream":
        child = RandomStream.__new__(RandomStream)
        k = self._key
        for v in key_parts:
            k = fold(k, int(v) & _MASK)
        child._key = k
        return child


# vectorized twin of the scalar path -------------------------------------

_U = np.uint64
_NP_GOLDEN = _U(_GOLDEN)
_NP_SPREAD = _U(_SPREAD)
_NP_MIX1 = _U(_MIX1)
_NP_MIX2 = _U(_MIX2)


def _np_mix64(z: np.ndarray) -> np.ndarray:
    z = z + _NP_GOLDEN
    z = (z ^ (z >> _U(30))) * _NP_MIX1
    z = (z ^ (z >> _U(27))) * _NP_MIX2
    return z ^ (z >> _U(31))


def _np_fold(h: np.ndarray, v: np.ndarray) -> np.ndarray:
    return _np_mix64(h ^ (v * _NP_SPREAD))


def uniform_grid(seed: int, trials: np.ndarray, chains: np.ndarray, pos: int) -> np.ndarray:
    """Uniforms in [0,1) for the (trial, chain) grid at one position.

    Returns an array of shape (len(trials), len(chains)) whose (a, b)
    entry equals RandomStream(seed, trials[a], chains[b]).uniform(pos).
    """
    h0 = fold(0, seed & _MASK)  # scalar folds in exact Python ints
    ht = _np_fold(np.full(len(trials), h0, dtype=_U), trials.astype(_U))  # (T,)
    hc = _np_fold(ht[:, None], chains.astype(_U)[None, :])                # (T, C)
    hp = _np_fold(hc, np.full(hc.shape, pos, dtype=_U))
    return (hp >> _U(11)).astype(np.float64) * 2.0**-53
