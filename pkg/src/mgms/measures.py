"""Log-domain measures on golden and multiplicative cylinders, plus sampling.

The golden Markov measure with parameter r has initial law (r, 1-r) and
transitions 0 -> {0 w.p. r, 1 w.p. 1-r}, 1 -> 0 w.p. 1, so a cylinder mass
factors symbol-by-symbol: a 1 always costs (1-r), a 0 costs r unless it is
forced after a 1 (cost 1).  Product measures on multiplicative cylinders
assign an independent Markov law to every chain J(i); the block-perturbed
variant uses parameter p + delta/b on chains starting in dyadic block
b >= 1 (block 0 keeps p), which is the Kolmogorov-consistent reading of
the perturbation.

All probability arithmetic is base-2 logarithmic with an exact zero
sentinel: typical cylinder masses near 2^(-0.81 n) would underflow doubles
around n ~ 1300.

Sampling is deterministic: every symbol is a pure function of
(seed, trial, chain index, position along the chain), so words extend
monotonically in n and chain-parallel evaluation is schedule-independent.
The vectorized batch sampler is bit-for-bit identical to the scalar
per-chain walk (tests pin this).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from .analytics import p_float
from .core import (
    BinaryWord,
    assemble_from_chains,
    block_of,
    chain_length,
    is_multiplicative_prefix,
    restrict_to_chain,
)
from .intervals import CertifiedInterval
from .rng import RandomStream, uniform_grid

__all__ = [
    "LogProb",
    "MarkovParams",
    "BlockAssignment",
    "SampledPoint",
    "markov_cylinder_logprob",
    "pmu_logprob",
    "pdelta_logprob",
    "pdelta_logprob_level_indexed",
    "pmu_identity_gap",
    "sample_chain",
    "sample_point",
    "sample_bits_batch",
    "logprob_from_bits",
    "logprob_prefix_grid",
    "zero_count_from_bits",
]


@dataclass(frozen=True)
class LogProb:
    """Base-2 log probability; NEG_INFINITY is the exact zero sentinel."""

    value: float

    def __post_init__(self):
        if math.isnan(self.value) or self.value > 1e-12:
            raise ValueError(f"log2 probability must be <= 0, got {self.value}")

    @staticmethod
    def zero() -> "LogProb":
        return LogProb(float("-inf"))

    @staticmethod
    def one() -> "LogProb":
        return LogProb(0.0)

    @property
    def is_zero(self) -> bool:
        return self.value == float("-inf")

    def __add__(self, other: "LogProb") -> "LogProb":
        # product of probabilities; the zero sentinel absorbs
        if self.is_zero or other.is_zero:
            return LogProb.zero()
        return LogProb(self.value + other.value)

    def __float__(self) -> float:
        return self.value

    def to_probability(self) -> float:
        return 0.0 if self.is_zero else 2.0**self.value


@dataclass(frozen=True)
class MarkovParams:
    """Golden Markov measure parameter: initial law (r, 1-r), no 11 transition."""

    r: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"parameter must lie in (0,1), got {self.r}")

    @staticmethod
    def from_enclosure(ci: CertifiedInterval) -> "MarkovParams":
        return MarkovParams(ci.mid_float)

    @property
    def initial(self) -> tuple[float, float]:
        return (self.r, 1.0 - self.r)

    @property
    def transition(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.r, 1.0 - self.r), (1.0, 0.0))


def markov_cylinder_logprob(params: MarkovParams, u: BinaryWord) -> LogProb:
    """log2 of the golden Markov mass of the cylinder [u].

    Equivalent closed form: (1-r)^(N1(u)) * r^(N0(u) - N1(u_1..u_{k-1})).
    Words containing 11 get the zero sentinel (legal input, zero mass).
    """
    log_r = math.log2(params.r)
    log_q = math.log2(1.0 - params.r)
    total = 0.0
    prev = 0
    for sym in u.array:
        if prev == 1:
            if sym == 1:
                return LogProb.zero()
            # forced 0 after a 1: probability one
        else:
            total += log_q if sym else log_r
        prev = sym
    return LogProb(total)


@dataclass(frozen=True)
class BlockAssignment:
    """Per-dyadic-block chain parameters p_b: p_0 = p, p_b = p + delta/b (b >= 1).

    `param_fn` overrides the default schedule (e.g. sign-flipped
    perturbations p - delta/b^(1+gamma)); it receives the block index and
    must return a value in (0,1).
    """

    delta: float = 0.0
    p: float = field(default_factory=p_float)
    param_fn: Optional[object] = None  # Callable[[int], float]

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0,1), got {self.p}")
        if self.param_fn is None and not self.p + self.delta < 1.0:
            raise ValueError(f"p + delta must stay below 1, got {self.p + self.delta}")

    def param(self, block: int) -> float:
        if block < 0:
            raise ValueError(f"block must be >= 0, got {block}")
        if self.param_fn is not None:
            r = float(self.param_fn(block))  # type: ignore[operator]
            if not 0.0 < r < 1.0:
                raise ValueError(f"param_fn({block}) = {r} outside (0,1)")
            return r
        return self.p if block == 0 else self.p + self.delta / block

    def params_for_blocks(self, max_block: int) -> np.ndarray:
        return np.array([self.param(b) for b in range(max_block + 1)], dtype=np.float64)

    def describe(self) -> dict:
        d = {"measure": "P_mu" if self.delta == 0 and self.param_fn is None else "P_delta",
             "p": self.p, "delta": self.delta}
        if self.param_fn is not None:
            d["measure"] = "P_custom"
        return d


def pmu_logprob(p: Union[float, CertifiedInterval, None], u: BinaryWord) -> LogProb:
    """log2 of the chain product measure mass of [u] with one parameter p.

    Sums the golden Markov log-mass of every chain restriction; the zero
    sentinel appears exactly when u is not a multiplicative prefix.
    """
    if p is None:
        r = p_float()
    elif isinstance(p, CertifiedInterval):
        r = p.mid_float
    else:
        r = float(p)
    return pdelta_logprob(BlockAssignment(delta=0.0, p=r), u)


def pdelta_logprob(assign: BlockAssignment, u: BinaryWord) -> LogProb:
    """log2 of the block-perturbed chain product measure mass of [u].

    Chain J(i) uses the Markov parameter of block floor(log2 i).  Reduces
    to pmu_logprob when delta = 0, and is Kolmogorov-consistent in |u| by
    construction (the parameter of a chain never changes as the word grows).
    """
    n = len(u)
    total = LogProb.one()
    arr = u.array
    for i in range(1, n + 1, 2):
        params = MarkovParams(assign.param(block_of(i)))
        log_r = math.log2(params.r)
        log_q = math.log2(1.0 - params.r)
        acc = 0.0
        prev = 0
        m = i
        while m <= n:
            sym = arr[m - 1]
            if prev == 1:
                if sym == 1:
                    return LogProb.zero()
            else:
                acc += log_q if sym else log_r
            prev = sym
            m <<= 1
        total = total + LogProb(acc)
    return total


def pdelta_logprob_level_indexed(assign: BlockAssignment, u: BinaryWord) -> LogProb:
    """Diagnostic: the literal level-indexed product (not Kolmogorov-consistent).

    With 2^(l-1) < n <= 2^l, a chain of length k (odd i in (n/2^k, n/2^(k-1)])
    gets parameter index l - k.  The index of a fixed chain changes as n
    grows across block boundaries, which breaks P[u] = P[u0] + P[u1] there,
    and when n is an exact power of two the k <= l products miss chain i=1
    entirely.  Kept only to exhibit the difference from `pdelta_logprob`.
    """
    n = len(u)
    if n == 0:
        return LogProb.one()
    level = (n - 1).bit_length()  # l with 2^(l-1) < n <= 2^l  (l=0 for n=1)
    total = LogProb.one()
    for k in range(1, level + 1):
        lo, hi = n >> k, n >> (k - 1)  # floor(n/2^k) < i <= floor(n/2^(k-1)) picks the odds
        for i in range(lo + 1 + (lo % 2 == 1), hi + 1, 2):
            params = MarkovParams(assign.param(level - k))
            total = total + markov_cylinder_logprob(params, restrict_to_chain(u, i))
            if total.is_zero:
                return total
    return total


def pmu_identity_gap(u: BinaryWord, p: Optional[float] = None) -> float:
    """Gap in the half-word zero-count identity for even admissible words.

    For |u| = n even and p the root of p^3 = (1-p)^2,
       log2 P_mu[u] = n log2 p + (N0(u_1..u_{n/2}) - N0(u)/2) log2 p,
    because 1 - p = p^(3/2) and the chain prefixes-without-last-symbol of
    u tile the half word.  Returns lhs - rhs; zero up to rounding.
    """
    n = len(u)
    if n % 2 != 0 or n == 0:
        raise ValueError(f"identity needs even positive length, got {n}")
    if not is_multiplicative_prefix(u):
        raise ValueError("identity needs an admissible word")
    r = p_float() if p is None else float(p)
    lhs = pmu_logprob(r, u).value
    half_zeros = u.prefix(n // 2).count_zeros()
    rhs = (n + half_zeros - u.count_zeros() / 2.0) * math.log2(r)
    return lhs - rhs


# -- sampling -------------------------------------------------------------------


@dataclass(frozen=True)
class SampledPoint:
    """A measure-typical prefix with its reproducibility key."""

    word: BinaryWord
    seed: int
    descriptor: tuple  # sorted (key, value) pairs of the measure description

    @property
    def n(self) -> int:
        return len(self.word)


def sample_chain(params: MarkovParams, k: int, stream: RandomStream) -> BinaryWord:
    """Draw a length-k golden Markov word; position t consumes stream.uniform(t)."""
    if k < 1:
        raise ValueError(f"chain length must be >= 1, got {k}")
    one_prob = 1.0 - params.r
    bits = np.zeros(k, dtype=np.uint8)
    prev = 0
    for t in range(k):
        u = stream.uniform(t)
        sym = 0 if prev == 1 else int(u < one_prob)
        bits[t] = sym
        prev = sym
    return BinaryWord.from_array(bits)


def sample_point(assign: BlockAssignment, n: int, seed: int) -> SampledPoint:
    """Sample a multiplicative prefix of length n, chain by chain.

    Chain J(i) is drawn with the block parameter of i from the substream
    (seed, 0, i), so extending n never resamples earlier symbols and the
    result is independent of chain evaluation order.
    """
    if n < 1:
        raise ValueError(f"prefix length must be >= 1, got {n}")
    chains: dict[int, BinaryWord] = {}
    for i in range(1, n + 1, 2):
        params = MarkovParams(assign.param(block_of(i)))
        stream = RandomStream(seed, 0, i)
        chains[i] = sample_chain(params, chain_length(n, i), stream)
    word = assemble_from_chains(n, chains)
    return SampledPoint(word=word, seed=seed, descriptor=tuple(sorted(assign.describe().items())))


# -- vectorized twin (experiments engine) ----------------------------------------


@lru_cache(maxsize=4)
def _position_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Odd part and dyadic block of every position 1..n (index 0 unused)."""
    m = np.arange(n + 1, dtype=np.int64)
    low = m & -m
    odd = np.ones(n + 1, dtype=np.int64)
    odd[1:] = m[1:] // low[1:]
    block = np.zeros(n + 1, dtype=np.int64)
    block[1:] = np.frexp(odd[1:].astype(np.float64))[1] - 1
    odd.flags.writeable = False
    block.flags.writeable = False
    return odd, block


def _walk_costs(assign: BlockAssignment, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-position log2 cost and forbidden-pair indicator for a bits batch.

    The cost of position m never depends on the prefix length (the chain
    walk is Kolmogorov-consistent), so prefix log-masses are cumulative
    sums of this vector.
    """
    n_max = bits.shape[1] - 1
    _, block = _position_tables(n_max)
    params = assign.params_for_blocks(int(block[1:].max()) if n_max else 0)
    log_r = np.log2(params)
    log_q = np.log2(1.0 - params)
    x = bits[:, 1:]
    lb = block[1:]
    m = np.arange(1, n_max + 1)
    has_pred = m % 2 == 0
    pred = np.where(has_pred, m // 2, 0)
    forced = np.zeros(bits.shape, dtype=bool)[:, 1:]
    forced[:, has_pred] = bits[:, pred[has_pred]] == 1
    cost = np.where(x == 1, log_q[lb][None, :], log_r[lb][None, :])
    cost[forced] = 0.0
    forbidden = forced & (x == 1)
    return cost, forbidden


def logprob_prefix_grid(
    assign: BlockAssignment, bits: np.ndarray, n_list: Sequence[int]
) -> np.ndarray:
    """log2 measure mass at several prefix lengths in one pass.

    Returns shape (rows, len(n_list)); -inf rows mark forbidden pairs
    inside the corresponding prefix.
    """
    ns = [int(n) for n in n_list]
    if not ns or min(ns) < 1 or max(ns) > bits.shape[1] - 1:
        raise ValueError("grid outside the sampled range")
    cost, forbidden = _walk_costs(assign, bits)
    cums = np.cumsum(cost, axis=1)
    bad = np.cumsum(forbidden, axis=1) > 0
    idx = np.array(ns) - 1
    out = cums[:, idx].astype(np.float64)
    out[bad[:, idx]] = -np.inf
    return out


def sample_bits_batch(
    assign: BlockAssignment, n: int, seed: int, trials: np.ndarray
) -> np.ndarray:
    """Sample len(trials) independent prefixes of length n at once.

    Returns a uint8 array of shape (len(trials), n+1); column m holds
    symbol x_m (column 0 is padding).  Row t reproduces the scalar
    sample_point word when trials[t] = 0, and more generally the chain
    walk with streams (seed, trials[t], i).
    """
    if n < 1:
        raise ValueError(f"prefix length must be >= 1, got {n}")
    trials = np.asarray(trials, dtype=np.uint64)
    _, block = _position_tables(n)
    params = assign.params_for_blocks(int(block.max()))
    one_prob = 1.0 - params  # per block
    bits = np.zeros((len(trials), n + 1), dtype=np.uint8)
    t = 0
    while (1 << t) <= n:
        odds = np.arange(1, (n >> t) + 1, 2, dtype=np.int64)
        pos = odds << t
        u = uniform_grid(seed, trials, odds, t)
        pone = one_prob[block[pos]][None, :]
        draw = (u < pone).astype(np.uint8)
        if t == 0:
            bits[:, pos] = draw
        else:
            bits[:, pos] = draw & (1 - bits[:, pos >> 1])
        t += 1
    return bits


def logprob_from_bits(assign: BlockAssignment, bits: np.ndarray, n: int) -> np.ndarray:
    """log2 measure mass of the first n symbols, per row of a bits batch.

    Vectorizes the per-chain Markov walk: position m in block b costs
    log2(1-p_b) for a 1 and log2 p_b for a 0, except that a 0 forced by a 1
    at its chain predecessor m/2 costs nothing.  Rows containing a
    forbidden pair (x_{m/2} = x_m = 1) come back as -inf.  Matches
    pdelta_logprob on every word.
    """
    return logprob_prefix_grid(assign, bits, [n])[:, 0]


def zero_count_from_bits(bits: np.ndarray, n: int) -> np.ndarray:
    """N0 of the first n symbols, per row."""
    if not 1 <= n < bits.shape[1]:
        raise ValueError(f"n={n} outside the sampled range")
    return n - bits[:, 1 : n + 1].sum(axis=1, dtype=np.int64)
