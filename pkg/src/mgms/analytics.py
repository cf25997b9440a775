"""Dimension constants, entropy identities, and certified series bounds.

Everything here is either exact (rational arithmetic), certified (interval
enclosures with rigorous tails), or an explicitly labelled float formula.

Conventions.  Entropy comes in two scales and both are used deliberately:

  * `binary_entropy` (base 2) drives the partition-entropy identity
    H^{mu(r)}(alpha_k) = H(r) F_{k-1}(r) and the series A(r) = 2H(r)/(3-r)
    whose maximum over (0,1) is the Hausdorff dimension s = -log2 p.
  * `entropy_nat` (natural log) drives the derivative-series calculus
    around p: the explicit constants in the certified tail bounds
    (H(p) < 0.7, |H'(p)| < 0.3, |F_n(p)| < 3 + 3n/2, |F'_n(p)| < 3n + 6)
    are natural-log values, and the certified positive constant tau is
    reported on that scale.  Positivity and the vanishing of the
    first-derivative series are scale-invariant (the scales differ by the
    positive factor ln 2).

p is the unique root in (0,1) of x^3 - x^2 + 2x - 1 = 0, the expansion of
p^3 = (1-p)^2 (re-verified symbolically in the tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

from .core import chain_length_counts, fibonacci
from .intervals import (
    CertifiedInterval,
    iv_entropy_bits,
    iv_entropy_nat,
    iv_ln_ratio,
    iv_log2,
    iv_log2_int,
)
from .polynomials import entropy_poly

__all__ = [
    "CertificationError",
    "binary_entropy",
    "entropy_nat",
    "partition_entropy",
    "A_closed",
    "A_series",
    "solve_p",
    "p_float",
    "hausdorff_dim",
    "dim_minkowski",
    "dim_minkowski_enclosure",
    "hf_derivative_at",
    "derivative_series_at_p",
    "tau_certify",
    "TauCertificate",
    "tau_gamma",
    "TauGammaResult",
    "expected_zero_count_chain",
    "expected_zero_count_prefix",
    "GaugeFamily",
    "Gauge",
    "gauge_log2",
]


class CertificationError(RuntimeError):
    """A rigorous sign/enclosure check failed."""


# -- entropy ------------------------------------------------------------------


def _check_unit_open(r: float) -> float:
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError(f"parameter must lie in (0,1), got {r}")
    return r


def binary_entropy(r: float) -> float:
    """H(r) = -r log2 r - (1-r) log2(1-r); H(1/2) = 1."""
    r = _check_unit_open(r)
    return -r * math.log2(r) - (1 - r) * math.log2(1 - r)


def entropy_nat(r: float) -> float:
    """Natural-log entropy -r ln r - (1-r) ln(1-r); equals ln(2) * binary_entropy."""
    r = _check_unit_open(r)
    return -r * math.log(r) - (1 - r) * math.log(1 - r)


def binary_entropy_interval(ci: CertifiedInterval) -> CertifiedInterval:
    return iv_entropy_bits(ci)


def entropy_nat_interval(ci: CertifiedInterval) -> CertifiedInterval:
    return iv_entropy_nat(ci)


def partition_entropy(r: float, k: int) -> float:
    """Entropy (base 2) of the length-k golden cylinder partition: H(r) F_{k-1}(r)."""
    if k < 1:
        raise ValueError(f"partition order must be >= 1, got {k}")
    r = _check_unit_open(r)
    return binary_entropy(r) * entropy_poly(k - 1).evaluate(float(r))


# -- the series A(r) -----------------------------------------------------------


def A_closed(r: float) -> float:
    """A(r) = sum_k H(r) F_{k-1}(r) / 2^(k+1) = 2 H(r) / (3 - r)."""
    r = _check_unit_open(r)
    return 2.0 * binary_entropy(r) / (3.0 - r)


class SeriesValue(NamedTuple):
    value: float
    tail_bound: float


def A_series(r: float, K: int) -> SeriesValue:
    """Partial sum of A(r) through k = K, with a rigorous truncation bound.

    The tail uses |F_k(x)| <= 3 + 3k/2 on (0,1), so the remainder is at most
    H(r) * sum_{k>K} (3 + 3(k-1)/2) / 2^(k+1) = 1.5 H(r) (K+3) 2^(-K-1).
    """
    r = _check_unit_open(r)
    if K < 1:
        raise ValueError(f"need K >= 1, got {K}")
    H = binary_entropy(r)
    partial = sum(H * entropy_poly(k - 1).evaluate(float(r)) / 2.0 ** (k + 1) for k in range(1, K + 1))
    tail = 1.5 * H * (K + 3) * 2.0 ** -(K + 1)
    return SeriesValue(partial, tail)


# -- the root p and the dimension constants ------------------------------------


def _cubic(x: Fraction) -> Fraction:
    # expansion of x^3 - (1-x)^2
    return x * x * x - x * x + 2 * x - 1


@lru_cache(maxsize=None)
def solve_p(width: Fraction = Fraction(1, 2**80)) -> CertifiedInterval:
    """Certified enclosure of the root of p^3 = (1-p)^2 in (0,1).

    Plain bisection in exact rational arithmetic: every sign evaluation is
    exact, so the bracket is rigorous by construction.
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    lo, hi = Fraction(1, 2), Fraction(3, 5)
    flo = _cubic(lo)
    if not (flo < 0 < _cubic(hi)):
        raise CertificationError("initial bracket does not straddle the root")
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = _cubic(mid)
        if fm == 0:
            return CertifiedInterval(mid, mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return CertifiedInterval(lo, hi)


def p_float() -> float:
    """Double-precision midpoint of the certified enclosure of p."""
    return solve_p().mid_float


@lru_cache(maxsize=None)
def hausdorff_dim() -> CertifiedInterval:
    """Certified enclosure of s = -log2 p (~0.81137)."""
    return -iv_log2(solve_p())


def s_float() -> float:
    return hausdorff_dim().mid_float


def _minkowski_K(tol: float) -> int:
    # smallest K with tail bound (K+2) 2^-(K+1) < tol, using log2 F_{k+1} <= k
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    K = 1
    while (K + 2) * 2.0 ** -(K + 1) >= tol:
        K += 1
    return K


def dim_minkowski(tol: float = 1e-6) -> SeriesValue:
    """Partial sum of sum_k 2^-(k-1)... truncated so the tail is below tol.

    Terms are 2^-(k+1) log2 F_{k+1}; the tail bound (K+2) 2^-(K+1) comes from
    log2 F_{k+1} <= k.  Limit value ~0.82429.
    """
    K = _minkowski_K(tol)
    value = sum(2.0 ** -(k + 1) * math.log2(fibonacci(k + 1)) for k in range(1, K + 1))
    return SeriesValue(value, (K + 2) * 2.0 ** -(K + 1))


def dim_minkowski_enclosure(tol: float = 1e-6) -> CertifiedInterval:
    """Certified enclosure of the Minkowski dimension (partial sum + tail)."""
    K = _minkowski_K(tol)
    acc = CertifiedInterval.point(0)
    for k in range(1, K + 1):
        acc = acc + iv_log2_int(fibonacci(k + 1)).scale(Fraction(1, 2 ** (k + 1)))
    tail = Fraction(K + 2, 2 ** (K + 1))
    return CertifiedInterval(acc.lo, acc.hi + tail)


def dims_certified_ordering() -> bool:
    """Certify dim_H < dim_M from the enclosures (True, or raises)."""
    s = hausdorff_dim()
    m = dim_minkowski_enclosure(1e-9)
    if not s.hi < m.lo:
        raise CertificationError(f"could not separate s={s} from dim_M={m}")
    return True


# -- derivative series around p (natural-log scale) -----------------------------


def hf_derivative_at(k: int, x: CertifiedInterval) -> CertifiedInterval:
    """Enclosure of (H F_{k-1})'(x) = H(x) F'_{k-1}(x) + H'(x) F_{k-1}(x).

    H is the natural-log entropy; H'(x) = ln((1-x)/x).  Polynomial values
    use exact coefficients; only H and H' round (outward).
    """
    if k < 1:
        raise ValueError(f"series index must be >= 1, got {k}")
    F = entropy_poly(k - 1)
    return entropy_nat_interval(x) * F.evaluate_derivative(x) + iv_ln_ratio(x) * F.evaluate(x)


@lru_cache(maxsize=None)
def _stirling2(m: int, i: int) -> int:
    if m == i == 0:
        return 1
    if m == 0 or i == 0:
        return 0
    return i * _stirling2(m - 1, i) + _stirling2(m - 1, i - 1)


@lru_cache(maxsize=None)
def _moment_at_half(m: int) -> Fraction:
    """A_m = sum_{j>=0} j^m 2^-j, exactly (A_0=2, A_1=2, A_2=6, A_3=26, ...)."""
    return Fraction(sum(_stirling2(m, i) * 2 * math.factorial(i) for i in range(m + 1)))


def dyadic_power_tail(m: int, K: int) -> Fraction:
    """S_m(K) = sum_{k>=K} k^m 2^-k, exactly (binomial shift of the moments A_i)."""
    if K < 0:
        raise ValueError("K must be >= 0")
    total = Fraction(0)
    for i in range(m + 1):
        total += math.comb(m, i) * Fraction(K) ** (m - i) * _moment_at_half(i)
    return total / 2**K


def derivative_series_at_p(K: int) -> CertifiedInterval:
    """Enclosure of sum_k (H F_{k-1})'(p) / 2^(k+1), widened by a rigorous tail.

    The infinite series vanishes (p maximizes A), so the returned interval
    must contain 0.  Tail: |(H F_{k-1})'(p)| <= 0.7(3k+3) + 0.3(3k+3)/2
    = 2.55 (k+1), summing to 2.55 (K+3) 2^-(K+1).
    """
    if K < 1:
        raise ValueError(f"need K >= 1, got {K}")
    p = solve_p()
    acc = CertifiedInterval.point(0)
    for k in range(1, K + 1):
        acc = acc + hf_derivative_at(k, p).scale(Fraction(1, 2 ** (k + 1)))
    tail = Fraction(51, 20) * Fraction(K + 3, 2 ** (K + 1))
    return acc.widen(tail)


@dataclass(frozen=True)
class TauCertificate:
    """Outcome of the positivity certification of tau = sum k (HF_{k-1})'(p)/2^(k+1)."""

    partial_12: CertifiedInterval
    tail_bound: CertifiedInterval
    margin: Fraction
    sign: str  # always "POSITIVE" on success

    @property
    def certified_lower_bound(self) -> Fraction:
        return self.margin


@lru_cache(maxsize=None)
def tau_certify() -> TauCertificate:
    """Certify tau > 0 with an exact tail.

    partial_12 encloses sum_{k<=12} k (HF_{k-1})'(p) / 2^(k+1) (~0.187469,
    natural-log scale); the k >= 13 remainder is bounded in absolute value
    by sum_{k>=13} 3k(k+1)/2^(k+1) = 159/2048 < 0.1, evaluated exactly.
    Raises CertificationError if positivity cannot be established.
    """
    p = solve_p()
    acc = CertifiedInterval.point(0)
    for k in range(1, 13):
        acc = acc + hf_derivative_at(k, p).scale(Fraction(k, 2 ** (k + 1)))
    tail = Fraction(3, 2) * (dyadic_power_tail(2, 13) + dyadic_power_tail(1, 13))
    margin = acc.lo - tail
    if margin <= 0:
        raise CertificationError(f"tau positivity failed: partial={acc}, tail={tail}")
    return TauCertificate(
        partial_12=acc,
        tail_bound=CertifiedInterval.point(tail),
        margin=margin,
        sign="POSITIVE",
    )


def tau_bits_lower_bound() -> Fraction:
    """Certified lower bound for tau on the base-2 scale (tau_bits = tau / ln 2)."""
    from .intervals import ln2_interval

    return tau_certify().margin / ln2_interval().hi


class TauGammaResult(NamedTuple):
    value: CertifiedInterval
    tail_bound: Fraction
    sign: str  # POSITIVE | NEGATIVE | UNKNOWN


def tau_gamma(gamma: float, K: int = 12) -> TauGammaResult:
    """Partial sum of sum_k k^(1+gamma) (HF_{k-1})'(p) / 2^(k+1) with certified tail.

    The tail majorizes k^(1+gamma) by k^m with m = ceil(1+gamma), so gamma
    is limited to (0, 2].  Reports the sign when the tail-widened interval
    separates from zero, UNKNOWN otherwise.
    """
    if not 0 < gamma <= 2:
        raise ValueError(f"gamma must lie in (0, 2], got {gamma}")
    if K < 1:
        raise ValueError(f"need K >= 1, got {K}")
    from mpmath import iv

    from .intervals import _from_iv

    p = solve_p()
    acc = CertifiedInterval.point(0)
    for k in range(1, K + 1):
        # enclosure of the weight k^(1+gamma)
        w = iv.exp(iv.log(iv.mpf(k)) * iv.mpf(1 + gamma)) if k > 1 else iv.mpf(1)
        acc = acc + (hf_derivative_at(k, p) * _from_iv(w)).scale(Fraction(1, 2 ** (k + 1)))
    m = math.ceil(1 + gamma)
    tail = Fraction(51, 40) * (dyadic_power_tail(m + 1, K + 1) + dyadic_power_tail(m, K + 1))
    widened = acc.widen(tail)
    if widened.is_positive():
        sign = "POSITIVE"
    elif widened.is_negative():
        sign = "NEGATIVE"
    else:
        sign = "UNKNOWN"
    return TauGammaResult(value=acc, tail_bound=tail, sign=sign)


# -- zero-count expectations -----------------------------------------------------


def expected_zero_count_chain(p_val: float, k: int) -> float:
    """L_k: expected number of zeros in a length-k golden Markov word.

    L_k = k/(2-p) - (1 - (p-1)^k) (p-1)^2 / (2-p)^2, from the left
    eigenvectors of the transition matrix; L_1 = p and L_2 = 1 + p^2.
    """
    if k < 1:
        raise ValueError(f"chain length must be >= 1, got {k}")
    p = _check_unit_open(p_val)
    q = p - 1.0
    return k / (2 - p) - (1 - q**k) * q * q / (2 - p) ** 2


def expected_zero_count_prefix(n: int, p_val: Optional[float] = None) -> float:
    """E[N_0(x_1^n)] under the chain product measure with parameter p.

    Sums L_k over the exact chain-length partition of {1,...,n}.
    """
    if n < 1:
        raise ValueError(f"prefix length must be >= 1, got {n}")
    p = p_float() if p_val is None else _check_unit_open(p_val)
    return sum(c * expected_zero_count_chain(p, k) for k, c in chain_length_counts(n).items())


# -- gauges -----------------------------------------------------------------------


class GaugeFamily(Enum):
    PURE_S = "pure_s"
    PHI = "phi"
    PSI_THETA = "psi_theta"
    PHI_GAMMA = "phi_gamma"
    PSI_G = "psi_g"


@dataclass(frozen=True)
class Gauge:
    """A gauge in log2 form at dyadic scales: log2 gauge(2^-n).

    PURE_S:    -n s
    PHI:       -n s - c n / (log2 n)^2
    PSI_THETA: -n s - n / (log2 n)^theta
    PHI_GAMMA: -n s - c n / (log2 n)^(2+gamma)
    PSI_G:     -n s - n / (ln 2 * g(log2 n))
    """

    family: GaugeFamily
    s: float
    c: Optional[float] = None
    theta: Optional[float] = None
    gamma: Optional[float] = None
    g: Optional[Callable[[float], float]] = None
    g_label: str = ""

    @staticmethod
    def pure(s: Optional[float] = None) -> "Gauge":
        return Gauge(GaugeFamily.PURE_S, s=s_float() if s is None else float(s))

    @staticmethod
    def phi(c: float, s: Optional[float] = None) -> "Gauge":
        if c <= 0:
            raise ValueError(f"coefficient must be positive, got {c}")
        return Gauge(GaugeFamily.PHI, s=s_float() if s is None else float(s), c=float(c))

    @staticmethod
    def psi_theta(theta: float, s: Optional[float] = None) -> "Gauge":
        return Gauge(GaugeFamily.PSI_THETA, s=s_float() if s is None else float(s), theta=float(theta))

    @staticmethod
    def phi_gamma(c: float, gamma: float, s: Optional[float] = None) -> "Gauge":
        if c <= 0 or gamma <= 0:
            raise ValueError("need c > 0 and gamma > 0")
        return Gauge(
            GaugeFamily.PHI_GAMMA, s=s_float() if s is None else float(s), c=float(c), gamma=float(gamma)
        )

    @staticmethod
    def psi_g(g: Callable[[float], float], s: Optional[float] = None, label: str = "g") -> "Gauge":
        return Gauge(GaugeFamily.PSI_G, s=s_float() if s is None else float(s), g=g, g_label=label)

    def describe(self) -> dict:
        d: dict = {"family": self.family.value, "s": self.s}
        if self.c is not None:
            d["c"] = self.c
        if self.theta is not None:
            d["theta"] = self.theta
        if self.gamma is not None:
            d["gamma"] = self.gamma
        if self.family is GaugeFamily.PSI_G:
            d["g"] = self.g_label
        return d


def gauge_log2(gauge: Gauge, n: int) -> float:
    """log2 gauge(2^-n) for n >= 4 (so log2 n > 1)."""
    if n < 4:
        raise ValueError(f"gauge evaluation needs n >= 4, got {n}")
    base = -float(n) * gauge.s
    ln_ = math.log2(n)
    fam = gauge.family
    if fam is GaugeFamily.PURE_S:
        return base
    if fam is GaugeFamily.PHI:
        return base - gauge.c * n / ln_**2
    if fam is GaugeFamily.PSI_THETA:
        return base - n / ln_**gauge.theta
    if fam is GaugeFamily.PHI_GAMMA:
        return base - gauge.c * n / ln_ ** (2.0 + gauge.gamma)
    if fam is GaugeFamily.PSI_G:
        gval = gauge.g(ln_)
        if gval <= 0:
            raise ValueError(f"g(log2 n) must be positive, got {gval}")
        return base - n / (math.log(2) * gval)
    raise ValueError(f"unknown gauge family {fam}")
