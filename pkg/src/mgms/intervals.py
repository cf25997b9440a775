"""Rational-endpoint interval arithmetic with certified transcendentals.

Ring operations (+, -, *) on `CertifiedInterval` are exact: endpoints are
`fractions.Fraction`, so no rounding happens at all.  Only transcendental
maps (ln, log2, the entropy functions) round, and those are delegated to
mpmath's interval context at 120 bits with outward rounding; the resulting
dyadic endpoints convert back to Fraction exactly.  Every operation's
output therefore encloses the true image of its input interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import iv

iv.prec = 120

Rational = Union[int, Fraction]
Scalar = Union[int, float, Fraction]


def _to_fraction(x: Scalar) -> Fraction:
    # float -> Fraction is exact (binary64 values are dyadic rationals)
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _to_fraction(self.lo))
        object.__setattr__(self, "hi", _to_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @staticmethod
    def point(x: Scalar) -> "CertifiedInterval":
        f = _to_fraction(x)
        return CertifiedInterval(f, f)

    # -- inspection ----------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def mid_float(self) -> float:
        return float(self.midpoint)

    def contains(self, x: Scalar) -> bool:
        f = _to_fraction(x)
        return self.lo <= f <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def __str__(self) -> str:
        return f"[{float(self.lo)!r}, {float(self.hi)!r}]"

    # -- exact ring arithmetic ------------------------------------------------

    def _coerce(self, other) -> "CertifiedInterval":
        if isinstance(other, CertifiedInterval):
            return other
        return CertifiedInterval.point(other)

    def __add__(self, other) -> "CertifiedInterval":
        o = self._coerce(other)
        return CertifiedInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "CertifiedInterval":
        return CertifiedInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> "CertifiedInterval":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CertifiedInterval":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "CertifiedInterval":
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return CertifiedInterval(min(products), max(products))

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "CertifiedInterval":
        f = _to_fraction(c)
        lo, hi = self.lo * f, self.hi * f
        return CertifiedInterval(min(lo, hi), max(lo, hi))

    def widen(self, pad: Scalar) -> "CertifiedInterval":
        f = _to_fraction(pad)
        if f < 0:
            raise ValueError("pad must be nonnegative")
        return CertifiedInterval(self.lo - f, self.hi + f)

    def hull(self, other: "CertifiedInterval") -> "CertifiedInterval":
        return CertifiedInterval(min(self.lo, other.lo), max(self.hi, other.hi))


# -- mpmath bridge ------------------------------------------------------------


def _fraction_to_mpf(x: Fraction, rounding: str) -> mpmath.mpf:
    """Directed-rounded conversion ('f' floor, 'c' ceiling)."""
    return mpmath.fdiv(x.numerator, x.denominator, prec=iv.prec, rounding=rounding)


def _raw_to_fraction(raw: tuple) -> Fraction:
    sign, man, exp, _ = raw
    man = int(man)
    if man == 0:
        return Fraction(0)
    val = Fraction(man) * Fraction(2) ** exp
    return -val if sign else val


def _to_iv(ci: CertifiedInterval):
    return iv.mpf([_fraction_to_mpf(ci.lo, "f"), _fraction_to_mpf(ci.hi, "c")])


def _from_iv(x) -> CertifiedInterval:
    # endpoints from the raw mpi tuples: exact, no context-precision rounding
    raw_a, raw_b = x._mpi_
    return CertifiedInterval(_raw_to_fraction(raw_a), _raw_to_fraction(raw_b))


def iv_ln(ci: CertifiedInterval) -> CertifiedInterval:
    """Enclosure of natural log over the interval; requires lo > 0."""
    if ci.lo <= 0:
        raise ValueError(f"log of nonpositive interval {ci}")
    return _from_iv(iv.log(_to_iv(ci)))


_LN2 = _from_iv(iv.log(iv.mpf(2)))


def ln2_interval() -> CertifiedInterval:
    return _LN2


def iv_log2(ci: CertifiedInterval) -> CertifiedInterval:
    """Enclosure of log2 over the interval; requires lo > 0."""
    if ci.lo <= 0:
        raise ValueError(f"log of nonpositive interval {ci}")
    return _from_iv(iv.log(_to_iv(ci)) / iv.log(iv.mpf(2)))


def iv_log2_int(n: int) -> CertifiedInterval:
    """Enclosure of log2 of a positive integer."""
    if n < 1:
        raise ValueError(f"need a positive integer, got {n}")
    return iv_log2(CertifiedInterval.point(n))


def _one_minus(ci: CertifiedInterval) -> CertifiedInterval:
    return CertifiedInterval(1 - ci.hi, 1 - ci.lo)


def iv_entropy_nat(ci: CertifiedInterval) -> CertifiedInterval:
    """Enclosure of -x ln x - (1-x) ln(1-x); requires interval inside (0,1)."""
    if not (0 < ci.lo and ci.hi < 1):
        raise ValueError(f"entropy needs an interval inside (0,1), got {ci}")
    x = _to_iv(ci)
    one = iv.mpf(1)
    return _from_iv(-(x * iv.log(x)) - (one - x) * iv.log(one - x))


def iv_entropy_bits(ci: CertifiedInterval) -> CertifiedInterval:
    """Enclosure of the base-2 entropy -x log2 x - (1-x) log2(1-x)."""
    if not (0 < ci.lo and ci.hi < 1):
        raise ValueError(f"entropy needs an interval inside (0,1), got {ci}")
    x = _to_iv(ci)
    one = iv.mpf(1)
    ln2 = iv.log(iv.mpf(2))
    return _from_iv((-(x * iv.log(x)) - (one - x) * iv.log(one - x)) / ln2)


def iv_ln_ratio(ci: CertifiedInterval) -> CertifiedInterval:
    """Enclosure of ln((1-x)/x), the derivative of the natural-log entropy."""
    if not (0 < ci.lo and ci.hi < 1):
        raise ValueError(f"need an interval inside (0,1), got {ci}")
    x = _to_iv(ci)
    return _from_iv(iv.log((iv.mpf(1) - x) / x))


def iv_log2_ratio(ci: CertifiedInterval) -> CertifiedInterval:
    """Enclosure of log2((1-x)/x), the derivative of the base-2 entropy."""
    if not (0 < ci.lo and ci.hi < 1):
        raise ValueError(f"need an interval inside (0,1), got {ci}")
    x = _to_iv(ci)
    return _from_iv(iv.log((iv.mpf(1) - x) / x) / iv.log(iv.mpf(2)))
