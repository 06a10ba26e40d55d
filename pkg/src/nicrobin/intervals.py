"""Verified real arithmetic on top of MPFR directed rounding.

Every operation here returns an enclosure of the exact real result: lower
bounds are computed in a RoundDown context, upper bounds in a RoundUp
context, so the truth always lies inside [lo, hi].  MPFR guarantees correct
rounding for its transcendental functions, which is what makes the
enclosures rigorous rather than heuristic.

Because the mantissa sizes used by the escalation schedule are nested
(every 64-bit float is also a 128-bit float, and so on), enclosures computed
at higher precision are contained in the lower-precision ones.  Certified
comparisons against exact rationals are therefore stable under escalation:
once a comparison is decided it stays decided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from enum import Enum
from typing import Iterable, Tuple

import gmpy2
from gmpy2 import mpfr, mpq

MIN_PRECISION_BITS = 32

_CTX_CACHE: dict = {}


def _ctx(bits: int):
    """(round-down, round-up) context pair at the given mantissa size."""
    pair = _CTX_CACHE.get(bits)
    if pair is None:
        pair = (
            gmpy2.context(precision=bits, round=gmpy2.RoundDown),
            gmpy2.context(precision=bits, round=gmpy2.RoundUp),
        )
        _CTX_CACHE[bits] = pair
    return pair


def _zero(bits: int) -> mpfr:
    return mpfr(0, bits)


def to_mpfr_down(x, bits: int) -> mpfr:
    """Largest `bits`-bit float <= x (x an int, Fraction, mpq or mpfr)."""
    d, _ = _ctx(bits)
    if isinstance(x, Fraction):
        x = mpq(x.numerator, x.denominator)
    return d.add(_zero(bits), x)


def to_mpfr_up(x, bits: int) -> mpfr:
    """Smallest `bits`-bit float >= x."""
    _, u = _ctx(bits)
    if isinstance(x, Fraction):
        x = mpq(x.numerator, x.denominator)
    return u.add(_zero(bits), x)


@dataclass(frozen=True)
class Interval:
    """A rigorously rounded enclosure [lo, hi] of some exact real quantity."""

    lo: mpfr
    hi: mpfr
    precision_bits: int

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> mpfr:
        _, u = _ctx(self.precision_bits)
        return u.sub(self.hi, self.lo)

    def contains(self, x) -> bool:
        """Exact containment test; x may be an int, Fraction, mpq or mpfr."""
        if isinstance(x, Fraction):
            x = mpq(x.numerator, x.denominator)
        return self.lo <= x <= self.hi

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def add(self, other: "Interval") -> "Interval":
        bits = min(self.precision_bits, other.precision_bits)
        d, u = _ctx(bits)
        return Interval(d.add(self.lo, other.lo), u.add(self.hi, other.hi), bits)

    def sub(self, other: "Interval") -> "Interval":
        bits = min(self.precision_bits, other.precision_bits)
        d, u = _ctx(bits)
        return Interval(d.sub(self.lo, other.hi), u.sub(self.hi, other.lo), bits)

    def mul(self, other: "Interval") -> "Interval":
        bits = min(self.precision_bits, other.precision_bits)
        d, u = _ctx(bits)
        pairs = [
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        ]
        lo = min(d.mul(a, b) for a, b in pairs)
        hi = max(u.mul(a, b) for a, b in pairs)
        return Interval(lo, hi, bits)

    def div(self, other: "Interval") -> "Interval":
        if not other.lo > 0:
            raise ValueError("interval division requires a positive divisor")
        bits = min(self.precision_bits, other.precision_bits)
        d, u = _ctx(bits)
        pairs = [
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        ]
        lo = min(d.div(a, b) for a, b in pairs)
        hi = max(u.div(a, b) for a, b in pairs)
        return Interval(lo, hi, bits)

    def exp(self) -> "Interval":
        d, u = _ctx(self.precision_bits)
        return Interval(d.exp(self.lo), u.exp(self.hi), self.precision_bits)

    def log(self) -> "Interval":
        if not self.lo > 0:
            raise ValueError("log of an interval reaching <= 0")
        d, u = _ctx(self.precision_bits)
        return Interval(d.log(self.lo), u.log(self.hi), self.precision_bits)

    def abs_sub(self, other: "Interval") -> "Interval":
        """Enclosure of |self - other| (assumes the exact values may coincide)."""
        diff = self.sub(other)
        bits = diff.precision_bits
        if diff.lo >= 0:
            return diff
        if diff.hi <= 0:
            return Interval(-diff.hi, -diff.lo, bits)
        return Interval(_zero(bits), max(-diff.lo, diff.hi), bits)


def exact_interval(x, bits: int) -> Interval:
    """Enclosure of an exact integer or rational at the given precision."""
    return Interval(to_mpfr_down(x, bits), to_mpfr_up(x, bits), bits)


class VerdictKind(Enum):
    BELOW = "below"
    ABOVE_OR_EQUAL = "above_or_equal"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a certified comparison against e^gamma * loglog n.

    BELOW certifies strict `<`; ABOVE_OR_EQUAL certifies `>=` (in practice
    strict `>`, since equality with the transcendental threshold is never
    certified).  UNDECIDED records the last precision attempted.
    """

    kind: VerdictKind
    precision_bits: int

    @property
    def is_below(self) -> bool:
        return self.kind is VerdictKind.BELOW

    @property
    def is_above_or_equal(self) -> bool:
        return self.kind is VerdictKind.ABOVE_OR_EQUAL

    @property
    def is_undecided(self) -> bool:
        return self.kind is VerdictKind.UNDECIDED

    def __str__(self) -> str:
        return self.kind.value


DEFAULT_SCHEDULE: Tuple[int, ...] = (64, 128, 256, 512, 1024, 4096)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Escalation schedule of mantissa sizes for certified comparisons."""

    schedule: Tuple[int, ...] = DEFAULT_SCHEDULE

    def __post_init__(self):
        if not self.schedule:
            raise ValueError("empty precision schedule")
        if any(b < MIN_PRECISION_BITS for b in self.schedule):
            raise ValueError(f"schedule entries must be >= {MIN_PRECISION_BITS}")
        if list(self.schedule) != sorted(self.schedule):
            raise ValueError("schedule must be non-decreasing")

    def doubled(self) -> "PrecisionPolicy":
        return PrecisionPolicy(tuple(2 * b for b in self.schedule))


DEFAULT_POLICY = PrecisionPolicy()

_EGAMMA_CACHE: dict = {}


def egamma(precision_bits: int) -> Interval:
    """Enclosure of e^gamma, gamma the Euler-Mascheroni constant."""
    if precision_bits < MIN_PRECISION_BITS:
        raise ValueError(f"precision_bits must be >= {MIN_PRECISION_BITS}")
    cached = _EGAMMA_CACHE.get(precision_bits)
    if cached is None:
        d, u = _ctx(precision_bits)
        cached = Interval(
            d.exp(d.const_euler()), u.exp(u.const_euler()), precision_bits
        )
        _EGAMMA_CACHE[precision_bits] = cached
    return cached


_LOGP_CACHE: dict = {}


def _log_prime(p: int, bits: int):
    key = (p, bits)
    pair = _LOGP_CACHE.get(key)
    if pair is None:
        d, u = _ctx(bits)
        pair = (d.log(p), u.log(p))
        if len(_LOGP_CACHE) > 1 << 20:
            _LOGP_CACHE.clear()
        _LOGP_CACHE[key] = pair
    return pair


def log_value(factors: Iterable[Tuple[int, int]], precision_bits: int) -> Interval:
    """Enclosure of log(prod p^e) accumulated as sum(e * log p).

    The value itself is never materialized, so this works for numbers with
    millions of digits.
    """
    d, u = _ctx(precision_bits)
    lo = _zero(precision_bits)
    hi = _zero(precision_bits)
    for p, e in factors:
        l_lo, l_hi = _log_prime(p, precision_bits)
        lo = d.add(lo, d.mul(e, l_lo))
        hi = u.add(hi, u.mul(e, l_hi))
    return Interval(lo, hi, precision_bits)


def loglog(factors, precision_bits: int) -> Interval:
    """Enclosure of log log n for n >= 2 given as factor pairs.

    n = 2 is valid and yields a strictly negative enclosure; n = 1 (an empty
    factorization) is a domain error and must be handled by callers.
    """
    factors = tuple(factors)
    if not factors:
        raise ValueError("log log n undefined for n = 1")
    return log_value(factors, precision_bits).log()


def threshold_interval(factors, precision_bits: int) -> Interval:
    """Enclosure of e^gamma * log log n."""
    return egamma(precision_bits).mul(loglog(factors, precision_bits))


def compare_threshold(lhs, factors, policy: PrecisionPolicy = DEFAULT_POLICY) -> Verdict:
    """Certified three-way comparison of an exact rational against the threshold.

    Returns BELOW when lhs < e^gamma log log n is certified, ABOVE_OR_EQUAL
    when lhs > e^gamma log log n is certified (n = 1 is ABOVE_OR_EQUAL by
    convention), and UNDECIDED only when the whole escalation schedule is
    exhausted with the enclosure still straddling lhs.
    """
    factors = tuple(factors)
    if isinstance(lhs, Fraction):
        lhs_q = mpq(lhs.numerator, lhs.denominator)
    else:
        lhs_q = mpq(lhs)
    if lhs_q < 0:
        raise ValueError("lhs must be a non-negative rational")
    if not factors:
        # n = 1: log log 1 undefined, assigned to the >= side by convention.
        return Verdict(VerdictKind.ABOVE_OR_EQUAL, policy.schedule[0])
    bits = policy.schedule[0]
    for bits in policy.schedule:
        thr = threshold_interval(factors, bits)
        if lhs_q < thr.lo:
            return Verdict(VerdictKind.BELOW, bits)
        if lhs_q > thr.hi:
            return Verdict(VerdictKind.ABOVE_OR_EQUAL, bits)
    return Verdict(VerdictKind.UNDECIDED, bits)


def float_down(x: mpfr) -> float:
    """Largest binary64 value <= x."""
    d, _ = _ctx(53)
    return float(d.add(_zero(53), x))


def float_up(x: mpfr) -> float:
    """Smallest binary64 value >= x."""
    _, u = _ctx(53)
    return float(u.add(_zero(53), x))
