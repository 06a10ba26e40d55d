"""Exact multiplicative arithmetic on factored integers.

Everything works on the (prime, exponent) representation; the integer value
is only materialized on demand.  Ratios like n/phi(n) and sigma(n)/n are
exact `fractions.Fraction` values, so the rational side of every inequality
verdict is free of rounding.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Tuple

import numpy as np

from .config import PrimeClass, PrimeClassConfig
from .errors import UnfactoredError
from .intervals import (
    DEFAULT_POLICY,
    Interval,
    PrecisionPolicy,
    Verdict,
    compare_threshold,
    loglog,
    threshold_interval,
)
from .primes import deterministic_is_prime, sieve_primes

# Above this size the CLI stops printing positional decimal digits inline
# and falls back to factorization plus a rounded scientific value.
DECIMAL_BIT_THRESHOLD = 512


@dataclass(frozen=True)
class FactoredNumber:
    """A natural number as a sorted tuple of (prime, exponent) pairs.

    The empty tuple represents 1.
    """

    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        last = 1
        for p, e in self.factors:
            if p <= last:
                raise ValueError("primes must be strictly increasing")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            last = p

    @classmethod
    def from_factors(
        cls, pairs: Iterable[Tuple[int, int]], check_primality: bool = False
    ) -> "FactoredNumber":
        pairs = tuple(sorted((int(p), int(e)) for p, e in pairs))
        if check_primality:
            for p, _ in pairs:
                if not deterministic_is_prime(p):
                    raise ValueError(f"{p} is not prime")
        return cls(pairs)

    @property
    def value(self) -> int:
        return reduce(lambda acc, pe: acc * pe[0] ** pe[1], self.factors, 1)

    @property
    def bit_length_estimate(self) -> int:
        return int(sum(e * math.log2(p) for p, e in self.factors)) + 1

    @property
    def is_one(self) -> bool:
        return not self.factors

    def decimal(self, bit_threshold: Optional[int] = DECIMAL_BIT_THRESHOLD) -> str:
        """Exact decimal string; factored form beyond the bit threshold."""
        if bit_threshold is None or self.bit_length_estimate <= bit_threshold:
            return str(self.value)
        return str(self)

    def scientific(self) -> str:
        """Rounded scientific value, display only (never used in verdicts)."""
        if self.is_one:
            return "1"
        log10 = sum(e * math.log10(p) for p, e in self.factors)
        exp10 = int(log10)
        return f"{10 ** (log10 - exp10):.4f}e{exp10}"

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)

    def __mul__(self, other: "FactoredNumber") -> "FactoredNumber":
        merged = dict(self.factors)
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return FactoredNumber(tuple(sorted(merged.items())))

    def pow(self, k: int) -> "FactoredNumber":
        if k < 1:
            raise ValueError("exponent must be >= 1")
        return FactoredNumber(tuple((p, e * k) for p, e in self.factors))

    def with_exponent(self, prime: int, exponent: int) -> "FactoredNumber":
        """Copy with the exponent of one (present) prime replaced."""
        found = False
        out = []
        for p, e in self.factors:
            if p == prime:
                out.append((p, exponent))
                found = True
            else:
                out.append((p, e))
        if not found:
            raise ValueError(f"{prime} does not divide {self}")
        return FactoredNumber(tuple(out))

    def exponent_of(self, prime: int) -> int:
        for p, e in self.factors:
            if p == prime:
                return e
        return 0

    def divides(self, other: "FactoredNumber") -> bool:
        their = dict(other.factors)
        return all(their.get(p, 0) >= e for p, e in self.factors)


ONE = FactoredNumber(())


def f_ratio(n: FactoredNumber) -> Fraction:
    """n / phi(n) = prod p/(p-1), exact and reduced."""
    num = den = 1
    for p, _ in n.factors:
        num *= p
        den *= p - 1
    return Fraction(num, den)


def sigma_ratio(n: FactoredNumber) -> Fraction:
    """sigma(n) / n = prod (p^(e+1) - 1) / (p^e (p - 1)), exact."""
    out = Fraction(1)
    for p, e in n.factors:
        out *= Fraction(p ** (e + 1) - 1, p**e * (p - 1))
    return out


def kernel(n: FactoredNumber) -> FactoredNumber:
    """Square-free kernel: the product of the distinct prime divisors."""
    return FactoredNumber(tuple((p, 1) for p, _ in n.factors))


def omega(n: FactoredNumber) -> int:
    return len(n.factors)


def bigomega(n: FactoredNumber) -> int:
    return sum(e for _, e in n.factors)


def omega_class(n: FactoredNumber, cls: PrimeClass, config: PrimeClassConfig) -> int:
    return sum(1 for p, _ in n.factors if config.classify(p) is cls)


def s_of(n: FactoredNumber, config: PrimeClassConfig) -> FactoredNumber:
    """The core: P-prime divisors to the first power, Q-prime divisors squared."""
    return FactoredNumber(
        tuple(
            (p, 1 if config.classify(p) is PrimeClass.P else 2) for p, _ in n.factors
        )
    )


def in_S(n: FactoredNumber, config: PrimeClassConfig) -> bool:
    """True iff every Q-prime divisor occurs to exponent >= 2."""
    return all(
        e >= 2 for p, e in n.factors if config.classify(p) is PrimeClass.Q
    )


def in_Y(n: FactoredNumber, config: PrimeClassConfig) -> bool:
    """True iff n equals its own core."""
    return n == s_of(n, config)


def is_sum_two_squares(n: FactoredNumber) -> bool:
    """Fermat's criterion: every prime = 3 (mod 4) occurs to even exponent."""
    return all(e % 2 == 0 for p, e in n.factors if p % 4 == 3)


def representable(n: FactoredNumber, config: PrimeClassConfig) -> bool:
    """Generic form-representability filter: all Q-exponents even.

    For the mod4 partition this coincides with is_sum_two_squares; for the
    a2plus3b2 partition it characterizes values of a^2 + 3 b^2.
    """
    return all(
        e % 2 == 0 for p, e in n.factors if config.classify(p) is PrimeClass.Q
    )


def nicolas_verdict(
    n: FactoredNumber, policy: PrecisionPolicy = DEFAULT_POLICY
) -> Verdict:
    """BELOW iff n/phi(n) < e^gamma log log n is certified (n satisfies the
    Nicolas inequality); ABOVE_OR_EQUAL marks a violator."""
    return compare_threshold(f_ratio(n), n.factors, policy)


def robin_verdict(
    n: FactoredNumber, policy: PrecisionPolicy = DEFAULT_POLICY
) -> Verdict:
    """Same three-way comparison for sigma(n)/n (the Robin inequality)."""
    return compare_threshold(sigma_ratio(n), n.factors, policy)


def loglog_interval(n: FactoredNumber, precision_bits: int) -> Interval:
    """Enclosure of log log n; domain error for n = 1."""
    return loglog(n.factors, precision_bits)


def nicolas_threshold(n: FactoredNumber, precision_bits: int = 64) -> Optional[Interval]:
    """Enclosure of e^gamma log log n, or None for n = 1."""
    if n.is_one:
        return None
    return threshold_interval(n.factors, precision_bits)


_TRIAL_PRIMES: Optional[np.ndarray] = None
_TRIAL_LIMIT = 0


def _trial_primes(limit: int) -> np.ndarray:
    global _TRIAL_PRIMES, _TRIAL_LIMIT
    if _TRIAL_PRIMES is None or _TRIAL_LIMIT < limit:
        _TRIAL_PRIMES = sieve_primes(limit)
        _TRIAL_LIMIT = limit
    return _TRIAL_PRIMES


def factorize(value: int, trial_limit: int = 1_000_000) -> FactoredNumber:
    """Complete factorization, or an UnfactoredError; never a partial answer.

    Trial division by sieved primes up to `trial_limit`, then deterministic
    primality certification of the remaining cofactor.  A composite cofactor
    (or one beyond the certified primality range) raises; the caller may
    supply the factorization manually in that case.
    """
    if value < 1:
        raise ValueError("only natural numbers >= 1 can be factored")
    if value == 1:
        return ONE
    pairs = []
    rest = value
    for p in _trial_primes(trial_limit):
        p = int(p)
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            pairs.append((p, e))
    if rest > 1:
        if rest <= trial_limit * trial_limit or deterministic_is_prime(rest):
            # below the square of the trial bound the cofactor is prime by
            # construction; otherwise certification decided it
            pairs.append((rest, 1))
        else:
            raise UnfactoredError(value, rest)
    return FactoredNumber(tuple(pairs))


_FACTOR_EXPR = re.compile(r"^\d+(\^\d+)?(\*\d+(\^\d+)?)*$")


def parse_number(text: str, trial_limit: int = 1_000_000) -> FactoredNumber:
    """Parse a decimal value or a factored expression like `2^3*3^2`."""
    text = text.strip()
    if text.isdigit():
        return factorize(int(text), trial_limit)
    if not _FACTOR_EXPR.match(text):
        raise ValueError(f"cannot parse {text!r} as a number or factored expression")
    merged: dict = {}
    for term in text.split("*"):
        base, _, exp = term.partition("^")
        p, e = int(base), int(exp) if exp else 1
        if not deterministic_is_prime(p):
            raise ValueError(f"factored expression base {p} is not prime")
        if e < 1:
            raise ValueError("exponents in factored expressions must be >= 1")
        merged[p] = merged.get(p, 0) + e
    return FactoredNumber(tuple(sorted(merged.items())))
