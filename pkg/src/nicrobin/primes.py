"""Prime generation, class partitions, and class counting functions.

The sieve is segmented: composites are marked window by window, so memory
stays flat no matter how large the requested limit is (only the final prime
array grows).  Class-restricted Chebyshev sums theta_P / theta_Q are kept as
prefix enclosures accumulated with directed rounding, so any theta query
returns a rigorous interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import PrimeClass, PrimeClassConfig
from .errors import ResourceError
from .intervals import Interval, _ctx, _zero, float_down, float_up

_SIEVE_WINDOW = 1 << 22
MAX_SIEVE_LIMIT = 200_000_000  # primes array alone is ~90 MB here

# Bases certifying primality for every n < 3.317e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_CERTIFIED_BOUND = 3_317_044_064_679_887_385_961_981


def deterministic_is_prime(n: int) -> bool:
    """Strong-pseudoprime test with a base set proven complete for its range.

    Raises ResourceError for n beyond the certified range rather than
    degrading to a probabilistic answer.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    if n >= _MR_CERTIFIED_BOUND:
        raise ResourceError(
            f"{n} exceeds the deterministically certified primality range"
        )
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, via a segmented sieve of Eratosthenes."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    if limit > MAX_SIEVE_LIMIT:
        raise ResourceError(
            f"sieve limit {limit} exceeds the {MAX_SIEVE_LIMIT} budget; "
            "use the windowed range scan for larger sweeps"
        )
    root = int(limit**0.5)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, int(root**0.5) + 1):
        if base[p]:
            base[p * p :: p] = False
    base_primes = np.nonzero(base)[0]

    chunks = [base_primes[base_primes <= limit]]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + _SIEVE_WINDOW - 1, limit)
        mark = np.ones(hi - lo + 1, dtype=bool)
        for p in base_primes:
            p = int(p)
            start = ((lo + p - 1) // p) * p
            if start <= hi:
                mark[start - lo :: p] = False
        chunks.append(np.nonzero(mark)[0] + lo)
        lo = hi + 1
    return np.concatenate(chunks).astype(np.int64)


@dataclass
class _ThetaPrefix:
    """Directed-rounded prefix sums of log p along one class sequence."""

    lo: np.ndarray  # float64, rounded toward -inf at every step
    hi: np.ndarray  # float64, rounded toward +inf at every step


@dataclass
class PrimeTable:
    """Immutable snapshot of sieved primes split into the two classes."""

    limit: int
    config: PrimeClassConfig
    primes: np.ndarray
    p_primes: np.ndarray
    q_primes: np.ndarray
    _theta: dict = field(default_factory=dict, repr=False)

    THETA_BITS = 64

    def class_seq(self, cls: PrimeClass) -> np.ndarray:
        return self.p_primes if cls is PrimeClass.P else self.q_primes

    def pi(self, x: int) -> int:
        self._check_range(x)
        return int(np.searchsorted(self.primes, x, side="right"))

    def pi_class(self, x: int, cls: PrimeClass) -> int:
        self._check_range(x)
        return int(np.searchsorted(self.class_seq(cls), x, side="right"))

    def nth_class_prime(self, cls: PrimeClass, i: int) -> int:
        """The i-th class prime, 1-based; IndexError if beyond the table."""
        if i < 1:
            raise IndexError("class prime index is 1-based")
        seq = self.class_seq(cls)
        if i > len(seq):
            raise IndexError(f"table holds only {len(seq)} {cls.value}-primes")
        return int(seq[i - 1])

    def theta_class(self, x: int, cls: PrimeClass) -> Interval:
        """Enclosure of sum(log p : p <= x, p in class)."""
        self._check_range(x)
        prefix = self._theta_prefix(cls)
        k = int(np.searchsorted(self.class_seq(cls), x, side="right"))
        bits = self.THETA_BITS
        return Interval(
            _ctx(bits)[0].add(_zero(bits), prefix.lo[k]),
            _ctx(bits)[1].add(_zero(bits), prefix.hi[k]),
            bits,
        )

    def _theta_prefix(self, cls: PrimeClass) -> _ThetaPrefix:
        cached = self._theta.get(cls)
        if cached is not None:
            return cached
        seq = self.class_seq(cls)
        d, u = _ctx(self.THETA_BITS)
        lo = np.empty(len(seq) + 1)
        hi = np.empty(len(seq) + 1)
        lo[0] = hi[0] = 0.0
        acc_lo = _zero(self.THETA_BITS)
        acc_hi = _zero(self.THETA_BITS)
        for k, p in enumerate(seq, start=1):
            p = int(p)
            acc_lo = d.add(acc_lo, d.log(p))
            acc_hi = u.add(acc_hi, u.log(p))
            lo[k] = float_down(acc_lo)
            hi[k] = float_up(acc_hi)
        cached = _ThetaPrefix(lo=lo, hi=hi)
        self._theta[cls] = cached
        return cached

    def _check_range(self, x) -> None:
        if x > self.limit:
            raise ValueError(f"x = {x} beyond table limit {self.limit}")


def build_table(limit: int, config: PrimeClassConfig) -> PrimeTable:
    """Sieve and classify all primes <= limit."""
    if limit < 2:
        raise ValueError("table limit must be >= 2")
    primes = sieve_primes(limit)
    in_p = config.classify_array(primes)
    return PrimeTable(
        limit=limit,
        config=config,
        primes=primes,
        p_primes=primes[in_p],
        q_primes=primes[~in_p],
    )


def classify(p: int, config: PrimeClassConfig) -> PrimeClass:
    """Class of a prime; composite input is rejected."""
    if not deterministic_is_prime(p):
        raise ValueError(f"{p} is not prime")
    return config.classify(p)


class PrimePool:
    """Auto-extending facade over immutable PrimeTable snapshots.

    Extension replaces the current table with a larger one (doubling), never
    mutating a table other threads may hold.
    """

    def __init__(self, config: PrimeClassConfig, initial_limit: int = 1 << 17):
        self.config = config
        self._table = build_table(max(initial_limit, 4), config)

    @property
    def table(self) -> PrimeTable:
        return self._table

    def require_limit(self, limit: int) -> PrimeTable:
        t = self._table
        if t.limit >= limit:
            return t
        new_limit = t.limit
        while new_limit < limit:
            new_limit *= 2
        new_table = build_table(new_limit, self.config)
        # install only if still an improvement; concurrent extenders may have
        # raced, and the caller must get a table satisfying its own request
        if new_table.limit > self._table.limit:
            self._table = new_table
        return new_table

    def require_class_count(self, cls: PrimeClass, count: int) -> PrimeTable:
        t = self._table
        while len(t.class_seq(cls)) < count:
            t = self.require_limit(t.limit * 2)
        return t

    def nth_class_prime(self, cls: PrimeClass, i: int) -> int:
        return self.require_class_count(cls, i).nth_class_prime(cls, i)

    def next_class_prime(self, x, cls: PrimeClass) -> int:
        """Smallest class prime strictly greater than x (auto-extending)."""
        t = self._table
        while True:
            seq = t.class_seq(cls)
            idx = int(np.searchsorted(seq, x, side="right"))
            if idx < len(seq):
                return int(seq[idx])
            t = self.require_limit(t.limit * 2)

    def prev_class_prime(self, x, cls: PrimeClass) -> Optional[int]:
        """Largest class prime strictly smaller than x, or None."""
        t = self.require_limit(max(4, int(x) + 1))
        seq = t.class_seq(cls)
        idx = int(np.searchsorted(seq, x, side="left"))
        if idx == 0:
            return None
        return int(seq[idx - 1])

    def pi_class(self, x: int, cls: PrimeClass) -> int:
        return self.require_limit(x).pi_class(x, cls)

    def theta_class(self, x: int, cls: PrimeClass) -> Interval:
        return self.require_limit(x).theta_class(x, cls)


def density_profile(
    sample_points: Sequence[int], config: PrimeClassConfig, table: PrimeTable
) -> List[Tuple[int, Fraction]]:
    """Exact finite-range ratios pi_P(x) / pi(x) at the sample points."""
    out = []
    for x in sample_points:
        total = table.pi(x)
        if total == 0:
            raise ValueError(f"no primes <= {x}")
        out.append((x, Fraction(table.pi_class(x, PrimeClass.P), total)))
    return out
