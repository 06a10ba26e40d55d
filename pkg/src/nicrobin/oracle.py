"""Independent verification paths.

The brute-force scan walks every integer in range with a windowed sieve and
shares nothing with the enumerator's candidate generation: membership is
recomputed from scratch (trial-division factorization, value-level class
tests) and only the certified comparison layer is reused.  The remaining
operations spot-check the analytic estimates the search bounds rest on, and
build the classical witness sequence whose ratios approach e^gamma.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .config import PrimeClass, PrimeClassConfig
from .errors import ResourceError, UndecidedError
from .factored import f_ratio, factorize, in_S
from .intervals import (
    Interval,
    _ctx,
    _zero,
    compare_threshold,
    egamma,
    to_mpfr_down,
)
from .primes import PrimePool, sieve_primes
from .enumeration import enumerate_exceptions

BRUTE_ADVISORY_LIMIT = 100_000_000
_SCAN_WINDOW = 1 << 20
_SCAN_MARGIN = 1e-9  # dwarfs float64 error over <= 9 log terms
_EULER_GAMMA_LOW = 0.5772156649015328


@dataclass(frozen=True)
class RangeReport:
    """Outcome of one brute-force range scan, optionally diffed."""

    bound: int
    exceptions: Tuple[int, ...]
    enumerated: Optional[Tuple[int, ...]] = None
    agreement: Optional[bool] = None
    brute_seconds: float = 0.0
    enumerate_seconds: float = 0.0

    @property
    def missing_from_enumerator(self) -> Tuple[int, ...]:
        if self.enumerated is None:
            return ()
        return tuple(sorted(set(self.exceptions) - set(self.enumerated)))

    @property
    def extra_in_enumerator(self) -> Tuple[int, ...]:
        if self.enumerated is None:
            return ()
        return tuple(sorted(set(self.enumerated) - set(self.exceptions)))


def _scan_window(lo: int, hi: int, base_primes: np.ndarray, q_base: np.ndarray,
                 config: PrimeClassConfig) -> np.ndarray:
    """Candidate violators in [lo, hi]: in the constraint set and with the
    float log of n/phi(n) not provably below the threshold."""
    size = hi - lo + 1
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    logf = np.zeros(size)
    bad = np.zeros(size, dtype=bool)  # True = some Q-prime to exponent 1
    for p, is_q in zip(base_primes, q_base):
        p = int(p)
        start = ((lo + p - 1) // p) * p
        if start > hi:
            continue
        i0 = start - lo
        logf[i0::p] += math.log(p / (p - 1.0))
        if is_q:
            view = bad[i0::p]
            only_once = np.ones(len(view), dtype=bool)
            p2 = p * p
            s2 = ((lo + p2 - 1) // p2) * p2
            if s2 <= hi:
                only_once[(s2 - start) // p :: p] = False
            np.logical_or(view, only_once, out=view)
        pk = p
        while pk <= hi:
            sk = ((lo + pk - 1) // pk) * pk
            if sk > hi:
                break
            rem[sk - lo :: pk] //= p
            pk *= p
    big = rem > 1
    if big.any():
        r = rem[big].astype(float)
        logf[big] += np.log(r / (r - 1.0))
        # a residual prime exceeds sqrt(n), so it divides n exactly once
        bad[big] |= ~config.classify_array(rem[big])
    n = np.arange(lo, hi + 1, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        thr = _EULER_GAMMA_LOW + np.log(np.log(np.log(n)))
    # NaN threshold (n = 1, 2) is trivially violated; keep as candidate
    keep = ~bad & ~(logf < thr - _SCAN_MARGIN)
    return lo + np.nonzero(keep)[0]


def brute_force_exceptions(
    bound: int, config: PrimeClassConfig, window: int = _SCAN_WINDOW
) -> List[int]:
    """Every violator in [1, bound], found by scanning all integers.

    The windowed scan holds only fixed-size arrays regardless of the bound.
    Float screening is used solely to discard clear satisfiers (with a
    margin far above the accumulated error); every survivor is re-checked
    exactly from its own trial-division factorization.
    """
    if bound > BRUTE_ADVISORY_LIMIT:
        raise ResourceError(
            f"brute-force bound {bound} above the advisory limit {BRUTE_ADVISORY_LIMIT}"
        )
    if bound < 1:
        return []
    base = sieve_primes(max(2, math.isqrt(bound)))
    q_base = ~config.classify_array(base) if len(base) else np.zeros(0, bool)
    out: List[int] = []
    for lo in range(1, bound + 1, window):
        hi = min(lo + window - 1, bound)
        for cand in _scan_window(lo, hi, base, q_base, config):
            n = factorize(int(cand))
            if not in_S(n, config):
                continue
            v = compare_threshold(f_ratio(n), n.factors, config.precision)
            if v.is_undecided:
                raise UndecidedError(str(cand), v.precision_bits)
            if v.is_above_or_equal:
                out.append(int(cand))
    return out


def cross_validate(
    bound: int, config: PrimeClassConfig, pool: Optional[PrimePool] = None
) -> RangeReport:
    """Run the enumerator and the brute-force scan, diff them, report."""
    t0 = time.time()
    brute = brute_force_exceptions(bound, config)
    t1 = time.time()
    full = enumerate_exceptions(config, pool)
    enumerated = tuple(v for v in full.values() if v <= bound)
    t2 = time.time()
    return RangeReport(
        bound=bound,
        exceptions=tuple(brute),
        enumerated=enumerated,
        agreement=tuple(brute) == enumerated,
        brute_seconds=round(t1 - t0, 3),
        enumerate_seconds=round(t2 - t1, 3),
    )


def verify_theta_bounds(
    x_from: int,
    x_to: int,
    step: int,
    config: PrimeClassConfig,
    pool: Optional[PrimePool] = None,
) -> List[Tuple[int, bool]]:
    """Check 0.49 x < theta_class(x) < 0.51 x for both classes at each sample.

    Each sample is certified through the interval enclosures of theta; the
    published estimates guarantee the range x >= 45000, so smaller starting
    points are rejected.
    """
    if x_from < 45000:
        raise ValueError("theta bounds are only asserted for x >= 45000")
    if step < 1 or x_to < x_from:
        raise ValueError("empty sample range")
    pool = pool or PrimePool(config)
    table = pool.require_limit(x_to)
    results = []
    for x in range(x_from, x_to + 1, step):
        lo_bound = mpq(49 * x, 100)
        hi_bound = mpq(51 * x, 100)
        ok = True
        for cls in (PrimeClass.P, PrimeClass.Q):
            th = table.theta_class(x, cls)
            if not (th.lo > lo_bound and th.hi < hi_bound):
                ok = False
        results.append((x, ok))
    return results


def default_mertens_samples(x_max: int, step: int) -> List[int]:
    """Dense coverage of the small range, then every `step` up to x_max."""
    xs = set(range(2, min(1000, x_max) + 1))
    xs.update(range(step, x_max + 1, step))
    xs.add(x_max)
    return sorted(x for x in xs if 2 <= x <= x_max)


def verify_mertens_bound(
    x_max: int, step: int = 5000, samples: Optional[Sequence[int]] = None
) -> List[Tuple[int, bool]]:
    """Certify prod_{p<=x} p/(p-1) <= e^gamma (log x + 1/log x) per sample.

    The product is carried exactly as an unreduced integer pair; the right
    side is lower-bounded with directed rounding, so a pass certifies the
    inequality.
    """
    if x_max < 2:
        raise ValueError("x_max must be >= 2")
    xs = sorted(set(samples)) if samples else default_mertens_samples(x_max, step)
    if xs[0] < 2:
        raise ValueError("samples must be > 1")
    primes = sieve_primes(xs[-1])
    bits = 128
    d, u = _ctx(bits)
    eg_lo = egamma(bits).lo
    num = mpz(1)
    den = mpz(1)
    results = []
    idx = 0
    for x in xs:
        while idx < len(primes) and primes[idx] <= x:
            p = int(primes[idx])
            num *= p
            den *= p - 1
            idx += 1
        log_lo = d.log(x)
        log_hi = u.log(x)
        rhs_lo = d.mul(eg_lo, d.add(log_lo, d.div(1, log_hi)))
        certified = num <= d.mul(rhs_lo, to_mpfr_down(den, bits))
        results.append((x, bool(certified)))
    return results


WITNESS_CAP = 1_000_000


def witness_exponent(n: int, precision_bits: int = 96) -> int:
    """floor(n^(1/sqrt(log n))), certified by interval refinement."""
    if n < 3:
        raise ValueError("witness sequence starts at n = 3")
    bits = precision_bits
    while bits <= 4096:
        d, u = _ctx(bits)
        lo = d.exp(d.sqrt(d.log(n)))
        hi = u.exp(u.sqrt(u.log(n)))
        f_lo = int(gmpy2.floor(lo))
        f_hi = int(gmpy2.floor(hi))
        if f_lo == f_hi:
            return f_lo
        bits *= 2
    raise RuntimeError(f"could not certify the witness exponent for n = {n}")


def limsup_witness(n: int, precision_bits: int = 96) -> Tuple[Interval, Interval]:
    """Enclosures of sigma(a)/(a log log a) and a/(phi(a) log log a) for the
    witness a = (prod_{p<=n} p)^d with d = floor(n^(1/sqrt(log n))).

    Everything is accumulated in log form; the witness value itself (which
    has millions of digits already for moderate n) is never materialized.
    """
    if n > WITNESS_CAP:
        raise ResourceError(f"witness index {n} above the {WITNESS_CAP} cap")
    d_n = witness_exponent(n, precision_bits)
    bits = precision_bits
    dn_ctx, up_ctx = _ctx(bits)
    primes = sieve_primes(n)
    if len(primes) == 0:
        raise ValueError("need at least one prime <= n")

    sum_phi_lo = _zero(bits)
    sum_phi_hi = _zero(bits)
    sum_sig_lo = _zero(bits)
    sum_sig_hi = _zero(bits)
    theta_lo = _zero(bits)
    theta_hi = _zero(bits)
    for p in primes:
        p = int(p)
        t_phi = mpq(p, p - 1)
        sum_phi_lo = dn_ctx.add(sum_phi_lo, dn_ctx.log(t_phi))
        sum_phi_hi = up_ctx.add(sum_phi_hi, up_ctx.log(t_phi))
        t_sig = mpq(p ** (d_n + 1) - 1, p**d_n * (p - 1))
        sum_sig_lo = dn_ctx.add(sum_sig_lo, dn_ctx.log(t_sig))
        sum_sig_hi = up_ctx.add(sum_sig_hi, up_ctx.log(t_sig))
        theta_lo = dn_ctx.add(theta_lo, dn_ctx.log(p))
        theta_hi = up_ctx.add(theta_hi, up_ctx.log(p))

    log_a = Interval(dn_ctx.mul(theta_lo, d_n), up_ctx.mul(theta_hi, d_n), bits)
    loglog_a = log_a.log()
    ratio_phi = Interval(dn_ctx.exp(sum_phi_lo), up_ctx.exp(sum_phi_hi), bits).div(loglog_a)
    ratio_sigma = Interval(dn_ctx.exp(sum_sig_lo), up_ctx.exp(sum_sig_hi), bits).div(loglog_a)
    return ratio_sigma, ratio_phi
