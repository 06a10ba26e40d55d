import random
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr

from nicrobin.intervals import (
    DEFAULT_POLICY,
    Interval,
    PrecisionPolicy,
    VerdictKind,
    compare_threshold,
    egamma,
    exact_interval,
    loglog,
    threshold_interval,
)

# Independently published digits (cross-checked against mpmath at 40 dps).
EGAMMA_DIGITS = "1.78107241799019798523650410310717954917"
LOGLOG_10 = "0.8340324452479557998032130478575390955069"
LOGLOG_2 = "-0.3665129205816643270124391582326694694543"
LOGLOG_72 = "1.453173761903945168732546080021079323899"


def as_ref(decimal_str):
    return mpfr(decimal_str, 200)


def test_egamma_contains_published_digits():
    iv = egamma(64)
    assert iv.lo < as_ref(EGAMMA_DIGITS) < iv.hi


def test_egamma_width_contract():
    for bits in (32, 64, 128, 256, 1024):
        iv = egamma(bits)
        assert iv.lo < iv.hi
        assert iv.width < mpfr(2) ** (4 - bits)


def test_egamma_width_example_64():
    iv = egamma(64)
    assert iv.hi - iv.lo < 1e-15


def test_egamma_nesting():
    outer = egamma(64)
    for bits in (128, 256, 512):
        assert outer.encloses(egamma(bits))


def test_egamma_rejects_low_precision():
    with pytest.raises(ValueError):
        egamma(16)


@pytest.mark.parametrize(
    "factors, digits",
    [
        (((2, 1), (5, 1)), LOGLOG_10),
        (((2, 1),), LOGLOG_2),
        (((2, 3), (3, 2)), LOGLOG_72),
    ],
)
def test_loglog_against_scalar_oracle(factors, digits):
    iv = loglog(factors, 64)
    assert iv.lo < as_ref(digits) < iv.hi


def test_loglog_2_is_negative():
    iv = loglog(((2, 1),), 64)
    assert iv.hi < 0


def test_loglog_rejects_one():
    with pytest.raises(ValueError):
        loglog((), 64)


def _random_factored(rng):
    """Random factorization with value in [2, 10^18]."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 101, 997, 10007, 104729]
    while True:
        chosen = rng.sample(primes, rng.randint(1, 6))
        pairs = tuple(sorted((p, rng.randint(1, 4)) for p in chosen))
        value = 1
        for p, e in pairs:
            value *= p**e
        if 2 <= value <= 10**18:
            return pairs, value


def test_enclosure_soundness_1000_random():
    rng = random.Random(20260810)
    ctx = gmpy2.context(precision=256)
    for _ in range(1000):
        pairs, value = _random_factored(rng)
        ref = ctx.log(ctx.log(mpfr(value, 256)))
        iv = loglog(pairs, 64)
        assert iv.lo <= ref <= iv.hi


def test_monotone_refinement():
    rng = random.Random(7)
    for _ in range(50):
        pairs, _ = _random_factored(rng)
        for bits in (64, 128, 256):
            wide = loglog(pairs, bits)
            tight = loglog(pairs, 2 * bits)
            assert tight.width <= wide.width
            assert wide.encloses(tight)


def test_compare_threshold_examples():
    # F(72) = 3 vs e^gamma log log 72 ~ 2.588
    v = compare_threshold(Fraction(3), ((2, 3), (3, 2)))
    assert v.kind is VerdictKind.ABOVE_OR_EQUAL
    # F(100) = 5/2 vs e^gamma log log 100 ~ 2.720
    v = compare_threshold(Fraction(5, 2), ((2, 2), (5, 2)))
    assert v.kind is VerdictKind.BELOW
    # n = 1 by convention
    v = compare_threshold(Fraction(123, 7), ())
    assert v.kind is VerdictKind.ABOVE_OR_EQUAL


def test_compare_threshold_rejects_negative():
    with pytest.raises(ValueError):
        compare_threshold(Fraction(-1), ((2, 1),))


def test_verdict_stability_across_precisions():
    rng = random.Random(99)
    for _ in range(200):
        pairs, _ = _random_factored(rng)
        lhs = Fraction(rng.randint(1, 400), rng.randint(1, 100))
        low = compare_threshold(lhs, pairs, PrecisionPolicy((64,)))
        if low.kind is VerdictKind.UNDECIDED:
            continue
        high = compare_threshold(lhs, pairs, PrecisionPolicy((512,)))
        assert high.kind is low.kind


def test_threshold_interval_positive_factor_mul():
    thr = threshold_interval(((2, 1),), 64)  # e^gamma * negative
    assert thr.hi < 0


def test_interval_mul_sign_cases():
    a = exact_interval(Fraction(3, 2), 64)
    b = Interval(mpfr(-2), mpfr(5), 64)
    prod = a.mul(b)
    assert prod.contains(Fraction(-3)) and prod.contains(Fraction(15, 2))
    assert not prod.contains(Fraction(8))


def test_interval_div_requires_positive():
    a = exact_interval(1, 64)
    b = Interval(mpfr(-1), mpfr(1), 64)
    with pytest.raises(ValueError):
        a.div(b)


def test_interval_abs_sub_straddle():
    a = exact_interval(2, 64)
    b = Interval(mpfr(1), mpfr(3), 64)
    d = a.abs_sub(b)
    assert d.lo == 0 and d.hi >= 1


def test_exact_interval_contains_value():
    x = Fraction(10**30 + 1)
    iv = exact_interval(x, 64)
    assert iv.contains(x)
    assert iv.lo < x < iv.hi  # not 64-bit representable


def test_policy_validation():
    with pytest.raises(ValueError):
        PrecisionPolicy(())
    with pytest.raises(ValueError):
        PrecisionPolicy((16, 64))
    with pytest.raises(ValueError):
        PrecisionPolicy((128, 64))
    assert DEFAULT_POLICY.doubled().schedule[0] == 128
