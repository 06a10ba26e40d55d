from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nicrobin.config import MOD4, A2PLUS3B2, PrimeClass
from nicrobin.errors import UnfactoredError
from nicrobin.factored import (
    FactoredNumber,
    ONE,
    bigomega,
    f_ratio,
    factorize,
    in_S,
    in_Y,
    is_sum_two_squares,
    kernel,
    nicolas_verdict,
    omega,
    omega_class,
    parse_number,
    robin_verdict,
    s_of,
    sigma_ratio,
)

LARGEST_TWO_SQUARES_VIOLATOR = 52509581344222812810


def fn(*pairs):
    return FactoredNumber.from_factors(pairs)


def test_factored_number_validation():
    with pytest.raises(ValueError):
        FactoredNumber(((3, 1), (2, 1)))  # not increasing
    with pytest.raises(ValueError):
        FactoredNumber(((2, 0),))  # exponent < 1
    assert ONE.value == 1 and ONE.is_one


def test_f_ratio_examples():
    assert f_ratio(ONE) == 1
    assert f_ratio(fn((2, 1), (5, 1))) == Fraction(5, 2)
    assert f_ratio(fn((2, 3), (3, 2))) == Fraction(3) == f_ratio(fn((2, 1), (3, 1)))


def divisor_sum(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def test_sigma_ratio_examples():
    assert sigma_ratio(ONE) == 1
    assert sigma_ratio(fn((2, 1), (5, 1))) == Fraction(18, 10) == Fraction(9, 5)
    assert divisor_sum(720) == 2418
    assert sigma_ratio(factorize(720)) == Fraction(2418, 720) == Fraction(403, 120)


def test_kernel_omega_examples():
    n = fn((2, 3), (3, 2))
    assert kernel(n).value == 6
    assert omega(n) == 2
    assert bigomega(n) == 5
    assert kernel(ONE) == ONE and omega(ONE) == 0 and bigomega(ONE) == 0


def test_omega_class_4410():
    n = factorize(4410)
    assert n.factors == ((2, 1), (3, 2), (5, 1), (7, 2))
    assert omega_class(n, PrimeClass.P, MOD4) == 2
    assert omega_class(n, PrimeClass.Q, MOD4) == 2


def test_s_of_examples():
    assert s_of(fn((2, 3), (3, 2)), MOD4).value == 18
    assert s_of(factorize(4410), MOD4).value == 4410
    assert s_of(ONE, MOD4) == ONE


def test_in_S_in_Y_examples():
    assert not in_S(fn((2, 1), (3, 1)), MOD4)
    n72 = fn((2, 3), (3, 2))
    assert in_S(n72, MOD4) and not in_Y(n72, MOD4)
    n18 = fn((2, 1), (3, 2))
    assert in_S(n18, MOD4) and in_Y(n18, MOD4)


def test_verdict_examples():
    assert robin_verdict(factorize(720)).is_above_or_equal
    assert nicolas_verdict(factorize(100)).is_below
    assert nicolas_verdict(factorize(LARGEST_TWO_SQUARES_VIOLATOR)).is_above_or_equal


def test_is_sum_two_squares_examples():
    assert is_sum_two_squares(factorize(45))
    assert not is_sum_two_squares(factorize(21))
    assert is_sum_two_squares(factorize(9))
    assert is_sum_two_squares(ONE)


def test_factorize_examples():
    assert factorize(4410).factors == ((2, 1), (3, 2), (5, 1), (7, 2))
    assert factorize(1) == ONE
    big = factorize(LARGEST_TWO_SQUARES_VIOLATOR)
    assert big.factors == (
        (2, 1), (3, 2), (5, 1), (7, 2), (11, 2), (13, 1), (17, 1),
        (19, 2), (23, 2), (29, 1), (37, 1), (41, 1), (53, 1),
    )
    assert big.value == LARGEST_TWO_SQUARES_VIOLATOR


def test_factorize_large_prime_cofactor():
    p = 1000000000039  # prime beyond the trial bound; certified deterministically
    n = factorize(4 * p)
    assert n.factors == ((2, 2), (p, 1))


def test_factorize_refuses_partial():
    p, q = 1000000000039, 1000000000061
    with pytest.raises(UnfactoredError):
        factorize(p * q)


def test_parse_number():
    assert parse_number("72") == parse_number("2^3*3^2") == factorize(72)
    assert parse_number("2*2*3") == factorize(12)
    with pytest.raises(ValueError):
        parse_number("4^2")  # composite base
    with pytest.raises(ValueError):
        parse_number("seventy-two")


def test_str_and_decimal():
    n = fn((2, 3), (3, 2))
    assert str(n) == "2^3*3^2"
    assert n.decimal() == "72"
    huge = fn((2, 1000),)
    assert huge.decimal(bit_threshold=64) == "2^1000"
    assert huge.decimal(None) == str(2**1000)


def test_mul_pow_divides():
    a = fn((2, 1), (5, 2))
    b = fn((2, 2), (3, 1))
    assert (a * b).factors == ((2, 3), (3, 1), (5, 2))
    assert a.pow(3).factors == ((2, 3), (5, 6))
    assert fn((2, 1)).divides(a) and not fn((7, 1)).divides(a)


# --- property suites -------------------------------------------------------

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)

factored_numbers = st.builds(
    lambda pairs: FactoredNumber.from_factors(pairs.items()),
    st.dictionaries(st.sampled_from(SMALL_PRIMES), st.integers(1, 5), max_size=6),
)


@settings(max_examples=300, deadline=None)
@given(factored_numbers, factored_numbers)
def test_f_multiplicative_on_coprime_parts(m, n):
    m_primes = {p for p, _ in m.factors}
    n_coprime = FactoredNumber.from_factors(
        (p, e) for p, e in n.factors if p not in m_primes
    )
    assert f_ratio(m * n_coprime) == f_ratio(m) * f_ratio(n_coprime)
    assert sigma_ratio(m * n_coprime) == sigma_ratio(m) * sigma_ratio(n_coprime)


@settings(max_examples=300, deadline=None)
@given(factored_numbers)
def test_kernel_invariance(n):
    assert f_ratio(n) == f_ratio(kernel(n))
    assert omega(n) == omega(kernel(n))


@settings(max_examples=300, deadline=None)
@given(factored_numbers)
def test_sigma_dominated_by_f(n):
    if n.is_one:
        assert sigma_ratio(n) == f_ratio(n) == 1
    else:
        assert sigma_ratio(n) < f_ratio(n)


@settings(max_examples=300, deadline=None)
@given(factored_numbers)
def test_s_of_properties(n):
    core = s_of(n, MOD4)
    assert in_S(core, MOD4)                      # always lands in the set
    assert kernel(core) == kernel(n)             # same support
    assert in_Y(core, MOD4)                      # fixed point of the core map
    if in_S(n, MOD4):
        assert core.divides(n)
        assert core.value <= n.value


@settings(max_examples=300, deadline=None)
@given(factored_numbers)
def test_representability_consistency_between_configs(n):
    from nicrobin.factored import representable

    assert representable(n, MOD4) == is_sum_two_squares(n)
    # the a2+3b2 filter constrains a different prime class entirely
    assert representable(n, A2PLUS3B2) == all(
        e % 2 == 0 for p, e in n.factors if p % 3 == 2
    )


def test_two_squares_brute_force_agreement_small():
    limit = 3000
    sums = {a * a + b * b for a in range(60) for b in range(60) if a * a + b * b <= limit}
    for n in range(1, limit + 1):
        assert is_sum_two_squares(factorize(n)) == (n in sums)
