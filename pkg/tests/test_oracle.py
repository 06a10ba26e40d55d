import math

import mpmath
import pytest

from nicrobin.config import MOD4, A2PLUS3B2
from nicrobin.errors import ResourceError
from nicrobin.intervals import egamma
from nicrobin.oracle import (
    RangeReport,
    brute_force_exceptions,
    cross_validate,
    default_mertens_samples,
    limsup_witness,
    verify_mertens_bound,
    verify_theta_bounds,
    witness_exponent,
)

RS22_LIST = [
    4410, 8820, 10890, 13230, 17640, 21780, 22050, 26460, 30870, 35280, 39690,
    44100, 52920, 61740, 66150, 70560, 79380, 88200, 92610, 105840, 110250,
]


def test_brute_force_tiny_bounds():
    assert brute_force_exceptions(0, MOD4) == []
    assert brute_force_exceptions(1, MOD4) == [1]
    found = brute_force_exceptions(20, MOD4)
    assert set(found) >= {1, 2, 4, 5, 8, 9, 10, 16, 18, 20}


def test_brute_force_contains_rs22_members():
    found = set(brute_force_exceptions(10**5, MOD4))
    expected = [n for n in RS22_LIST if n <= 10**5]
    assert len(expected) == 19
    assert found >= set(expected)
    assert 105840 not in found and 110250 not in found


def test_brute_force_advisory_limit():
    with pytest.raises(ResourceError):
        brute_force_exceptions(10**9, MOD4)


@pytest.mark.parametrize("bound", [10**4, 10**5])
@pytest.mark.parametrize("config", [MOD4, A2PLUS3B2], ids=lambda c: c.name)
def test_cross_validate_small(bound, config):
    report = cross_validate(bound, config)
    assert report.agreement
    assert report.missing_from_enumerator == ()
    assert report.extra_in_enumerator == ()


def test_cross_validate_empty_range():
    report = cross_validate(0, MOD4)
    assert report.agreement
    assert report.exceptions == () and report.enumerated == ()


def test_range_report_diff_fields():
    report = RangeReport(
        bound=10, exceptions=(1, 2, 9), enumerated=(1, 2, 4), agreement=False
    )
    assert report.missing_from_enumerator == (9,)
    assert report.extra_in_enumerator == (4,)


def test_theta_bounds_single_points(mod4):
    assert verify_theta_bounds(45000, 45000, 1, mod4) == [(45000, True)]
    assert verify_theta_bounds(50000, 50000, 1, mod4) == [(50000, True)]


def test_theta_bounds_reject_below_proven_range(mod4):
    with pytest.raises(ValueError):
        verify_theta_bounds(1000, 50000, 1000, mod4)


def test_mertens_explicit_samples():
    results = dict(verify_mertens_bound(100, samples=[3, 100]))
    assert results == {3: True, 100: True}


def test_mertens_small_sweep():
    results = verify_mertens_bound(5000, step=500)
    assert all(ok for _, ok in results)
    xs = [x for x, _ in results]
    assert xs == sorted(xs) and xs[0] == 2 and xs[-1] == 5000


def test_mertens_sample_layout():
    xs = default_mertens_samples(10**6, 5000)
    assert xs[0] == 2 and xs[-1] == 10**6
    assert 999 in xs and 5000 in xs and 995000 in xs


def test_witness_exponent_oracle():
    assert witness_exponent(100) == 8
    mpmath.mp.dps = 60
    for n in (3, 10, 1000, 31623, 100000):
        ref = int(mpmath.floor(mpmath.exp(mpmath.sqrt(mpmath.log(n)))))
        assert witness_exponent(n) == ref


def test_witness_cap():
    with pytest.raises(ResourceError):
        limsup_witness(10**6 + 1)


def test_limsup_witness_at_100():
    ratio_sigma, ratio_phi = limsup_witness(100)
    upper = egamma(96).hi * 1.5
    for iv in (ratio_sigma, ratio_phi):
        assert 0 < iv.lo and iv.hi < upper
    # sigma(m)/m < m/phi(m) for m > 1, certified at interval level
    assert ratio_sigma.hi < ratio_phi.lo


def test_limsup_distance_decreases():
    eg = egamma(96)
    dists = []
    for n in (1000, 10000, 100000):
        _, ratio_phi = limsup_witness(n)
        dists.append(eg.sub(ratio_phi))
    # certified strict decrease: each whole interval below the previous one
    assert dists[0].lo > dists[1].hi
    assert dists[1].lo > dists[2].hi
