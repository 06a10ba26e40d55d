"""Certified decisions of the Nicolas and Robin inequalities, and exhaustive
enumeration of their finite exception sets over prime-class partitions."""

__version__ = "0.1.0"

from .config import (
    A2PLUS3B2,
    BUILTIN_CONFIGS,
    MOD4,
    PrimeClass,
    PrimeClassConfig,
    SearchBounds,
    load_config,
)
from .enumeration import (
    ExceptionRecord,
    ExceptionSet,
    PairSet,
    build_Nrs,
    compute_X,
    enumerate_Ars,
    enumerate_exceptions,
    expand_multiples,
    exponent_caps,
    kbound_constants,
    prime_slack_bounds,
    verify_records,
)
from .errors import ConfigError, ResourceError, UndecidedError, UnfactoredError
from .factored import (
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
    representable,
    robin_verdict,
    s_of,
    sigma_ratio,
)
from .intervals import (
    DEFAULT_POLICY,
    Interval,
    PrecisionPolicy,
    Verdict,
    VerdictKind,
    compare_threshold,
    egamma,
    loglog,
    threshold_interval,
)
from .oracle import (
    RangeReport,
    brute_force_exceptions,
    cross_validate,
    limsup_witness,
    verify_mertens_bound,
    verify_theta_bounds,
)
from .primes import (
    PrimePool,
    PrimeTable,
    build_table,
    classify,
    density_profile,
    deterministic_is_prime,
    sieve_primes,
)
