"""Exhaustive enumeration of the finite exception set.

The pipeline: find all class signatures (r, s) whose minimal candidate
N_{r,s} violates the Nicolas inequality, widen each signature into finite
per-slot prime windows, enumerate the admissible cores, cap the exponents,
and expand every core into the full list of violators it divides.

Candidate screening is done in float64 with a safety margin that exceeds the
accumulated rounding error by several orders of magnitude; everything the
screen flags (and only that) is then settled by certified interval
comparisons, so no reported membership ever rests on floats.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .config import PrimeClass, PrimeClassConfig
from .errors import UndecidedError
from .factored import (
    FactoredNumber,
    nicolas_verdict,
    representable,
    robin_verdict,
    s_of,
    in_S,
    omega_class,
)
from .intervals import PrecisionPolicy
from .primes import PrimePool

# Screen slack: float64 prefix sums over <= 10^4 terms of magnitude <= ~12
# carry absolute error < 1e-10; anything within this margin of the threshold
# is handed to the certified comparison instead of being trusted.
SCREEN_MARGIN = 1e-6
_EULER_GAMMA_LOW = 0.5772156649015328  # float just below gamma

SLACK_SEARCH_CAP = 1_000_000


def _judge(n: FactoredNumber, policy: PrecisionPolicy) -> bool:
    """True iff n is a certified Nicolas violator; raises on Undecided."""
    v = nicolas_verdict(n, policy)
    if v.is_undecided:
        raise UndecidedError(str(n), v.precision_bits)
    return v.is_above_or_equal


@dataclass(frozen=True)
class PairSet:
    """All (r, s) signatures whose minimal candidate violates the inequality."""

    pairs: FrozenSet[Tuple[int, int]]
    max_k: int

    def sorted_pairs(self) -> List[Tuple[int, int]]:
        return sorted(self.pairs)

    @property
    def max_r_plus_2s(self) -> int:
        return max((r + 2 * s for r, s in self.pairs), default=0)

    @property
    def max_omega(self) -> int:
        return max((r + s for r, s in self.pairs), default=0)


@dataclass(frozen=True)
class ExceptionRecord:
    """One member of the exception set, with its classification flags."""

    n: FactoredNumber
    omega_p: int
    omega_q: int
    core: FactoredNumber
    robin_violator: bool
    representable: bool

    @property
    def value(self) -> int:
        return self.n.value

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": str(self.value),
                "factorization": [[p, e] for p, e in self.n.factors],
                "omega_p": self.omega_p,
                "omega_q": self.omega_q,
                "core": str(self.core.value),
                "robin_violator": self.robin_violator,
                "sum_of_two_squares": self.representable,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, line: str) -> "ExceptionRecord":
        data = json.loads(line)
        n = FactoredNumber.from_factors(data["factorization"])
        if str(n.value) != data["n"]:
            raise ValueError(f"factorization does not multiply back to {data['n']}")
        # the core divides n, so its factorization falls out by division
        core_val = int(data["core"])
        core_pairs = []
        rest = core_val
        for p, _ in n.factors:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            if e:
                core_pairs.append((p, e))
        if rest != 1:
            raise ValueError(f"core {core_val} does not divide n = {n.value}")
        core = FactoredNumber.from_factors(core_pairs)
        return cls(
            n=n,
            omega_p=int(data["omega_p"]),
            omega_q=int(data["omega_q"]),
            core=core,
            robin_violator=bool(data["robin_violator"]),
            representable=bool(data["sum_of_two_squares"]),
        )


@dataclass(frozen=True)
class ExceptionSet:
    """The complete, sorted exception list plus provenance."""

    records: Tuple[ExceptionRecord, ...]
    config_snapshot: dict
    provenance: dict

    def __len__(self) -> int:
        return len(self.records)

    def values(self) -> List[int]:
        return [r.value for r in self.records]

    def filtered(self, robin_only=False, representable_only=False) -> List[ExceptionRecord]:
        out = []
        for r in self.records:
            if robin_only and not r.robin_violator:
                continue
            if representable_only and not r.representable:
                continue
            out.append(r)
        return out

    def digest(self) -> str:
        h = hashlib.sha256()
        for r in self.records:
            h.update(r.to_json().encode())
            h.update(b"\n")
        return h.hexdigest()

    def to_jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str, config_snapshot=None, provenance=None) -> "ExceptionSet":
        records = tuple(
            ExceptionRecord.from_json(line)
            for line in text.splitlines()
            if line.strip()
        )
        return cls(records, config_snapshot or {}, provenance or {})


def build_Nrs(r: int, s: int, pool: PrimePool) -> FactoredNumber:
    """Product of the first r P-primes and the squares of the first s Q-primes."""
    if r < 0 or s < 0:
        raise ValueError("r and s must be >= 0")
    pool.require_class_count(PrimeClass.P, r)
    pool.require_class_count(PrimeClass.Q, s)
    pseq = pool.table.class_seq(PrimeClass.P)
    qseq = pool.table.class_seq(PrimeClass.Q)
    return FactoredNumber.from_factors(
        [(int(pseq[i]), 1) for i in range(r)] + [(int(qseq[j]), 2) for j in range(s)]
    )


def compute_X(
    config: PrimeClassConfig,
    pool: Optional[PrimePool] = None,
    max_k: Optional[int] = None,
) -> PairSet:
    """All (r, s) with r + 2s <= max_k whose N_{r,s} violates the inequality.

    A float prefix screen makes each of the ~max_k^2/4 pairs O(1); the
    screen's survivors are settled by certified verdicts.
    """
    pool = pool or PrimePool(config)
    max_k = config.search.max_k if max_k is None else max_k
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    rmax, smax = max_k, max_k // 2
    pool.require_class_count(PrimeClass.P, rmax)
    pool.require_class_count(PrimeClass.Q, max(smax, 1))
    pseq = pool.table.class_seq(PrimeClass.P)[:rmax].astype(float)
    qseq = pool.table.class_seq(PrimeClass.Q)[:smax].astype(float)

    # prefix sums of log F and of log N along each class sequence
    lfp = np.concatenate([[0.0], np.cumsum(np.log(pseq / (pseq - 1.0)))])
    lfq = np.concatenate([[0.0], np.cumsum(np.log(qseq / (qseq - 1.0)))])
    thp = np.concatenate([[0.0], np.cumsum(np.log(pseq))])
    thq = np.concatenate([[0.0], np.cumsum(np.log(qseq))])

    flagged: List[Tuple[int, int]] = []
    for s in range(0, smax + 1):
        r_top = max_k - 2 * s
        if r_top < 0:
            break
        r = np.arange(0, r_top + 1)
        log_n = thp[r] + 2.0 * thq[s]
        lhs = lfp[r] + lfq[s]
        with np.errstate(invalid="ignore", divide="ignore"):
            rhs = _EULER_GAMMA_LOW + np.log(np.log(log_n))
        # NaN (log log n undefined or negative) means the pair trivially
        # violates; keep it for the certified pass.
        hits = ~(lhs < rhs - SCREEN_MARGIN)
        for rr in np.nonzero(hits)[0]:
            flagged.append((int(rr), s))

    members = set()
    for r, s in flagged:
        try:
            violates = _judge(build_Nrs(r, s, pool), config.precision)
        except UndecidedError as exc:
            raise UndecidedError(f"pair ({r},{s}), n = {exc.n}", exc.precision_bits)
        if violates:
            members.add((r, s))
    return PairSet(pairs=frozenset(members), max_k=max_k)


def prime_slack_bounds(
    r: int, s: int, config: PrimeClassConfig, pool: Optional[PrimePool] = None
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Per-slot shift slacks (gamma_1..gamma_r, delta_1..delta_s).

    gamma_i is the largest g >= 0 such that shifting the P-prime tail at slot
    i forward by g keeps the number a violator; delta_j is the analogue on
    the Q side.  Shifting replaces primes by strictly larger ones, which
    both lowers the ratio and raises the threshold, so the searched
    predicate is monotone and a linear scan terminates at the first flip.
    """
    pool = pool or PrimePool(config)
    if not _judge(build_Nrs(r, s, pool), config.precision):
        raise ValueError(f"({r},{s}) is not an admissible signature")

    def seq(cls: PrimeClass, i: int) -> int:
        return pool.nth_class_prime(cls, i)

    def probe_p(i: int, g: int) -> FactoredNumber:
        pairs = [(seq(PrimeClass.P, l), 1) for l in range(1, i)]
        pairs += [(seq(PrimeClass.P, l + g), 1) for l in range(i, r + 1)]
        pairs += [(seq(PrimeClass.Q, j), 2) for j in range(1, s + 1)]
        return FactoredNumber.from_factors(pairs)

    def probe_q(j: int, g: int) -> FactoredNumber:
        pairs = [(seq(PrimeClass.P, i), 1) for i in range(1, r + 1)]
        pairs += [(seq(PrimeClass.Q, l), 2) for l in range(1, j)]
        pairs += [(seq(PrimeClass.Q, l + g), 2) for l in range(j, s + 1)]
        return FactoredNumber.from_factors(pairs)

    def scan(probe) -> int:
        g = 0
        while _judge(probe(g + 1), config.precision):
            g += 1
            if g > SLACK_SEARCH_CAP:
                raise RuntimeError("slack search exceeded its safety cap")
        return g

    gammas = tuple(scan(lambda g, i=i: probe_p(i, g)) for i in range(1, r + 1))
    deltas = tuple(scan(lambda g, j=j: probe_q(j, g)) for j in range(1, s + 1))
    return gammas, deltas


def _window_choices(windows: Sequence[int]) -> List[Tuple[int, ...]]:
    """Strictly increasing 1-based index tuples, slot l within [l, l+win[l]]."""
    out: List[Tuple[int, ...]] = []
    k = len(windows)

    def rec(slot: int, start: int, acc: List[int]) -> None:
        if slot == k:
            out.append(tuple(acc))
            return
        for idx in range(max(slot + 1, start), slot + 1 + windows[slot] + 1):
            acc.append(idx)
            rec(slot + 1, idx + 1, acc)
            acc.pop()

    rec(0, 1, [])
    return out


def enumerate_Ars(
    r: int, s: int, config: PrimeClassConfig, pool: Optional[PrimePool] = None
) -> List[FactoredNumber]:
    """The admissible cores for signature (r, s): all violators of the shape
    p_1...p_r q_1^2...q_s^2 with primes inside the slack windows."""
    pool = pool or PrimePool(config)
    gammas, deltas = prime_slack_bounds(r, s, config, pool)
    pool.require_class_count(PrimeClass.P, r + max(gammas, default=0))
    pool.require_class_count(PrimeClass.Q, s + max(deltas, default=0))
    cores = []
    for pidx in _window_choices(gammas):
        p_part = [(pool.nth_class_prime(PrimeClass.P, i), 1) for i in pidx]
        for qidx in _window_choices(deltas):
            q_part = [(pool.nth_class_prime(PrimeClass.Q, j), 2) for j in qidx]
            m = FactoredNumber.from_factors(p_part + q_part)
            if _judge(m, config.precision):
                cores.append(m)
    return cores


def exponent_caps(
    m: FactoredNumber, config: PrimeClassConfig
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Largest admissible exponents: alpha_i for each P-prime of the core,
    beta_j for each Q-prime (m q^(beta-1) still violating, so exponents up
    to beta_j + 1 appear in the expansion).

    Raising one exponent leaves the ratio unchanged and raises the
    threshold, so each scan is monotone.
    """
    alphas: List[int] = []
    betas: List[int] = []
    for p, e in m.factors:
        cap = e
        while True:
            probe = m.with_exponent(p, cap + 1)
            v = nicolas_verdict(probe, config.precision)
            if v.is_undecided:
                raise UndecidedError(str(probe), v.precision_bits)
            if not v.is_above_or_equal:
                break
            cap += 1
            if cap > SLACK_SEARCH_CAP:
                raise RuntimeError("exponent cap search exceeded its safety cap")
        if config.classify(p) is PrimeClass.P:
            alphas.append(cap)  # alpha = largest exponent with m p^(a-1) violating
        else:
            betas.append(cap - 1)  # m has q^2, caps reported relative to q^1
    return tuple(alphas), tuple(betas)


def expand_multiples(
    m: FactoredNumber,
    caps: Tuple[Tuple[int, ...], Tuple[int, ...]],
    config: PrimeClassConfig,
) -> List[ExceptionRecord]:
    """All violators n with core m: exponent vectors e_i in [1, alpha_i] on
    the P side and f_j in [2, beta_j + 1] on the Q side, kept iff n still
    violates.  Since the support is fixed the ratio never changes, so the
    verdict flips exactly once along each exponent axis and the inner loops
    prune on the first BELOW."""
    alphas, betas = caps
    p_slots = [(p, e) for p, e in m.factors if config.classify(p) is PrimeClass.P]
    q_slots = [(q, e) for q, e in m.factors if config.classify(q) is PrimeClass.Q]
    if len(alphas) != len(p_slots) or len(betas) != len(q_slots):
        raise ValueError("caps do not match the core's class signature")
    slots = [(p, 1, a) for (p, _), a in zip(p_slots, alphas)]
    slots += [(q, 2, b + 1) for (q, _), b in zip(q_slots, betas)]
    slots.sort()
    bound = FactoredNumber.from_factors([(p, top) for p, _, top in slots])

    om_p = len(p_slots)
    om_q = len(q_slots)
    out: List[ExceptionRecord] = []

    def rec(i: int, acc: List[Tuple[int, int]]) -> None:
        if i == len(slots):
            n = FactoredNumber(tuple(acc))
            if _judge(n, config.precision):
                assert n.divides(bound)  # divisor-sandwich cross-check
                out.append(
                    ExceptionRecord(
                        n=n,
                        omega_p=om_p,
                        omega_q=om_q,
                        core=m,
                        robin_violator=robin_verdict(n, config.precision).is_above_or_equal,
                        representable=representable(n, config),
                    )
                )
            return
        p, lo, top = slots[i]
        for e in range(lo, top + 1):
            acc.append((p, e))
            before = len(out)
            rec(i + 1, acc)
            acc.pop()
            # the support is fixed, so membership is a pure value cutoff:
            # an empty subtree at exponent e stays empty for every larger e
            if len(out) == before:
                break
    rec(0, [])
    return out


def _expand_pair(
    pair: Tuple[int, int], config: PrimeClassConfig, pool: PrimePool
) -> List[ExceptionRecord]:
    r, s = pair
    records: List[ExceptionRecord] = []
    for m in enumerate_Ars(r, s, config, pool):
        records.extend(expand_multiples(m, exponent_caps(m, config), config))
    return records


def enumerate_exceptions(
    config: PrimeClassConfig,
    pool: Optional[PrimePool] = None,
    workers: Optional[int] = None,
) -> ExceptionSet:
    """The complete exception set for the configured class partition.

    Complete unconditionally for the mod4 partition (whose search bounds are
    proven); for other partitions the result is complete relative to the
    declared bounds, and the provenance says so.
    """
    t0 = time.time()
    pool = pool or PrimePool(config)
    if workers is None:
        workers = int(os.environ.get("NICROBIN_THREADS", "1"))
    pairs = compute_X(config, pool)
    sorted_pairs = pairs.sorted_pairs()
    # pre-extend the tables single-threaded so parallel workers rarely race
    # on extension (extension is safe either way, just redundant work)
    if sorted_pairs:
        max_r = max(r for r, _ in sorted_pairs)
        max_s = max(s for _, s in sorted_pairs)
        pool.require_class_count(PrimeClass.P, max_r + 64)
        pool.require_class_count(PrimeClass.Q, max_s + 64)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as tp:
            chunks = list(
                tp.map(lambda pr: _expand_pair(pr, config, pool), sorted_pairs)
            )
    else:
        chunks = [_expand_pair(pr, config, pool) for pr in sorted_pairs]

    by_value: Dict[int, ExceptionRecord] = {}
    for chunk in chunks:
        for rec in chunk:
            by_value[rec.value] = rec
    records = tuple(by_value[v] for v in sorted(by_value))
    provenance = {
        "max_k": pairs.max_k,
        "pk_minus_bound": config.search.pk_minus_bound,
        "precision_schedule": list(config.precision.schedule),
        "pair_count": len(pairs.pairs),
        "complete": "unconditional" if config.name == "mod4" else "relative to declared bounds",
        "wall_time_s": round(time.time() - t0, 3),
    }
    return ExceptionSet(records, config.snapshot(), provenance)


def verify_records(
    exceptions: ExceptionSet, config: PrimeClassConfig, policy: Optional[PrecisionPolicy] = None
) -> None:
    """Independent record-by-record re-verification at doubled precision.

    Raises ValueError on the first record that fails any of its invariants.
    """
    policy = policy or config.precision.doubled()
    for rec in exceptions.records:
        n = rec.n
        if not in_S(n, config):
            raise ValueError(f"{n} is not in the constraint set")
        if s_of(n, config) != rec.core:
            raise ValueError(f"core mismatch for {n}")
        if omega_class(n, PrimeClass.P, config) != rec.omega_p:
            raise ValueError(f"omega_p mismatch for {n}")
        if omega_class(n, PrimeClass.Q, config) != rec.omega_q:
            raise ValueError(f"omega_q mismatch for {n}")
        v = nicolas_verdict(n, policy)
        if not v.is_above_or_equal:
            raise ValueError(f"{n} fails re-verification: verdict {v}")
        if robin_verdict(n, policy).is_above_or_equal != rec.robin_violator:
            raise ValueError(f"robin flag mismatch for {n}")
        if representable(n, config) != rec.representable:
            raise ValueError(f"representability flag mismatch for {n}")


def kbound_constants(
    config: PrimeClassConfig, pool: Optional[PrimePool] = None
) -> Tuple[int, int]:
    """The two signature-size ceilings recomputed from the sieve.

    bound_a covers the case where the P side carries the smaller top prime:
      pi_P(x0) + 2 pi_Q(g_P(g_P(x0)));
    bound_b the mirrored case:
      1 + pi_P(2 g_Q(x0)) + 2 pi_Q(x0);
    with x0 the configured ceiling on the smaller top prime.
    """
    pool = pool or PrimePool(config)
    x0 = config.search.pk_minus_bound
    gp = pool.next_class_prime(x0, PrimeClass.P)
    gpgp = pool.next_class_prime(gp, PrimeClass.P)
    bound_a = pool.pi_class(x0, PrimeClass.P) + 2 * pool.pi_class(gpgp, PrimeClass.Q)
    gq = pool.next_class_prime(x0, PrimeClass.Q)
    bound_b = 1 + pool.pi_class(2 * gq, PrimeClass.P) + 2 * pool.pi_class(x0, PrimeClass.Q)
    return bound_a, bound_b
