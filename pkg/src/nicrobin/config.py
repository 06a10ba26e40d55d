"""Prime-class partitions and their configuration.

A configuration splits the primes into two classes P and Q by residues
modulo a fixed modulus, with finite override lists taking precedence.  Two
built-in partitions are shipped:

* ``mod4``      P = {2} u {p = 1 mod 4},  Q = {q = 3 mod 4}.  The associated
                constraint set contains every sum of two squares.
* ``a2plus3b2`` P = {3} u {p = 1 mod 3},  Q = {q = 2 mod 3}.  The associated
                constraint set contains every number of the form a^2 + 3b^2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import FrozenSet, Tuple

import numpy as np

from .errors import ConfigError
from .intervals import DEFAULT_POLICY, PrecisionPolicy


class PrimeClass(Enum):
    P = "P"
    Q = "Q"

    def other(self) -> "PrimeClass":
        return PrimeClass.Q if self is PrimeClass.P else PrimeClass.P


@dataclass(frozen=True)
class SearchBounds:
    """Enumeration search bounds: max admissible r + 2s, and the ceiling on
    the smaller of the two largest class primes of a minimal candidate."""

    max_k: int = 10000
    pk_minus_bound: int = 50000

    def __post_init__(self):
        if self.max_k < 1 or self.pk_minus_bound < 2:
            raise ConfigError("search bounds must be positive")


@dataclass(frozen=True)
class PrimeClassConfig:
    name: str
    modulus: int
    p_residues: FrozenSet[int]
    include_primes: Tuple[int, ...] = ()
    exclude_primes: Tuple[int, ...] = ()
    search: SearchBounds = field(default_factory=SearchBounds)
    precision: PrecisionPolicy = field(default_factory=lambda: DEFAULT_POLICY)

    def __post_init__(self):
        m = self.modulus
        if m < 2:
            raise ConfigError("modulus must be >= 2")
        units = {a for a in range(1, m) if math.gcd(a, m) == 1}
        res = set(self.p_residues)
        if not res or not res.issubset(units):
            raise ConfigError(
                f"p_residues must be a non-empty subset of the residues coprime to {m}"
            )
        if res == units:
            # The complementary class would have density 0 and the exception
            # set need not be finite; reject rather than silently accept.
            raise ConfigError("p_residues must be a proper subset of the coprime residues")
        if set(self.include_primes) & set(self.exclude_primes):
            raise ConfigError("include_primes and exclude_primes overlap")
        for p in (*self.include_primes, *self.exclude_primes):
            if p < 2:
                raise ConfigError(f"override entry {p} is not a prime")

    def classify(self, p: int) -> PrimeClass:
        """Class of a prime p; override lists win over the residue test."""
        if p in self.include_primes:
            return PrimeClass.P
        if p in self.exclude_primes:
            return PrimeClass.Q
        return PrimeClass.P if p % self.modulus in self.p_residues else PrimeClass.Q

    def classify_array(self, primes: np.ndarray) -> np.ndarray:
        """Vectorized classify: boolean mask, True where the prime is in P."""
        table = np.zeros(self.modulus, dtype=bool)
        table[list(self.p_residues)] = True
        mask = table[primes % self.modulus]
        for p in self.include_primes:
            mask |= primes == p
        for p in self.exclude_primes:
            mask &= primes != p
        return mask

    def snapshot(self) -> dict:
        """JSON-serializable snapshot (used in manifests and provenance)."""
        return {
            "name": self.name,
            "modulus": self.modulus,
            "p_residues": sorted(self.p_residues),
            "include_primes": list(self.include_primes),
            "exclude_primes": list(self.exclude_primes),
            "search": {"max_k": self.search.max_k, "pk_minus_bound": self.search.pk_minus_bound},
            "precision": {"schedule": list(self.precision.schedule)},
        }


MOD4 = PrimeClassConfig(
    name="mod4",
    modulus=4,
    p_residues=frozenset({1}),
    include_primes=(2,),
)

A2PLUS3B2 = PrimeClassConfig(
    name="a2plus3b2",
    modulus=3,
    p_residues=frozenset({1}),
    include_primes=(3,),
)

BUILTIN_CONFIGS = {c.name: c for c in (MOD4, A2PLUS3B2)}


def config_from_dict(data: dict, name: str = "custom") -> PrimeClassConfig:
    try:
        search = data.get("search", {})
        precision = data.get("precision", {})
        schedule = tuple(precision.get("schedule", DEFAULT_POLICY.schedule))
        return PrimeClassConfig(
            name=data.get("name", name),
            modulus=int(data["modulus"]),
            p_residues=frozenset(int(r) for r in data["p_residues"]),
            include_primes=tuple(int(p) for p in data.get("include_primes", ())),
            exclude_primes=tuple(int(p) for p in data.get("exclude_primes", ())),
            search=SearchBounds(
                max_k=int(search.get("max_k", 10000)),
                pk_minus_bound=int(search.get("pk_minus_bound", 50000)),
            ),
            precision=PrecisionPolicy(schedule),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed config: {exc}") from exc


def load_config(name_or_path: str) -> PrimeClassConfig:
    """Resolve a built-in config name or load a JSON config file."""
    if name_or_path in BUILTIN_CONFIGS:
        return BUILTIN_CONFIGS[name_or_path]
    path = Path(name_or_path)
    if not path.exists():
        raise ConfigError(
            f"unknown config {name_or_path!r}: not a built-in "
            f"({', '.join(sorted(BUILTIN_CONFIGS))}) and no such file"
        )
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data, name=path.stem)
