"""Parameter model for two-tier regenerating-code storage systems.

A file of ``file_size`` symbols is spread over ``n`` storage nodes so that
any ``k`` of them suffice to rebuild it.  When a node fails, its
replacement contacts ``d1`` helpers from the cheap tier (per-symbol
download cost ``cost_cheap``) and ``d2`` helpers from the expensive tier
(``cost_expensive``), pulling ``kprime`` times as many symbols from each
cheap helper as from an expensive one: ``beta1 = kprime * beta2``.

Everything is an exact :class:`fractions.Fraction`.  The tradeoff curves
downstream are piecewise linear with rational breakpoints, and exact
arithmetic lets the verification layer assert equality instead of
tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import (
    InvalidCostOrderError,
    InvalidDegreeError,
    InvalidRatioError,
    NonPositiveError,
)

RationalLike = Union[int, str, Fraction]


def as_fraction(value: RationalLike, what: str = "value") -> Fraction:
    """Coerce an int, Fraction, or "p/q" string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"{what} must be a rational number, got a bool")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{what} is not a rational 'p/q' literal: {value!r}") from exc
    # floats are rejected on purpose: Fraction(0.15) is not 3/20
    raise ValueError(f"{what} must be an int, Fraction, or 'p/q' string, got {type(value).__name__}")


class Scenario(Enum):
    """Which repair regime the helper counts put the system in."""

    A = "A"  # d1 >= k: cheap helpers alone could rebuild the file
    B = "B"  # d1 < k: expensive helpers are essential


@dataclass(frozen=True)
class SystemParams:
    """Validated description of one storage system.

    Invariants enforced at construction: k >= 1, file_size > 0, n > k,
    d1 + d2 >= k, d1 + d2 <= n - 1, 0 <= cost_cheap <= cost_expensive,
    kprime >= 1.  d1 = 0 or d2 = 0 are permitted; quantities whose
    denominators then vanish raise DegenerateConfigurationError at the
    point of use rather than here.
    """

    n: int
    k: int
    d1: int
    d2: int
    kprime: Fraction = Fraction(1)
    file_size: Fraction = Fraction(1)
    cost_cheap: Fraction = Fraction(1)
    cost_expensive: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        for name in ("n", "k", "d1", "d2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                msg = f"{name} must be an integer, got {value!r}"
                raise InvalidDegreeError(msg)
        for name in ("kprime", "file_size", "cost_cheap", "cost_expensive"):
            object.__setattr__(self, name, as_fraction(getattr(self, name), name))
        if self.k < 1:
            raise NonPositiveError(f"k must be at least 1, got {self.k}")
        if self.file_size <= 0:
            raise NonPositiveError(f"file_size must be positive, got {self.file_size}")
        if self.cost_cheap < 0:
            raise NonPositiveError(f"cost_cheap must be nonnegative, got {self.cost_cheap}")
        if self.d1 < 0 or self.d2 < 0:
            raise InvalidDegreeError(f"helper counts must be nonnegative, got d1={self.d1}, d2={self.d2}")
        if self.n <= self.k:
            raise InvalidDegreeError(f"n must exceed k, got n={self.n}, k={self.k}")
        if self.d < self.k:
            raise InvalidDegreeError(f"d1 + d2 must reach k, got d={self.d}, k={self.k}")
        if self.d > self.n - 1:
            raise InvalidDegreeError(f"d1 + d2 can be at most n - 1, got d={self.d}, n={self.n}")
        if self.cost_cheap > self.cost_expensive:
            raise InvalidCostOrderError(
                f"cost_cheap must not exceed cost_expensive, got {self.cost_cheap} > {self.cost_expensive}"
            )
        if self.kprime < 1:
            raise InvalidRatioError(f"kprime must be at least 1, got {self.kprime}")

    @property
    def d(self) -> int:
        """Total helpers contacted per repair."""
        return self.d1 + self.d2

    @property
    def scenario(self) -> Scenario:
        return Scenario.A if self.d1 >= self.k else Scenario.B

    @property
    def gamma_per_beta2(self) -> Fraction:
        """Repair bandwidth per unit of expensive-tier download: d1*kprime + d2."""
        return self.d1 * self.kprime + self.d2


def validate_params(
    n: int,
    k: int,
    d1: int,
    d2: int,
    kprime: RationalLike = 1,
    file_size: RationalLike = 1,
    cost_cheap: RationalLike = 1,
    cost_expensive: RationalLike = 1,
) -> SystemParams:
    """Build a SystemParams from raw values, raising a typed error on any violation."""
    return SystemParams(
        n=n,
        k=k,
        d1=d1,
        d2=d2,
        kprime=as_fraction(kprime, "kprime"),
        file_size=as_fraction(file_size, "file_size"),
        cost_cheap=as_fraction(cost_cheap, "cost_cheap"),
        cost_expensive=as_fraction(cost_expensive, "cost_expensive"),
    )


def classify_scenario(params: SystemParams) -> Scenario:
    """Scenario A when cheap helpers alone could rebuild (d1 >= k), else B."""
    return params.scenario


def repair_bandwidth(params: SystemParams, beta2: RationalLike) -> Fraction:
    """Total symbols moved per repair: gamma = d1*beta1 + d2*beta2 with beta1 = kprime*beta2."""
    b2 = as_fraction(beta2, "beta2")
    if b2 < 0:
        raise NonPositiveError(f"beta2 must be nonnegative, got {b2}")
    return params.gamma_per_beta2 * b2


def total_cost(params: SystemParams, beta2: RationalLike) -> Fraction:
    """Per-repair download cost: cost_cheap*d1*beta1 + cost_expensive*d2*beta2."""
    b2 = as_fraction(beta2, "beta2")
    if b2 < 0:
        raise NonPositiveError(f"beta2 must be nonnegative, got {b2}")
    return (params.cost_cheap * params.d1 * params.kprime + params.cost_expensive * params.d2) * b2


@dataclass(frozen=True)
class CodePoint:
    """One operating point: per-node storage alpha and per-helper downloads.

    ``cost`` is None when the point was derived without cost information
    (the single-tier extremal points take only file size, k, and d).
    """

    alpha: Fraction
    beta1: Fraction
    beta2: Fraction
    gamma: Fraction
    cost: Fraction | None = None

    @property
    def beta1_exceeds_alpha(self) -> bool:
        """Flags points where a cheap helper sends more than it stores.

        Such points are reported, not rejected: they still satisfy the
        reconstruction bound, they just cannot be met by a code that reads
        only stored symbols.
        """
        return self.beta1 > self.alpha
