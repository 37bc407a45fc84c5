"""Closed-form storage/bandwidth tradeoff for two-tier repair.

The minimum per-node storage alpha_min(beta2) is piecewise linear in the
expensive-tier download beta2, with exact rational breakpoints.  This
module evaluates that curve, its extremal points (minimum-storage and
minimum-bandwidth, single-tier and two-tier), and the bandwidth/cost
ratios comparing two-tier repair against symmetric repair at the same
total helper count d = d1 + d2.

Scenario A (d1 >= k) and Scenario B (d1 < k) have different branch
structures; every public function dispatches on ``params.scenario``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegenerateConfigurationError,
    IndexOutOfRangeError,
    InsufficientRepairBandwidthError,
    InvalidDegreeError,
    NonPositiveError,
    NotApplicableError,
)
from .params import (
    CodePoint,
    RationalLike,
    Scenario,
    SystemParams,
    as_fraction,
    repair_bandwidth,
    total_cost,
)

_POINT_KINDS = ("msr", "mbr")


def _check_kind(kind: str) -> str:
    if kind not in _POINT_KINDS:
        raise ValueError(f"kind must be one of {_POINT_KINDS}, got {kind!r}")
    return kind


def _checked_beta2(beta2: RationalLike) -> Fraction:
    b2 = as_fraction(beta2, "beta2")
    if b2 < 0:
        raise NonPositiveError(f"beta2 must be positive, got {b2}")
    return b2


# ---------------------------------------------------------------------------
# single-tier extremal points (uniform download beta = gamma / d)


def msr_point(file_size: RationalLike, k: int, d: int) -> CodePoint:
    """Minimum-storage point for symmetric repair: alpha = M/k, gamma = M*d/(k*(d-k+1))."""
    M, k, d = _checked_single_tier(file_size, k, d)
    gamma = M * d / (k * (d - k + 1))
    return CodePoint(alpha=M / k, beta1=gamma / d, beta2=gamma / d, gamma=gamma)


def mbr_point(file_size: RationalLike, k: int, d: int) -> CodePoint:
    """Minimum-bandwidth point for symmetric repair: alpha = gamma = 2*M*d/(k*(2*d-k+1))."""
    M, k, d = _checked_single_tier(file_size, k, d)
    gamma = 2 * M * d / (k * (2 * d - k + 1))
    return CodePoint(alpha=gamma, beta1=gamma / d, beta2=gamma / d, gamma=gamma)


def _checked_single_tier(file_size: RationalLike, k: int, d: int) -> tuple[Fraction, int, int]:
    M = as_fraction(file_size, "file_size")
    if M <= 0:
        raise NonPositiveError(f"file_size must be positive, got {M}")
    if k < 1:
        raise NonPositiveError(f"k must be at least 1, got {k}")
    if d < k:
        raise InvalidDegreeError(f"d must reach k, got d={d}, k={k}")
    return M, k, d


# ---------------------------------------------------------------------------
# breakpoints of the piecewise-linear storage curve


def breakpoint_a(params: SystemParams, i: int) -> Fraction:
    """Scenario A segment boundary i, for i in 0..k-1; boundary 0 starts the flat branch."""
    _require(params, Scenario.A)
    k = params.k
    if not 0 <= i <= k - 1:
        raise IndexOutOfRangeError(f"branch index must be in 0..{k - 1}, got {i}")
    kp, d1, d2 = params.kprime, params.d1, params.d2
    den = 2 * k * (d1 * kp + d2 - k * kp) + kp * (i + 1) * (2 * k - i)
    return 2 * params.file_size / den


def breakpoint_b1(params: SystemParams, i: int) -> Fraction:
    """Scenario B upper-range boundary i (kprime-independent), for i in 0..k-d1-1."""
    _require(params, Scenario.B)
    k, d = params.k, params.d
    if not 0 <= i <= k - params.d1 - 1:
        raise IndexOutOfRangeError(f"branch index must be in 0..{k - params.d1 - 1}, got {i}")
    den = 2 * k * (d - k) + (i + 1) * (2 * k - i)
    return 2 * params.file_size / den


def breakpoint_b2(params: SystemParams, i: int) -> Fraction:
    """Scenario B lower-range boundary i, for i in -1..d1-1.

    Index -1 is the seam with the upper range and aliases
    ``breakpoint_b1(params, k - d1 - 1)``.
    """
    _require(params, Scenario.B)
    k, d, d1, kp = params.k, params.d, params.d1, params.kprime
    if i == -1:
        return breakpoint_b1(params, k - d1 - 1)
    if not 0 <= i <= d1 - 1:
        raise IndexOutOfRangeError(f"branch index must be in -1..{d1 - 1}, got {i}")
    den = (2 * k * d - k * k - d1 * d1 - d1 + k + 2 * d1 * kp) + i * kp * (2 * d1 - i - 1)
    return 2 * params.file_size / den


def _require(params: SystemParams, scenario: Scenario) -> None:
    if params.scenario is not scenario:
        raise NotApplicableError(
            f"defined for scenario {scenario.value} only, parameters are scenario {params.scenario.value}"
        )


# twice the total capacity (per unit beta2) of the branches already saturated
# when i segments lie to the right of the operating point


def _tail2_a(params: SystemParams, i: int) -> Fraction:
    kp, d1, d2, k = params.kprime, params.d1, params.d2, params.k
    return i * (2 * d1 * kp + 2 * d2 - 2 * k * kp + (i + 1) * kp)


def _tail2_b_upper(params: SystemParams, i: int) -> Fraction:
    return Fraction(i * (2 * params.d - 2 * params.k + i + 1))


def _tail2_b_lower(params: SystemParams, i: int) -> Fraction:
    return (i + 1) * (2 * params.d2 + i * params.kprime)


# ---------------------------------------------------------------------------
# minimum storage


def alpha_min(params: SystemParams, beta2: RationalLike) -> Fraction:
    """Least per-node storage meeting the reconstruction bound at this beta2."""
    if params.scenario is Scenario.A:
        return alpha_min_a(params, beta2)
    return alpha_min_b(params, beta2)


def alpha_min_a(params: SystemParams, beta2: RationalLike) -> Fraction:
    _require(params, Scenario.A)
    b2 = _checked_beta2(beta2)
    M, k = params.file_size, params.k
    if b2 > 0 and b2 >= breakpoint_a(params, 0):
        return M / k
    for i in range(1, k):
        if b2 >= breakpoint_a(params, i):
            return (2 * M - _tail2_a(params, i) * b2) / (2 * (k - i))
    raise InsufficientRepairBandwidthError(
        f"beta2={b2} is below the feasibility threshold {beta2_min(params)}"
    )


def alpha_min_b(params: SystemParams, beta2: RationalLike) -> Fraction:
    _require(params, Scenario.B)
    b2 = _checked_beta2(beta2)
    M, k, d1 = params.file_size, params.k, params.d1
    if b2 > 0 and b2 >= breakpoint_b1(params, 0):
        return M / k
    for i in range(1, k - d1):
        if b2 >= breakpoint_b1(params, i):
            return (2 * M - _tail2_b_upper(params, i) * b2) / (2 * (k - i))
    upper_tail = _tail2_b_upper(params, k - d1 - 1)
    for i in range(0, d1):
        if b2 >= breakpoint_b2(params, i):
            return (2 * M - (upper_tail + _tail2_b_lower(params, i)) * b2) / (2 * (d1 - i))
    raise InsufficientRepairBandwidthError(
        f"beta2={b2} is below the feasibility threshold {beta2_min(params)}"
    )


def beta2_min(params: SystemParams) -> Fraction:
    """Smallest expensive-tier download for which any storage size suffices."""
    M, k, d, d1, d2, kp = (
        params.file_size,
        params.k,
        params.d,
        params.d1,
        params.d2,
        params.kprime,
    )
    if params.scenario is Scenario.A:
        return 2 * M / (k * (2 * d1 * kp + 2 * d2 - k * kp + kp))
    return 2 * M / (2 * k * d - k * k + k + (d1 * d1 + d1) * (kp - 1))


# ---------------------------------------------------------------------------
# two-tier extremal points


def gmsr_point(params: SystemParams) -> CodePoint:
    """Minimum-storage point of the two-tier curve (alpha = M/k, least gamma)."""
    M, k, d, d1, d2, kp = _unpack(params)
    if params.scenario is Scenario.A:
        gamma = M * (d2 + kp * d1) / (k * (d1 * kp + d2 - k * kp + kp))
    else:
        gamma = M * (d1 * kp + d2) / (k * (d - k + 1))
    return _two_tier_point(params, alpha=M / k, gamma=gamma)


def gmbr_point(params: SystemParams) -> CodePoint:
    """Minimum-bandwidth point of the two-tier curve (alpha = gamma)."""
    M, k, d, d1, d2, kp = _unpack(params)
    if params.scenario is Scenario.A:
        gamma = 2 * M * (d2 + kp * d1) / (k * (2 * d1 * kp + 2 * d2 - k * kp + kp))
    else:
        gamma = 2 * M * (d1 * kp + d2) / (2 * k * d - k * k + k + (d1 * d1 + d1) * (kp - 1))
    return _two_tier_point(params, alpha=gamma, gamma=gamma)


def grc_limit_point(params: SystemParams, kind: str) -> CodePoint:
    """Extremal point in the kprime -> infinity limit, where beta2 -> 0.

    Only Scenario A has a finite limit: repair degenerates to d1 cheap
    helpers.  kind is "gmsr" or "gmbr".
    """
    if kind not in ("gmsr", "gmbr"):
        raise ValueError(f"kind must be 'gmsr' or 'gmbr', got {kind!r}")
    if params.scenario is not Scenario.A:
        raise NotApplicableError("the kprime -> infinity limit is finite only when d1 >= k")
    M, k, d1 = params.file_size, params.k, params.d1
    if kind == "gmsr":
        alpha = M / k
        gamma = M * d1 / (k * (d1 - k + 1))
    else:
        gamma = 2 * M * d1 / (k * (2 * d1 - k + 1))
        alpha = gamma
    beta1 = gamma / d1
    return CodePoint(
        alpha=alpha,
        beta1=beta1,
        beta2=Fraction(0),
        gamma=gamma,
        cost=params.cost_cheap * gamma,
    )


def _two_tier_point(params: SystemParams, alpha: Fraction, gamma: Fraction) -> CodePoint:
    beta2 = gamma / params.gamma_per_beta2
    return CodePoint(
        alpha=alpha,
        beta1=params.kprime * beta2,
        beta2=beta2,
        gamma=gamma,
        cost=total_cost(params, beta2),
    )


def _unpack(params: SystemParams):
    return params.file_size, params.k, params.d, params.d1, params.d2, params.kprime


# ---------------------------------------------------------------------------
# ratios against symmetric repair at the same d


def bandwidth_ratio(params: SystemParams, kind: str) -> Fraction:
    """gamma(two-tier extremal) / gamma(symmetric extremal), same d and kind."""
    _check_kind(kind)
    M, k, d, d1, d2, kp = _unpack(params)
    if params.scenario is Scenario.A:
        if kind == "msr":
            return _div((d2 + kp * d1) * (d - k + 1), d * (d1 * kp + d2 - k * kp + kp))
        return _div((d2 + kp * d1) * (2 * d - k + 1), d * (2 * d1 * kp + 2 * d2 - k * kp + kp))
    if kind == "msr":
        return _div(Fraction(d1) * kp + d2, Fraction(d))
    base = 2 * k * d - k * k + k
    return _div((d1 * kp + d2) * base, (base + (d1 * d1 + d1) * (kp - 1)) * d)


def cost_ratio(params: SystemParams, kind: str) -> Fraction:
    """Download cost of the two-tier extremal relative to the symmetric one."""
    _check_kind(kind)
    M, k, d, d1, d2, kp = _unpack(params)
    c1, c2 = params.cost_cheap, params.cost_expensive
    tier_cost = c1 * d1 * kp + c2 * d2
    base_cost = c1 * d1 + c2 * d2
    if params.scenario is Scenario.A:
        if kind == "msr":
            return _div(tier_cost * (d - k + 1), (d1 * kp + d2 - k * kp + kp) * base_cost)
        return _div(tier_cost * (2 * d - k + 1), (2 * d1 * kp + 2 * d2 - k * kp + kp) * base_cost)
    if kind == "msr":
        return _div(tier_cost, base_cost)
    base = 2 * k * d - k * k + k
    return _div(tier_cost * base, base_cost * (base + (d1 * d1 + d1) * (kp - 1)))


def cost_threshold(params: SystemParams, kind: str) -> Fraction:
    """Least cost_expensive/cost_cheap at which two-tier repair never costs more.

    Scenario B at the minimum-storage point has a kprime-independent cost
    premium, so no threshold exists there.
    """
    _check_kind(kind)
    k, d, d1, d2 = params.k, params.d, params.d1, params.d2
    if params.scenario is Scenario.A:
        if kind == "msr":
            return Fraction(d1, d1 - k + 1)
        return Fraction(2 * d1, 2 * d1 - k + 1)
    if kind == "msr":
        raise NotApplicableError("no cost threshold at the minimum-storage point when d1 < k")
    return _div(Fraction(2 * k * d - k * k + k - d1 * d1 - d1), Fraction(d2 * (d1 + 1)))


def cost_ratio_limit(params: SystemParams, kind: str) -> Fraction:
    """kprime -> infinity limit of cost_ratio (cheap tier carries everything)."""
    _check_kind(kind)
    k, d, d1, d2 = params.k, params.d, params.d1, params.d2
    c1, c2 = params.cost_cheap, params.cost_expensive
    base_cost = c1 * d1 + c2 * d2
    if params.scenario is Scenario.A:
        if kind == "msr":
            return _div(c1 * d1 * (d - k + 1), (d1 - k + 1) * base_cost)
        return _div(c1 * d1 * (2 * d - k + 1), (2 * d1 - k + 1) * base_cost)
    if kind == "msr":
        raise NotApplicableError("no finite minimum-storage limit when d1 < k")
    return _div(c1 * d1 * (2 * k * d - k * k + k), base_cost * (d1 * d1 + d1))


def _div(num: Fraction, den: Fraction) -> Fraction:
    if den == 0:
        raise DegenerateConfigurationError("denominator vanishes for these parameters")
    return Fraction(num) / den


# ---------------------------------------------------------------------------
# the assembled curve


@dataclass(frozen=True)
class TradeoffSegment:
    """One linear piece: alpha = intercept - slope * beta2 on [beta2_lo, beta2_hi).

    ``beta2_hi`` is None on the unbounded flat branch.  ``segment_index``
    is 0 on the flat branch and counts up toward beta2_min.
    """

    beta2_lo: Fraction
    beta2_hi: Fraction | None
    intercept: Fraction
    slope: Fraction
    segment_index: int

    def contains(self, beta2: Fraction) -> bool:
        if beta2 < self.beta2_lo:
            return False
        return self.beta2_hi is None or beta2 < self.beta2_hi

    def alpha_at(self, beta2: Fraction) -> Fraction:
        return self.intercept - self.slope * beta2


@dataclass(frozen=True)
class TradeoffCurve:
    """The full piecewise-linear alpha_min curve for one parameter set."""

    params: SystemParams
    beta2_min: Fraction
    segments: tuple[TradeoffSegment, ...]

    def alpha_at(self, beta2: RationalLike) -> Fraction:
        b2 = _checked_beta2(beta2)
        for segment in self.segments:
            if segment.contains(b2):
                return segment.alpha_at(b2)
        raise InsufficientRepairBandwidthError(
            f"beta2={b2} is below the feasibility threshold {self.beta2_min}"
        )

    def breakpoints(self) -> list[Fraction]:
        """Left endpoints of every segment, ascending; the first is beta2_min."""
        return [segment.beta2_lo for segment in self.segments]

    def point_at(self, beta2: RationalLike) -> CodePoint:
        return operating_point(self.params, beta2)


def tradeoff_curve(params: SystemParams) -> TradeoffCurve:
    """Assemble the alpha_min segments covering [beta2_min, infinity)."""
    M, k, d, d1, d2, kp = _unpack(params)
    segments: list[TradeoffSegment] = []
    if params.scenario is Scenario.A:
        for i in range(k - 1, 0, -1):
            segments.append(
                TradeoffSegment(
                    beta2_lo=breakpoint_a(params, i),
                    beta2_hi=breakpoint_a(params, i - 1),
                    intercept=M / (k - i),
                    slope=_tail2_a(params, i) / (2 * (k - i)),
                    segment_index=i,
                )
            )
        flat_start = breakpoint_a(params, 0)
    else:
        upper_tail = _tail2_b_upper(params, k - d1 - 1)
        for i in range(d1 - 1, -1, -1):
            segments.append(
                TradeoffSegment(
                    beta2_lo=breakpoint_b2(params, i),
                    beta2_hi=breakpoint_b2(params, i - 1),
                    intercept=M / (d1 - i),
                    slope=(upper_tail + _tail2_b_lower(params, i)) / (2 * (d1 - i)),
                    segment_index=k - d1 + i,
                )
            )
        for i in range(k - d1 - 1, 0, -1):
            segments.append(
                TradeoffSegment(
                    beta2_lo=breakpoint_b1(params, i),
                    beta2_hi=breakpoint_b1(params, i - 1),
                    intercept=M / (k - i),
                    slope=_tail2_b_upper(params, i) / (2 * (k - i)),
                    segment_index=i,
                )
            )
        flat_start = breakpoint_b1(params, 0)
    segments.append(
        TradeoffSegment(
            beta2_lo=flat_start,
            beta2_hi=None,
            intercept=M / k,
            slope=Fraction(0),
            segment_index=0,
        )
    )
    return TradeoffCurve(params=params, beta2_min=beta2_min(params), segments=tuple(segments))


def operating_point(params: SystemParams, beta2: RationalLike) -> CodePoint:
    """CodePoint on the minimum-storage curve at the given beta2."""
    b2 = _checked_beta2(beta2)
    return CodePoint(
        alpha=alpha_min(params, b2),
        beta1=params.kprime * b2,
        beta2=b2,
        gamma=repair_bandwidth(params, b2),
        cost=total_cost(params, b2),
    )
