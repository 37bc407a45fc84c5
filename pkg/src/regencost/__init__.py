"""Storage/bandwidth/cost tradeoffs for regenerating codes with two download-cost tiers."""

from .errors import (
    DegenerateConfigurationError,
    IndexOutOfRangeError,
    InsufficientHelpersError,
    InsufficientRepairBandwidthError,
    InvalidConstructionError,
    InvalidCostOrderError,
    InvalidDegreeError,
    InvalidRatioError,
    NonIntegerDownloadError,
    NonPositiveError,
    NotApplicableError,
    RegenError,
    UnknownNodeError,
)
from .params import (
    CodePoint,
    Scenario,
    SystemParams,
    as_fraction,
    classify_scenario,
    repair_bandwidth,
    total_cost,
    validate_params,
)
from .tradeoff import (
    TradeoffCurve,
    TradeoffSegment,
    alpha_min,
    bandwidth_ratio,
    beta2_min,
    cost_ratio,
    cost_ratio_limit,
    cost_threshold,
    gmbr_point,
    gmsr_point,
    grc_limit_point,
    mbr_point,
    msr_point,
    operating_point,
    tradeoff_curve,
)

__version__ = "0.1.0"

__all__ = [
    "CodePoint",
    "DegenerateConfigurationError",
    "IndexOutOfRangeError",
    "InsufficientHelpersError",
    "InsufficientRepairBandwidthError",
    "InvalidConstructionError",
    "InvalidCostOrderError",
    "InvalidDegreeError",
    "InvalidRatioError",
    "NonIntegerDownloadError",
    "NonPositiveError",
    "NotApplicableError",
    "RegenError",
    "Scenario",
    "SystemParams",
    "TradeoffCurve",
    "TradeoffSegment",
    "UnknownNodeError",
    "alpha_min",
    "as_fraction",
    "bandwidth_ratio",
    "beta2_min",
    "classify_scenario",
    "cost_ratio",
    "cost_ratio_limit",
    "cost_threshold",
    "gmbr_point",
    "gmsr_point",
    "grc_limit_point",
    "mbr_point",
    "msr_point",
    "operating_point",
    "repair_bandwidth",
    "total_cost",
    "tradeoff_curve",
    "validate_params",
    "__version__",
]
