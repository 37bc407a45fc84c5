from __future__ import annotations

from regencost import SystemParams, validate_params
from regencost.params import RationalLike


def make_params(
    k: int,
    d1: int,
    d2: int,
    kprime: RationalLike = 1,
    n: int | None = None,
    file_size: RationalLike = 1,
    cost_cheap: RationalLike = 1,
    cost_expensive: RationalLike = 1,
) -> SystemParams:
    """Params with the smallest valid n unless one is given."""
    if n is None:
        n = d1 + d2 + 1
    return validate_params(n, k, d1, d2, kprime, file_size, cost_cheap, cost_expensive)
