"""Random linear network coding simulation of two-tier repair.

Nodes store random linear combinations of the file symbols; only the
coefficient vectors are tracked, since reconstruction is a rank question.
The default field is GF(256) with reduction polynomial 0x11D; a prime
field mode (mod 257) exists to cross-check the byte-field arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from random import Random
from typing import Sequence, Union

from .errors import (
    InsufficientHelpersError,
    NonIntegerDownloadError,
    NonPositiveError,
    UnknownNodeError,
)
from .params import SystemParams

CHEAP, EXPENSIVE = "cheap", "expensive"


class ByteField:
    """GF(2^8) via log/exp tables; addition is xor."""

    order = 256
    polynomial = 0x11D
    name = "gf256"

    def __init__(self) -> None:
        exp = [0] * 510
        log = [0] * 256
        value = 1
        for power in range(255):
            exp[power] = value
            log[value] = power
            value <<= 1
            if value & 0x100:
                value ^= self.polynomial
        for power in range(255, 510):
            exp[power] = exp[power - 255]
        self._exp = exp
        self._log = log

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._exp[255 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))


class PrimeField:
    """Integers modulo a prime."""

    def __init__(self, order: int = 257) -> None:
        if order < 2 or any(order % p == 0 for p in range(2, int(order**0.5) + 1)):
            raise ValueError(f"order must be prime, got {order}")
        self.order = order
        self.name = f"p{order}"

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.order

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.order

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.order

    def inv(self, a: int) -> int:
        if a % self.order == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.order - 2, self.order)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))


Field = Union[ByteField, PrimeField]

GF256 = ByteField()


def make_field(name: str) -> Field:
    """Field from a CLI name: "gf256" or "p<prime>" (e.g. "p257")."""
    if name == "gf256":
        return GF256
    if name.startswith("p") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError(f"unknown field {name!r}")


def matrix_rank(rows: Sequence[Sequence[int]], field: Field) -> int:
    """Rank by Gaussian elimination over the given field."""
    work = [list(row) for row in rows]
    if not work:
        return 0
    width = len(work[0])
    rank = 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        lead = field.inv(work[rank][col])
        work[rank] = [field.mul(lead, v) for v in work[rank]]
        for r in range(rank + 1, len(work)):
            factor = work[r][col]
            if factor:
                work[r] = [field.sub(v, field.mul(factor, p)) for v, p in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


# ---------------------------------------------------------------------------
# storage state


@dataclass(frozen=True)
class NodeState:
    """Coefficient rows held by one node, plus its download-cost tier."""

    rows: tuple[tuple[int, ...], ...]
    tier: str  # "cheap" | "expensive"


@dataclass(frozen=True)
class StorageState:
    nodes: tuple[NodeState, ...]
    file_len: int
    alpha_sym: int
    field: Field


def _checked_count(value: int, what: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise NonIntegerDownloadError(f"{what} must be an integer symbol count, got {value!r}")
    if value < minimum:
        raise NonPositiveError(f"{what} must be at least {minimum}, got {value}")
    return value


def encode_initial(
    file_len: int,
    n: int,
    alpha_sym: int,
    field: Field,
    seed: int,
    tiers: Sequence[str] | None = None,
) -> StorageState:
    """Fill n nodes with alpha_sym uniformly random coefficient rows each."""
    file_len = _checked_count(file_len, "file_len", minimum=1)
    n = _checked_count(n, "n", minimum=1)
    alpha_sym = _checked_count(alpha_sym, "alpha_sym")
    if tiers is None:
        tiers = (CHEAP,) * n
    if len(tiers) != n or any(t not in (CHEAP, EXPENSIVE) for t in tiers):
        raise InsufficientHelpersError(f"tiers must be {n} entries of 'cheap'/'expensive'")
    rng = Random(seed)
    nodes = tuple(
        NodeState(
            rows=tuple(
                tuple(rng.randrange(field.order) for _ in range(file_len))
                for _ in range(alpha_sym)
            ),
            tier=tier,
        )
        for tier in tiers
    )
    return StorageState(nodes=nodes, file_len=file_len, alpha_sym=alpha_sym, field=field)


def _random_combination(rows: list[tuple[int, ...]], width: int, field: Field, rng: Random) -> tuple[int, ...]:
    out = [0] * width
    for row in rows:
        coeff = rng.randrange(field.order)
        if coeff:
            out = [field.add(v, field.mul(coeff, r)) for v, r in zip(out, row)]
    return tuple(out)


def repair(
    state: StorageState,
    failed_node: int,
    helpers_cheap: Sequence[int],
    helpers_expensive: Sequence[int],
    beta1_sym: int,
    beta2_sym: int,
    rng: Random,
) -> StorageState:
    """Replace one node: helpers each send random combinations of their rows.

    Cheap helpers send beta1_sym rows, expensive ones beta2_sym; the
    newcomer stores alpha_sym random combinations of everything received
    and inherits the failed node's tier.
    """
    _check_node(state, failed_node)
    beta1_sym = _checked_count(beta1_sym, "beta1_sym")
    beta2_sym = _checked_count(beta2_sym, "beta2_sym")
    seen: set[int] = {failed_node}
    for helpers, tier in ((helpers_cheap, CHEAP), (helpers_expensive, EXPENSIVE)):
        for helper in helpers:
            _check_node(state, helper)
            if helper in seen:
                raise InsufficientHelpersError(
                    f"node {helper} cannot help twice (or be its own helper)"
                )
            seen.add(helper)
            if state.nodes[helper].tier != tier:
                raise InsufficientHelpersError(
                    f"node {helper} is {state.nodes[helper].tier}, expected {tier}"
                )
    received: list[tuple[int, ...]] = []
    for helpers, count in ((helpers_cheap, beta1_sym), (helpers_expensive, beta2_sym)):
        for helper in helpers:
            source_rows = list(state.nodes[helper].rows)
            for _ in range(count):
                received.append(_random_combination(source_rows, state.file_len, state.field, rng))
    new_rows = tuple(
        _random_combination(received, state.file_len, state.field, rng)
        for _ in range(state.alpha_sym)
    )
    nodes = list(state.nodes)
    nodes[failed_node] = NodeState(rows=new_rows, tier=state.nodes[failed_node].tier)
    return StorageState(
        nodes=tuple(nodes),
        file_len=state.file_len,
        alpha_sym=state.alpha_sym,
        field=state.field,
    )


def _check_node(state: StorageState, node: int) -> None:
    if isinstance(node, bool) or not isinstance(node, int) or not 0 <= node < len(state.nodes):
        raise UnknownNodeError(f"no node {node!r} in a {len(state.nodes)}-node state")


def can_reconstruct(state: StorageState, node_ids: Sequence[int]) -> bool:
    """True when the stacked rows of the chosen nodes span the whole file."""
    rows: list[tuple[int, ...]] = []
    for node in node_ids:
        _check_node(state, node)
        rows.extend(state.nodes[node].rows)
    return matrix_rank(rows, state.field) == state.file_len


# ---------------------------------------------------------------------------
# trials


@dataclass(frozen=True)
class ReconstructionCheck:
    nodes: tuple[int, ...]
    success: bool


@dataclass(frozen=True)
class TrialResult:
    """One seeded history: repairs applied, then k-subsets checked for rank."""

    seed: int
    repairs_performed: int
    checks: tuple[ReconstructionCheck, ...]

    @property
    def successes(self) -> int:
        return sum(1 for check in self.checks if check.success)

    @property
    def success_rate(self) -> Fraction:
        return Fraction(self.successes, len(self.checks))


def run_trial(
    params: SystemParams,
    alpha_sym: int,
    beta2_sym: int,
    num_failures: int,
    seed: int,
    field: Field | None = None,
    n_cheap: int | None = None,
    helper_mode: str = "uniform",
    max_subsets: int = 100,
) -> TrialResult:
    """Simulate one seeded repair history and check reconstruction from k-subsets.

    ``helper_mode`` "uniform" samples helpers uniformly from the live
    tier; "worst-case" prefers the most recently replaced nodes, imitating
    the adversarial history of the flow-graph analysis.  When the number
    of k-subsets exceeds ``max_subsets``, a seeded sample is checked
    instead of all of them.
    """
    if field is None:
        field = GF256
    if helper_mode not in ("uniform", "worst-case"):
        raise ValueError(f"helper_mode must be 'uniform' or 'worst-case', got {helper_mode!r}")
    if params.kprime.denominator != 1:
        raise NonIntegerDownloadError(
            f"simulation needs an integer kprime, got {params.kprime}"
        )
    if params.file_size.denominator != 1:
        raise NonIntegerDownloadError(
            f"simulation needs an integer file size in symbols, got {params.file_size}"
        )
    alpha_sym = _checked_count(alpha_sym, "alpha_sym")
    beta2_sym = _checked_count(beta2_sym, "beta2_sym")
    num_failures = _checked_count(num_failures, "num_failures")
    beta1_sym = int(params.kprime) * beta2_sym
    n, k, d1, d2 = params.n, params.k, params.d1, params.d2
    if n_cheap is None:
        n_cheap = n - d2
    if not d1 <= n_cheap <= n - d2:
        raise InsufficientHelpersError(
            f"n_cheap={n_cheap} cannot supply d1={d1} cheap and d2={d2} expensive helpers"
        )
    tiers = tuple(CHEAP if i < n_cheap else EXPENSIVE for i in range(n))
    need = {CHEAP: d1, EXPENSIVE: d2}
    count = {CHEAP: n_cheap, EXPENSIVE: n - n_cheap}
    rng = Random(seed)
    state = encode_initial(int(params.file_size), n, alpha_sym, field, rng.getrandbits(32), tiers)
    last_replaced = [-1] * n
    for t in range(num_failures):
        failable = [i for i in range(n) if count[tiers[i]] - 1 >= need[tiers[i]]]
        if not failable:
            raise InsufficientHelpersError("no node can fail without starving its tier")
        failed = rng.choice(failable)
        chosen: dict[str, list[int]] = {}
        for tier in (CHEAP, EXPENSIVE):
            pool = [i for i in range(n) if i != failed and tiers[i] == tier]
            if len(pool) < need[tier]:
                raise InsufficientHelpersError(
                    f"only {len(pool)} live {tier} helpers, need {need[tier]}"
                )
            if helper_mode == "worst-case":
                pool.sort(key=lambda i: (-last_replaced[i], i))
                chosen[tier] = pool[: need[tier]]
            else:
                chosen[tier] = rng.sample(pool, need[tier])
        state = repair(state, failed, chosen[CHEAP], chosen[EXPENSIVE], beta1_sym, beta2_sym, rng)
        last_replaced[failed] = t
    checks = tuple(
        ReconstructionCheck(nodes=subset, success=can_reconstruct(state, subset))
        for subset in _collector_subsets(n, k, max_subsets, rng)
    )
    return TrialResult(seed=seed, repairs_performed=num_failures, checks=checks)


def _collector_subsets(n: int, k: int, max_subsets: int, rng: Random) -> list[tuple[int, ...]]:
    if comb(n, k) <= max_subsets:
        return [tuple(subset) for subset in itertools.combinations(range(n), k)]
    subsets: set[tuple[int, ...]] = set()
    while len(subsets) < max_subsets:
        subsets.add(tuple(sorted(rng.sample(range(n), k))))
    return sorted(subsets)
