"""Information-flow-graph verification of the closed-form tradeoff.

Repair histories become directed graphs: each stored node is an in/out
pair joined by an edge of capacity alpha, helpers feed newcomers through
edges of capacity beta1 (cheap tier) or beta2 (expensive tier), and a data
collector reads k nodes over unbounded edges.  The file is recoverable in
a history exactly when the source/collector max flow reaches the file
size, so the closed forms in :mod:`regencost.tradeoff` can be checked
three independent ways:

* a clipped-sum evaluation of the adversarial cut,
* a piecewise-linear inversion of that sum (no closed forms involved),
* exact max flow on the explicitly built worst-case graph.

All capacities stay rational; max flow runs on integer-scaled capacities
so the comparisons are exact, never approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Iterable, Iterator, Sequence

import networkx as nx

from . import tradeoff
from .errors import (
    InsufficientRepairBandwidthError,
    InvalidConstructionError,
    NonPositiveError,
)
from .params import RationalLike, Scenario, SystemParams, as_fraction

CHEAP, EXPENSIVE = "cheap", "expensive"


# ---------------------------------------------------------------------------
# the adversarial cut, evaluated directly


def cut_terms(params: SystemParams, beta2: RationalLike) -> list[Fraction]:
    """Unclipped in-capacities of the worst-case newcomers, in replacement order.

    Newcomer i loses one helper edge to each earlier newcomer on the
    collector side of the cut; the remaining in-capacity is the term that
    competes with alpha.
    """
    b2 = _checked_nonnegative(beta2, "beta2")
    k, d, d1, d2, kp = params.k, params.d, params.d1, params.d2, params.kprime
    if params.scenario is Scenario.A:
        return [(d1 * kp + d2 - i * kp) * b2 for i in range(k)]
    terms = [(d1 * kp + d2 - i * kp) * b2 for i in range(min(d1, k - 1) + 1)]
    terms.extend(Fraction(d - i) * b2 for i in range(d1 + 1, k))
    return terms


def cut_capacity_sum(params: SystemParams, alpha: RationalLike, beta2: RationalLike) -> Fraction:
    """Capacity of the adversarial cut: sum of min(term, alpha) over newcomers."""
    a = _checked_nonnegative(alpha, "alpha")
    return sum(min(term, a) for term in cut_terms(params, beta2))


def alpha_min_oracle(params: SystemParams, beta2: RationalLike) -> Fraction:
    """Invert the clipped cut sum for the least alpha with capacity >= file size.

    Sorts the terms and walks the linear pieces of the concave sum; this
    never touches the closed-form breakpoints, so agreement with
    :func:`regencost.tradeoff.alpha_min` is a genuine cross-check.
    """
    terms = sorted(cut_terms(params, beta2))
    target = params.file_size
    if sum(terms) < target:
        raise InsufficientRepairBandwidthError(
            f"total cut capacity {sum(terms)} cannot reach file size {target}"
        )
    saturated = Fraction(0)
    for index, term in enumerate(terms):
        candidate = (target - saturated) / (len(terms) - index)
        if candidate <= term:
            return candidate
        saturated += term
    return terms[-1]  # only reachable when the total equals the file size


def alpha_min_bisect(
    params: SystemParams,
    beta2: RationalLike,
    tol: Fraction = Fraction(1, 10**9),
) -> Fraction:
    """Bisection fallback for alpha_min_oracle; result is within tol above exact."""
    terms = cut_terms(params, beta2)
    target = params.file_size
    if sum(terms) < target:
        raise InsufficientRepairBandwidthError(
            f"total cut capacity {sum(terms)} cannot reach file size {target}"
        )
    lo, hi = Fraction(0), max(terms)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if sum(min(term, mid) for term in terms) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def _checked_nonnegative(value: RationalLike, what: str) -> Fraction:
    v = as_fraction(value, what)
    if v < 0:
        raise NonPositiveError(f"{what} must be nonnegative, got {v}")
    return v


# ---------------------------------------------------------------------------
# explicit flow graphs


@dataclass(frozen=True)
class FlowEdge:
    tail: str
    head: str
    capacity: Fraction | None  # None marks an unbounded edge


@dataclass(frozen=True)
class FlowGraph:
    """A repair history as a capacitated DAG from source to data collector."""

    nodes: tuple[tuple[str, str], ...]  # (node id, role)
    edges: tuple[FlowEdge, ...]
    source: str = "S"
    sink: str = "DC"

    def roles(self) -> dict[str, str]:
        return dict(self.nodes)


class _GraphBuilder:
    def __init__(self, alpha: Fraction) -> None:
        self.alpha = alpha
        self.nodes: list[tuple[str, str]] = [("S", "source"), ("DC", "dc")]
        self.edges: list[FlowEdge] = []

    def add_storage(self, name: str, from_source: bool) -> str:
        """Add an in/out pair joined by the alpha edge; return the node name."""
        self.nodes.append((f"{name}.in", "storage_in"))
        self.nodes.append((f"{name}.out", "storage_out"))
        self.edges.append(FlowEdge(f"{name}.in", f"{name}.out", self.alpha))
        if from_source:
            self.edges.append(FlowEdge("S", f"{name}.in", None))
        return name

    def add_download(self, helper: str, newcomer: str, amount: Fraction) -> None:
        self.edges.append(FlowEdge(f"{helper}.out", f"{newcomer}.in", amount))

    def add_collector_read(self, name: str) -> None:
        self.edges.append(FlowEdge(f"{name}.out", "DC", None))

    def build(self) -> FlowGraph:
        return FlowGraph(nodes=tuple(self.nodes), edges=tuple(self.edges))


def build_gstar(params: SystemParams, alpha: RationalLike, beta2: RationalLike) -> FlowGraph:
    """Build the adversarial history: k newcomers, each helped by all previous ones.

    Scenario A replaces cheap nodes only; Scenario B first exhausts the
    cheap tier (newcomers 0..d1-1) and then replaces expensive nodes,
    which turns earlier newcomers into expensive helpers of later ones.
    The collector reads exactly the k newcomers.
    """
    a = _checked_nonnegative(alpha, "alpha")
    b2 = _checked_nonnegative(beta2, "beta2")
    b1 = params.kprime * b2
    k, d1, d2 = params.k, params.d1, params.d2
    builder = _GraphBuilder(a)
    cheap_pool = [builder.add_storage(f"o{i}", from_source=True) for i in range(d1)]
    expensive_pool = [
        builder.add_storage(f"o{d1 + i}", from_source=True) for i in range(d2)
    ]
    newcomers: list[str] = []
    for j in range(k):
        name = builder.add_storage(f"x{j}", from_source=False)
        if params.scenario is Scenario.A or j <= d1:
            for prev in newcomers:
                builder.add_download(prev, name, b1)
            for helper in cheap_pool[: d1 - j]:
                builder.add_download(helper, name, b1)
            for helper in expensive_pool:
                builder.add_download(helper, name, b2)
        else:
            for prev in newcomers[:d1]:
                builder.add_download(prev, name, b1)
            for prev in newcomers[d1:]:
                builder.add_download(prev, name, b2)
            for helper in expensive_pool[: params.d - j]:
                builder.add_download(helper, name, b2)
        builder.add_collector_read(name)
        newcomers.append(name)
    return builder.build()


def max_flow(graph: FlowGraph) -> Fraction:
    """Exact max flow: scale capacities to integers, run networkx, scale back."""
    scale = math.lcm(
        1, *(edge.capacity.denominator for edge in graph.edges if edge.capacity is not None)
    )
    capacities: dict[tuple[str, str], int] = {}
    finite_total = 0
    unbounded: list[tuple[str, str]] = []
    for edge in graph.edges:
        key = (edge.tail, edge.head)
        if edge.capacity is None:
            unbounded.append(key)
            capacities.setdefault(key, 0)
        else:
            scaled = edge.capacity.numerator * (scale // edge.capacity.denominator)
            capacities[key] = capacities.get(key, 0) + scaled
            finite_total += scaled
    bound = 1 + finite_total  # exceeds any cut made of finite edges
    for key in unbounded:
        capacities[key] = bound
    digraph = nx.DiGraph()
    digraph.add_node(graph.source)
    digraph.add_node(graph.sink)
    for (tail, head), capacity in capacities.items():
        digraph.add_edge(tail, head, capacity=capacity)
    value = nx.maximum_flow_value(digraph, graph.source, graph.sink)
    return Fraction(value, scale)


def to_edge_list(graph: FlowGraph) -> str:
    """One line per edge: `tail head num/den`, with `inf` for unbounded edges."""
    lines = []
    for edge in graph.edges:
        if edge.capacity is None:
            lines.append(f"{edge.tail} {edge.head} inf")
        else:
            lines.append(f"{edge.tail} {edge.head} {edge.capacity.numerator}/{edge.capacity.denominator}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# closed form vs oracle vs flow


@dataclass(frozen=True)
class CutReport:
    """Agreement record for one beta2: closed form vs oracle vs max flow.

    ``agree`` is exact equality of the two alpha routes (both infeasible
    counts as agreement); ``flow_ok`` asserts the graph route matched the
    clipped sum, reaching the file size exactly when feasible.
    """

    beta2: Fraction
    alpha_closed: Fraction | None
    alpha_oracle: Fraction | None
    maxflow_at_alpha: Fraction | None
    agree: bool
    flow_ok: bool

    @property
    def ok(self) -> bool:
        return self.agree and self.flow_ok


def default_beta2_grid(params: SystemParams) -> list[Fraction]:
    """Breakpoints, their midpoints, and breakpoints +- 1/1000 (positive only)."""
    breakpoints = tradeoff.tradeoff_curve(params).breakpoints()
    nudge = Fraction(1, 1000)
    grid = set(breakpoints)
    for left, right in zip(breakpoints, breakpoints[1:]):
        grid.add((left + right) / 2)
    for point in breakpoints:
        grid.add(point + nudge)
        if point - nudge > 0:
            grid.add(point - nudge)
    return sorted(grid)


def verify_closed_form(
    params: SystemParams,
    beta2_grid: Iterable[RationalLike] | None = None,
) -> list[CutReport]:
    """Compare alpha_min against the oracle and the graph on each grid point."""
    if beta2_grid is None:
        grid = default_beta2_grid(params)
    else:
        grid = sorted({_checked_nonnegative(b2, "beta2") for b2 in beta2_grid})
    reports = []
    for b2 in grid:
        try:
            closed: Fraction | None = tradeoff.alpha_min(params, b2)
        except InsufficientRepairBandwidthError:
            closed = None
        try:
            oracle: Fraction | None = alpha_min_oracle(params, b2)
        except InsufficientRepairBandwidthError:
            oracle = None
        agree = closed == oracle if (closed is None) == (oracle is None) else False
        if closed is not None:
            flow = max_flow(build_gstar(params, closed, b2))
            flow_ok = flow == cut_capacity_sum(params, closed, b2) == params.file_size
        else:
            # probe above every term: the graph itself must certify infeasibility
            probe = sum(cut_terms(params, b2)) + 1
            flow = max_flow(build_gstar(params, probe, b2))
            flow_ok = flow == cut_capacity_sum(params, probe, b2) and flow < params.file_size
        reports.append(
            CutReport(
                beta2=b2,
                alpha_closed=closed,
                alpha_oracle=oracle,
                maxflow_at_alpha=flow,
                agree=agree,
                flow_ok=flow_ok,
            )
        )
    return reports


def verification_sweep(
    max_k: int = 5,
    max_d: int = 7,
    kprimes: Sequence[int] = (1, 2, 3, 5),
    file_size: RationalLike = 1,
) -> Iterator[SystemParams]:
    """Every (k, d1, d2, kprime) with k <= max_k, k <= d1+d2 <= max_d; n = d+1."""
    for k in range(1, max_k + 1):
        for d1 in range(0, max_d + 1):
            for d2 in range(0, max_d - d1 + 1):
                if d1 + d2 < k:
                    continue
                for kprime in kprimes:
                    yield SystemParams(
                        n=d1 + d2 + 1,
                        k=k,
                        d1=d1,
                        d2=d2,
                        kprime=Fraction(kprime),
                        file_size=as_fraction(file_size, "file_size"),
                        cost_cheap=Fraction(1),
                        cost_expensive=Fraction(2),
                    )


# ---------------------------------------------------------------------------
# random repair histories


def random_history_graph(
    params: SystemParams,
    alpha: RationalLike,
    beta2: RationalLike,
    rng: Random,
    failures: int,
    n_cheap: int | None = None,
) -> FlowGraph:
    """A uniformly random valid repair history over all n nodes, plus a random collector.

    Tier sizes are drawn from the valid range unless ``n_cheap`` pins them;
    a node may fail only while its tier can still field a full helper set,
    and every replacement inherits the failed node's tier.
    """
    a = _checked_nonnegative(alpha, "alpha")
    b2 = _checked_nonnegative(beta2, "beta2")
    b1 = params.kprime * b2
    n, k, d1, d2 = params.n, params.k, params.d1, params.d2
    if failures < 0:
        raise NonPositiveError(f"failures must be nonnegative, got {failures}")
    if n_cheap is None:
        n_cheap = rng.randint(d1, n - d2)
    if not d1 <= n_cheap <= n - d2:
        raise InvalidConstructionError(
            f"n_cheap={n_cheap} cannot supply d1={d1} cheap and d2={d2} expensive helpers"
        )
    tier = [CHEAP if i < n_cheap else EXPENSIVE for i in range(n)]
    tier_count = {CHEAP: n_cheap, EXPENSIVE: n - n_cheap}
    need = {CHEAP: d1, EXPENSIVE: d2}
    builder = _GraphBuilder(a)
    live = {i: builder.add_storage(f"o{i}", from_source=True) for i in range(n)}
    for t in range(failures):
        failable = [
            i for i in range(n) if tier_count[tier[i]] - 1 >= need[tier[i]]
        ]
        if not failable:
            raise InvalidConstructionError("no node can fail without starving its tier")
        failed = rng.choice(failable)
        name = builder.add_storage(f"x{t}", from_source=False)
        for helper_tier, count, amount in ((CHEAP, d1, b1), (EXPENSIVE, d2, b2)):
            pool = sorted(i for i in range(n) if i != failed and tier[i] == helper_tier)
            for helper in rng.sample(pool, count):
                builder.add_download(live[helper], name, amount)
        live[failed] = name
    for reader in rng.sample(sorted(live), k):
        builder.add_collector_read(live[reader])
    return builder.build()
