"""Command line front end.

Subcommands: ``point`` (extremal operating points), ``curve`` (the full
piecewise-linear tradeoff), ``ratio`` (bandwidth/cost ratios against
symmetric repair), ``threshold`` (cost ratios where two-tier repair starts
paying off), ``verify`` (closed forms against oracle and max flow),
``simulate`` (random linear network coding trials), ``graph`` (dump the
worst-case flow graph), and ``paper-figures`` (the sweep CSVs behind the
reference figures).

Exact rationals print as "p/q" next to a 12-significant-digit decimal
column.  Exit codes: 0 success, 1 verification mismatch, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import cutflow, rlnc, tradeoff
from .errors import NotApplicableError, RegenError
from .params import CodePoint, SystemParams, as_fraction, validate_params

_CONFIG_KEYS = {
    "n": "n",
    "k": "k",
    "d1": "d1",
    "d2": "d2",
    "kprime": "kprime",
    "M": "file_size",
    "file_size": "file_size",
    "c1": "cost_cheap",
    "C1": "cost_cheap",
    "cost_cheap": "cost_cheap",
    "c2": "cost_expensive",
    "C2": "cost_expensive",
    "cost_expensive": "cost_expensive",
}

_FIGURE_KPRIMES = range(1, 21)


def _exact(value: Fraction | None) -> str:
    return "" if value is None else str(value)


def _decimal(value: Fraction | None) -> str:
    return "" if value is None else f"{float(value):.12g}"


def _add_param_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("system parameters")
    group.add_argument("--config", type=Path, help="JSON file with n, k, d1, d2, kprime, M, c1, c2")
    group.add_argument("--n", type=int, help="total nodes (default d1+d2+1)")
    group.add_argument("--k", type=int, help="nodes needed to rebuild the file")
    group.add_argument("--d1", type=int, help="cheap helpers per repair")
    group.add_argument("--d2", type=int, help="expensive helpers per repair")
    group.add_argument("--kprime", help="download ratio beta1/beta2, rational >= 1 (default 1)")
    group.add_argument("--M", help="file size, rational > 0 (default 1)")
    group.add_argument("--c1", help="cheap per-symbol cost, rational (default 1)")
    group.add_argument("--c2", help="expensive per-symbol cost, rational (default 1)")


def _params_from_args(args: argparse.Namespace) -> SystemParams:
    values: dict[str, object] = {}
    if args.config is not None:
        raw = json.loads(Path(args.config).read_text())
        if not isinstance(raw, dict):
            raise ValueError(f"config {args.config} must hold a JSON object")
        for key, value in raw.items():
            if key not in _CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            values[_CONFIG_KEYS[key]] = value
    for flag, canon in (
        ("n", "n"),
        ("k", "k"),
        ("d1", "d1"),
        ("d2", "d2"),
        ("kprime", "kprime"),
        ("M", "file_size"),
        ("c1", "cost_cheap"),
        ("c2", "cost_expensive"),
    ):
        value = getattr(args, flag)
        if value is not None:
            values[canon] = value
    for required in ("k", "d1", "d2"):
        if required not in values:
            raise ValueError(f"--{required} is required (flag or --config)")
    if "n" not in values:
        values["n"] = int(values["d1"]) + int(values["d2"]) + 1
    values.setdefault("kprime", 1)
    values.setdefault("file_size", 1)
    values.setdefault("cost_cheap", 1)
    values.setdefault("cost_expensive", 1)
    return validate_params(**values)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# point


def _point_for_kind(params: SystemParams, kind: str) -> CodePoint:
    if kind in ("msr", "mbr"):
        builder = tradeoff.msr_point if kind == "msr" else tradeoff.mbr_point
        point = builder(params.file_size, params.k, params.d)
        symmetric_cost = (params.cost_cheap * params.d1 + params.cost_expensive * params.d2) * point.beta2
        return replace(point, cost=symmetric_cost)
    if kind in ("gmsr", "gmbr"):
        return tradeoff.gmsr_point(params) if kind == "gmsr" else tradeoff.gmbr_point(params)
    return tradeoff.grc_limit_point(params, kind.removesuffix("-limit"))


def cmd_point(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    point = _point_for_kind(params, args.kind)
    writer = csv.writer(sys.stdout)
    writer.writerow(["field", "exact", "decimal"])
    writer.writerow(["kind", args.kind, ""])
    writer.writerow(["scenario", params.scenario.value, ""])
    for field in ("alpha", "beta1", "beta2", "gamma", "cost"):
        value = getattr(point, field)
        writer.writerow([field, _exact(value), _decimal(value)])
    writer.writerow(["beta1_exceeds_alpha", str(point.beta1_exceeds_alpha).lower(), ""])
    return 0


# ---------------------------------------------------------------------------
# curve


_CURVE_HEADER = [
    "beta2",
    "beta2_decimal",
    "beta1",
    "beta1_decimal",
    "alpha",
    "alpha_decimal",
    "gamma",
    "gamma_decimal",
    "cost",
    "cost_decimal",
]


def _curve_rows(params: SystemParams, samples: int, breakpoints_only: bool) -> list[list[str]]:
    curve = tradeoff.tradeoff_curve(params)
    if breakpoints_only:
        points = curve.breakpoints()
    else:
        if samples < 2:
            raise ValueError(f"--samples must be at least 2, got {samples}")
        low = curve.beta2_min
        high = curve.segments[-1].beta2_lo * Fraction(3, 2)
        step = (high - low) / (samples - 1)
        points = sorted({low + step * i for i in range(samples)} | set(curve.breakpoints()))
    rows = []
    for beta2 in points:
        point = tradeoff.operating_point(params, beta2)
        rows.append(
            [
                _exact(point.beta2),
                _decimal(point.beta2),
                _exact(point.beta1),
                _decimal(point.beta1),
                _exact(point.alpha),
                _decimal(point.alpha),
                _exact(point.gamma),
                _decimal(point.gamma),
                _exact(point.cost),
                _decimal(point.cost),
            ]
        )
    return rows


def cmd_curve(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    writer = csv.writer(sys.stdout)
    writer.writerow(_CURVE_HEADER)
    writer.writerows(_curve_rows(params, args.samples, args.breakpoints_only))
    return 0


# ---------------------------------------------------------------------------
# ratio and threshold


def _parse_kprime_range(spec: str) -> range:
    low, sep, high = spec.partition("..")
    if not sep or not low.strip().isdigit() or not high.strip().isdigit():
        raise ValueError(f"--kprime-range must look like '1..20', got {spec!r}")
    start, stop = int(low), int(high)
    if start < 1 or stop < start:
        raise ValueError(f"--kprime-range must satisfy 1 <= low <= high, got {spec!r}")
    return range(start, stop + 1)


def _ratio_rows(
    params: SystemParams,
    kind: str,
    kprimes: Sequence[int],
    cost_ratios: Sequence[Fraction],
) -> list[list[str]]:
    rows = []
    for ratio in cost_ratios:
        base = replace(params, cost_cheap=Fraction(1), cost_expensive=ratio)
        for kprime in kprimes:
            point = replace(base, kprime=Fraction(kprime))
            rho = tradeoff.bandwidth_ratio(point, kind)
            eta = tradeoff.cost_ratio(point, kind)
            rows.append(
                [
                    str(kprime),
                    _exact(rho),
                    _decimal(rho),
                    _exact(eta),
                    _decimal(eta),
                    _exact(ratio),
                ]
            )
    return rows


_RATIO_HEADER = ["kprime", "rho", "rho_decimal", "eta", "eta_decimal", "cost_ratio"]


def cmd_ratio(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    kprimes = _parse_kprime_range(args.kprime_range)
    if args.cost_ratio:
        ratios = [as_fraction(r, "cost ratio") for r in args.cost_ratio]
    else:
        if params.cost_cheap == 0:
            raise ValueError("give --cost-ratio explicitly when c1 is 0")
        ratios = [params.cost_expensive / params.cost_cheap]
    writer = csv.writer(sys.stdout)
    writer.writerow(_RATIO_HEADER)
    writer.writerows(_ratio_rows(params, args.kind, kprimes, ratios))
    return 0


_THRESHOLD_HEADER = ["kind", "scenario", "threshold", "threshold_decimal"]


def _threshold_rows(params: SystemParams, kinds: Sequence[str]) -> list[list[str]]:
    rows = []
    for kind in kinds:
        try:
            value = tradeoff.cost_threshold(params, kind)
            rows.append([kind, params.scenario.value, _exact(value), _decimal(value)])
        except NotApplicableError:
            rows.append([kind, params.scenario.value, "NA", "NA"])
    return rows


def cmd_threshold(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    kinds = [args.kind] if args.kind else ["msr", "mbr"]
    writer = csv.writer(sys.stdout)
    writer.writerow(_THRESHOLD_HEADER)
    writer.writerows(_threshold_rows(params, kinds))
    return 0


# ---------------------------------------------------------------------------
# verify


def _report_payload(report: cutflow.CutReport) -> dict[str, object]:
    return {
        "beta2": _exact(report.beta2),
        "alpha_closed": None if report.alpha_closed is None else _exact(report.alpha_closed),
        "alpha_oracle": None if report.alpha_oracle is None else _exact(report.alpha_oracle),
        "maxflow_at_alpha": None if report.maxflow_at_alpha is None else _exact(report.maxflow_at_alpha),
        "agree": report.agree,
        "flow_ok": report.flow_ok,
    }


def cmd_verify(args: argparse.Namespace) -> int:
    if args.sweep:
        configs = 0
        points = 0
        mismatches: list[tuple[SystemParams, cutflow.CutReport]] = []
        for params in cutflow.verification_sweep(max_k=args.max_k, max_d=args.max_d):
            configs += 1
            for report in cutflow.verify_closed_form(params):
                points += 1
                if not report.ok:
                    mismatches.append((params, report))
        if args.format == "json":
            payload = {
                "configs": configs,
                "points": points,
                "mismatches": [
                    {
                        "k": p.k,
                        "d1": p.d1,
                        "d2": p.d2,
                        "kprime": _exact(p.kprime),
                        "report": _report_payload(r),
                    }
                    for p, r in mismatches
                ],
            }
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            for p, r in mismatches:
                print(
                    f"MISMATCH k={p.k} d1={p.d1} d2={p.d2} kprime={_exact(p.kprime)} "
                    f"beta2={_exact(r.beta2)} closed={_exact(r.alpha_closed)} oracle={_exact(r.alpha_oracle)}"
                )
            print(f"configs={configs} points={points} mismatches={len(mismatches)}")
        return 0 if not mismatches else 1
    params = _params_from_args(args)
    grid = [as_fraction(b, "beta2") for b in args.beta2] if args.beta2 else None
    reports = cutflow.verify_closed_form(params, grid)
    bad = sum(1 for r in reports if not r.ok)
    if args.format == "json":
        payload = {
            "reports": [_report_payload(r) for r in reports],
            "agreements": len(reports) - bad,
            "mismatches": bad,
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for r in reports:
            closed = _exact(r.alpha_closed) if r.alpha_closed is not None else "infeasible"
            oracle = _exact(r.alpha_oracle) if r.alpha_oracle is not None else "infeasible"
            status = "ok" if r.ok else "MISMATCH"
            print(
                f"beta2={_exact(r.beta2)} closed={closed} oracle={oracle} "
                f"maxflow={_exact(r.maxflow_at_alpha)} {status}"
            )
        print(f"agreements={len(reports) - bad} mismatches={bad}")
    return 0 if bad == 0 else 1


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    field = rlnc.make_field(args.field)
    seed = args.seed if args.seed is not None else int(os.environ.get("REGEN_SEED", "0"))
    trials = [
        rlnc.run_trial(
            params,
            args.alpha_sym,
            args.beta2_sym,
            args.failures,
            seed + i,
            field=field,
            n_cheap=args.n_cheap,
            helper_mode=args.helper_mode,
            max_subsets=args.max_subsets,
        )
        for i in range(args.trials)
    ]
    total_checks = sum(len(t.checks) for t in trials)
    total_successes = sum(t.successes for t in trials)
    rate = Fraction(total_successes, total_checks)
    if args.format == "json":
        payload = {
            "config": {
                "n": params.n,
                "k": params.k,
                "d1": params.d1,
                "d2": params.d2,
                "kprime": _exact(params.kprime),
                "M": _exact(params.file_size),
                "c1": _exact(params.cost_cheap),
                "c2": _exact(params.cost_expensive),
                "alpha_sym": args.alpha_sym,
                "beta2_sym": args.beta2_sym,
                "failures": args.failures,
                "trials": args.trials,
                "seed": seed,
                "field": field.name,
                "helper_mode": args.helper_mode,
                "n_cheap": args.n_cheap,
                "max_subsets": args.max_subsets,
            },
            "trials": [
                {
                    "seed": t.seed,
                    "repairs_performed": t.repairs_performed,
                    "checks": [
                        {"nodes": list(c.nodes), "success": c.success} for c in t.checks
                    ],
                    "successes": t.successes,
                    "success_rate": float(t.success_rate),
                }
                for t in trials
            ],
            "total_checks": total_checks,
            "total_successes": total_successes,
            "success_rate": float(rate),
            "success_rate_exact": _exact(rate),
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(
            f"trials={len(trials)} checks={total_checks} successes={total_successes} "
            f"success_rate={float(rate):.6f} ({_exact(rate)})"
        )
    return 0


# ---------------------------------------------------------------------------
# graph dump


def cmd_graph(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    alpha = as_fraction(args.alpha, "alpha") if args.alpha is not None else tradeoff.alpha_min(
        params, as_fraction(args.beta2, "beta2")
    )
    print(cutflow.to_edge_list(cutflow.build_gstar(params, alpha, as_fraction(args.beta2, "beta2"))))
    return 0


# ---------------------------------------------------------------------------
# figure sweeps


def cmd_paper_figures(args: argparse.Namespace) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    config_a = validate_params(15, 5, 8, 6)
    config_b = validate_params(15, 5, 4, 10)
    frac = Fraction
    written = []

    def write(name: str, header: list[str], rows: list[list[str]]) -> None:
        path = outdir / name
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)
        written.append(path)

    write(
        "msr_ratio_sweep_a.csv",
        _RATIO_HEADER,
        _ratio_rows(config_a, "msr", _FIGURE_KPRIMES, [frac(3, 2), frac(2), frac(3), frac(4)]),
    )
    write(
        "mbr_ratio_sweep_a.csv",
        _RATIO_HEADER,
        _ratio_rows(config_a, "mbr", _FIGURE_KPRIMES, [frac(1), frac(4, 3), frac(2), frac(4)]),
    )
    write(
        "mbr_ratio_sweep_b.csv",
        _RATIO_HEADER,
        _ratio_rows(config_b, "mbr", _FIGURE_KPRIMES, [frac(3, 2), frac(2), frac(3), frac(4)]),
    )
    curve_rows = []
    for kprime in (1, 2, 4):
        tiered = replace(config_a, kprime=Fraction(kprime))
        for row in _curve_rows(tiered, samples=200, breakpoints_only=False):
            curve_rows.append([str(kprime), *row])
    write("tradeoff_curves_a.csv", ["kprime", *_CURVE_HEADER], curve_rows)
    eta_rows = []
    for kind in ("msr", "mbr"):
        for ratio in (frac(2), frac(4)):
            base = replace(config_a, cost_cheap=frac(1), cost_expensive=ratio)
            for kprime in _FIGURE_KPRIMES:
                eta = tradeoff.cost_ratio(replace(base, kprime=frac(kprime)), kind)
                eta_rows.append([kind, _exact(ratio), str(kprime), _exact(eta), _decimal(eta)])
            limit = tradeoff.cost_ratio_limit(base, kind)
            eta_rows.append([kind, _exact(ratio), "inf", _exact(limit), _decimal(limit)])
    write(
        "cost_ratio_vs_kprime_a.csv",
        ["kind", "cost_ratio", "kprime", "eta", "eta_decimal"],
        eta_rows,
    )
    write(
        "thresholds.csv",
        _THRESHOLD_HEADER,
        _threshold_rows(config_a, ["msr", "mbr"]) + _threshold_rows(config_b, ["msr", "mbr"]),
    )
    for path in written:
        print(path)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regencost",
        description="Storage/bandwidth/cost tradeoffs for two-tier regenerating codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    point = sub.add_parser("point", help="print one extremal operating point")
    point.add_argument(
        "--kind",
        required=True,
        choices=["msr", "mbr", "gmsr", "gmbr", "gmsr-limit", "gmbr-limit"],
    )
    _add_param_args(point)
    point.set_defaults(func=cmd_point)

    curve = sub.add_parser("curve", help="sample the piecewise-linear tradeoff curve")
    curve.add_argument("--samples", type=int, default=200, help="grid points (default 200)")
    curve.add_argument(
        "--breakpoints-only", action="store_true", help="emit only the exact breakpoints"
    )
    _add_param_args(curve)
    curve.set_defaults(func=cmd_curve)

    ratio = sub.add_parser("ratio", help="bandwidth and cost ratios against symmetric repair")
    ratio.add_argument("--kind", required=True, choices=["msr", "mbr"])
    ratio.add_argument("--kprime-range", default="1..20", help="integer range, e.g. 1..20")
    ratio.add_argument(
        "--cost-ratio",
        action="append",
        default=[],
        help="c2/c1 value (rational, repeatable; default taken from --c1/--c2)",
    )
    _add_param_args(ratio)
    ratio.set_defaults(func=cmd_ratio)

    threshold = sub.add_parser("threshold", help="cost ratio where two-tier repair breaks even")
    threshold.add_argument("--kind", choices=["msr", "mbr"], help="default: both kinds")
    _add_param_args(threshold)
    threshold.set_defaults(func=cmd_threshold)

    verify = sub.add_parser("verify", help="check closed forms against oracle and max flow")
    verify.add_argument("--beta2", action="append", default=[], help="grid point (repeatable)")
    verify.add_argument("--sweep", action="store_true", help="run the full parameter sweep")
    verify.add_argument("--max-k", type=int, default=5, help="sweep limit on k (default 5)")
    verify.add_argument("--max-d", type=int, default=7, help="sweep limit on d1+d2 (default 7)")
    verify.add_argument("--format", choices=["text", "json"], default="text")
    _add_param_args(verify)
    verify.set_defaults(func=cmd_verify)

    simulate = sub.add_parser("simulate", help="run seeded network-coding repair trials")
    simulate.add_argument("--alpha-sym", type=int, required=True, help="stored symbols per node")
    simulate.add_argument("--beta2-sym", type=int, required=True, help="symbols per expensive helper")
    simulate.add_argument("--failures", type=int, default=1, help="repairs per trial (default 1)")
    simulate.add_argument("--trials", type=int, default=100, help="trial count (default 100)")
    simulate.add_argument("--seed", type=int, help="base seed (default REGEN_SEED or 0)")
    simulate.add_argument("--field", choices=["gf256", "p257"], default="gf256")
    simulate.add_argument("--helper-mode", choices=["uniform", "worst-case"], default="uniform")
    simulate.add_argument("--n-cheap", type=int, help="cheap-tier size (default n - d2)")
    simulate.add_argument("--max-subsets", type=int, default=100, help="k-subsets checked per trial")
    simulate.add_argument("--format", choices=["text", "json"], default="text")
    _add_param_args(simulate)
    simulate.set_defaults(func=cmd_simulate)

    graph = sub.add_parser("graph", help="dump the worst-case flow graph as an edge list")
    graph.add_argument("--beta2", required=True, help="expensive-tier download (rational)")
    graph.add_argument("--alpha", help="per-node storage (default: alpha_min at beta2)")
    _add_param_args(graph)
    graph.set_defaults(func=cmd_graph)

    figures = sub.add_parser(
        "paper-figures", help="write the reference figure sweeps as CSV files"
    )
    figures.add_argument("--outdir", required=True, help="directory for the CSV files")
    figures.set_defaults(func=cmd_paper_figures)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RegenError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: Usage: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
