"""Batch command-line surface emitting CSV or JSON tables.

Subcommands: ``dist`` (distance-law tables), ``moments`` (ranked-distance
moments), ``conditional`` (beacon-conditional laws and moments),
``metrics`` (energy, interference, connectivity, outage bound), and
``validate`` (seeded Monte Carlo check suites).

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import shlex
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .conditional import BeaconCondition, cond_cdf, cond_ccdf, cond_moment_report, cond_pdf
from .distance import (
    ConditionedPppQuery,
    NthNeighborQuery,
    PppLimitLaw,
    ccdf_rn,
    cdf_rn,
    conditioned_ppp_ccdf,
    conditioned_ppp_cdf,
    conditioned_ppp_pdf,
    mean_internodal,
    mean_rn,
    moment_rn,
    pdf_rn,
    variance_rn,
)
from .geometry import NetworkSpec
from .metrics import (
    MetricConfig,
    connectivity_prob,
    mean_hop_energy,
    mean_interference,
    outage_lower_bound,
)
from .validation import SUITES, run_suite


@dataclass
class OutputTable:
    """Rectangular result table plus run metadata."""

    columns: list[str]
    rows: list[list]
    metadata: dict[str, str]


def _cell_text(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return repr(x)


def _cell_json(value):
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    x = float(value)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def render(table: OutputTable, fmt: str) -> str:
    """Serialize a table as CSV (metadata in ``# key=value`` comment lines,
    "." decimal separator, "inf" for infinities) or as a JSON object with
    keys columns/rows/metadata."""
    if fmt == "csv":
        lines = [f"# {key}={val}" for key, val in table.metadata.items()]
        lines.append(",".join(table.columns))
        lines.extend(",".join(_cell_text(c) for c in row) for row in table.rows)
        return "\n".join(lines)
    if fmt == "json":
        payload = {
            "columns": table.columns,
            "rows": [[_cell_json(c) for c in row] for row in table.rows],
            "metadata": table.metadata,
        }
        return json.dumps(payload, indent=2, sort_keys=True)
    raise ValueError(f"unknown format {fmt!r}")


def _metadata(args, argv: list[str], stamped: bool = True, **extra: str) -> dict[str, str]:
    meta = {
        "invocation": shlex.join(["bppdist", *argv]),
        "version": __version__,
    }
    if stamped:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    meta.update(extra)
    return meta


def _require(args, names: list[str]) -> None:
    for name in names:
        if getattr(args, name.lstrip("-").replace("-", "_"), None) is None:
            raise ValueError(f"--{name} is required for this invocation")


def _ranks(args, num_nodes: int) -> list[int]:
    if args.all_n:
        return list(range(1, num_nodes + 1))
    if args.n is None:
        raise ValueError("specify --n or --all-n")
    return [args.n]


def _parse_theta_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"--theta-grid expects lo:hi:count, got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if lo <= 0.0 or hi <= lo or count < 2:
        raise ValueError(f"--theta-grid needs 0 < lo < hi and count >= 2, got {text!r}")
    return np.logspace(math.log10(lo), math.log10(hi), count)


def cmd_dist(args, argv: list[str]) -> OutputTable:
    if args.law in ("bpp", "cond-ppp"):
        _require(args, ["d", "R", "N", "n"])
        spec = NetworkSpec(args.d, args.R, args.N)
        grid = np.linspace(0.0, spec.radius, args.grid)
        if args.law == "bpp":
            query = NthNeighborQuery(spec, args.n)
            pdf = np.asarray(pdf_rn(query, grid))
            cdf = np.asarray(cdf_rn(query, grid))
            ccdf = np.asarray(ccdf_rn(query, grid))
        else:
            if args.intensity is None:
                raise ValueError("--lambda is required for law cond-ppp")
            query = ConditionedPppQuery(spec, args.n, args.intensity)
            pdf = np.asarray(conditioned_ppp_pdf(query, grid))
            cdf = np.asarray(conditioned_ppp_cdf(query, grid))
            ccdf = np.asarray(conditioned_ppp_ccdf(query, grid))
    else:  # ppp-limit
        _require(args, ["d", "n"])
        if args.intensity is None:
            raise ValueError("--lambda is required for law ppp-limit")
        law = PppLimitLaw(args.intensity, args.d, args.n)
        hi = args.rmax if args.rmax is not None else law.quantile(0.999)
        grid = np.linspace(0.0, hi, args.grid)
        pdf = np.asarray(law.pdf(grid))
        cdf = np.asarray(law.cdf(grid))
        ccdf = 1.0 - cdf
    rows = [[float(r), float(f), float(c), float(s)] for r, f, c, s in zip(grid, pdf, cdf, ccdf)]
    return OutputTable(["r", "pdf", "cdf", "ccdf"], rows, _metadata(args, argv, law=args.law))


def cmd_moments(args, argv: list[str]) -> OutputTable:
    _require(args, ["d", "R", "N", "gamma"])
    spec = NetworkSpec(args.d, args.R, args.N)
    if args.internodal is not None:
        try:
            i_text, j_text = args.internodal.split(",")
            i, j = int(i_text), int(j_text)
        except ValueError as exc:
            raise ValueError(f"--internodal expects i,j integers, got {args.internodal!r}") from exc
        value = mean_internodal(spec, i, j)
        return OutputTable(
            ["i", "j", "mean_gap"],
            [[i, j, value]],
            _metadata(args, argv),
        )
    rows = []
    for rank in _ranks(args, spec.num_nodes):
        query = NthNeighborQuery(spec, rank)
        rows.append(
            [rank, moment_rn(query, args.gamma).value, mean_rn(query), variance_rn(query)]
        )
    return OutputTable(["n", "moment", "mean", "variance"], rows, _metadata(args, argv))


def cmd_conditional(args, argv: list[str]) -> OutputTable:
    _require(args, ["d", "R", "N", "k", "s", "n"])
    spec = NetworkSpec(args.d, args.R, args.N)
    if args.n == args.k:
        raise ValueError(
            f"n = k = {args.n} is the degenerate case: the conditional law is "
            f"a point mass at s"
        )
    cond = BeaconCondition(args.k, args.s)
    if args.moment:
        if args.gamma is None:
            raise ValueError("--gamma is required with --moment")
        report = cond_moment_report(spec, cond, args.n, args.gamma)
        return OutputTable(
            ["branch", "quadrature", "shifted_closed_form", "corrected_closed_form"],
            [[report.branch, report.quadrature, report.closed_form_shifted,
              report.closed_form_corrected]],
            _metadata(args, argv),
        )
    if args.n < args.k:
        lo, hi = 0.0, cond.distance
    else:
        lo, hi = cond.distance, spec.radius
    grid = np.linspace(lo, hi, args.grid)
    pdf = np.asarray(cond_pdf(spec, cond, args.n, grid))
    cdf = np.asarray(cond_cdf(spec, cond, args.n, grid))
    ccdf = np.asarray(cond_ccdf(spec, cond, args.n, grid))
    rows = [[float(r), float(f), float(c), float(s)] for r, f, c, s in zip(grid, pdf, cdf, ccdf)]
    return OutputTable(["r", "pdf", "cdf", "ccdf"], rows, _metadata(args, argv))


def cmd_metrics(args, argv: list[str]) -> OutputTable:
    _require(args, ["d", "R", "N"])
    spec = NetworkSpec(args.d, args.R, args.N)
    meta = _metadata(args, argv, metric=args.metric)
    if args.metric == "energy":
        _require(args, ["alpha"])
        rows = [
            [rank, mean_hop_energy(spec, rank, args.alpha).value]
            for rank in _ranks(args, spec.num_nodes)
        ]
        return OutputTable(["n", "energy"], rows, meta)
    if args.metric == "interference":
        _require(args, ["alpha", "p"])
        cfg = MetricConfig(
            transmit_prob=args.p,
            pathloss_exponent=args.alpha,
            pathloss=args.pathloss,
        )
        value = mean_interference(spec, cfg).value
        return OutputTable(
            ["pathloss", "mean_interference"], [[args.pathloss, value]], meta
        )
    if args.metric == "connectivity":
        _require(args, ["alpha", "n0"])
        thetas = _theta_values(args)
        rows = []
        for theta in thetas:
            for rank in _ranks(args, spec.num_nodes):
                cfg = MetricConfig(
                    pathloss_exponent=args.alpha,
                    noise_power=args.n0,
                    sinr_threshold=float(theta),
                )
                rows.append([float(theta), rank, connectivity_prob(spec, cfg, rank)])
        return OutputTable(["theta", "n", "probability"], rows, meta)
    if args.metric == "outage-bound":
        _require(args, ["alpha", "p"])
        rows = []
        for theta in _theta_values(args):
            cfg = MetricConfig(
                transmit_prob=args.p,
                pathloss_exponent=args.alpha,
                sinr_threshold=float(theta),
                pathloss="singular",
            )
            bound = outage_lower_bound(spec, cfg)
            rows.append([float(theta), bound, 1.0 - bound])
        return OutputTable(
            ["theta", "outage_lower_bound", "success_upper_bound"], rows, meta
        )
    raise ValueError(f"unknown metric {args.metric!r}")


def _theta_values(args) -> np.ndarray:
    if args.theta_grid is not None:
        return _parse_theta_grid(args.theta_grid)
    if args.theta is None:
        raise ValueError("specify --theta or --theta-grid")
    if args.theta <= 0.0:
        raise ValueError(f"--theta must be positive, got {args.theta}")
    return np.array([args.theta])


def _resolve_workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("BPPDIST_WORKERS")
    if env is not None and env != "":
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"BPPDIST_WORKERS must be an integer, got {env!r}") from exc
    return 1


def cmd_validate(args, argv: list[str]) -> tuple[OutputTable, int]:
    workers = _resolve_workers(args)
    results = run_suite(args.suite, args.seed, args.trials, workers)
    rows = [
        [res.name, res.statistic, res.threshold, "pass" if res.passed else "fail"]
        for res in results
    ]
    table = OutputTable(
        ["check", "statistic", "threshold", "result"],
        rows,
        _metadata(
            args,
            argv,
            stamped=False,
            suite=args.suite,
            seed=str(args.seed),
            trials=str(args.trials),
            workers=str(workers),
        ),
    )
    code = 0 if all(res.passed for res in results) else 1
    return table, code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bppdist",
        description="Distance distributions and derived metrics for finite "
        "uniformly random networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_dist = sub.add_parser("dist", help="distance-law tables over a grid")
    p_dist.add_argument("--law", choices=("bpp", "cond-ppp", "ppp-limit"), required=True)
    p_dist.add_argument("--d", type=int)
    p_dist.add_argument("--R", type=float)
    p_dist.add_argument("--N", type=int)
    p_dist.add_argument("--n", type=int)
    p_dist.add_argument("--lambda", dest="intensity", type=float)
    p_dist.add_argument("--grid", type=int, default=200)
    p_dist.add_argument("--rmax", type=float, help="grid end for ppp-limit (default: 0.999 quantile)")
    add_common(p_dist)

    p_mom = sub.add_parser("moments", help="moments of ranked distances")
    p_mom.add_argument("--d", type=int)
    p_mom.add_argument("--R", type=float)
    p_mom.add_argument("--N", type=int)
    p_mom.add_argument("--gamma", type=float)
    p_mom.add_argument("--n", type=int)
    p_mom.add_argument("--all-n", action="store_true")
    p_mom.add_argument("--internodal", help="i,j: mean gap between ranks i < j")
    add_common(p_mom)

    p_cond = sub.add_parser("conditional", help="laws conditioned on a revealed rank")
    p_cond.add_argument("--d", type=int)
    p_cond.add_argument("--R", type=float)
    p_cond.add_argument("--N", type=int)
    p_cond.add_argument("--k", type=int, help="revealed rank")
    p_cond.add_argument("--s", type=float, help="revealed distance")
    p_cond.add_argument("--n", type=int)
    p_cond.add_argument("--grid", type=int, default=200)
    p_cond.add_argument("--moment", action="store_true")
    p_cond.add_argument("--gamma", type=float)
    add_common(p_cond)

    p_met = sub.add_parser("metrics", help="energy, interference, connectivity, outage bound")
    p_met.add_argument(
        "--metric",
        choices=("energy", "interference", "connectivity", "outage-bound"),
        required=True,
    )
    p_met.add_argument("--d", type=int)
    p_met.add_argument("--R", type=float)
    p_met.add_argument("--N", type=int)
    p_met.add_argument("--n", type=int)
    p_met.add_argument("--all-n", action="store_true")
    p_met.add_argument("--p", type=float, default=1.0)
    p_met.add_argument("--alpha", type=float)
    p_met.add_argument("--n0", type=float, default=0.0)
    p_met.add_argument("--theta", type=float)
    p_met.add_argument("--theta-grid", help="lo:hi:count, log-spaced")
    p_met.add_argument("--pathloss", choices=("singular", "bounded"), default="singular")
    add_common(p_met)

    p_val = sub.add_parser("validate", help="run Monte Carlo check suites")
    p_val.add_argument("--suite", choices=SUITES + ("all",), required=True)
    p_val.add_argument("--seed", type=int, required=True)
    p_val.add_argument("--trials", type=int, default=100000)
    p_val.add_argument("--workers", type=int)
    add_common(p_val)

    return parser


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "dist":
            table, code = cmd_dist(args, argv), 0
        elif args.command == "moments":
            table, code = cmd_moments(args, argv), 0
        elif args.command == "conditional":
            table, code = cmd_conditional(args, argv), 0
        elif args.command == "metrics":
            table, code = cmd_metrics(args, argv), 0
        else:
            table, code = cmd_validate(args, argv)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(table, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
