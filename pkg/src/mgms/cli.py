"""Command-line front end: constants, certification, measures, experiments.

Subcommands
    dims        certified enclosures for p, s, and the Minkowski dimension
    tau         positivity certification of the series constant tau
    measure     log2 cylinder mass with a per-chain breakdown
    experiment  density/lower/telescope/hoeffding/ldev2/cover/boxdim runs

Exit codes: 0 success, 1 certification failure, 2 usage error.  Stochastic
experiments require --seed; reports embed the full config and library
version, and rerunning a config reproduces the report body byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import __version__
from .analytics import (
    CertificationError,
    Gauge,
    dim_minkowski,
    dim_minkowski_enclosure,
    hausdorff_dim,
    solve_p,
    tau_certify,
)
from .core import BinaryWord, block_of, restrict_to_chain
from .experiments import (
    SCHEMA_VERSION,
    CenteredChainLogMass,
    DEFAULT_EPSILON,
    DEFAULT_N_GRID,
    DEFAULT_SEEDS,
    Rademacher,
    box_dimension_estimate,
    config_hash,
    covering_sum,
    density_trajectory,
    deviation_threshold,
    hoeffding_check,
    lower_bound_trajectory,
    upper_bound_telescoping,
    zero_count_deviation_check,
)
from .measures import BlockAssignment, MarkovParams, markov_cylinder_logprob, pdelta_logprob
from .intervals import CertifiedInterval

EXPERIMENT_KINDS = ("density", "lower", "telescope", "hoeffding", "ldev2", "cover", "boxdim")
STOCHASTIC_KINDS = ("density", "lower", "telescope", "hoeffding", "ldev2")


class UsageError(Exception):
    pass


def _interval_dict(ci: CertifiedInterval) -> dict:
    return {
        "lo": f"{ci.lo.numerator}/{ci.lo.denominator}",
        "hi": f"{ci.hi.numerator}/{ci.hi.denominator}",
        "lo_float": float(ci.lo),
        "hi_float": float(ci.hi),
        "mid": ci.mid_float,
        "width": float(ci.width),
    }


def _interval_line(name: str, ci: CertifiedInterval) -> str:
    return (
        f"{name} = {ci.mid_float:.12f}  "
        f"(enclosure width {float(ci.width):.3e}; "
        f"lo {ci.lo.numerator}/{ci.lo.denominator}, hi {ci.hi.numerator}/{ci.hi.denominator})"
    )


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_text(rows: list[tuple], config: dict) -> str:
    lines = [
        f"# mgms {__version__} schema_version={SCHEMA_VERSION}",
        "# config: " + json.dumps(config, sort_keys=True, separators=(",", ":"), default=str),
        "experiment,n,statistic,value,seed_count,config_hash",
    ]
    for exp, n, stat, value, seeds, h in rows:
        lines.append(f"{exp},{n},{stat},{value!r},{seeds},{h}")
    return "\n".join(lines) + "\n"


# -- dims / tau ------------------------------------------------------------------


def cmd_dims(args) -> int:
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    p = solve_p()
    s = hausdorff_dim()
    dm_val, dm_tail = dim_minkowski(args.tol)
    dm = dim_minkowski_enclosure(args.tol)
    payload = {
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "config": {"command": "dims", "tol": args.tol},
        "p": _interval_dict(p),
        "s": _interval_dict(s),
        "dim_minkowski": {**_interval_dict(dm), "partial": dm_val, "tail_bound": dm_tail},
    }
    if args.format == "json":
        _emit(_json_text(payload), args.out)
    else:
        lines = [
            f"mgms {__version__} -- certified dimension constants",
            _interval_line("p      (root of p^3 = (1-p)^2)", p),
            _interval_line("s      (Hausdorff dimension, -log2 p)", s),
            _interval_line(f"dim_M  (Minkowski dimension, tail < {args.tol:g})", dm),
            "",
        ]
        _emit("\n".join(lines), args.out)
    return 0


def cmd_tau(args) -> int:
    cert = tau_certify()  # raises CertificationError on failure
    lower = float(cert.margin)
    payload = {
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "config": {"command": "tau"},
        "partial_12": _interval_dict(cert.partial_12),
        "tail_bound": _interval_dict(cert.tail_bound),
        "certified_lower_bound": lower,
        "verdict": cert.sign,
    }
    if args.format == "json":
        _emit(_json_text(payload), args.out)
    else:
        lines = [
            f"mgms {__version__} -- series constant certification",
            _interval_line("partial sum (k <= 12)", cert.partial_12),
            f"tail bound (k >= 13)  = {float(cert.tail_bound.hi):.12f}  "
            f"(exact {cert.tail_bound.hi.numerator}/{cert.tail_bound.hi.denominator})",
            f"certified lower bound = {lower:.12f}",
            f"tau > 0 CERTIFIED (margin {lower:.6f})",
            "",
        ]
        _emit("\n".join(lines), args.out)
    return 0


# -- measure ---------------------------------------------------------------------


def cmd_measure(args) -> int:
    word_str = args.word
    if not word_str or any(c not in "01" for c in word_str):
        raise UsageError(f"word must be a nonempty 0/1 string, got {word_str!r}")
    u = BinaryWord.from_string(word_str)
    if args.mu is not None:
        params = MarkovParams(args.mu)
        lp = markov_cylinder_logprob(params, u)
        breakdown = [{"i": 1, "restriction": word_str, "parameter": params.r,
                      "log2_mass": None if lp.is_zero else lp.value}]
        label = f"golden Markov measure, r = {params.r}"
    else:
        assign = BlockAssignment(delta=args.pdelta if args.pdelta is not None else 0.0)
        lp = pdelta_logprob(assign, u)
        breakdown = []
        for i in range(1, len(u) + 1, 2):
            rest = restrict_to_chain(u, i)
            b = block_of(i)
            r = assign.param(b)
            part = markov_cylinder_logprob(MarkovParams(r), rest)
            breakdown.append({
                "i": i,
                "restriction": str(rest),
                "block": b,
                "parameter": r,
                "log2_mass": None if part.is_zero else part.value,
            })
        label = ("chain product measure P_mu" if args.pdelta in (None, 0.0)
                 else f"block-perturbed measure, delta = {args.pdelta}")
    payload = {
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "config": {"command": "measure", "word": word_str,
                   "mu": args.mu, "pmu": args.pmu, "pdelta": args.pdelta},
        "measure": label,
        "word": word_str,
        "log2_probability": None if lp.is_zero else lp.value,
        "probability_zero": lp.is_zero,
        "chains": breakdown,
    }
    if args.format == "json":
        _emit(_json_text(payload), args.out)
    else:
        lines = [f"{label}; word {word_str}"]
        if lp.is_zero:
            lines.append("log2 P[u] = ZERO (word not admissible)")
        else:
            lines.append(f"log2 P[u] = {lp.value:.12f}   (P[u] = {lp.to_probability():.6e})")
        for c in breakdown:
            mass = "ZERO" if c["log2_mass"] is None else f"{c['log2_mass']:.12f}"
            blk = f" block {c['block']}" if "block" in c else ""
            lines.append(f"  chain J({c['i']}): '{c['restriction']}'{blk}"
                         f" parameter {c['parameter']:.10f}  contribution {mass}")
        lines.append("")
        _emit("\n".join(lines), args.out)
    return 0


# -- experiments -------------------------------------------------------------------


def _parse_grid(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None


def cmd_experiment(args) -> int:
    kind = args.kind
    if kind in STOCHASTIC_KINDS and args.seed is None:
        raise UsageError(f"experiment {kind!r} is stochastic: --seed is required")
    n_grid = _parse_grid(args.n_grid) if args.n_grid else list(DEFAULT_N_GRID)
    seeds = (list(range(args.seed, args.seed + args.seeds))
             if args.seed is not None else list(DEFAULT_SEEDS))

    if kind == "density":
        measure = BlockAssignment(delta=args.delta)
        if args.gauge == "pure":
            gauge = Gauge.pure()
        elif args.gauge == "phi":
            gauge = Gauge.phi(args.c)
        elif args.gauge == "psi":
            gauge = Gauge.psi_theta(args.theta)
        elif args.gauge == "phi_gamma":
            gauge = Gauge.phi_gamma(args.c, args.gamma)
        else:
            raise UsageError(f"unknown gauge {args.gauge!r}")
        report = density_trajectory(measure, gauge, n_grid, seeds)
    elif kind == "lower":
        report = lower_bound_trajectory(args.delta, args.c, n_grid, seeds)
    elif kind == "telescope":
        g, label = _telescope_g(args.g)
        report = upper_bound_telescoping(g, args.ell_max, args.seed, g_label=label)
    elif kind == "hoeffding":
        if args.distribution == "rademacher":
            dist = Rademacher()
        elif args.distribution == "logmass":
            dist = CenteredChainLogMass(args.k, BlockAssignment(0.0).p)
        else:
            raise UsageError(f"unknown distribution {args.distribution!r}")
        if args.t_grid:
            t_grid = [float(v) for v in args.t_grid.split(",")]
        elif args.distribution == "logmass":
            # sub-linear deviation event S_n >= n^(1-epsilon)
            t_grid = [deviation_threshold(args.n, args.epsilon)]
        else:
            t_grid = [0.1, 0.3, 0.5]
        report = hoeffding_check(dist, t_grid, args.n, args.trials, args.seed)
    elif kind == "ldev2":
        t_grid = [float(v) for v in args.t_grid.split(",")] if args.t_grid else None
        kwargs = {"trials": args.trials, "seed": args.seed}
        if t_grid:
            kwargs["t_grid"] = t_grid
        if args.n_grid:
            kwargs["n_grid"] = n_grid
        report = zero_count_deviation_check(**kwargs)
    elif kind == "cover":
        s_val = dim_minkowski(1e-9).value if args.exponent == "dimm" else None
        gauge = Gauge.pure(s_val) if args.gauge == "pure" else (
            Gauge.psi_theta(args.theta, s_val) if args.gauge == "psi" else Gauge.phi(args.c, s_val))
        values = {n: covering_sum(gauge, n) for n in n_grid}
        return _emit_plain_series("cover", values, args, extra={"gauge": gauge.describe()})
    elif kind == "boxdim":
        values = {n: box_dimension_estimate(n) for n in n_grid}
        return _emit_plain_series("boxdim", values, args, extra={})
    else:
        raise UsageError(f"unknown experiment kind {kind!r}; choose from {EXPERIMENT_KINDS}")

    if args.format == "csv":
        _emit(_csv_text(report.to_csv_rows(), report.config), args.out)
    elif args.format == "json":
        _emit(_json_text({"version": __version__, **report.to_json_dict()}), args.out)
    else:
        _emit(report.summary_line() + "\n", args.out)
    if args.out:
        print(report.summary_line())
    return 0


def _telescope_g(spec: str):
    if spec == "t":
        return (lambda t: t), "t"
    if spec == "t^2":
        return (lambda t: t * t), "t^2"
    if spec.startswith("t^"):
        try:
            e = float(spec[2:])
        except ValueError:
            raise UsageError(f"bad g spec {spec!r}") from None
        return (lambda t: t**e), spec
    raise UsageError(f"bad g spec {spec!r}; use t, t^2, or t^<exponent>")


def _emit_plain_series(kind: str, values: dict, args, extra: dict) -> int:
    config = {"experiment": kind, "n_grid": sorted(values), **extra}
    h = config_hash(config)
    if args.format == "json":
        payload = {
            "version": __version__,
            "schema_version": SCHEMA_VERSION,
            "config": config,
            "config_hash": h,
            "values": {str(n): values[n] for n in sorted(values)},
        }
        _emit(_json_text(payload), args.out)
    elif args.format == "csv":
        rows = [(kind, n, kind, values[n], 0, h) for n in sorted(values)]
        _emit(_csv_text(rows, config), args.out)
    else:
        lines = [f"{kind}: " + ", ".join(f"n={n}: {values[n]:.6f}" for n in sorted(values)), ""]
        _emit("\n".join(lines), args.out)
    return 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mgms",
        description="Rigorous numerics and experiments for the multiplicative golden mean shift.",
    )
    ap.add_argument("--version", action="version", version=f"mgms {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--out", default=None, help="write the report to this path")

    d = sub.add_parser("dims", parents=[common], help="certified p, s, dim_M enclosures")
    d.add_argument("--tol", type=float, default=1e-6)
    d.set_defaults(func=cmd_dims)

    t = sub.add_parser("tau", parents=[common], help="certify the series constant tau > 0")
    t.set_defaults(func=cmd_tau)

    m = sub.add_parser("measure", parents=[common], help="log2 cylinder mass with chain breakdown")
    grp = m.add_mutually_exclusive_group(required=True)
    grp.add_argument("--mu", type=float, default=None, metavar="R",
                     help="golden Markov measure with parameter R")
    grp.add_argument("--pmu", action="store_true", help="chain product measure at p")
    grp.add_argument("--pdelta", type=float, default=None, metavar="DELTA",
                     help="block-perturbed product measure")
    m.add_argument("word", help="0/1 word")
    m.set_defaults(func=cmd_measure)

    e = sub.add_parser("experiment", parents=[common], help="run a persisted experiment")
    e.add_argument("kind", choices=EXPERIMENT_KINDS)
    e.add_argument("--seed", type=int, default=None, help="base seed (required when stochastic)")
    e.add_argument("--seeds", type=int, default=100, help="number of seeds/trajectories")
    e.add_argument("--trials", type=int, default=100_000)
    e.add_argument("--delta", type=float, default=0.05)
    e.add_argument("--c", type=float, default=0.002)
    e.add_argument("--theta", type=float, default=1.0)
    e.add_argument("--gamma", type=float, default=0.5)
    e.add_argument("--gauge", choices=("pure", "phi", "psi", "phi_gamma"), default="psi")
    e.add_argument("--n-grid", default=None, help="comma-separated prefix lengths")
    e.add_argument("--n", type=int, default=100, help="summand count (hoeffding)")
    e.add_argument("--distribution", choices=("rademacher", "logmass"), default="rademacher")
    e.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                   help="deviation-event exponent: default t = n^(-epsilon)")
    e.add_argument("--k", type=int, default=3, help="chain length (hoeffding logmass)")
    e.add_argument("--t-grid", default=None, help="comma-separated thresholds")
    e.add_argument("--g", default="t", help="telescope g spec: t, t^2, t^<e>")
    e.add_argument("--ell-max", type=int, default=16)
    e.add_argument("--exponent", choices=("s", "dimm"), default="s",
                   help="dimension exponent for cover gauges")
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
