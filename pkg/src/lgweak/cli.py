"""Command line front end.

    lgweak theory   --alpha A --gamma G --delta D [--out report.json]
    lgweak sweep    --gamma G [--grid N] [--out sweep.csv]
    lgweak simulate [--config run.ini] [flag overrides] [--out DIR]
    lgweak bounds   N [--brute]

Angles are given in units of pi.  Exit codes: 0 success, 2 invalid
arguments or config, 3 numerical guard tripped (singular post-selection,
enumeration too large, zero coupling, grid too small).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .estimators import InsufficientCounts, ZeroCoupling
from .experiment import (
    RunConfig,
    SweepSpec,
    load_config,
    run_simulation,
    sweep_b4,
    sweep_rows,
    sweep_summary,
    theory_report,
    write_frames,
    write_report,
    write_sweep_csv,
)
from .inequalities import (
    ChainTooShort,
    EnumerationTooLarge,
    bn_bounds,
    macrorealist_bounds_bruteforce,
)
from .pointer import GridTooSmall
from .qubit import PostSelectionSingular

GUARD_ERRORS = (
    PostSelectionSingular,
    EnumerationTooLarge,
    GridTooSmall,
    ZeroCoupling,
    InsufficientCounts,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgweak",
        description="Leggett-Garg tests via weak measurements on a polarization qubit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_theory = sub.add_parser("theory", help="closed-form correlators and B4 at one configuration")
    p_theory.add_argument("--alpha", type=float, required=True, help="preparation angle / pi")
    p_theory.add_argument("--gamma", type=float, required=True, help="early observable axis / pi")
    p_theory.add_argument("--delta", type=float, required=True, help="analyzer angle / pi")
    p_theory.add_argument("--out", type=Path, help="write the JSON report here")
    p_theory.set_defaults(func=cmd_theory)

    p_sweep = sub.add_parser("sweep", help="B4 violation map over (alpha, delta)")
    p_sweep.add_argument("--gamma", type=float, required=True, help="early observable axis / pi")
    p_sweep.add_argument("--grid", type=int, default=101, help="steps per axis (default 101)")
    p_sweep.add_argument("--out", type=Path, help="CSV path (default: CSV to stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="Monte Carlo photon-counting run and B4 estimate")
    p_sim.add_argument("--config", type=Path, help="flat key = value config file")
    p_sim.add_argument("--alpha", type=float, help="preparation angle / pi")
    p_sim.add_argument("--gamma", type=float, help="early observable axis / pi")
    p_sim.add_argument("--delta", type=float, help="analyzer angle / pi")
    p_sim.add_argument("--photons", type=int, help="heralded photons per run")
    p_sim.add_argument("--g-over-sigma", type=float, help="coupling over pointer width")
    p_sim.add_argument("--pixels", type=int, help="detector pixels per axis")
    p_sim.add_argument("--pitch-over-sigma", type=float, help="pixel pitch over pointer width")
    p_sim.add_argument("--dark-rate", type=float, help="mean dark counts per pixel per frame")
    p_sim.add_argument("--seed", type=int, help="base random seed")
    p_sim.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p_sim.set_defaults(func=cmd_simulate)

    p_bounds = sub.add_parser("bounds", help="macrorealist bounds for an n-measurement chain")
    p_bounds.add_argument("n", type=int, help="number of measurements (>= 3)")
    p_bounds.add_argument("--brute", action="store_true", help="cross-check by enumeration")
    p_bounds.set_defaults(func=cmd_bounds)

    return parser


_FLAG_TO_FIELD = {
    "alpha": "alpha_pi",
    "gamma": "gamma_pi",
    "delta": "delta_pi",
    "photons": "photons",
    "g_over_sigma": "g_over_sigma",
    "pixels": "pixels",
    "pitch_over_sigma": "pitch_over_sigma",
    "dark_rate": "dark_rate",
    "seed": "seed",
}


def _config_from_args(args) -> RunConfig:
    """Config file (if any) with explicit flags overriding it."""
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {
        field: getattr(args, flag)
        for flag, field in _FLAG_TO_FIELD.items()
        if getattr(args, flag) is not None
    }
    return replace(cfg, **overrides) if overrides else cfg


def cmd_theory(args) -> int:
    report = theory_report(args.alpha, args.gamma, args.delta)
    corr = report["correlators"]
    cond = report["conditional_values"]
    b4 = report["b4"]
    print(
        f"configuration: alpha={args.alpha}pi gamma={args.gamma}pi delta={args.delta}pi"
    )
    print(
        f"  exp_b={corr['exp_b']:+.6f}  exp_c={corr['exp_c']:+.6f}  "
        f"corr_bc={corr['corr_bc']:+.6f}  exp_d={corr['exp_d']:+.6f}"
    )
    print(
        f"  p_plus={corr['p_d_plus']:.6f}  "
        f"wv_plus={cond['plus_port']:+.6f}{' (anomalous)' if cond['plus_anomalous'] else ''}  "
        f"wv_minus={cond['minus_port']:+.6f}{' (anomalous)' if cond['minus_anomalous'] else ''}"
    )
    print(
        f"  B4 = {b4['value']:+.6f}  bounds [{b4['lower_bound']:+.0f}, {b4['upper_bound']:+.0f}]"
        f"  -> {b4['classification']}"
    )
    print(f"  anomaly threshold (minus port) = {report['anomaly_threshold']:+.6f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"report written to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        gamma_pi=args.gamma,
        alpha_range=(0.0, 1.0, args.grid),
        delta_range=(0.0, 1.0, args.grid),
    )
    result = sweep_b4(spec)
    if args.out:
        summary = write_sweep_csv(result, args.out)
        stream = sys.stdout
        print(f"sweep written to {args.out}")
    else:
        print("alpha_pi,delta_pi,b4,class")
        for a, d, v, cls in sweep_rows(result):
            print(f"{a!r},{d!r},{v!r},{cls}")
        summary = sweep_summary(result)
        stream = sys.stderr
    for label in ("max", "min"):
        s = summary[label]
        print(
            f"{label} B4 = {s['b4']:+.6f} at alpha={s['alpha_pi']:.6g}pi, "
            f"delta={s['delta_pi']:.6g}pi",
            file=stream,
        )
    return 0


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    result = run_simulation(cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_frames(result, out_dir)
    write_report(result.report, out_dir / "report.json")
    est = result.estimate
    theory_b4 = result.report["theory"]["b4"]["value"]
    print(
        f"B4 = {est.value:+.4f} +- {est.se:.4f}  (theory {theory_b4:+.4f})"
        f"  -> {est.verdict.classification}"
    )
    print(f"frames and report written to {out_dir}")
    return 0


def cmd_bounds(args) -> int:
    lower, upper = bn_bounds(args.n)
    print(f"n = {args.n}: macrorealist bounds [{lower:+.0f}, {upper:+.0f}]")
    if args.brute:
        b_lower, b_upper = macrorealist_bounds_bruteforce(args.n)
        agree = (b_lower, b_upper) == (lower, upper)
        print(
            f"enumeration over deterministic assignments: [{b_lower:+.0f}, {b_upper:+.0f}]"
            f"  ({'agrees' if agree else 'DISAGREES'})"
        )
        if not agree:
            return 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GUARD_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ChainTooShort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
