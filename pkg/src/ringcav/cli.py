"""Command line interface.

Subcommands: ``point`` (single working point, full report), ``sweep``
(grid -> CSV), ``figures`` (reference figure datasets + sidecars + PNGs)
and ``selftest`` (oracle cross-checks).  Exit codes: 0 success, 1
configuration/usage error, 2 unstable working point, 3 unphysical
covariance, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

from . import figures as figmod
from .config import RunConfig, load_config
from .errors import ConfigError, RingCavError
from .measures import symplectic_invariants
from .model import derive_constants, solve_steady_state
from .report import write_records_csv
from .sweep import PointStatus, SweepSpec, evaluate_point, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_UNSTABLE = 2
EXIT_UNPHYSICAL = 3
EXIT_IO = 4

_STATUS_EXIT = {
    PointStatus.OK: EXIT_OK,
    PointStatus.UNSTABLE: EXIT_UNSTABLE,
    PointStatus.UNPHYSICAL: EXIT_UNPHYSICAL,
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theta", type=float, default=None, metavar="RAD",
                        help="override the ring opening angle (radians)")
    parser.add_argument("--relative-bath-factor", type=int, choices=(1, 2), default=None,
                        help="mechanical bath noise convention for the relative mode")
    parser.add_argument("--oracle", action="store_true",
                        help="obtain covariances by time integration instead of the algebraic solve")
    parser.add_argument("--workers", type=int, default=1, metavar="N",
                        help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringcav",
        description="Steady-state quantum correlations of a driven triangular ring cavity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", help="evaluate a single working point")
    p_point.add_argument("--config", required=True, help="flat key = \"value unit\" file")
    p_point.add_argument("--out", default=None, help="directory for point.json")
    _add_common_flags(p_point)

    p_sweep = sub.add_parser("sweep", help="run the configured sweep and write CSV")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True, help="output directory")
    _add_common_flags(p_sweep)

    p_fig = sub.add_parser("figures", help="emit the reference figure datasets")
    p_fig.add_argument("--config", default=None,
                       help="optional config; its theta and bath factor apply")
    p_fig.add_argument("--out", required=True, help="output directory")
    p_fig.add_argument("--points", type=int, default=240, metavar="N",
                       help="points per curve axis")
    p_fig.add_argument("--no-render", action="store_true", help="skip PNG rendering")
    _add_common_flags(p_fig)

    p_self = sub.add_parser("selftest", help="run the oracle cross-checks")
    p_self.add_argument("--seed", type=int, default=20260810)
    return parser


def _apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    params = config.params
    if args.theta is not None:
        params = params.with_(ring_angle=args.theta)
    return dataclasses.replace(
        config,
        params=params,
        relative_bath_factor=(
            float(args.relative_bath_factor)
            if args.relative_bath_factor is not None
            else config.relative_bath_factor
        ),
        use_ode_oracle=args.oracle or config.use_ode_oracle,
    )


def _point_payload(config: RunConfig) -> tuple[dict, PointStatus]:
    params = config.params
    consts = derive_constants(params)
    result = evaluate_point(
        params,
        relative_bath_factor=config.relative_bath_factor,
        use_ode_oracle=config.use_ode_oracle,
    )
    ss = result.steady_state
    payload: dict = {
        "status": result.status.value,
        "parameters": {
            "arm_length_m": params.arm_length,
            "wavelength_m": params.wavelength,
            "power_W": params.power,
            "mech_freq_rad_s": params.mech_freq,
            "quality_factor": params.quality_factor,
            "mass_kg": params.mass,
            "cavity_decay_rad_s": params.cavity_decay,
            "temperature_K": params.temperature,
            "ring_angle_rad": params.ring_angle,
            "relative_bath_factor": config.relative_bath_factor,
        },
        "derived": {
            "cavity_freq_rad_s": consts.cavity_freq,
            "coupling_rad_s": consts.coupling,
            "drive_amplitude_per_s": consts.drive_amplitude,
            "finesse": consts.finesse,
            "mech_damping_rad_s": consts.mech_damping,
            "thermal_occupancy": consts.thermal_occupancy,
            "coupling_factor": consts.coupling_factor,
        },
        "steady_state": {
            "photon_number": ss.photon_number,
            "alpha_re": ss.alpha.real,
            "alpha_im": ss.alpha.imag,
            "position": ss.position,
            "momentum": ss.momentum,
            "effective_detuning_rad_s": ss.detuning,
            "detuning_ratio": ss.detuning / params.mech_freq,
            "branch_count": ss.branch_count,
        },
        "stability": {
            "routh_hurwitz": result.stability.routh_hurwitz,
            "spectral_abscissa_rad_s": result.stability.spectral_abscissa,
            "char_coeffs": list(result.stability.char_coeffs),
        },
    }
    if result.covariance is not None and result.status is PointStatus.OK:
        inv = symplectic_invariants(result.covariance)
        rep = result.report
        payload["invariants"] = {
            "det_mech": inv.det_mech,
            "det_opt": inv.det_opt,
            "det_cross": inv.det_cross,
            "det_total": inv.det_total,
        }
        payload["measures"] = {
            "nu_plus": rep.nu_plus,
            "nu_minus": rep.nu_minus,
            "nu_tilde_minus": rep.nu_tilde_minus,
            "log_negativity": rep.log_negativity,
            "discord": rep.discord,
            "mutual_information": rep.mutual_information,
            "classical_correlation": rep.mutual_information - rep.discord,
            "discord_branch": rep.discord_branch.value,
        }
    return payload, result.status


def _print_point(payload: dict) -> None:
    def section(name: str) -> None:
        block = payload.get(name)
        if not block:
            return
        print(f"[{name}]")
        for key, value in block.items():
            if isinstance(value, float):
                print(f"  {key:<28} {value:.10g}")
            else:
                print(f"  {key:<28} {value}")

    print(f"status: {payload['status']}")
    for name in ("parameters", "derived", "steady_state", "stability", "invariants", "measures"):
        section(name)


def cmd_point(args: argparse.Namespace) -> int:
    config = _apply_overrides(load_config(args.config), args)
    payload, status = _point_payload(config)
    _print_point(payload)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "point.json", "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return _STATUS_EXIT[status]


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _apply_overrides(load_config(args.config), args)
    if not config.axes:
        print("sweep requires at least one axis (axis1 = ...)", file=sys.stderr)
        return EXIT_CONFIG
    spec = SweepSpec(base=config.params, axes=config.axes, overlay=config.overlay)
    records = run_sweep(
        spec,
        workers=args.workers,
        relative_bath_factor=config.relative_bath_factor,
        use_ode_oracle=config.use_ode_oracle,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    write_records_csv(path, spec, records)
    n_ok = sum(r.status is PointStatus.OK for r in records)
    print(f"wrote {path} ({len(records)} points, {n_ok} ok)")
    return EXIT_OK


def cmd_figures(args: argparse.Namespace) -> int:
    ring_angle = figmod.CALIBRATED_RING_ANGLE
    bath_factor = 1.0
    if args.config is not None:
        config = load_config(args.config)
        ring_angle = config.params.ring_angle
        bath_factor = config.relative_bath_factor
    if args.theta is not None:
        ring_angle = args.theta
    if args.relative_bath_factor is not None:
        bath_factor = float(args.relative_bath_factor)
    if args.points < 2:
        print("--points must be at least 2", file=sys.stderr)
        return EXIT_CONFIG
    written = figmod.emit_figures(
        args.out,
        ring_angle=ring_angle,
        workers=args.workers,
        relative_bath_factor=bath_factor,
        render=not args.no_render,
        points_per_axis=args.points,
    )
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "point":
            return cmd_point(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "figures":
            return cmd_figures(args)
        if args.command == "selftest":
            from .selftest import run_selftest

            return run_selftest(seed=args.seed)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RingCavError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    raise AssertionError(f"unhandled command {args.command!r}")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
