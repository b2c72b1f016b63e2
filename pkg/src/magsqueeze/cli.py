"""Command-line interface: steady, sweep, wigner and validate subcommands."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .analysis import steady_state, sweep, temperature_thresholds
from .config import RunConfig, load_config
from .errors import (
    ConfigError,
    InvalidInputError,
    InvalidStateError,
    NoMeasuresError,
    NoSteadyStateError,
    NumericalError,
    ParametricResonanceError,
)
from .gaussian import wigner_single_mode
from .model import build_drift, derive, rabi_frequency, total_spins, validity_report
from .solver import stability
from .tableio import ResultTable, sweep_table, write_csv, write_json

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG = 2
EXIT_NO_STEADY_STATE = 3
EXIT_NUMERICAL = 4

_CONTRAST_MEASURES = ("C_E_am", "C_E_ab", "C_E_mb", "C_R")


def _base_metadata(config: RunConfig, command: str) -> list[tuple[str, str]]:
    meta = [("artifact", f"magsqueeze {__version__}"), ("command", command)]
    for key in sorted(config.raw_parameters):
        meta.append((f"param {key}", str(config.raw_parameters[key])))
    return meta


def _writable_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory is not writable: {path}")
    return path


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _print_validity(config: RunConfig) -> bool | None:
    """Print the validity report; returns overall verdict or None if unavailable."""
    if config.kerr is None:
        print("validity: skipped (set validate.kerr_over_2pi_hz to enable)")
        return None
    try:
        report = validity_report(config.params, config.kerr)
    except InvalidInputError as exc:
        print(f"validity: skipped ({exc})")
        return None
    print(f"validity: |m_s| = {_fmt(report.magnon_amplitude)}")
    print(
        f"validity: magnon occupation = {_fmt(report.magnon_occupation)}"
        f" (bound {_fmt(report.excitation_bound)},"
        f" low-excitation {'PASS' if report.low_excitation_ok else 'FAIL'})"
    )
    print(
        f"validity: Kerr/drive ratio = {_fmt(report.kerr_drive_ratio)}"
        f" (threshold 0.5, {'PASS' if report.kerr_ok else 'FAIL'})"
    )
    print(f"validity: stable = {'PASS' if report.stable else 'FAIL'}")
    return report.low_excitation_ok and report.kerr_ok and report.stable


def cmd_steady(config: RunConfig, out_dir: Path, fmt: str) -> int:
    report = stability(build_drift(config.params))
    if not report.is_stable:
        raise NoSteadyStateError(
            f"no steady state: max drift eigenvalue real part = {_fmt(report.max_real_part)} rad/s"
        )
    v = steady_state(config.params)
    from .analysis import ModePair, bipartite_entanglement
    from .gaussian import min_residual_contangle

    print(f"stability: stable (max Re eigenvalue = {_fmt(report.max_real_part)} rad/s)")
    print(f"E_am = {_fmt(bipartite_entanglement(v, ModePair.CAVITY_MAGNON))}")
    print(f"E_ab = {_fmt(bipartite_entanglement(v, ModePair.CAVITY_PHONON))}")
    print(f"E_mb = {_fmt(bipartite_entanglement(v, ModePair.MAGNON_PHONON))}")
    print(f"R_min = {_fmt(min_residual_contangle(v))}")
    _print_validity(config)

    if config.dump_covariance:
        out = _writable_dir(out_dir)
        labels = ["x_a", "p_a", "x_m", "p_m", "q", "p"]
        table = ResultTable(
            columns=labels,
            rows=[tuple(float(x) for x in row) for row in v.data],
            metadata=_base_metadata(config, "steady"),
        )
        path = out / "covariance.csv"
        write_csv(table, path)
        print(f"covariance written to {path}")
        if fmt == "json":
            write_json(table, out / "covariance.json")
            print(f"covariance written to {out / 'covariance.json'}")
    return EXIT_OK


def cmd_sweep(config: RunConfig, out_dir: Path, fmt: str, threads: int) -> int:
    if config.sweep is None:
        raise ConfigError("the sweep command needs a sweep section in the config")
    out = _writable_dir(out_dir)

    spec = config.sweep
    result = sweep(
        config.params,
        axes=[(axis.name, axis.si_values) for axis in spec.axes],
        pairing=spec.pairing,
        measures=spec.measures,
        threads=threads,
    )

    metadata = _base_metadata(config, "sweep")
    for axis in spec.axes:
        d = axis.display_values
        metadata.append(
            (f"axis {axis.column_name}", f"{float(d[0])!r} .. {float(d[-1])!r} ({len(d)} points)")
        )
    if spec.pairing is not None:
        metadata.append(
            (
                "pairing",
                f"theta_forward_rad={spec.pairing.theta_forward!r}"
                f" theta_backward_rad={spec.pairing.theta_backward!r}",
            )
        )
        if len(spec.axes) == 1 and spec.axes[0].name == "temperature":
            for measure in _CONTRAST_MEASURES:
                intervals = temperature_thresholds(result, measure)
                text = "; ".join(f"{lo!r}..{hi!r} K" for lo, hi in intervals) or "none"
                metadata.append((f"ideal_zone {measure}", text))

    table = sweep_table(
        result,
        axis_columns=[(axis.column_name, axis.display_values) for axis in spec.axes],
        extra_metadata=metadata,
    )
    csv_path = out / "sweep.csv"
    write_csv(table, csv_path)
    print(f"wrote {csv_path}")
    if fmt == "json":
        json_path = out / "sweep.json"
        write_json(table, json_path)
        print(f"wrote {json_path}")
    return EXIT_OK


def _phase_tag(theta: float) -> str:
    return f"{theta / np.pi:.6g}".replace(".", "p").replace("-", "m")


def cmd_wigner(config: RunConfig, out_dir: Path, fmt: str) -> int:
    out = _writable_dir(out_dir)
    spec = config.wigner
    for theta in spec.phases:
        params = replace(config.params, theta=theta)
        v = steady_state(params)
        block = v.mode_block(1, 1)
        extent = spec.extent_sigmas * float(np.sqrt(np.linalg.eigvalsh(block)[-1]))
        axis = np.linspace(-extent, extent, spec.points_per_axis)
        xs, ys = np.meshgrid(axis, axis, indexing="ij")
        points = np.stack([xs.reshape(-1), ys.reshape(-1)], axis=1)
        w = wigner_single_mode(block, points)
        norm = float(np.trapezoid(np.trapezoid(w.reshape(xs.shape), axis, axis=1), axis))

        metadata = _base_metadata(config, "wigner")
        metadata.append(("theta_rad", repr(float(theta))))
        metadata.append(("normalization_integral", repr(norm)))
        table = ResultTable(
            columns=["x", "y", "W"],
            rows=[
                (float(points[i, 0]), float(points[i, 1]), float(w[i]))
                for i in range(points.shape[0])
            ],
            metadata=metadata,
        )
        path = out / f"wigner_theta_{_phase_tag(theta)}pi.csv"
        write_csv(table, path)
        print(f"wrote {path}")
        if fmt == "json":
            json_path = out / f"wigner_theta_{_phase_tag(theta)}pi.json"
            write_json(table, json_path)
            print(f"wrote {json_path}")
    return EXIT_OK


def cmd_validate(config: RunConfig) -> int:
    if config.kerr is None:
        raise ConfigError("the validate command needs validate.kerr_over_2pi_hz in the config")
    verdict = _print_validity(config)
    if verdict is None:
        raise ConfigError(
            "validity checks need drive (rabi_rad_per_s or h_d_tesla) and sphere_diameter_m"
        )
    params = config.params
    if params.h_d is not None and params.sphere_diameter is not None:
        n0 = total_spins(params.sphere_diameter, params.spin_density)
        computed = rabi_frequency(params.h_d, n0, params.gyromagnetic_ratio)
        print(f"drive: field-derived rabi = {_fmt(computed)} rad/s")
        if params.rabi is not None:
            print(
                f"drive: configured rabi = {_fmt(params.rabi)} rad/s"
                f" (configured/derived = {_fmt(params.rabi / computed)})"
            )
    used = derive(params).omega_rabi
    if used is not None:
        print(f"drive: rabi used = {_fmt(used)} rad/s")
    print(f"overall: {'PASS' if verdict else 'FAIL'}")
    return EXIT_OK if verdict else EXIT_VALIDATION_FAILED


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magsqueeze",
        description=(
            "Steady-state entanglement and phase-contrast analysis of a three-mode"
            " cavity magnomechanical system with a squeezed magnon drive."
        ),
    )
    parser.add_argument("--version", action="version", version=f"magsqueeze {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("steady", "solve one operating point and print its entanglement measures"),
        ("sweep", "evaluate measures over a 1-D or 2-D parameter grid"),
        ("wigner", "write magnon Wigner-function grids at selected phases"),
        ("validate", "check the linearization validity bounds"),
    ):
        sub = commands.add_parser(name, help=text)
        sub.add_argument("--config", required=True, help="path to a YAML run configuration")
        sub.add_argument("--output", default=".", help="output directory (default: .)")
        sub.add_argument("--format", choices=("csv", "json"), default="csv",
                         help="also write JSON when set to json")
        sub.add_argument("--threads", type=int, default=1, help="parallel sweep evaluations")
        sub.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                         help="override a config key, e.g. --set upsilon_over_2pi_hz=3.9e6")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.set)
        out_dir = Path(args.output)
        if args.command == "steady":
            return cmd_steady(config, out_dir, args.format)
        if args.command == "sweep":
            return cmd_sweep(config, out_dir, args.format, args.threads)
        if args.command == "wigner":
            return cmd_wigner(config, out_dir, args.format)
        return cmd_validate(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvalidInputError, InvalidStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoSteadyStateError, ParametricResonanceError, NoMeasuresError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_STEADY_STATE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
