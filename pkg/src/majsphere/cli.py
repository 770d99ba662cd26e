"""Command-line interface: run, sweep, verify and tomo subcommands.

Exit codes: 0 success, 2 configuration error, 3 numeric instability,
4 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import output, presets, tomography, verify
from .drive import DriveConfig, mixing_angle
from .dynamics import DensityMatrix, evolve_lindblad, evolve_pure
from .errors import ConfigError, IntegrationInstabilityError
from .majorana import QutritState, dark_state
from .mixedrep import mixed_trajectory

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INSTABILITY = 3
EXIT_VERIFY = 4

SWEEP_PARAMETERS = ("delta", "ts", "sigma", "amp")

MHZ = 1e6
NS = 1e-9


def _initial_state(name: str, cfg: DriveConfig) -> QutritState:
    if name == "ground":
        return QutritState(1, 0, 0)
    if name == "dark":
        theta0, _ = mixing_angle(cfg, cfg.t_start)
        return dark_state(theta0)
    raise ConfigError(f"unknown initial_state {name!r}; expected 'ground' or 'dark'")


def _resolve_spec(spec: cfgmod.RunSpec):
    """RunSpec -> (name, DriveConfig, rates, initial_state, raw mapping)."""
    if spec.preset is not None:
        res = presets.resolve(spec.preset)
        name, mapping = res.name, res.mapping
        drive_cfg, rates, initial = res.drive, res.rates, res.initial_state
    else:
        mapping = cfgmod.parse_config(spec.config_path)
        cfgmod.validate_drive_mapping(mapping["drive"])
        drive_cfg = presets.drive_from_mapping(mapping["drive"])
        rates = presets.rates_from_mapping(mapping.get("rates"))
        initial = str(mapping.get("run", {}).get("initial_state", "ground"))
        name = Path(spec.config_path).stem
    if spec.steps_override is not None:
        drive_cfg = dataclasses.replace(drive_cfg, n_steps=spec.steps_override)
    if spec.stark_override is not None:
        drive_cfg = dataclasses.replace(drive_cfg, stark_correction=spec.stark_override)
    return name, drive_cfg, rates, initial, mapping


def _write_trajectory(spec: cfgmod.RunSpec, name: str, record, mixed) -> dict:
    outdir = Path(spec.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    header, rows = output.trajectory_table(record, mixed)
    if spec.fmt == "csv":
        path = outdir / f"{name}_trajectory.csv"
        output.write_table_csv(path, header, rows)
    else:
        path = outdir / f"{name}_trajectory.json"
        output.write_table_json(path, header, rows)
    summary = output.summary_dict(record, mixed)
    summary["preset"] = name
    summary_path = outdir / f"{name}_summary.json"
    output.write_json(summary_path, summary)
    return {"trajectory": str(path), "summary": str(summary_path), "data": summary}


def run_one(spec: cfgmod.RunSpec) -> dict:
    """Execute one trajectory run and write its files; returns the summary."""
    name, drive_cfg, rates, initial, _ = _resolve_spec(spec)
    psi0 = _initial_state(initial, drive_cfg)
    if rates is not None and not rates.is_zero:
        record = evolve_lindblad(drive_cfg, rates, DensityMatrix.from_pure(psi0))
        mixed = mixed_trajectory(record)
    else:
        record = evolve_pure(drive_cfg, psi0)
        mixed = None
    return _write_trajectory(spec, name, record, mixed)


# ---------------------------------------------------------------------------
# sweep analysis helpers


def wiggle_frequency(times: np.ndarray, jy: np.ndarray, min_frequency: float = 5e7) -> float:
    """Dominant FFT frequency of <Jy>(t) above a floor excluding the slow envelope."""
    dt = float(times[1] - times[0])
    series = jy - jy.mean()
    freqs = np.fft.rfftfreq(series.size, d=dt)
    amps = np.abs(np.fft.rfft(series))
    mask = freqs >= min_frequency
    if not mask.any():
        return 0.0
    return float(freqs[mask][np.argmax(amps[mask])])


def projection_area(jx: np.ndarray, jy: np.ndarray) -> float:
    """Bounding-box area of the (<Jx>, <Jy>) projection."""
    return float((jx.max() - jx.min()) * (jy.max() - jy.min()))


def _apply_sweep_value(cfg: DriveConfig, parameter: str, value: float) -> DriveConfig:
    if parameter == "delta":
        return dataclasses.replace(cfg, delta=2 * math.pi * value * MHZ)
    if parameter == "ts":
        return dataclasses.replace(cfg, ts=value * NS)
    if parameter == "sigma":
        return dataclasses.replace(cfg, sigma=value * NS)
    if parameter == "amp":
        amp = 2 * math.pi * value * MHZ
        return dataclasses.replace(cfg, amp01=amp, amp12=amp)
    raise ConfigError(
        f"unknown sweep parameter {parameter!r}; expected one of {SWEEP_PARAMETERS}"
    )


def run_sweep(spec: cfgmod.RunSpec, parameter: str, values: list[float]) -> list[dict]:
    """One summary row per value; values use config units (MHz over 2pi, ns)."""
    name, drive_cfg, rates, initial, _ = _resolve_spec(spec)
    rows = []
    for value in values:
        cfg = _apply_sweep_value(drive_cfg, parameter, value)
        psi0 = _initial_state(initial, cfg)
        if rates is not None and not rates.is_zero:
            record = evolve_lindblad(cfg, rates, DensityMatrix.from_pure(psi0))
        else:
            record = evolve_pure(cfg, psi0)
        rows.append(
            {
                "parameter": parameter,
                "value": value,
                "p0_final": float(output.fmt(record.populations[-1, 0])),
                "p1_final": float(output.fmt(record.populations[-1, 1])),
                "p2_final": float(output.fmt(record.populations[-1, 2])),
                "fid_dark_final": float(output.fmt(record.fid_dark[-1])),
                "max_p1": float(output.fmt(record.populations[:, 1].max())),
                "wiggle_frequency_mhz": float(
                    output.fmt(wiggle_frequency(record.times, record.jvec[:, 1]) / MHZ)
                ),
                "jxy_area": float(
                    output.fmt(projection_area(record.jvec[:, 0], record.jvec[:, 1]))
                ),
            }
        )
    outdir = Path(spec.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    output.write_json(outdir / f"{name}_sweep_{parameter}.json", {"rows": rows})
    return rows


def run_tomo(spec: cfgmod.RunSpec) -> dict:
    """Four process matrices (two protocols, clean/decohered) plus comparisons."""
    mapping = presets.preset_mapping("tomography-quartet")
    if spec.preset not in (None, "tomography-quartet"):
        raise ConfigError("tomo runs the tomography-quartet preset")
    rates = presets.rates_from_mapping(mapping["rates"])
    outdir = Path(spec.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    report: dict = {"basis": tomography.BASIS_VERSION, "protocols": {}}
    for protocol, key in (("stirap", "drive"), ("sastirap", "drive_sastirap")):
        cfg = presets.drive_from_mapping(mapping[key])
        if spec.steps_override is not None:
            cfg = dataclasses.replace(cfg, n_steps=spec.steps_override)
        clean = tomography.run_process(cfg)
        decohered = tomography.run_process(cfg, rates)
        comparison = tomography.compare(decohered, clean)
        flagged = tomography.definitional_sensitivity(comparison)
        for tag, pm in (("clean", clean), ("decohered", decohered)):
            output.write_json(
                outdir / f"tomo_{protocol}_{tag}.json", tomography.to_json_dict(pm)
            )
        report["protocols"][protocol] = {
            "fidelity": float(output.fmt(comparison.fidelity)),
            "trace_distance": float(output.fmt(comparison.trace_distance)),
            "raw_overlap": float(output.fmt(comparison.raw_overlap)),
            "definition_sensitive": flagged,
            "chi_min_eigenvalue_clean": float(output.fmt(clean.min_eigenvalue)),
            "chi_min_eigenvalue_decohered": float(output.fmt(decohered.min_eigenvalue)),
        }
    output.write_json(outdir / "tomo_comparison.json", report)
    return report


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="majsphere",
        description="Majorana-sphere simulations of adiabatic and superadiabatic "
        "three-level passage",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        group = p.add_mutually_exclusive_group(required=False)
        group.add_argument("--preset", help="named preset (see --list)")
        group.add_argument("--config", help="INI config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--steps", type=int, default=None, help="override n_steps")
        p.add_argument("--stark", choices=("on", "off"), default=None)
        p.add_argument("--seed", type=int, default=20260809)

    p_run = sub.add_parser("run", help="integrate one preset or config")
    add_common(p_run)
    p_run.add_argument("--list", action="store_true", help="list preset names and exit")

    p_sweep = sub.add_parser("sweep", help="scan one drive parameter")
    add_common(p_sweep)
    p_sweep.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    p_sweep.add_argument(
        "--values",
        default=None,
        help="comma-separated values in config units (MHz over 2pi or ns); "
        "for delta defaults to half/1x/2x the preset detuning",
    )

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument("--seed", type=int, default=20260809)
    p_verify.add_argument("--perturb", default=None, help="deliberately corrupt one check")
    p_verify.add_argument("--json", dest="json_path", default=None, help="write report here")

    p_tomo = sub.add_parser("tomo", help="process-tomography quartet")
    add_common(p_tomo)
    return parser


def _spec_from_args(args) -> cfgmod.RunSpec:
    stark = None if args.stark is None else (args.stark == "on")
    preset = args.preset
    if preset is None and args.config is None:
        raise ConfigError("one of --preset or --config is required")
    return cfgmod.RunSpec(
        preset=preset,
        config_path=args.config,
        out_dir=args.out,
        fmt=args.format,
        steps_override=args.steps,
        stark_override=stark,
        seed=args.seed,
    )


def _cmd_run(args) -> int:
    if getattr(args, "list", False):
        for name in presets.preset_names():
            print(name)
        return EXIT_OK
    result = run_one(_spec_from_args(args))
    data = result["data"]
    print(
        f"{data['preset']}: p2_final={data['p2_final']:.4f} "
        f"fid_dark_final={data['fid_dark_final']:.4f} -> {result['summary']}"
    )
    return EXIT_OK


def _parse_values(raw: str | None) -> list[float] | None:
    if raw is None:
        return None
    raw = raw.strip()
    if not raw:
        return []
    try:
        return [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"could not parse sweep values {raw!r}") from None


def _cmd_sweep(args) -> int:
    spec = _spec_from_args(args)
    values = _parse_values(args.values)
    if values is None:
        if args.param != "delta":
            raise ConfigError("--values is required for parameters other than delta")
        _, drive_cfg, _, _, _ = _resolve_spec(spec)
        base = drive_cfg.delta / (2 * math.pi * MHZ)
        if base <= 0:
            raise ConfigError("preset has no detuning to scale; pass --values")
        values = [0.5 * base, base, 2.0 * base]
    rows = run_sweep(spec, args.param, values)
    if rows:
        keys = list(rows[0])
        print("  ".join(keys))
        for row in rows:
            print("  ".join(str(row[k]) for k in keys))
    else:
        print("empty sweep")
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = verify.run_checks(seed=args.seed, perturb=args.perturb)
    report = [dataclasses.asdict(r) for r in results]
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{status:4s}  {r.name:28s} {r.seconds:7.3f}s  {r.detail}")
    if args.json_path:
        Path(args.json_path).write_text(json.dumps(report, indent=2) + "\n")
    all_ok = all(r.passed for r in results)
    print(f"verify: {'all checks passed' if all_ok else 'FAILURES detected'}")
    return EXIT_OK if all_ok else EXIT_VERIFY


def _cmd_tomo(args) -> int:
    spec = _spec_from_args(args) if (args.preset or args.config) else cfgmod.RunSpec(
        preset="tomography-quartet",
        out_dir=args.out,
        fmt=args.format,
        steps_override=args.steps,
        stark_override=None if args.stark is None else (args.stark == "on"),
        seed=args.seed,
    )
    report = run_tomo(spec)
    print(f"{'protocol':10s} {'fidelity':>9s} {'trace_dist':>11s} {'flagged':>8s}")
    for protocol, row in report["protocols"].items():
        print(
            f"{protocol:10s} {row['fidelity']:9.4f} {row['trace_distance']:11.4f} "
            f"{str(row['definition_sensitive']):>8s}"
        )
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
        "tomo": _cmd_tomo,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationInstabilityError as exc:
        print(f"numeric instability: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY


if __name__ == "__main__":
    sys.exit(main())
