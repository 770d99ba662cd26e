"""INI config parsing/serialization and the run specification.

Config files carry one section per concern ([drive], [rates], [run]) with
unit-explicit keys: *_ns for times, *_mhz_over_2pi for 2*pi-inclusive drive
frequencies, *_mhz for plain decoherence rates.  Serialization uses repr()
for floats so a written preset parses back to identical values.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

_DRIVE_FLOAT_KEYS = (
    "sigma_ns",
    "ts_ns",
    "amp01_mhz_over_2pi",
    "amp12_mhz_over_2pi",
    "t_start_ns",
    "t_end_ns",
    "delta_mhz_over_2pi",
    "phi01_rad",
    "phi12_rad",
    "phi02_rad",
)


@dataclass(frozen=True)
class RunSpec:
    """What to run and where to put the results."""

    preset: str | None = None
    config_path: str | None = None
    out_dir: str = "out"
    fmt: str = "csv"
    steps_override: int | None = None
    stark_override: bool | None = None
    seed: int = 20260809

    def __post_init__(self) -> None:
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.fmt!r}")
        if (self.preset is None) == (self.config_path is None):
            raise ConfigError("exactly one of preset or config file must be given")


def _coerce(key: str, raw: str, section: str):
    try:
        if key == "n_steps":
            return int(raw)
        if key == "stark_correction":
            low = raw.strip().lower()
            if low in ("true", "on", "1", "yes"):
                return True
            if low in ("false", "off", "0", "no"):
                return False
            raise ValueError(raw)
        if key == "mode" or key == "initial_state":
            return raw.strip()
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} could not be parsed") from None


def parse_config_text(text: str) -> dict:
    """Parse INI text into the nested mapping used by the presets module."""
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    out: dict = {}
    for section in parser.sections():
        if section == "meta":
            out[section] = dict(parser[section])
            continue
        out[section] = {
            key: _coerce(key, raw, section) for key, raw in parser[section].items()
        }
    if "drive" not in out and "drive_sastirap" not in out:
        raise ConfigError("config file has no [drive] section")
    return out


def parse_config(path: str | Path) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    return parse_config_text(p.read_text(encoding="utf-8"))


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_text(mapping: dict) -> str:
    """Serialize a preset/config mapping back to INI text."""
    lines: list[str] = []
    for section in sorted(mapping):
        lines.append(f"[{section}]")
        body = mapping[section]
        for key in sorted(body):
            lines.append(f"{key} = {_format_value(body[key])}")
        lines.append("")
    return "\n".join(lines)


def write_config(path: str | Path, mapping: dict) -> None:
    Path(path).write_text(config_text(mapping), encoding="utf-8")


def validate_drive_mapping(mapping: dict) -> None:
    required = (
        "sigma_ns",
        "ts_ns",
        "amp01_mhz_over_2pi",
        "amp12_mhz_over_2pi",
        "t_start_ns",
        "t_end_ns",
        "n_steps",
    )
    missing = [k for k in required if k not in mapping]
    if missing:
        raise ConfigError(f"[drive] missing required keys: {', '.join(missing)}")
    for key in mapping:
        if key not in _DRIVE_FLOAT_KEYS and key not in ("n_steps", "mode", "stark_correction"):
            raise ConfigError(f"[drive] unknown key {key!r}")
