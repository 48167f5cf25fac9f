"""Configuration parsing: flat ``key = "value unit"`` files with unit handling.

Frequencies are linear (Hz and SI-prefixed variants) by default and are
converted to angular rad/s here, at the boundary; an explicit ``rad/s``
suffix bypasses the 2*pi.  Nothing past this module ever sees a linear
frequency.  Detunings additionally accept the unit ``omega_m`` (multiples
of the mechanical angular frequency).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .model import Bare, Effective, PhysicalParams
from .sweep import Axis, Overlay, axis_unit

_TWO_PI = 2.0 * math.pi

_UNIT_TABLES = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9, "pm": 1e-12},
    "power": {"W": 1.0, "kW": 1e3, "mW": 1e-3, "uW": 1e-6, "µW": 1e-6, "nW": 1e-9},
    "mass": {"kg": 1.0, "g": 1e-3, "mg": 1e-6, "ug": 1e-9, "µg": 1e-9, "ng": 1e-12, "pg": 1e-15},
    "temperature": {"K": 1.0, "mK": 1e-3, "uK": 1e-6, "µK": 1e-6, "nK": 1e-9},
    # Linear frequencies convert to angular; rad/s passes through.
    "frequency": {
        "Hz": _TWO_PI,
        "kHz": _TWO_PI * 1e3,
        "MHz": _TWO_PI * 1e6,
        "GHz": _TWO_PI * 1e9,
        "rad/s": 1.0,
    },
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
    "dimensionless": {"": 1.0},
}

_QUANTITY_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(.*)$")


def parse_quantity(text: str, kind: str) -> float:
    """Parse ``"<number> <unit>"`` into SI (angular for frequencies).

    Raises
    ------
    ConfigError
        On malformed numbers, unknown units, or a unit from the wrong
        dimension family.
    """
    table = _UNIT_TABLES[kind]
    m = _QUANTITY_RE.match(text.strip())
    if m is None:
        raise ConfigError(f"cannot parse quantity {text!r}")
    number, unit = m.group(1), m.group(2).strip()
    if unit not in table:
        raise ConfigError(
            f"unknown {kind} unit {unit!r} in {text!r}; expected one of "
            + ", ".join(repr(u) for u in table if u)
        )
    return float(number) * table[unit]


def parse_detuning(text: str, mech_freq: float) -> float:
    """Parse a detuning: a frequency, or a multiple of ``omega_m``."""
    m = _QUANTITY_RE.match(text.strip())
    if m is not None and m.group(2).strip() == "omega_m":
        return float(m.group(1)) * mech_freq
    return parse_quantity(text, "frequency")


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs: parameters, sweep layout, flags."""

    params: PhysicalParams
    axes: tuple[Axis, ...] = ()
    overlay: Overlay | None = None
    relative_bath_factor: float = 1.0
    use_ode_oracle: bool = False
    out_dir: str | None = None


_PARAM_KEYS = {
    "arm_length": "length",
    "wavelength": "length",
    "power": "power",
    "mech_freq": "frequency",
    "quality_factor": "dimensionless",
    "mass": "mass",
    "cavity_decay": "frequency",
    "temperature": "temperature",
    "theta": "angle",
}
_AXIS_KEY_RE = re.compile(r"^axis([12])_(start|stop|count|spacing)$|^axis([12])$")
_OTHER_KEYS = {
    "detuning",
    "detuning_mode",
    "relative_bath_factor",
    "oracle",
    "out_dir",
    "overlay",
    "overlay_values",
}

# Unit family used when parsing axis endpoints and overlay values.
_AXIS_KINDS = {
    "temperature": "temperature",
    "power": "power",
    "mass": "mass",
    "detuning_ratio": "dimensionless",
}


def read_flat_keys(path: str | Path) -> dict[str, str]:
    """Read a flat config file into a key -> raw-value mapping.

    Lines are ``key = value`` with optional double quotes around the value;
    blank lines and lines starting with ``#`` are skipped.  Duplicate keys
    are an error.
    """
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if len(value) >= 2 and value[0] == '"' and value[-1] == '"':
            value = value[1:-1]
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        if key in entries:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def _validate_keys(entries: dict[str, str]) -> None:
    for key in entries:
        if key in _PARAM_KEYS or key in _OTHER_KEYS or _AXIS_KEY_RE.match(key):
            continue
        raise ConfigError(f"unknown configuration key {key!r}")


def _parse_bool(text: str, key: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key} must be a boolean, got {text!r}")


def _build_axis(entries: dict[str, str], index: int) -> Axis | None:
    name_key = f"axis{index}"
    if name_key not in entries:
        for suffix in ("start", "stop", "count", "spacing"):
            if f"axis{index}_{suffix}" in entries:
                raise ConfigError(f"axis{index}_{suffix} given without {name_key}")
        return None
    name = entries[name_key].strip()
    if name not in _AXIS_KINDS:
        raise ConfigError(
            f"{name_key} must be one of {sorted(_AXIS_KINDS)}, got {name!r}"
        )
    try:
        start = parse_quantity(entries[f"axis{index}_start"], _AXIS_KINDS[name])
        stop = parse_quantity(entries[f"axis{index}_stop"], _AXIS_KINDS[name])
        count_text = entries[f"axis{index}_count"]
    except KeyError as exc:
        raise ConfigError(f"axis{index} is missing {exc.args[0].split('_')[-1]!r}") from None
    try:
        count = int(count_text)
    except ValueError:
        raise ConfigError(f"axis{index}_count must be an integer, got {count_text!r}") from None
    spacing = entries.get(f"axis{index}_spacing", "linear").strip()
    try:
        return Axis(name=name, start=start, stop=stop, count=count, spacing=spacing)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _build_overlay(entries: dict[str, str]) -> Overlay | None:
    if "overlay" not in entries:
        if "overlay_values" in entries:
            raise ConfigError("overlay_values given without overlay")
        return None
    name = entries["overlay"].strip()
    if name not in _AXIS_KINDS:
        raise ConfigError(f"overlay must be one of {sorted(_AXIS_KINDS)}, got {name!r}")
    if "overlay_values" not in entries:
        raise ConfigError("overlay given without overlay_values")
    values = tuple(
        parse_quantity(chunk.strip(), _AXIS_KINDS[name])
        for chunk in entries["overlay_values"].split(",")
        if chunk.strip()
    )
    try:
        return Overlay(name=name, values=values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def config_from_entries(entries: dict[str, str]) -> RunConfig:
    """Assemble a validated :class:`RunConfig` from raw key/value pairs."""
    _validate_keys(entries)

    missing = [k for k in _PARAM_KEYS if k != "theta" and k not in entries]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(sorted(missing))}")
    raw: dict[str, float] = {}
    for key, kind in _PARAM_KEYS.items():
        if key in entries:
            raw[key] = parse_quantity(entries[key], kind)

    if "detuning" not in entries:
        raise ConfigError("missing required key 'detuning'")
    delta = parse_detuning(entries["detuning"], raw["mech_freq"])
    mode = entries.get("detuning_mode", "effective").strip().lower()
    if mode == "effective":
        detuning = Effective(delta)
    elif mode == "bare":
        detuning = Bare(delta)
    else:
        raise ConfigError(f"detuning_mode must be 'effective' or 'bare', got {mode!r}")

    bath_factor = 1.0
    if "relative_bath_factor" in entries:
        text = entries["relative_bath_factor"].strip()
        if text not in ("1", "2"):
            raise ConfigError(f"relative_bath_factor must be 1 or 2, got {text!r}")
        bath_factor = float(text)

    from .errors import NonPhysicalParameter

    try:
        params = PhysicalParams(
            arm_length=raw["arm_length"],
            wavelength=raw["wavelength"],
            power=raw["power"],
            mech_freq=raw["mech_freq"],
            quality_factor=raw["quality_factor"],
            mass=raw["mass"],
            cavity_decay=raw["cavity_decay"],
            temperature=raw["temperature"],
            ring_angle=raw.get("theta", 0.0),
            detuning=detuning,
        )
    except NonPhysicalParameter as exc:
        raise ConfigError(str(exc)) from None

    if "axis2" in entries and "axis1" not in entries:
        raise ConfigError("axis2 given without axis1")
    axes = tuple(a for i in (1, 2) if (a := _build_axis(entries, i)) is not None)

    return RunConfig(
        params=params,
        axes=axes,
        overlay=_build_overlay(entries),
        relative_bath_factor=bath_factor,
        use_ode_oracle=_parse_bool(entries["oracle"], "oracle") if "oracle" in entries else False,
        out_dir=entries.get("out_dir"),
    )


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a configuration file."""
    return config_from_entries(read_flat_keys(path))
