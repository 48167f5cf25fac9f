import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcav.config import (
    config_from_entries,
    load_config,
    parse_detuning,
    parse_quantity,
    read_flat_keys,
)
from ringcav.errors import ConfigError
from ringcav.model import Bare, Effective

BASE_ENTRIES = {
    "arm_length": "25 mm",
    "wavelength": "1064 nm",
    "power": "3.8 mW",
    "mech_freq": "947 kHz",
    "quality_factor": "6700",
    "mass": "50 ng",
    "cavity_decay": "215 kHz",
    "temperature": "3 mK",
    "detuning": "1 omega_m",
}


def entries(**overrides):
    merged = dict(BASE_ENTRIES)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    for key, value in overrides.items():
        if value is None:
            merged.pop(key, None)
    return merged


class TestQuantityParsing:
    def test_frequency_prefix_equivalence(self):
        a = parse_quantity("947 kHz", "frequency")
        b = parse_quantity("0.947 MHz", "frequency")
        assert a == pytest.approx(b, rel=1e-12)
        assert a == pytest.approx(2 * math.pi * 947e3, rel=1e-15)

    def test_angular_suffix_bypasses_two_pi(self):
        angular = 2 * math.pi * 947e3
        c = parse_quantity(f"{angular!r} rad/s", "frequency")
        assert c == pytest.approx(parse_quantity("947 kHz", "frequency"), rel=1e-12)

    def test_lengths_masses_temps(self):
        assert parse_quantity("25 mm", "length") == pytest.approx(0.025, rel=1e-15)
        assert parse_quantity("1064 nm", "length") == pytest.approx(1.064e-6, rel=1e-15)
        assert parse_quantity("145 ng", "mass") == pytest.approx(145e-12, rel=1e-15)
        assert parse_quantity("3 mK", "temperature") == pytest.approx(3e-3, rel=1e-15)
        assert parse_quantity("3.8 mW", "power") == pytest.approx(3.8e-3, rel=1e-15)

    def test_angle_degrees(self):
        assert parse_quantity("90 deg", "angle") == pytest.approx(math.pi / 2, rel=1e-15)

    def test_dimensionless_rejects_units(self):
        assert parse_quantity("6700", "dimensionless") == 6700.0
        with pytest.raises(ConfigError):
            parse_quantity("6700 Hz", "dimensionless")

    def test_unknown_unit(self):
        with pytest.raises(ConfigError, match="unknown"):
            parse_quantity("10 furlongs", "length")

    def test_malformed_number(self):
        with pytest.raises(ConfigError):
            parse_quantity("fast mm", "length")

    def test_negative_values_pass_through(self):
        assert parse_quantity("-947 kHz", "frequency") == pytest.approx(
            -2 * math.pi * 947e3, rel=1e-15
        )

    def test_detuning_in_mech_units(self):
        w = 2 * math.pi * 947e3
        assert parse_detuning("0.965 omega_m", w) == pytest.approx(0.965 * w, rel=1e-15)
        assert parse_detuning("947 kHz", w) == pytest.approx(w, rel=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e3))
    def test_prefix_round_trip(self, value):
        khz = parse_quantity(f"{value!r} kHz", "frequency")
        mhz = parse_quantity(f"{value / 1000.0!r} MHz", "frequency")
        assert abs(khz - mhz) <= 1e-12 * abs(khz)


class TestConfigAssembly:
    def test_minimal_point_config(self):
        config = config_from_entries(entries())
        p = config.params
        assert p.arm_length == pytest.approx(0.025)
        assert p.mech_freq == pytest.approx(2 * math.pi * 947e3)
        assert isinstance(p.detuning, Effective)
        assert p.detuning.delta == pytest.approx(p.mech_freq)
        assert config.relative_bath_factor == 1.0
        assert not config.use_ode_oracle
        assert config.axes == ()

    def test_unknown_key_is_error(self):
        with pytest.raises(ConfigError, match="unknown configuration key"):
            config_from_entries(entries(fineness="27000"))

    def test_missing_key_is_error(self):
        with pytest.raises(ConfigError, match="missing"):
            config_from_entries(entries(mass=None))

    def test_bare_detuning_mode(self):
        config = config_from_entries(entries(detuning_mode="bare"))
        assert isinstance(config.params.detuning, Bare)

    def test_bad_detuning_mode(self):
        with pytest.raises(ConfigError, match="detuning_mode"):
            config_from_entries(entries(detuning_mode="both"))

    def test_theta_key(self):
        config = config_from_entries(entries(theta="0.5 rad"))
        assert config.params.ring_angle == pytest.approx(0.5)

    def test_bath_factor_validation(self):
        assert config_from_entries(entries(relative_bath_factor="2")).relative_bath_factor == 2.0
        with pytest.raises(ConfigError, match="relative_bath_factor"):
            config_from_entries(entries(relative_bath_factor="3"))

    def test_nonphysical_parameter_becomes_config_error(self):
        with pytest.raises(ConfigError, match="quality_factor"):
            config_from_entries(entries(quality_factor="2"))

    def test_axis_block(self):
        config = config_from_entries(
            entries(
                axis1="temperature",
                axis1_start="0.1 mK",
                axis1_stop="12 mK",
                axis1_count="100",
                axis1_spacing="linear",
            )
        )
        assert len(config.axes) == 1
        ax = config.axes[0]
        assert ax.name == "temperature"
        assert ax.start == pytest.approx(1e-4)
        assert ax.count == 100

    def test_axis_missing_field(self):
        with pytest.raises(ConfigError):
            config_from_entries(entries(axis1="temperature", axis1_start="1 mK"))

    def test_axis2_without_axis1(self):
        with pytest.raises(ConfigError, match="axis2"):
            config_from_entries(
                entries(
                    axis2="temperature",
                    axis2_start="0.1 mK",
                    axis2_stop="1 mK",
                    axis2_count="5",
                )
            )

    def test_overlay_block(self):
        config = config_from_entries(
            entries(overlay="mass", overlay_values="50 ng, 100 ng")
        )
        assert config.overlay.name == "mass"
        assert config.overlay.values == pytest.approx((50e-12, 100e-12))

    def test_overlay_values_required(self):
        with pytest.raises(ConfigError, match="overlay"):
            config_from_entries(entries(overlay="mass"))

    def test_oracle_flag(self):
        assert config_from_entries(entries(oracle="true")).use_ode_oracle
        with pytest.raises(ConfigError, match="boolean"):
            config_from_entries(entries(oracle="maybe"))


class TestFileParsing:
    def test_round_trip_file(self, tmp_path):
        text = "\n".join(
            [
                "# reference working point",
                "",
                'arm_length = "25 mm"',
                'wavelength = "1064 nm"',
                'power = "3.8 mW"',
                'mech_freq = "947 kHz"',
                "quality_factor = 6700",
                'mass = "50 ng"',
                'cavity_decay = "215 kHz"',
                'temperature = "3 mK"',
                'detuning = "1 omega_m"',
            ]
        )
        path = tmp_path / "point.cfg"
        path.write_text(text + "\n")
        config = load_config(path)
        assert config.params.mass == pytest.approx(50e-12)

    def test_duplicate_key(self, tmp_path):
        path = tmp_path / "dup.cfg"
        path.write_text('mass = "1 ng"\nmass = "2 ng"\n')
        with pytest.raises(ConfigError, match="duplicate"):
            read_flat_keys(path)

    def test_missing_equals(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("mass 1 ng\n")
        with pytest.raises(ConfigError, match="key = value"):
            read_flat_keys(path)
