import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcav.errors import NonPhysicalParameter
from ringcav.model import (
    Bare,
    Effective,
    PhysicalParams,
    derive_constants,
    solve_steady_state,
    thermal_occupancy,
)

from conftest import reference_point

# Direct evaluations of the defining formulas with CODATA constants,
# frozen as oracle values.
FINESSE_25MM_215KHZ = 27887.670511627908  # pi*c/(kappa*L) = c/10750
OMEGA_C_1064NM = 1.7703492173955385e15  # 2*pi*c/lambda
N_TH_3MK_947KHZ = 65.50955962036155  # 1/(exp(hbar w/kB T)-1), 40-digit evaluation

MECH_FREQ_REF = reference_point().mech_freq


class TestDerivedConstants:
    def test_finesse_reference_cavity(self):
        consts = derive_constants(reference_point())
        assert consts.finesse == pytest.approx(FINESSE_25MM_215KHZ, rel=1e-12)

    def test_cavity_frequency(self):
        consts = derive_constants(reference_point())
        assert consts.cavity_freq == pytest.approx(OMEGA_C_1064NM, rel=1e-12)

    def test_thermal_occupancy_reference(self):
        consts = derive_constants(reference_point(temperature=3e-3))
        assert consts.thermal_occupancy == pytest.approx(N_TH_3MK_947KHZ, rel=1e-12)

    def test_thermal_occupancy_zero_temperature(self):
        assert thermal_occupancy(2 * math.pi * 947e3, 0.0) == 0.0

    def test_thermal_occupancy_nanokelvin(self):
        # far below the representable threshold for this mechanical frequency
        assert thermal_occupancy(2 * math.pi * 947e3, 1e-9) < 1e-9

    def test_thermal_occupancy_monotone_in_temperature(self):
        w = 2 * math.pi * 947e3
        temps = np.geomspace(1e-6, 1.0, 40)
        occ = [thermal_occupancy(w, t) for t in temps]
        assert all(b >= a for a, b in zip(occ, occ[1:]))

    def test_damping_from_quality_factor(self):
        consts = derive_constants(reference_point())
        assert consts.mech_damping == pytest.approx(2 * math.pi * 947e3 / 6700, rel=1e-15)

    def test_coupling_factor(self):
        consts = derive_constants(reference_point(ring_angle=math.pi / 2))
        assert consts.coupling_factor == pytest.approx(0.5, rel=1e-12)


class TestParamValidation:
    def test_rejects_nonpositive(self):
        with pytest.raises(NonPhysicalParameter):
            reference_point().with_(mass=0.0)
        with pytest.raises(NonPhysicalParameter):
            reference_point().with_(arm_length=-1.0)

    def test_rejects_negative_power_but_allows_zero(self):
        assert reference_point(power=0.0).power == 0.0
        with pytest.raises(NonPhysicalParameter):
            reference_point().with_(power=-1e-3)

    def test_rejects_low_quality_factor(self):
        with pytest.raises(NonPhysicalParameter, match="Markovian"):
            reference_point().with_(quality_factor=5.0)

    def test_rejects_ring_angle_outside_range(self):
        with pytest.raises(NonPhysicalParameter):
            reference_point().with_(ring_angle=math.pi)
        with pytest.raises(NonPhysicalParameter):
            reference_point().with_(ring_angle=-0.1)


class TestSteadyState:
    def test_undriven_cavity(self):
        params = reference_point(power=0.0)
        ss = solve_steady_state(params, derive_constants(params))
        assert ss.alpha == 0.0
        assert ss.position == 0.0
        assert ss.photon_number == 0.0
        assert ss.momentum == 0.0

    def test_effective_detuning_closed_form(self):
        params = reference_point(detuning_ratio=1.0)
        consts = derive_constants(params)
        ss = solve_steady_state(params, consts)
        kappa, delta = params.cavity_decay, params.mech_freq
        expected_n = consts.drive_amplitude**2 / (kappa**2 + delta**2)
        assert ss.photon_number == pytest.approx(expected_n, rel=1e-12)
        assert ss.branch_count == 1
        assert ss.detuning == delta

    def test_momentum_always_zero(self):
        params = reference_point(detuning_ratio=0.7)
        ss = solve_steady_state(params, derive_constants(params))
        assert ss.momentum == 0.0

    def test_bare_mode_zero_coupling_limit(self):
        # enormous mass makes g negligible: Delta stays at Delta0
        delta0 = 0.5 * reference_point().mech_freq
        params = reference_point(mass=1.0).with_(detuning=Bare(delta0))
        consts = derive_constants(params)
        ss = solve_steady_state(params, consts)
        expected_n = consts.drive_amplitude**2 / (params.cavity_decay**2 + delta0**2)
        assert ss.detuning == pytest.approx(delta0, rel=1e-9)
        assert ss.photon_number == pytest.approx(expected_n, rel=1e-9)

    def test_position_locked_to_photon_number(self):
        params = reference_point(detuning_ratio=0.965, ring_angle=0.8)
        consts = derive_constants(params)
        ss = solve_steady_state(params, consts)
        g_eff = consts.coupling * consts.coupling_factor
        expected = -2.0 * g_eff * ss.photon_number / params.mech_freq
        assert ss.position == pytest.approx(expected, rel=1e-12)

    def test_bare_round_trip_through_effective(self):
        # re-deriving the effective detuning from the bare solution and
        # feeding it back must reproduce the same field amplitude
        rng = np.random.default_rng(7)
        for _ in range(50):
            base = reference_point(
                mass=rng.uniform(20e-12, 300e-12),
                power=rng.uniform(0.1e-3, 15e-3),
                detuning_ratio=1.0,
            )
            delta0 = rng.uniform(-1.0, 2.0) * base.mech_freq
            params = base.with_(detuning=Bare(delta0))
            consts = derive_constants(params)
            ss = solve_steady_state(params, consts)
            back = solve_steady_state(
                params.with_(detuning=Effective(ss.detuning)), consts
            )
            assert abs(back.alpha - ss.alpha) <= 1e-10 * abs(ss.alpha)

    def test_bare_steady_state_residual(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            params = reference_point(
                mass=rng.uniform(20e-12, 300e-12),
                power=rng.uniform(0.0, 15e-3),
            ).with_(detuning=Bare(rng.uniform(-1.5, 2.0) * MECH_FREQ_REF))
            consts = derive_constants(params)
            ss = solve_steady_state(params, consts)
            e = consts.drive_amplitude
            resid = abs((1j * ss.detuning + params.cavity_decay) * ss.alpha - e)
            assert resid <= 1e-12 * max(e, 1.0)

    def test_bistability_reports_branches(self):
        # strong drive at red-shifted bare detuning: three real roots, the
        # returned branch is the low-power one (smallest photon number)
        params = reference_point(power=20e-3).with_(
            detuning=Bare(2.5 * reference_point().mech_freq)
        )
        consts = derive_constants(params)
        ss = solve_steady_state(params, consts)
        assert ss.branch_count == 3
        assert ss.bistable
        # the small-root branch solves the cubic too
        e = consts.drive_amplitude
        resid = abs((1j * ss.detuning + params.cavity_decay) * ss.alpha - e)
        assert resid <= 1e-12 * e

    @settings(max_examples=60, deadline=None)
    @given(
        p1=st.floats(min_value=1e-5, max_value=1e-2),
        p2=st.floats(min_value=1e-5, max_value=1e-2),
        ratio=st.floats(min_value=-2.0, max_value=2.5),
    )
    def test_photon_number_monotone_in_power(self, p1, p2, ratio):
        lo, hi = sorted((p1, p2))
        params_lo = reference_point(power=lo, detuning_ratio=ratio)
        params_hi = reference_point(power=hi, detuning_ratio=ratio)
        n_lo = solve_steady_state(params_lo, derive_constants(params_lo)).photon_number
        n_hi = solve_steady_state(params_hi, derive_constants(params_hi)).photon_number
        assert n_hi >= n_lo
