import cmath
import math

import numpy as np
import pytest

from sechspin.bloch import (
    PolarizationAngles,
    UnitVector3,
    apply,
    axis_from_polarization,
    cross_state,
    fidelity,
    operator_fidelity,
    rotation_operator,
    state_from_angles,
)
from sechspin.errors import UnreachableAngleError
from sechspin.pulse import (
    ControlPulseSpec,
    SechPulseParams,
    control_unitary,
    detuning_from_phase,
    phase_from_detuning,
    synthesize_gate,
)

TAU = 2 * math.pi

# pi - 2*arctan(3), cross-checked against the ODE integration in the
# acceptance suite (grid point 3.0).
PHASE_AT_3 = 0.6435011087932844


def random_axis(rng):
    z = rng.uniform(-1, 1)
    phi = rng.uniform(0, TAU)
    r = math.sqrt(1 - z * z)
    return UnitVector3(r * math.cos(phi), r * math.sin(phi), z)


class TestPhaseFromDetuning:
    def test_resonance_gives_pi(self):
        assert phase_from_detuning(0.0) == math.pi

    def test_unit_detuning_endpoints(self):
        assert abs(phase_from_detuning(1.0) - math.pi / 2) < 1e-15
        assert abs(phase_from_detuning(-1.0) - 3 * math.pi / 2) < 1e-15

    def test_detuning_three(self):
        assert abs(phase_from_detuning(3.0) - PHASE_AT_3) < 1e-15

    def test_strictly_decreasing_and_in_range(self):
        xs = np.linspace(-50, 50, 2001)
        deltas = np.array([phase_from_detuning(x) for x in xs])
        assert np.all(np.diff(deltas) < 0)
        assert np.all(deltas > 0) and np.all(deltas < TAU)

    def test_symmetry_about_resonance(self):
        for x in np.geomspace(1e-3, 1e3, 25):
            assert abs(phase_from_detuning(x) + phase_from_detuning(-x) - TAU) < 1e-12

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            phase_from_detuning(math.inf)


class TestDetuningFromPhase:
    def test_pi_gives_zero(self):
        assert detuning_from_phase(math.pi) == pytest.approx(0.0, abs=1e-15)

    def test_half_pi_gives_one(self):
        assert abs(detuning_from_phase(math.pi / 2) - 1.0) < 1e-12

    def test_inverse_of_phase_at_3(self):
        assert abs(detuning_from_phase(PHASE_AT_3) - 3.0) < 1e-12

    @pytest.mark.parametrize("bad", [0.0, TAU, -0.5, 7.0])
    def test_out_of_range_raises(self, bad):
        with pytest.raises(UnreachableAngleError):
            detuning_from_phase(bad)

    def test_round_trip_both_ways(self):
        for x in np.concatenate([-np.geomspace(1e-3, 1e3, 30), np.geomspace(1e-3, 1e3, 30), [0.0]]):
            delta = phase_from_detuning(x)
            assert abs(phase_from_detuning(detuning_from_phase(delta)) - delta) < 1e-12


class TestSechPulseParams:
    def test_detuning_ratio(self):
        p = SechPulseParams(sigma=0.5, detuning=1.0)
        assert p.detuning_ratio == 2.0

    def test_area_is_locked(self):
        with pytest.raises(ValueError):
            SechPulseParams(sigma=1.0, detuning=0.0, area=math.pi)

    def test_sigma_must_be_positive(self):
        with pytest.raises(ValueError):
            SechPulseParams(sigma=0.0)


class TestControlPulseSpec:
    def test_rotation_angle_property(self):
        spec = ControlPulseSpec(PolarizationAngles(0.3, 0.4), detuning_ratio=1.0)
        assert abs(spec.rotation_angle - math.pi / 2) < 1e-15

    def test_negative_arrival_rejected(self):
        with pytest.raises(ValueError):
            ControlPulseSpec(PolarizationAngles(0.3, 0.4), arrival_time=-1.0)


class TestControlUnitary:
    def test_resonant_r_pulse_fixes_circular_states(self):
        spec = ControlPulseSpec(PolarizationAngles(math.pi / 2, 0.0), 0.0)
        u = control_unitary(spec)
        right = state_from_angles(PolarizationAngles(math.pi / 2, 0.0))
        left = state_from_angles(PolarizationAngles(math.pi / 2, math.pi))
        assert fidelity(apply(u, right), right) > 1 - 1e-12
        assert fidelity(apply(u, left), left) > 1 - 1e-12

    def test_far_detuned_pulse_is_identity(self):
        spec = ControlPulseSpec(PolarizationAngles(1.1, 2.2), 1e8)
        u = control_unitary(spec)
        assert np.max(np.abs(u.matrix - np.eye(2))) < 1e-7

    def test_resonant_v_pole_pulse_flips_l_to_r(self):
        spec = ControlPulseSpec(PolarizationAngles(math.pi, math.pi), 0.0)
        u = control_unitary(spec)
        left = state_from_angles(PolarizationAngles(math.pi / 2, math.pi))
        right = state_from_angles(PolarizationAngles(math.pi / 2, 0.0))
        assert fidelity(apply(u, left), right) > 1 - 1e-12

    def test_resonant_pulse_is_involution(self):
        rng = np.random.default_rng(53)
        for _ in range(50):
            spec = ControlPulseSpec(
                PolarizationAngles(rng.uniform(0, math.pi), rng.uniform(0, TAU)), 0.0
            )
            u = control_unitary(spec)
            assert np.max(np.abs(u.matrix @ u.matrix + np.eye(2))) < 1e-10

    def test_cross_polarized_component_gets_the_phase(self):
        # In the (co-polarized, cross-polarized) basis of the pulse the
        # operator is diag(1, e^{-i delta}) up to global phase.
        rng = np.random.default_rng(59)
        for _ in range(50):
            pol = PolarizationAngles(rng.uniform(0.1, math.pi - 0.1), rng.uniform(0, TAU))
            ratio = rng.uniform(-4, 4)
            u = control_unitary(ControlPulseSpec(pol, ratio))
            co = state_from_angles(pol).as_array()
            cross = cross_state(pol).as_array()
            m = u.matrix
            off_01 = np.vdot(co, m @ cross)
            off_10 = np.vdot(cross, m @ co)
            assert abs(off_01) < 1e-12 and abs(off_10) < 1e-12
            ratio_phase = np.vdot(cross, m @ cross) / np.vdot(co, m @ co)
            expected = cmath.exp(-1j * phase_from_detuning(ratio))
            assert abs(ratio_phase - expected) < 1e-12

    def test_retarded_eigenvector_is_cross_state(self):
        rng = np.random.default_rng(61)
        for _ in range(50):
            pol = PolarizationAngles(rng.uniform(0.1, math.pi - 0.1), rng.uniform(0, TAU))
            u = control_unitary(ControlPulseSpec(pol, rng.uniform(-4, 4)))
            co = state_from_angles(pol).as_array()
            values, vectors = np.linalg.eig(u.matrix)
            # Retardation is measured relative to the co-polarized channel.
            co_value = np.vdot(co, u.matrix @ co)
            retard = [(-cmath.phase(v / co_value)) % TAU for v in values]
            k = int(np.argmax(retard))
            overlap = abs(np.vdot(vectors[:, k], cross_state(pol).as_array())) ** 2
            assert overlap > 1 - 1e-10


class TestSynthesizeGate:
    def test_pole_axis_pi(self):
        spec = synthesize_gate(UnitVector3(0, 0, 1), math.pi)
        assert spec.polarization.theta == 0.0
        assert spec.polarization.phi == 0.0
        assert abs(spec.detuning_ratio) < 1e-15

    def test_x_axis_half_pi(self):
        spec = synthesize_gate(UnitVector3(1, 0, 0), math.pi / 2)
        assert abs(spec.polarization.theta - math.pi / 2) < 1e-12
        assert abs(spec.polarization.phi) < 1e-12
        assert abs(spec.detuning_ratio - 1.0) < 1e-12

    @pytest.mark.parametrize("bad", [0.0, TAU, -1.0, 6.5])
    def test_unreachable_angles(self, bad):
        with pytest.raises(UnreachableAngleError, match="identity"):
            synthesize_gate(UnitVector3(1, 0, 0), bad)

    def test_round_trip_operator_fidelity(self):
        rng = np.random.default_rng(67)
        for _ in range(300):
            axis = random_axis(rng)
            delta = rng.uniform(0.01, TAU - 0.01)
            spec = synthesize_gate(axis, delta)
            achieved = control_unitary(spec)
            target = rotation_operator(axis, delta)
            assert operator_fidelity(achieved, target) >= 1 - 1e-10

    def test_axis_recovered(self):
        rng = np.random.default_rng(71)
        for _ in range(100):
            axis = random_axis(rng)
            spec = synthesize_gate(axis, 1.0)
            back = axis_from_polarization(spec.polarization)
            assert np.max(np.abs(back.as_array() - axis.as_array())) < 1e-10
