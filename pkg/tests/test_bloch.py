import cmath
import math

import numpy as np
import pytest

from sechspin.bloch import (
    IDENTITY2,
    NAMED_POLARIZATIONS,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PolarizationAngles,
    SpinState,
    Unitary2,
    UnitVector3,
    angles_from_state,
    apply,
    axis_from_polarization,
    bloch_vector,
    cross_state,
    fidelity,
    operator_fidelity,
    polarization_from_axis,
    rotation_operator,
    state_from_angles,
)

TAU = 2 * math.pi
SQ2 = 1 / math.sqrt(2)


def wrap(x):
    return (x + math.pi) % TAU - math.pi


def random_angles(rng):
    return PolarizationAngles(rng.uniform(0, math.pi), rng.uniform(0, TAU))


def random_state(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    return SpinState.normalized(a[0], a[1])


def random_axis(rng):
    z = rng.uniform(-1, 1)
    phi = rng.uniform(0, TAU)
    r = math.sqrt(1 - z * z)
    return UnitVector3(r * math.cos(phi), r * math.sin(phi), z)


def rodrigues(v, n, angle):
    """Independent oracle: counterclockwise rotation of v about n by angle."""
    v = np.asarray(v, dtype=float)
    n = np.asarray(n, dtype=float)
    return (
        v * math.cos(angle)
        + np.cross(n, v) * math.sin(angle)
        + n * np.dot(n, v) * (1 - math.cos(angle))
    )


def assert_unitary_close_up_to_phase(u, v, tol):
    a, b = u.matrix, v.matrix
    idx = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    phase = b[idx] / a[idx]
    assert abs(abs(phase) - 1) < 1e-9
    assert np.max(np.abs(a * phase - b)) < tol


class TestTypes:
    def test_spin_state_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            SpinState(0.9, 0.1)

    def test_spin_state_normalized_constructor(self):
        s = SpinState.normalized(3.0, 4.0j)
        assert abs(abs(s.a_h) ** 2 + abs(s.a_v) ** 2 - 1) < 1e-15

    def test_polarization_phi_wraps(self):
        p = PolarizationAngles(1.0, TAU + 0.5)
        assert abs(p.phi - 0.5) < 1e-12
        p = PolarizationAngles(1.0, -0.5)
        assert abs(p.phi - (TAU - 0.5)) < 1e-12

    def test_polarization_pole_phi_canonicalized(self):
        assert PolarizationAngles(0.0, 2.3).phi == 0.0
        assert PolarizationAngles(math.pi, math.pi).phi == 0.0

    def test_polarization_theta_out_of_range(self):
        with pytest.raises(ValueError):
            PolarizationAngles(-0.1, 0.0)
        with pytest.raises(ValueError):
            PolarizationAngles(math.pi + 0.1, 0.0)

    def test_polarization_canonical_folds(self):
        p = PolarizationAngles.canonical(math.pi + 0.4, 0.3)
        assert abs(p.theta - (math.pi - 0.4)) < 1e-12
        assert abs(p.phi - (0.3 + math.pi)) < 1e-12

    def test_unit_vector_rejects_non_unit(self):
        with pytest.raises(ValueError):
            UnitVector3(1.0, 1.0, 0.0)

    def test_unitary_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            Unitary2(np.array([[1.0, 0.0], [0.0, 2.0]], dtype=complex))

    def test_unitary_entries(self):
        u = Unitary2(np.array([[0, 1], [1, 0]], dtype=complex))
        assert u.u00 == 0 and u.u01 == 1 and u.u10 == 1 and u.u11 == 0


class TestStateFromAngles:
    def test_h_pole(self):
        s = state_from_angles(PolarizationAngles(0.0, 0.0))
        assert s.a_h == 1.0 and s.a_v == 0.0

    def test_circular_r(self):
        s = state_from_angles(PolarizationAngles(math.pi / 2, 0.0))
        assert abs(s.a_h - SQ2) < 1e-15
        assert abs(s.a_v - 1j * SQ2) < 1e-15

    def test_circular_l(self):
        s = state_from_angles(PolarizationAngles(math.pi / 2, math.pi))
        assert abs(s.a_h - SQ2) < 1e-15
        assert abs(s.a_v + 1j * SQ2) < 1e-15

    def test_named_polarizations(self):
        diag = state_from_angles(NAMED_POLARIZATIONS["D"])
        assert fidelity(diag, SpinState(SQ2, SQ2)) > 1 - 1e-12
        antidiag = state_from_angles(NAMED_POLARIZATIONS["Dbar"])
        assert fidelity(antidiag, SpinState(SQ2, -SQ2)) > 1 - 1e-12


class TestAnglesFromState:
    def test_pole(self):
        a = angles_from_state(SpinState(1.0, 0.0))
        assert a.theta == 0.0 and a.phi == 0.0

    def test_circular_r(self):
        a = angles_from_state(SpinState(SQ2, 1j * SQ2))
        assert abs(a.theta - math.pi / 2) < 1e-12
        assert abs(a.phi) < 1e-12

    def test_global_phase_discarded(self):
        g = cmath.exp(1.3j)
        a = angles_from_state(SpinState(g * SQ2, g * -1j * SQ2))
        assert abs(a.theta - math.pi / 2) < 1e-12
        assert abs(a.phi - math.pi) < 1e-12

    def test_round_trip_away_from_poles(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            theta = rng.uniform(0.05, math.pi - 0.05)
            phi = rng.uniform(0, TAU)
            back = angles_from_state(state_from_angles(PolarizationAngles(theta, phi)))
            assert abs(back.theta - theta) < 1e-10
            assert abs(wrap(back.phi - phi)) < 1e-10


class TestCrossState:
    def test_pole_antipode(self):
        x = cross_state(PolarizationAngles(0.0, 0.0))
        assert abs(x.a_h) < 1e-15
        assert abs(x.a_v + 1j) < 1e-15

    def test_cross_of_r_is_l(self):
        x = cross_state(PolarizationAngles(math.pi / 2, 0.0))
        left = state_from_angles(PolarizationAngles(math.pi / 2, math.pi))
        assert fidelity(x, left) > 1 - 1e-12

    def test_orthogonality_random_grid(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            angles = random_angles(rng)
            s = state_from_angles(angles)
            x = cross_state(angles)
            overlap = np.conj(s.a_h) * x.a_h + np.conj(s.a_v) * x.a_v
            assert abs(overlap) < 1e-12

    def test_equals_antipodal_state(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            angles = random_angles(rng)
            antipode = state_from_angles(
                PolarizationAngles.canonical(math.pi - angles.theta, math.pi + angles.phi)
            )
            assert fidelity(cross_state(angles), antipode) > 1 - 1e-12


class TestAxisMaps:
    def test_h_pole_axis(self):
        n = axis_from_polarization(PolarizationAngles(0.0, 1.7))
        assert abs(n.x) < 1e-15 and abs(n.y) < 1e-15 and n.z == 1.0

    def test_r_axis_is_x(self):
        n = axis_from_polarization(PolarizationAngles(math.pi / 2, 0.0))
        assert abs(n.x - 1) < 1e-15 and abs(n.y) < 1e-15 and abs(n.z) < 1e-15

    def test_l_axis_is_minus_x(self):
        n = axis_from_polarization(PolarizationAngles(math.pi / 2, math.pi))
        assert abs(n.x + 1) < 1e-12 and abs(n.y) < 1e-12 and abs(n.z) < 1e-15

    def test_polarization_from_axis_round_trip(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            angles = random_angles(rng)
            back = polarization_from_axis(axis_from_polarization(angles))
            assert abs(back.theta - angles.theta) < 1e-10
            if 1e-6 < angles.theta < math.pi - 1e-6:
                assert abs(wrap(back.phi - angles.phi)) < 1e-10


class TestRotationOperator:
    def test_zero_angle_is_identity(self):
        rng = np.random.default_rng(17)
        u = rotation_operator(random_axis(rng), 0.0)
        assert np.max(np.abs(u.matrix - IDENTITY2)) < 1e-15

    def test_pi_about_z(self):
        u = rotation_operator(UnitVector3(0, 0, 1), math.pi)
        expected = np.array([[1j, 0], [0, -1j]])
        assert np.max(np.abs(u.matrix - expected)) < 1e-15

    def test_pi_about_l_axis_fixes_l_and_r(self):
        u = rotation_operator(UnitVector3(-1, 0, 0), math.pi)
        left = state_from_angles(PolarizationAngles(math.pi / 2, math.pi))
        right = state_from_angles(PolarizationAngles(math.pi / 2, 0.0))
        assert fidelity(apply(u, left), left) > 1 - 1e-12
        assert fidelity(apply(u, right), right) > 1 - 1e-12

    def test_unitarity_and_det_random(self):
        rng = np.random.default_rng(19)
        for _ in range(100):
            u = rotation_operator(random_axis(rng), rng.uniform(-10, 10))
            m = u.matrix
            assert np.max(np.abs(m @ m.conj().T - IDENTITY2)) < 1e-12
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            assert abs(abs(det) - 1) < 1e-12

    def test_composition(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            n = random_axis(rng)
            d1, d2 = rng.uniform(-6, 6, size=2)
            assert_unitary_close_up_to_phase(
                rotation_operator(n, d1) @ rotation_operator(n, d2),
                rotation_operator(n, d1 + d2),
                1e-10,
            )

    def test_spinor_sign_at_full_turn(self):
        rng = np.random.default_rng(29)
        for _ in range(100):
            u = rotation_operator(random_axis(rng), TAU)
            assert np.max(np.abs(u.matrix + IDENTITY2)) < 1e-12
            s = random_state(rng)
            assert fidelity(apply(u, s), s) > 1 - 1e-12

    def test_bloch_action_matches_rodrigues_clockwise(self):
        # exp(+i sigma.n d/2) rotates the Bloch vector by -d in the
        # right-hand-rule convention; pins the handedness operationally.
        rng = np.random.default_rng(31)
        for _ in range(100):
            s = random_state(rng)
            n = random_axis(rng)
            delta = rng.uniform(-6, 6)
            rotated = bloch_vector(apply(rotation_operator(n, delta), s))
            expected = rodrigues(bloch_vector(s).as_array(), n.as_array(), -delta)
            assert np.max(np.abs(rotated.as_array() - expected)) < 1e-10


class TestApplyAndFidelity:
    def test_identity_application(self):
        rng = np.random.default_rng(37)
        s = random_state(rng)
        out = apply(Unitary2(IDENTITY2), s)
        assert out.a_h == s.a_h and out.a_v == s.a_v

    def test_pi_about_z_maps_r_to_l(self):
        u = rotation_operator(UnitVector3(0, 0, 1), math.pi)
        right = state_from_angles(PolarizationAngles(math.pi / 2, 0.0))
        left = state_from_angles(PolarizationAngles(math.pi / 2, math.pi))
        assert fidelity(apply(u, right), left) > 1 - 1e-12

    def test_equatorial_pi_rotation_doubles_azimuth_offset(self):
        # A pi rotation about the equatorial axis at azimuth pi + alpha
        # moves the state at azimuth pi to azimuth pi + 2*alpha.
        left = state_from_angles(PolarizationAngles(math.pi / 2, math.pi))
        for alpha in (0.1, 0.45, math.pi / 4, 1.3):
            axis = axis_from_polarization(PolarizationAngles(math.pi / 2, math.pi + alpha))
            out = angles_from_state(apply(rotation_operator(axis, math.pi), left))
            assert abs(out.theta - math.pi / 2) < 1e-10
            assert abs(wrap(out.phi - (math.pi + 2 * alpha))) < 1e-10

    def test_fidelity_self_and_orthogonal(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            angles = random_angles(rng)
            s = state_from_angles(angles)
            assert abs(fidelity(s, s) - 1.0) < 1e-14
            assert fidelity(s, cross_state(angles)) < 1e-24

    def test_fidelity_equator_to_pole(self):
        right = state_from_angles(PolarizationAngles(math.pi / 2, 0.0))
        h = SpinState(1.0, 0.0)
        assert abs(fidelity(right, h) - 0.5) < 1e-12

    def test_operator_fidelity_phase_invariant(self):
        rng = np.random.default_rng(43)
        u = rotation_operator(random_axis(rng), 1.1)
        v = Unitary2(cmath.exp(0.7j) * u.matrix)
        assert operator_fidelity(u, v) > 1 - 1e-14


class TestBlochVector:
    def test_matches_axis_of_angles(self):
        rng = np.random.default_rng(47)
        for _ in range(100):
            s = random_state(rng)
            vec = bloch_vector(s)
            n = axis_from_polarization(angles_from_state(s))
            assert np.max(np.abs(vec.as_array() - n.as_array())) < 1e-10

    def test_pauli_algebra(self):
        assert np.allclose(PAULI_X @ PAULI_Y - PAULI_Y @ PAULI_X, 2j * PAULI_Z)
        assert np.allclose(PAULI_Y @ PAULI_Z - PAULI_Z @ PAULI_Y, 2j * PAULI_X)
        assert np.allclose(PAULI_Z @ PAULI_X - PAULI_X @ PAULI_Z, 2j * PAULI_Y)

    def test_axis_eigenstates(self):
        right = state_from_angles(PolarizationAngles(math.pi / 2, 0.0)).as_array()
        assert np.allclose(PAULI_X @ right, right)
        antidiag = state_from_angles(PolarizationAngles(math.pi / 2, math.pi / 2)).as_array()
        assert np.allclose(PAULI_Y @ antidiag, antidiag)
