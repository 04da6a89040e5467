"""SU(2) algebra for a polarization-encoded two-level spin.

The basis states |H> and |V> are the linearly polarized eigenstates and
form the poles of the sphere.  A point is addressed three ways, kept
mutually consistent:

* a normalized amplitude pair (``SpinState``),
* polar/azimuthal angles (``PolarizationAngles``),
* a Cartesian unit vector (``UnitVector3``).

The state at (theta, phi) is ``cos(theta/2)|H> + i e^{i phi} sin(theta/2)|V>``
and its Bloch vector is ``(cos phi sin theta, sin phi sin theta, cos theta)``.
The Pauli triple below is the unique right-handed set that makes this hold
with z on |H> and the +x eigenstate equal to the circular state
``(|H> + i|V>)/sqrt(2)``.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

TAU = 2.0 * math.pi

PAULI_X = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Y = np.array([[0.0, -1.0], [-1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

_STATE_NORM_TOL = 1e-12
_AXIS_NORM_TOL = 1e-9
_UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class PolarizationAngles:
    """Polar/azimuthal pair locating a polarization (or a state) on the sphere.

    theta is restricted to [0, pi]; phi is stored modulo 2*pi and is forced
    to 0 at the poles, where it is meaningless.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        phi = float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError("polar angles must be finite")
        if theta < -1e-12 or theta > math.pi + 1e-12:
            raise ValueError(f"theta must lie in [0, pi], got {theta}")
        theta = min(max(theta, 0.0), math.pi)
        phi = phi % TAU
        if theta == 0.0 or theta == math.pi:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def canonical(cls, theta: float, phi: float) -> "PolarizationAngles":
        """Fold arbitrary real (theta, phi) onto the canonical domain."""
        theta = theta % TAU
        if theta > math.pi:
            theta = TAU - theta
            phi = phi + math.pi
        return cls(theta, phi)


@dataclass(frozen=True)
class SpinState:
    """Normalized amplitude pair on the {|H>, |V>} basis.

    Global phase is physically meaningless and is not canonicalized;
    compare states with :func:`fidelity`, not with ``==``.
    """

    a_h: complex
    a_v: complex

    def __post_init__(self):
        a_h = complex(self.a_h)
        a_v = complex(self.a_v)
        norm_sq = abs(a_h) ** 2 + abs(a_v) ** 2
        if abs(norm_sq - 1.0) > _STATE_NORM_TOL:
            raise ValueError(f"state not normalized: |a|^2 = {norm_sq!r}")
        object.__setattr__(self, "a_h", a_h)
        object.__setattr__(self, "a_v", a_v)

    @classmethod
    def normalized(cls, a_h: complex, a_v: complex) -> "SpinState":
        norm = math.hypot(abs(a_h), abs(a_v))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(a_h / norm, a_v / norm)

    def as_array(self) -> np.ndarray:
        return np.array([self.a_h, self.a_v])


@dataclass(frozen=True)
class UnitVector3:
    """Real unit vector; the rotation-axis representation."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        x, y, z = float(self.x), float(self.y), float(self.z)
        norm = math.sqrt(x * x + y * y + z * z)
        if abs(norm - 1.0) > _AXIS_NORM_TOL:
            raise ValueError(f"axis must be unit length, got |n| = {norm!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVector3":
        norm = math.sqrt(x * x + y * y + z * z)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(x / norm, y / norm, z / norm)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class Unitary2:
    """2x2 unitary matrix in the {|H>, |V>} basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        deviation = np.max(np.abs(m @ m.conj().T - IDENTITY2))
        if deviation > _UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (deviation {deviation:.3e})")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(abs(det) - 1.0) > _UNITARY_TOL:
            raise ValueError(f"|det| must be 1, got {abs(det)!r}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def u00(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def u01(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def u10(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def u11(self) -> complex:
        return complex(self.matrix[1, 1])

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        return Unitary2(self.matrix @ other.matrix)


#: Conventional sphere points for the six named polarizations.
NAMED_POLARIZATIONS = {
    "H": PolarizationAngles(0.0, 0.0),
    "V": PolarizationAngles(math.pi, 0.0),
    "D": PolarizationAngles(math.pi / 2, 3 * math.pi / 2),
    "Dbar": PolarizationAngles(math.pi / 2, math.pi / 2),
    "R": PolarizationAngles(math.pi / 2, 0.0),
    "L": PolarizationAngles(math.pi / 2, math.pi),
}


def state_from_angles(angles: PolarizationAngles) -> SpinState:
    """State at (theta, phi): cos(theta/2)|H> + i e^{i phi} sin(theta/2)|V>."""
    half = angles.theta / 2.0
    return SpinState(math.cos(half), 1j * cmath.exp(1j * angles.phi) * math.sin(half))


def angles_from_state(state: SpinState) -> PolarizationAngles:
    """Inverse of :func:`state_from_angles`, discarding global phase.

    At the poles the azimuth is undefined and comes back as 0.
    """
    r_h = abs(state.a_h)
    theta = 2.0 * math.acos(min(r_h, 1.0))
    if abs(state.a_v) < 1e-15 or r_h < 1e-15:
        return PolarizationAngles(theta, 0.0)
    phi = cmath.phase(state.a_v) - cmath.phase(state.a_h) - math.pi / 2.0
    return PolarizationAngles(theta, phi % TAU)


def cross_state(angles: PolarizationAngles) -> SpinState:
    """Antipodal (cross-polarized) state: sin(theta/2)|H> - i e^{i phi} cos(theta/2)|V>.

    Equals the state at (pi - theta, pi + phi); always orthogonal to the
    state at (theta, phi).
    """
    half = angles.theta / 2.0
    return SpinState(math.sin(half), -1j * cmath.exp(1j * angles.phi) * math.cos(half))


def axis_from_polarization(angles: PolarizationAngles) -> UnitVector3:
    """Cartesian unit vector (cos phi sin theta, sin phi sin theta, cos theta)."""
    sin_t = math.sin(angles.theta)
    return UnitVector3(
        math.cos(angles.phi) * sin_t,
        math.sin(angles.phi) * sin_t,
        math.cos(angles.theta),
    )


def polarization_from_axis(axis: UnitVector3) -> PolarizationAngles:
    """Spherical angles of an axis; inverse of :func:`axis_from_polarization`."""
    theta = math.acos(min(max(axis.z, -1.0), 1.0))
    if abs(axis.x) < 1e-15 and abs(axis.y) < 1e-15:
        return PolarizationAngles(theta, 0.0)
    return PolarizationAngles(theta, math.atan2(axis.y, axis.x) % TAU)


def rotation_operator(axis: UnitVector3, delta: float) -> Unitary2:
    """exp(i sigma.n delta/2) = cos(delta/2) I + i sin(delta/2) sigma.n.

    With this sign the Bloch vector of a state rotates by -delta about
    ``axis`` in the right-hand-rule (counterclockwise) convention, i.e.
    clockwise by delta when viewed from the axis tip.
    """
    norm = math.sqrt(axis.x**2 + axis.y**2 + axis.z**2)
    if abs(norm - 1.0) > _AXIS_NORM_TOL:
        raise ValueError(f"rotation axis must be unit length, got |n| = {norm!r}")
    sigma_n = axis.x * PAULI_X + axis.y * PAULI_Y + axis.z * PAULI_Z
    half = delta / 2.0
    return Unitary2(math.cos(half) * IDENTITY2 + 1j * math.sin(half) * sigma_n)


def apply(u: Unitary2, s: SpinState) -> SpinState:
    """Matrix-vector product u @ s."""
    v = u.matrix @ s.as_array()
    return SpinState(v[0], v[1])


def fidelity(a: SpinState, b: SpinState) -> float:
    """|<a|b>|^2; symmetric and insensitive to global phase."""
    overlap = np.conj(a.a_h) * b.a_h + np.conj(a.a_v) * b.a_v
    return min(abs(overlap) ** 2, 1.0)


def operator_fidelity(u: Unitary2, v: Unitary2) -> float:
    """|tr(u^dagger v)|^2 / 4; 1 iff u and v agree up to global phase."""
    return min(abs(np.trace(u.matrix.conj().T @ v.matrix)) ** 2 / 4.0, 1.0)


def bloch_vector(state: SpinState) -> UnitVector3:
    """Pauli expectation vector (<sx>, <sy>, <sz>) of a pure state."""
    psi = state.as_array()
    return UnitVector3(
        float(np.vdot(psi, PAULI_X @ psi).real),
        float(np.vdot(psi, PAULI_Y @ psi).real),
        float(np.vdot(psi, PAULI_Z @ psi).real),
    )
