"""Detuned 2*pi hyperbolic-secant pulse model.

A resonantly tuned 2*pi sech pulse returns all population while the
coupled component of the spin acquires a geometric phase

    delta = pi - 2 * arctan(detuning / bandwidth),

which acts as a rotation of the spin by delta about the axis set by the
pulse polarization.  This module provides the forward law, its inverse,
the control unitary of a fully specified pulse, and single-pulse gate
synthesis (target rotation -> pulse specification).
"""

import math
from dataclasses import dataclass

from .bloch import (
    PolarizationAngles,
    UnitVector3,
    Unitary2,
    axis_from_polarization,
    polarization_from_axis,
    rotation_operator,
)
from .errors import UnreachableAngleError

TAU = 2.0 * math.pi


@dataclass(frozen=True)
class SechPulseParams:
    """Physical sech-pulse parameters; the area is fixed at exactly 2*pi.

    sigma and detuning share the same frequency units (inverse picoseconds
    here); only their ratio enters the rotation law.
    """

    sigma: float
    detuning: float = 0.0
    area: float = TAU

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not math.isfinite(self.detuning):
            raise ValueError("detuning must be finite")
        if self.area != TAU:
            raise ValueError("pulse area is fixed at 2*pi for this model")

    @property
    def detuning_ratio(self) -> float:
        return self.detuning / self.sigma


@dataclass(frozen=True)
class ControlPulseSpec:
    """A fully specified control operation.

    The polarization sets the rotation axis, the dimensionless detuning
    (detuning over bandwidth) sets the rotation angle, and arrival_time
    places the pulse on the delay axis in picoseconds.
    """

    polarization: PolarizationAngles
    detuning_ratio: float = 0.0
    arrival_time: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.detuning_ratio):
            raise ValueError("detuning_ratio must be finite")
        if not (math.isfinite(self.arrival_time) and self.arrival_time >= 0.0):
            raise ValueError(f"arrival_time must be >= 0, got {self.arrival_time}")

    @property
    def rotation_angle(self) -> float:
        return phase_from_detuning(self.detuning_ratio)


def phase_from_detuning(detuning_ratio: float) -> float:
    """Rotation angle pi - 2*arctan(detuning_ratio), in (0, 2*pi).

    Strictly decreasing; pi on resonance, approaching 0 (2*pi) at large
    positive (negative) detuning.
    """
    if not math.isfinite(detuning_ratio):
        raise ValueError("detuning_ratio must be finite")
    return math.pi - 2.0 * math.atan(detuning_ratio)


def detuning_from_phase(delta: float) -> float:
    """Inverse of :func:`phase_from_detuning` on the open interval (0, 2*pi)."""
    if not (0.0 < delta < TAU):
        raise UnreachableAngleError(
            f"rotation angle {delta!r} is outside (0, 2*pi); delta = 0 or 2*pi "
            "is the identity and needs no pulse, anything else is unreachable "
            "by a single 2*pi sech pulse at finite detuning"
        )
    return math.tan((math.pi - delta) / 2.0)


def control_unitary(spec: ControlPulseSpec) -> Unitary2:
    """Rotation operator of a control pulse.

    In the basis of the co- and cross-polarized states of the pulse the
    matrix is diag(1, e^{-i delta}) up to global phase: only the coupled
    cross-polarized component acquires the geometric phase.
    """
    delta = phase_from_detuning(spec.detuning_ratio)
    axis = axis_from_polarization(spec.polarization)
    return rotation_operator(axis, delta)


def synthesize_gate(axis: UnitVector3, delta: float) -> ControlPulseSpec:
    """Pulse specification realizing a rotation by delta about ``axis``.

    delta must lie strictly inside (0, 2*pi); raises
    :class:`UnreachableAngleError` otherwise.
    """
    detuning_ratio = detuning_from_phase(delta)
    return ControlPulseSpec(
        polarization=polarization_from_axis(axis),
        detuning_ratio=detuning_ratio,
    )
