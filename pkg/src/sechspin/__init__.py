"""Single-pulse universal control of a two-level exciton-spin qubit.

Simulation of the pump/control/probe protocol, verification of the
detuning-to-rotation-angle law by direct integration, trace fitting for
visibility and phase shift, and synthesis of pulse specifications for
target rotations.
"""

__version__ = "0.1.0"

from .bloch import (
    NAMED_POLARIZATIONS,
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
from .errors import (
    AccuracyError,
    ConfigError,
    ConfigParseError,
    DegenerateReferenceError,
    FitError,
    FitWindowError,
    IllPosedFitError,
    NonReturnError,
    SechSpinError,
    UnfittableTraceError,
    UnreachableAngleError,
)
from .experiment import (
    ExperimentConfig,
    Trace,
    precess,
    probe_signal,
    simulate_trace,
    sweep_detuning,
    sweep_polarization,
    write_trace_csv,
)
from .fitting import (
    FitResult,
    fit_trace,
    normalize_against_reference,
    read_trace_csv,
    resolve_sign,
    rotation_angle_from_shift,
)
from .pulse import (
    ControlPulseSpec,
    SechPulseParams,
    control_unitary,
    detuning_from_phase,
    phase_from_detuning,
    synthesize_gate,
)
from .rosen_zener import (
    DEFAULT_GRID,
    IntegrationGrid,
    TwoLevelAmplitudes,
    VerificationPoint,
    VerificationReport,
    extract_geometric_phase,
    integrate_sech_pulse,
    verify_phase_law,
    zero_drive_reference,
)

__all__ = [
    "__version__",
    "NAMED_POLARIZATIONS",
    "PolarizationAngles",
    "SpinState",
    "Unitary2",
    "UnitVector3",
    "angles_from_state",
    "apply",
    "axis_from_polarization",
    "bloch_vector",
    "cross_state",
    "fidelity",
    "operator_fidelity",
    "polarization_from_axis",
    "rotation_operator",
    "state_from_angles",
    "AccuracyError",
    "ConfigError",
    "ConfigParseError",
    "DegenerateReferenceError",
    "FitError",
    "FitWindowError",
    "IllPosedFitError",
    "NonReturnError",
    "SechSpinError",
    "UnfittableTraceError",
    "UnreachableAngleError",
    "ExperimentConfig",
    "Trace",
    "precess",
    "probe_signal",
    "simulate_trace",
    "sweep_detuning",
    "sweep_polarization",
    "write_trace_csv",
    "FitResult",
    "fit_trace",
    "normalize_against_reference",
    "read_trace_csv",
    "resolve_sign",
    "rotation_angle_from_shift",
    "ControlPulseSpec",
    "SechPulseParams",
    "control_unitary",
    "detuning_from_phase",
    "phase_from_detuning",
    "synthesize_gate",
    "DEFAULT_GRID",
    "IntegrationGrid",
    "TwoLevelAmplitudes",
    "VerificationPoint",
    "VerificationReport",
    "extract_geometric_phase",
    "integrate_sech_pulse",
    "verify_phase_law",
    "zero_drive_reference",
]
