"""Three-pulse protocol simulation: pump, control, probe.

A polarized pump writes the spin, the state precesses about the pole axis
with period T while decaying radiatively, an optional instantaneous control
rotation fires a fixed offset before the probe, and a polarized probe reads
the projection of the spin onto the state cross-polarized to it.  The
result is a trace of probe absorption versus pump-probe delay.

Sign convention: precession multiplies the |V> amplitude by
e^{-i 2*pi*duration/T}.  Everything downstream (the sign of fitted phase
shifts in particular) is defined relative to this choice.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Literal, Optional

import numpy as np

from .bloch import (
    PolarizationAngles,
    SpinState,
    apply,
    cross_state,
    fidelity,
    state_from_angles,
)
from .errors import ConfigError
from .pulse import ControlPulseSpec, control_unitary, phase_from_detuning

TAU = 2.0 * math.pi

#: Nominal control-pulse duration in ps.  The rotation is modeled as
#: instantaneous; delays within this window above the control onset are
#: flagged in trace metadata, not treated specially.
PULSE_WIDTH_PS = 9.0

L_POLARIZATION = PolarizationAngles(math.pi / 2, math.pi)
V_POLARIZATION = PolarizationAngles(math.pi, 0.0)


def _default_sample_times() -> np.ndarray:
    # 0.25 + k*0.75 never hits a multiple of the 122 ps default period, so
    # a fit window starting at one period never straddles the sample where
    # the control switches on (the trace is discontinuous there).
    return np.arange(0.25, 600.0, 0.75)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one pump(-control)-probe run.

    Times are picoseconds.  ``control_offset`` is how long before the probe
    the control fires; it defaults to one precession period, so the control
    only acts on samples with delay strictly greater than the period.
    ``eta`` is the residual visibility of the post-control oscillation
    (1 = fully coherent); ``scale`` is the overall signal normalization.
    """

    pump_polarization: PolarizationAngles = L_POLARIZATION
    probe_polarization: PolarizationAngles = L_POLARIZATION
    period: float = 122.0
    tau: float = 1000.0
    control: Optional[ControlPulseSpec] = None
    control_offset: Optional[float] = None
    eta: float = 1.0
    scale: float = 1.0
    sample_times: np.ndarray = field(default_factory=_default_sample_times)
    noise_sigma: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.period) and self.period > 0.0):
            raise ConfigError(f"period must be positive, got {self.period}")
        if not self.tau > 0.0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        offset = self.period if self.control_offset is None else float(self.control_offset)
        if not offset > 0.0:
            raise ConfigError(f"control_offset must be positive, got {offset}")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigError(f"eta must lie in [0, 1], got {self.eta}")
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise ConfigError(f"scale must be positive, got {self.scale}")
        if self.noise_sigma < 0.0:
            raise ConfigError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        times = np.array(self.sample_times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ConfigError("sample_times must be a nonempty 1-d array")
        if times[0] < 0.0 or np.any(np.diff(times) <= 0.0):
            raise ConfigError("sample_times must be strictly increasing and >= 0")
        times.setflags(write=False)
        object.__setattr__(self, "control_offset", offset)
        object.__setattr__(self, "sample_times", times)

    def as_dict(self) -> dict:
        d = {
            "pump_theta": self.pump_polarization.theta,
            "pump_phi": self.pump_polarization.phi,
            "probe_theta": self.probe_polarization.theta,
            "probe_phi": self.probe_polarization.phi,
            "period_ps": self.period,
            "tau_ps": self.tau,
            "control_offset_ps": self.control_offset,
            "eta": self.eta,
            "scale": self.scale,
            "noise_sigma": self.noise_sigma,
            "noise_seed": self.noise_seed,
            "sample_times_ps": [float(t) for t in self.sample_times],
        }
        if self.control is not None:
            d["control"] = {
                "theta": self.control.polarization.theta,
                "phi": self.control.polarization.phi,
                "detuning_ratio": self.control.detuning_ratio,
            }
        else:
            d["control"] = None
        return d

    def fingerprint(self) -> str:
        payload = json.dumps(self.as_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class Trace:
    """Sampled signal (delay in ps, nonnegative absorption signal)."""

    delta_t: np.ndarray
    signal: np.ndarray
    fingerprint: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        dt = np.array(self.delta_t, dtype=float)
        sig = np.array(self.signal, dtype=float)
        if dt.shape != sig.shape or dt.ndim != 1:
            raise ValueError("delta_t and signal must be 1-d arrays of equal length")
        if np.any(sig < 0.0):
            raise ValueError("signal values must be >= 0")
        dt.setflags(write=False)
        sig.setflags(write=False)
        object.__setattr__(self, "delta_t", dt)
        object.__setattr__(self, "signal", sig)


def precess(state: SpinState, duration: float, period: float) -> SpinState:
    """Free evolution: relative phase e^{-i 2*pi*duration/period} on |V>."""
    if not period > 0.0:
        raise ValueError(f"period must be positive, got {period}")
    return SpinState(state.a_h, state.a_v * np.exp(-1j * TAU * duration / period))


def probe_signal(
    state: SpinState,
    probe_pol: PolarizationAngles,
    delta_t: float,
    config: ExperimentConfig,
) -> float:
    """Probe absorption at delay delta_t.

    The probe couples to the state cross-polarized with it, so the signal
    is the spin's projection onto that state, scaled by the radiative decay
    envelope and the overall normalization.
    """
    projection = fidelity(state, cross_state(probe_pol))
    return config.scale * math.exp(-delta_t / config.tau) * projection


def simulate_trace(config: ExperimentConfig) -> Trace:
    """Simulate one trace over config.sample_times.

    For each delay dt the pump state precesses freely; if a control pulse
    is configured and dt exceeds the control offset, the control unitary is
    applied at t = dt - offset and the oscillatory part of the signal is
    damped toward the local mean by eta.  Delays at or below the offset
    follow the exact code path of a control-free run, so those samples are
    bit-identical with and without a control.
    """
    pump = state_from_angles(config.pump_polarization)
    probe = config.probe_polarization
    offset = config.control_offset
    unitary = control_unitary(config.control) if config.control is not None else None

    signals = np.empty_like(config.sample_times)
    for i, dt in enumerate(config.sample_times):
        t_control = dt - offset
        if unitary is not None and t_control > 0.0:
            s = precess(pump, t_control, config.period)
            s = apply(unitary, s)
            s = precess(s, dt - t_control, config.period)
            value = probe_signal(s, probe, dt, config)
            if config.eta != 1.0:
                # Local mean of the oscillation; exact for equatorial
                # pump/probe geometries.
                mean = config.scale * math.exp(-dt / config.tau) / 2.0
                value = mean + config.eta * (value - mean)
        else:
            s = precess(pump, dt, config.period)
            value = probe_signal(s, probe, dt, config)
        signals[i] = value

    if config.noise_sigma > 0.0:
        rng = np.random.default_rng(config.noise_seed)
        signals = np.clip(signals + rng.normal(0.0, config.noise_sigma, signals.shape), 0.0, None)

    meta: dict = {"has_control": unitary is not None}
    if unitary is not None:
        # Finite pulse width is not resolved; the instantaneous-rotation
        # idealization is crudest just above the control onset.
        meta["naive_overlap_window_ps"] = [offset, offset + PULSE_WIDTH_PS]
    return Trace(
        delta_t=config.sample_times,
        signal=signals,
        fingerprint=config.fingerprint(),
        meta=meta,
    )


SweepFamily = Literal["equatorial", "meridional"]


def sweep_polarization(
    base: ExperimentConfig, family: SweepFamily, alphas
) -> list[Trace]:
    """One trace per control polarization angle, resonant by default.

    The control polarization is (pi/2, pi + alpha) for the equatorial
    family and (pi/2 + alpha, pi) for the meridional family.  A reference
    trace without the control comes first.  Alphas outside [0, pi/2] are
    allowed but marked as extrapolation in the trace metadata.
    """
    if family not in ("equatorial", "meridional"):
        raise ConfigError(f"unknown sweep family {family!r}")
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ConfigError("alphas must be nonempty")
    detuning = base.control.detuning_ratio if base.control is not None else 0.0

    reference = simulate_trace(replace(base, control=None))
    traces = [replace(reference, meta={**reference.meta, "family": family, "reference": True})]
    for alpha in alphas:
        if family == "equatorial":
            pol = PolarizationAngles.canonical(math.pi / 2, math.pi + alpha)
        else:
            pol = PolarizationAngles.canonical(math.pi / 2 + alpha, math.pi)
        cfg = replace(base, control=ControlPulseSpec(pol, detuning))
        trace = simulate_trace(cfg)
        traces.append(
            replace(
                trace,
                meta={
                    **trace.meta,
                    "family": family,
                    "alpha": alpha,
                    "extrapolated": not 0.0 <= alpha <= math.pi / 2,
                },
            )
        )
    return traces


def sweep_detuning(base: ExperimentConfig, detuning_ratios) -> list[Trace]:
    """One trace per control detuning at fixed polarization (default: V pole).

    A reference trace without the control comes first.
    """
    ratios = [float(r) for r in detuning_ratios]
    if not ratios:
        raise ConfigError("detuning_ratios must be nonempty")
    pol = base.control.polarization if base.control is not None else V_POLARIZATION

    reference = simulate_trace(replace(base, control=None))
    traces = [replace(reference, meta={**reference.meta, "family": "detuning", "reference": True})]
    for ratio in ratios:
        cfg = replace(base, control=ControlPulseSpec(pol, ratio))
        trace = simulate_trace(cfg)
        traces.append(
            replace(
                trace,
                meta={
                    **trace.meta,
                    "family": "detuning",
                    "detuning_ratio": ratio,
                    "rotation_angle_rad": phase_from_detuning(ratio),
                },
            )
        )
    return traces


def write_trace_csv(trace: Trace, path) -> None:
    """Write ``delta_t_ps,signal`` CSV with full (round-trippable) precision."""
    lines = ["delta_t_ps,signal"]
    for dt, sig in zip(trace.delta_t, trace.signal):
        lines.append(f"{float(dt)!r},{float(sig)!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
