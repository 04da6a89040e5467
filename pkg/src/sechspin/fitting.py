"""Visibility and phase-shift extraction from pump-probe traces.

Traces are fitted to

    C * exp(-t/tau) * [1 - V * cos(2*pi/T * t + dphi)]

with tau and T supplied by the caller, which makes the model linear in
the three unknowns: after dividing out the decay envelope the problem is
ordinary least squares on (offset, cos, sin) and is solved in closed form
from the 3x3 normal equations.  No iteration, no starting values, exact
on noiseless data.

The sign map from the (cos, sin) coefficients to (V, dphi) is fixed so
that the control-free trace of an equatorial pump/probe pair fits to
V = 1, dphi = 0 under the precession convention of the experiment module;
all phase shifts are reported relative to that anchor.
"""

import hashlib
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ConfigParseError,
    DegenerateReferenceError,
    FitWindowError,
    IllPosedFitError,
    UnfittableTraceError,
)
from .experiment import Trace

TAU = 2.0 * math.pi

MIN_WINDOW_SAMPLES = 8
MAX_CONDITION_NUMBER = 1e8
#: Below this |V| a fitted phase carries no information.
PHASE_FLOOR = 1e-6
#: A neighbor-to-neighbor phase jump this close to pi marks a sign flip.
PHASE_JUMP_TOL = 0.3
#: A flip is only trusted when |V| dips at least this low at the jump.
FLIP_VISIBILITY_MAX = 0.2


@dataclass(frozen=True)
class FitResult:
    """Extracted (C, V, dphi) triple plus fit diagnostics.

    ``v`` is nonnegative as fitted; :func:`resolve_sign` may flip it to
    negative values to keep a sweep's visibility curve continuous.
    ``delta_phi`` is meaningless whenever |v| < PHASE_FLOOR.
    """

    c: float
    v: float
    delta_phi: float
    rms_residual: float
    n_samples_used: int
    warnings: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "c": self.c,
            "v_signed": self.v,
            "delta_phi_rad": self.delta_phi,
            "rms_residual": self.rms_residual,
            "n_samples": self.n_samples_used,
            "warnings": list(self.warnings),
        }

    def csv_row(self, param: float) -> str:
        return f"{float(param)!r},{self.v!r},{self.delta_phi!r},{self.rms_residual!r}"


def _wrap_pm_pi(x: float) -> float:
    return (x + math.pi) % TAU - math.pi


def fit_trace(
    trace: Trace, tau: float, period: float, window_start: float
) -> FitResult:
    """Fit the samples with delay >= window_start (boundary included).

    tau and period are taken as known; callers normally pass
    window_start equal to the precession period so only the post-control
    part of a three-pulse trace is fitted.
    """
    if not tau > 0.0 or not period > 0.0:
        raise ValueError("tau and period must be positive")
    mask = trace.delta_t >= window_start
    t = trace.delta_t[mask]
    s = trace.signal[mask]
    if t.size < MIN_WINDOW_SAMPLES:
        raise FitWindowError(
            f"only {t.size} samples at delay >= {window_start}; "
            f"need at least {MIN_WINDOW_SAMPLES}"
        )

    y = s * np.exp(t / tau)
    omega = TAU / period
    design = np.column_stack([np.ones_like(t), np.cos(omega * t), np.sin(omega * t)])
    normal = design.T @ design
    condition = np.linalg.cond(normal)
    if condition > MAX_CONDITION_NUMBER:
        raise IllPosedFitError(
            f"normal-equation condition number {condition:.3e} exceeds "
            f"{MAX_CONDITION_NUMBER:.0e}; samples span too little of a period"
        )
    a, b, c_sin = np.linalg.solve(normal, design.T @ y)
    if a <= 0.0:
        raise UnfittableTraceError(f"degenerate trace: fitted mean level {a!r}")

    visibility = math.hypot(b, c_sin) / a
    delta_phi = math.atan2(c_sin / a, -b / a) % TAU
    model = np.exp(-t / tau) * (design @ np.array([a, b, c_sin]))
    rms = float(np.sqrt(np.mean((s - model) ** 2)))
    return FitResult(
        c=float(a),
        v=float(visibility),
        delta_phi=float(delta_phi),
        rms_residual=rms,
        n_samples_used=int(t.size),
    )


def normalize_against_reference(result: FitResult, reference: FitResult) -> FitResult:
    """Divide V by the reference visibility; shift dphi by the reference phase."""
    if reference.v <= PHASE_FLOOR:
        raise DegenerateReferenceError(
            f"reference visibility {reference.v!r} is too small to normalize against"
        )
    return replace(
        result,
        v=result.v / reference.v,
        delta_phi=(result.delta_phi - reference.delta_phi) % TAU,
    )


def resolve_sign(results) -> list[FitResult]:
    """Turn a V >= 0 sweep into a continuous signed-visibility curve.

    Walks the (ordered, normalized) sequence.  A phase jump of about pi
    between neighbors with the visibility dipping near zero in between is
    a zero crossing: from there on V flips sign and pi is removed from the
    phase.  A near-pi jump without a visibility dip is left untouched and
    flagged.  Elements with |V| below PHASE_FLOOR carry no phase of their
    own; they are pinned to the running branch phase and flagged.
    """
    results = list(results)
    if len(results) <= 1:
        return results

    meaningful = [i for i, r in enumerate(results) if abs(r.v) >= PHASE_FLOOR]
    branch_phi = results[meaningful[0]].delta_phi if meaningful else 0.0
    sign = 1.0
    # Smallest |V| seen since the previous meaningful element, the evidence
    # that the curve actually passed through zero.
    dip = math.inf

    out: list[FitResult] = []
    for r in results:
        if abs(r.v) < PHASE_FLOOR:
            dip = min(dip, abs(r.v))
            out.append(
                replace(
                    r,
                    v=sign * r.v,
                    delta_phi=branch_phi,
                    warnings=r.warnings
                    + (f"visibility below {PHASE_FLOOR:.0e}; phase pinned to branch",),
                )
            )
            continue

        candidate_phi = (r.delta_phi - (math.pi if sign < 0 else 0.0)) % TAU
        jump = _wrap_pm_pi(candidate_phi - branch_phi)
        warnings = r.warnings
        if abs(abs(jump) - math.pi) <= PHASE_JUMP_TOL:
            if min(dip, abs(r.v)) <= FLIP_VISIBILITY_MAX:
                sign = -sign
                candidate_phi = (r.delta_phi - (math.pi if sign < 0 else 0.0)) % TAU
            else:
                warnings = warnings + (
                    "phase jumped by ~pi without the visibility passing near "
                    "zero; sign left unresolved",
                )
        out.append(replace(r, v=sign * r.v, delta_phi=candidate_phi, warnings=warnings))
        branch_phi = candidate_phi
        dip = abs(r.v)
    return out


def rotation_angle_from_shift(delta_phi: float) -> float:
    """Control rotation angle implied by a fitted phase shift, pole-axis family.

    Under this package's precession convention a control polarized at the
    V pole retards the trace phase, so the rotation angle is
    (2*pi - delta_phi) mod 2*pi.
    """
    return (TAU - delta_phi) % TAU


def read_trace_csv(path) -> Trace:
    """Read a ``delta_t_ps,signal`` CSV written by the experiment module."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines or lines[0] != "delta_t_ps,signal":
        raise ConfigParseError(f"{path}: expected header 'delta_t_ps,signal'")
    dts = []
    sigs = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2:
            raise ConfigParseError(f"{path}: line {lineno}: expected two columns")
        try:
            dts.append(float(parts[0]))
            sigs.append(float(parts[1]))
        except ValueError as exc:
            raise ConfigParseError(f"{path}: line {lineno}: {exc}") from exc
    digest = hashlib.sha256("\n".join(lines).encode()).hexdigest()[:12]
    return Trace(
        delta_t=np.array(dts),
        signal=np.array(sigs),
        fingerprint=digest,
        meta={"source": str(path)},
    )
