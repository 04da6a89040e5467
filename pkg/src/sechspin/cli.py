"""Command-line interface: trace, sweep, verify-oracle, synthesize.

Configs are flat ``key = value`` text files (``#`` starts a comment,
arrays are comma-separated, angle values may carry a ``deg`` suffix).
Every command writes its data files first and a run manifest last; data
files contain no timestamps, so identical configs give byte-identical
outputs.

Exit codes: 0 success, 1 quantitative check failed, 2 I/O or parse
error, 3 config/domain error, 4 numerical accuracy error.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bloch import PolarizationAngles, axis_from_polarization
from .errors import (
    AccuracyError,
    ConfigError,
    ConfigParseError,
    FitError,
    SechSpinError,
)
from .experiment import (
    ExperimentConfig,
    simulate_trace,
    sweep_detuning,
    sweep_polarization,
    write_trace_csv,
)
from .fitting import (
    PHASE_FLOOR,
    fit_trace,
    normalize_against_reference,
    resolve_sign,
    rotation_angle_from_shift,
)
from .pulse import control_unitary, phase_from_detuning, synthesize_gate
from .rosen_zener import verify_phase_law

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_ACCURACY = 4

_EXPERIMENT_KEYS = {
    "pump_theta", "pump_phi", "probe_theta", "probe_phi",
    "period", "tau", "eta", "scale",
    "control_theta", "control_phi", "control_detuning", "control_offset",
    "sample_start", "sample_stop", "sample_step", "sample_times",
    "noise_sigma", "noise_seed",
}
_SWEEP_KEYS = {"alphas", "detunings"}
_SYNTH_KEYS = {"axis_theta", "axis_phi", "delta"}
KNOWN_KEYS = _EXPERIMENT_KEYS | _SWEEP_KEYS | _SYNTH_KEYS


def parse_scalar(text: str) -> float:
    """One numeric token; a trailing ``deg`` converts degrees to radians."""
    text = text.strip()
    if text.endswith("deg"):
        return math.radians(float(text[:-3]))
    return float(text)


def parse_list(text: str) -> list[float]:
    return [parse_scalar(tok) for tok in text.split(",") if tok.strip()]


def parse_config_text(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ConfigParseError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigParseError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def load_config_file(path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


def _angles(kv, theta_key, phi_key, default) -> PolarizationAngles:
    if theta_key not in kv and phi_key not in kv:
        return default
    try:
        return PolarizationAngles(
            parse_scalar(kv.get(theta_key, "0")),
            parse_scalar(kv.get(phi_key, "0")),
        )
    except ValueError as exc:
        raise ConfigError(f"{theta_key}/{phi_key}: {exc}") from exc


def build_experiment_config(kv: dict[str, str]) -> ExperimentConfig:
    from .experiment import L_POLARIZATION
    from .pulse import ControlPulseSpec

    kwargs = {}
    kwargs["pump_polarization"] = _angles(kv, "pump_theta", "pump_phi", L_POLARIZATION)
    kwargs["probe_polarization"] = _angles(kv, "probe_theta", "probe_phi", L_POLARIZATION)
    for name, key in [("period", "period"), ("tau", "tau"), ("eta", "eta"),
                      ("scale", "scale"), ("control_offset", "control_offset"),
                      ("noise_sigma", "noise_sigma")]:
        if key in kv:
            try:
                kwargs[name] = parse_scalar(kv[key])
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from exc
    if "noise_seed" in kv:
        kwargs["noise_seed"] = int(float(kv["noise_seed"]))

    if "control_theta" in kv or "control_phi" in kv or "control_detuning" in kv:
        pol = _angles(kv, "control_theta", "control_phi", L_POLARIZATION)
        try:
            kwargs["control"] = ControlPulseSpec(
                pol, parse_scalar(kv.get("control_detuning", "0"))
            )
        except ValueError as exc:
            raise ConfigError(f"control: {exc}") from exc

    if "sample_times" in kv:
        kwargs["sample_times"] = np.array(parse_list(kv["sample_times"]))
    elif "sample_start" in kv or "sample_stop" in kv or "sample_step" in kv:
        try:
            start = parse_scalar(kv.get("sample_start", "0.25"))
            stop = parse_scalar(kv.get("sample_stop", "600"))
            step = parse_scalar(kv.get("sample_step", "0.75"))
        except ValueError as exc:
            raise ConfigError(f"sample grid: {exc}") from exc
        if step <= 0:
            raise ConfigError(f"sample_step must be positive, got {step}")
        kwargs["sample_times"] = np.arange(start, stop, step)

    return ExperimentConfig(**kwargs)


@dataclass
class RunManifest:
    """Record of one command invocation; always written after the data files."""

    command: str
    config: dict
    outputs: list[str] = field(default_factory=list)
    tool_version: str = __version__
    duration_s: float = 0.0

    def write(self, path) -> None:
        payload = {
            "command": self.command,
            "tool_version": self.tool_version,
            "config": self.config,
            "outputs": self.outputs,
            "duration_s": self.duration_s,
        }
        Path(path).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, ConfigParseError):
        return EXIT_PARSE
    if isinstance(exc, AccuracyError):
        return EXIT_ACCURACY
    if isinstance(exc, FitError):
        return EXIT_CHECK_FAILED
    if isinstance(exc, (ConfigError, ValueError)):
        return EXIT_CONFIG
    if isinstance(exc, OSError):
        return EXIT_PARSE
    return EXIT_CONFIG


def _fail(exc: Exception) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return _exit_code(exc)


def cmd_trace(config_path, output_dir) -> int:
    started = time.perf_counter()
    try:
        kv = load_config_file(config_path)
        config = build_experiment_config(kv)
        trace = simulate_trace(config)
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_trace_csv(trace, out / "trace.csv")
    except (SechSpinError, ValueError, OSError) as exc:
        return _fail(exc)
    manifest = RunManifest(
        command="trace",
        config=config.as_dict(),
        outputs=["trace.csv"],
        duration_s=time.perf_counter() - started,
    )
    manifest.write(out / "manifest.json")
    return EXIT_OK


def cmd_sweep(config_path, family: str, output_dir) -> int:
    started = time.perf_counter()
    try:
        kv = load_config_file(config_path)
        config = build_experiment_config(kv)
        if family in ("equatorial", "meridional"):
            if "alphas" not in kv:
                raise ConfigError(f"family {family!r} requires an 'alphas' list")
            params = parse_list(kv["alphas"])
            traces = sweep_polarization(config, family, params)
        elif family == "detuning":
            if "detunings" not in kv:
                raise ConfigError("family 'detuning' requires a 'detunings' list")
            params = parse_list(kv["detunings"])
            traces = sweep_detuning(config, params)
        else:
            raise ConfigError(f"unknown sweep family {family!r}")

        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        outputs = []
        names = ["reference.csv"] + [f"control_{i:02d}.csv" for i in range(len(params))]
        for name, trace in zip(names, traces):
            write_trace_csv(trace, out / name)
            outputs.append(name)

        reference_fit = fit_trace(traces[0], config.tau, config.period, config.period)
        fits = []
        fit_errors = []
        for trace in traces[1:]:
            try:
                fit = fit_trace(trace, config.tau, config.period, config.period)
                fits.append(normalize_against_reference(fit, reference_fit))
            except FitError as exc:
                fits.append(None)
                fit_errors.append(str(exc))
                print(f"fit error: {exc}", file=sys.stderr)
        usable = [f for f in fits if f is not None]
        resolved = iter(resolve_sign(usable))
        fits = [next(resolved) if f is not None else None for f in fits]

        header = "param,v_signed,delta_phi_rad,rms_residual"
        if family == "detuning":
            header += ",delta_abs_rad"
        rows = [header]
        entries = []
        for param, fit, name in zip(params, fits, names[1:]):
            entry = {"file": name, "param": param}
            if fit is None:
                entry["fit_error"] = fit_errors.pop(0) if fit_errors else "unfittable"
            else:
                row = fit.csv_row(param)
                if family == "detuning":
                    row += f",{rotation_angle_from_shift(fit.delta_phi)!r}"
                rows.append(row)
                entry["fit"] = fit.to_json_dict()
                if abs(fit.v) < PHASE_FLOOR:
                    entry["phase_meaningless"] = True
            entries.append(entry)
        (out / "summary.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
        outputs.append("summary.csv")
    except (SechSpinError, ValueError, OSError) as exc:
        return _fail(exc)

    manifest = RunManifest(
        command=f"sweep:{family}",
        config={**config.as_dict(), "family": family, "params": params},
        outputs=outputs,
        duration_s=time.perf_counter() - started,
    )
    payload_extra = {"reference_fit": reference_fit.to_json_dict(), "traces": entries}
    manifest.config["results"] = payload_extra
    manifest.write(out / "manifest.json")
    return EXIT_CHECK_FAILED if any(f is None for f in fits) else EXIT_OK


def cmd_verify_oracle(detuning_list, tolerance: float, output_path) -> int:
    started = time.perf_counter()
    try:
        report = verify_phase_law(detuning_list, tolerance)
        out = Path(output_path)
        if out.parent != Path(""):
            out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(
            json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        print(report.format_table())
    except (SechSpinError, ValueError, OSError) as exc:
        return _fail(exc)
    manifest = RunManifest(
        command="verify-oracle",
        config={"detunings": [float(d) for d in detuning_list], "tolerance": tolerance},
        outputs=[out.name],
        duration_s=time.perf_counter() - started,
    )
    manifest.write(out.with_name(out.stem + ".manifest.json"))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_synthesize(axis_theta: float, axis_phi: float, delta: float, output_path) -> int:
    started = time.perf_counter()
    try:
        axis = axis_from_polarization(PolarizationAngles.canonical(axis_theta, axis_phi))
        spec = synthesize_gate(axis, delta)
        unitary = control_unitary(spec)
        payload = {
            "theta": spec.polarization.theta,
            "phi": spec.polarization.phi,
            "detuning_ratio": spec.detuning_ratio,
            "predicted_rotation_rad": phase_from_detuning(spec.detuning_ratio),
            "unitary": [
                [[entry.real, entry.imag] for entry in row]
                for row in unitary.matrix.tolist()
            ],
        }
        out = Path(output_path)
        if out.parent != Path(""):
            out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except (SechSpinError, ValueError, OSError) as exc:
        return _fail(exc)
    manifest = RunManifest(
        command="synthesize",
        config={"axis_theta": axis_theta, "axis_phi": axis_phi, "delta": delta},
        outputs=[out.name],
        duration_s=time.perf_counter() - started,
    )
    manifest.write(out.with_name(out.stem + ".manifest.json"))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sechspin",
        description="Single-pulse spin control: trace simulation, sweeps, "
        "rotation-law verification, and gate synthesis.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_trace = sub.add_parser("trace", help="simulate one pump(-control)-probe trace")
    p_trace.add_argument("--config", required=True)
    p_trace.add_argument("--out", required=True)

    p_sweep = sub.add_parser("sweep", help="simulate and fit a trace family")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument(
        "--family", required=True, choices=["equatorial", "meridional", "detuning"]
    )
    p_sweep.add_argument("--out", required=True)

    p_verify = sub.add_parser(
        "verify-oracle", help="check the rotation law against direct integration"
    )
    p_verify.add_argument("--config", required=True)
    p_verify.add_argument("--tolerance", type=float, default=1e-3)
    p_verify.add_argument("--out", required=True)

    p_synth = sub.add_parser("synthesize", help="pulse spec for a target rotation")
    p_synth.add_argument("--config", required=True)
    p_synth.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "trace":
        code = cmd_trace(args.config, args.out)
    elif args.command == "sweep":
        code = cmd_sweep(args.config, args.family, args.out)
    elif args.command == "verify-oracle":
        try:
            kv = load_config_file(args.config)
            detunings = parse_list(kv["detunings"]) if "detunings" in kv else []
        except (SechSpinError, ValueError, OSError) as exc:
            return _fail(exc)
        code = cmd_verify_oracle(detunings, args.tolerance, args.out)
    else:
        try:
            kv = load_config_file(args.config)
            missing = [k for k in ("axis_theta", "axis_phi", "delta") if k not in kv]
            if missing:
                raise ConfigError(f"synthesize config missing keys: {missing}")
            axis_theta = parse_scalar(kv["axis_theta"])
            axis_phi = parse_scalar(kv["axis_phi"])
            delta = parse_scalar(kv["delta"])
        except (SechSpinError, ValueError, OSError) as exc:
            return _fail(exc)
        code = cmd_synthesize(axis_theta, axis_phi, delta, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
