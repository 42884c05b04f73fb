"""Scenario runner: JSON config in, deterministic CSV/JSON/PNG out.

Usage:
    bhamp <scenario> --config <path> [--out <dir>] [--seedless]

Scenarios: trajectory, modes, strong, weak, fig2, fig3, sweep. Each run
writes ``<scenario>.csv`` (LF line endings, headers mandatory, floats in
fixed 17-significant-digit scientific form by default so identical configs
produce byte-identical files), a ``report.json`` manifest with row counts
and SHA-256 checksums, and, unless ``"plot": false``, a rendered
``<scenario>.png``.

Exit codes: 0 success, 2 validation error, 3 numeric failure. Errors are
emitted as single-line JSON objects on stderr with the originating module.
The only environment knob is ``BHAMP_THREADS`` (sweep evaluation thread
count; results are gathered by grid index, so output order never depends
on scheduling). ``--seedless`` is accepted for interface stability; no
scenario uses randomness.

The full config schema is documented in the README; top-level keys are
``scenario``, ``params``, ``plot`` and ``float_format``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ergotropy, geometry, modes, strong_coupling, weak_coupling
from .errors import ConfigError, NumericError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

_FLOAT_FORMATS = ("scientific17", "repr")
_MISSING = object()


# ---------------------------------------------------------------------------
# config primitives

def _require_mapping(value, where):
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a JSON object")
    return value


def _reject_unknown(cfg: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError(
            f"unknown keys in {where}: {unknown}; allowed: {sorted(allowed)}"
        )


def _number(cfg, key, where, default=_MISSING, *, positive=False,
            nonnegative=False, allow_inf=False):
    if key not in cfg:
        if default is _MISSING:
            raise ConfigError(f"{where} is missing required key '{key}'")
        return default
    value = cfg[key]
    if allow_inf and value == "inf":
        value = math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    value = float(value)
    if not allow_inf and not math.isfinite(value):
        raise ConfigError(f"{where}.{key} must be finite")
    if positive and not value > 0.0:
        raise ConfigError(f"{where}.{key} must be positive, got {value}")
    if nonnegative and value < 0.0:
        raise ConfigError(f"{where}.{key} must be nonnegative, got {value}")
    return value


def _integer(cfg, key, where, default=_MISSING, *, minimum=None):
    if key not in cfg:
        if default is _MISSING:
            raise ConfigError(f"{where} is missing required key '{key}'")
        return default
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}.{key} must be >= {minimum}, got {value}")
    return value


def _complex_pair(cfg, key, where, default=_MISSING):
    """A complex value as a number or [re, im]; normalized to [re, im]."""
    if key not in cfg:
        if default is _MISSING:
            raise ConfigError(f"{where} is missing required key '{key}'")
        return default
    value = cfg[key]
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [float(value), 0.0]
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in value)):
        return [float(value[0]), float(value[1])]
    raise ConfigError(f"{where}.{key} must be a number or [re, im], got {value!r}")


def _as_complex(pair) -> complex:
    return complex(pair[0], pair[1])


def _grid_spec(cfg, key, where):
    spec = _require_mapping(cfg.get(key), f"{where}.{key}") \
        if key in cfg else None
    if spec is None:
        raise ConfigError(f"{where} is missing required key '{key}'")
    _reject_unknown(spec, {"min", "max", "count", "scale"}, f"{where}.{key}")
    lo = _number(spec, "min", f"{where}.{key}")
    hi = _number(spec, "max", f"{where}.{key}")
    count = _integer(spec, "count", f"{where}.{key}", minimum=1)
    scale = spec.get("scale", "linear")
    if scale not in ("linear", "log"):
        raise ConfigError(f"{where}.{key}.scale must be 'linear' or 'log'")
    if hi < lo:
        raise ConfigError(f"{where}.{key}: max {hi} < min {lo}")
    if scale == "log" and lo <= 0.0:
        raise ConfigError(f"{where}.{key}: log scale needs min > 0")
    return {"min": lo, "max": hi, "count": count, "scale": scale}


def grid_values(spec: dict) -> np.ndarray:
    if spec["count"] == 1:
        return np.array([spec["min"]])
    if spec["scale"] == "log":
        return np.logspace(math.log10(spec["min"]), math.log10(spec["max"]),
                           spec["count"])
    return np.linspace(spec["min"], spec["max"], spec["count"])


# ---------------------------------------------------------------------------
# scenario validators (normalize params, re-checking module invariants)

def _validate_trajectory(params):
    where = "params"
    _reject_unknown(params, {"r_start", "r_end", "tol", "n_samples"}, where)
    r_start = _number(params, "r_start", where, positive=True)
    r_end = _number(params, "r_end", where, positive=True)
    tol = _number(params, "tol", where, positive=True)
    n_samples = _integer(params, "n_samples", where, default=200, minimum=2)
    if not (1.0 < r_end < r_start):
        raise ConfigError(f"need 1 < r_end < r_start, got ({r_start}, {r_end})")
    if not (1e-14 < tol < 1e-3):
        raise ConfigError(f"tol must lie in (1e-14, 1e-3), got {tol}")
    return {"r_start": r_start, "r_end": r_end, "tol": tol,
            "n_samples": n_samples}


_MODE_KINDS = {kind.value: kind for kind in modes.ModeKind}
_PSI_KINDS = {"schwarzschild_outgoing", "schwarzschild_ingoing"}


def _validate_modes(params):
    where = "params"
    _reject_unknown(params, {"kind", "omega", "nu", "mirror_radius",
                             "r_start", "r_end", "n_samples", "r_ref"}, where)
    kind = params.get("kind")
    if kind not in _MODE_KINDS:
        raise ConfigError(
            f"params.kind must be one of {sorted(_MODE_KINDS)}, got {kind!r}"
        )
    out = {"kind": kind}
    if kind in _PSI_KINDS:
        out["nu"] = _number(params, "nu", where, positive=True)
        if "omega" in params:
            raise ConfigError("Schwarzschild modes take nu, not omega")
    else:
        out["omega"] = _number(params, "omega", where, positive=True)
        if "nu" in params:
            raise ConfigError("Kruskal modes take omega, not nu")
    if kind == "mirror_composite":
        r0 = _number(params, "mirror_radius", where, positive=True)
        if r0 <= 3.0:
            raise ConfigError(
                f"mirror_radius must exceed 3 (orbit stability), got {r0}"
            )
        out["mirror_radius"] = r0
    elif "mirror_radius" in params:
        raise ConfigError("mirror_radius only applies to mirror_composite")
    out["r_start"] = _number(params, "r_start", where, default=10.0, positive=True)
    out["r_end"] = _number(params, "r_end", where, default=1.01, positive=True)
    if not (1.0 < out["r_end"] < out["r_start"]):
        raise ConfigError(
            f"need 1 < r_end < r_start, got ({out['r_start']}, {out['r_end']})"
        )
    out["n_samples"] = _integer(params, "n_samples", where, default=200, minimum=2)
    if "r_ref" in params:
        out["r_ref"] = _number(params, "r_ref", where, positive=True)
        if out["r_ref"] <= 1.0:
            raise ConfigError(f"r_ref must exceed 1, got {out['r_ref']}")
    return out


def _validate_strong(params):
    where = "params"
    _reject_unknown(params, {"g_h", "phi_h", "omega0", "nu", "Omega_h", "n_s",
                             "beta_h", "n_atoms", "t_max", "n_samples"}, where)
    out = {
        "g_h": _number(params, "g_h", where, positive=True),
        "phi_h": _complex_pair(params, "phi_h", where, default=[1.0, 0.0]),
        "omega0": _number(params, "omega0", where, positive=True),
        "nu": _number(params, "nu", where, positive=True),
        "Omega_h": _number(params, "Omega_h", where, positive=True),
        "n_s": _integer(params, "n_s", where, default=1, minimum=0),
        "n_atoms": _integer(params, "n_atoms", where, default=1, minimum=1),
        "t_max": _number(params, "t_max", where, positive=True),
        "n_samples": _integer(params, "n_samples", where, default=200, minimum=2),
    }
    beta_h = _number(params, "beta_h", where, default=math.inf,
                     positive=True, allow_inf=True)
    out["beta_h"] = "inf" if math.isinf(beta_h) else beta_h
    if abs(_as_complex(out["phi_h"])) == 0.0:
        raise ConfigError("phi_h must be nonzero")
    return out


def _validate_weak(params):
    where = "params"
    _reject_unknown(params, {"g_h", "I_sq", "n_h", "n_c", "nu", "Omega_h",
                             "alpha0", "n_atoms", "t_max", "n_samples"}, where)
    out = {
        "g_h": _number(params, "g_h", where, positive=True),
        "I_sq": _number(params, "I_sq", where, nonnegative=True),
        "n_h": _number(params, "n_h", where, nonnegative=True),
        "n_c": _number(params, "n_c", where, nonnegative=True),
        "nu": _number(params, "nu", where, positive=True),
        "Omega_h": _number(params, "Omega_h", where, positive=True),
        "alpha0": _complex_pair(params, "alpha0", where),
        "n_atoms": _integer(params, "n_atoms", where, default=1, minimum=1),
        "t_max": _number(params, "t_max", where, positive=True),
        "n_samples": _integer(params, "n_samples", where, default=200, minimum=2),
    }
    if not out["n_h"] > out["n_c"]:
        raise ConfigError(
            "the weak scenario emits an efficiency column, which needs "
            f"amplification n_h > n_c; got ({out['n_h']}, {out['n_c']})"
        )
    return out


def _validate_fig2(params):
    where = "params"
    _reject_unknown(params, {"nu", "Omega_h", "n_h", "n_c", "t", "gain",
                             "alpha0_sq_grid"}, where)
    out = {
        "nu": _number(params, "nu", where, positive=True),
        "Omega_h": _number(params, "Omega_h", where, positive=True),
        "n_h": _number(params, "n_h", where, nonnegative=True),
        "n_c": _number(params, "n_c", where, nonnegative=True),
        "t": _number(params, "t", where, default=0.0, nonnegative=True),
        "gain": _number(params, "gain", where, default=0.0, nonnegative=True),
        "alpha0_sq_grid": _grid_spec(params, "alpha0_sq_grid", where),
    }
    if out["Omega_h"] <= out["nu"]:
        raise ConfigError(
            "resonance Omega_h = omega0 + nu needs Omega_h > nu, got "
            f"({out['Omega_h']}, {out['nu']})"
        )
    if not out["n_h"] > out["n_c"]:
        raise ConfigError(
            f"amplification requires n_h > n_c, got ({out['n_h']}, {out['n_c']})"
        )
    if out["alpha0_sq_grid"]["min"] < 0.0:
        raise ConfigError("alpha0_sq_grid values must be nonnegative")
    return out


def _validate_fig3(params):
    where = "params"
    _reject_unknown(params, {"nu", "alpha0_sq", "t", "c", "n_h", "n_c",
                             "gain_grid"}, where)
    out = {
        "nu": _number(params, "nu", where, positive=True),
        "alpha0_sq": _number(params, "alpha0_sq", where, nonnegative=True),
        "t": _number(params, "t", where, nonnegative=True),
        "gain_grid": _grid_spec(params, "gain_grid", where),
    }
    if out["gain_grid"]["min"] < 0.0:
        raise ConfigError("gain_grid values must be nonnegative")
    if "c" in params:
        if "n_h" in params or "n_c" in params:
            raise ConfigError("give either c or (n_h, n_c), not both")
        out["c"] = _number(params, "c", where, positive=True)
    else:
        n_h = _number(params, "n_h", where, nonnegative=True)
        n_c = _number(params, "n_c", where, nonnegative=True)
        if not n_h > n_c:
            raise ConfigError(
                f"amplification requires n_h > n_c, got ({n_h}, {n_c})"
            )
        out["n_h"], out["n_c"] = n_h, n_c
        out["c"] = weak_coupling.saturation_occupancy(n_h, n_c)
    return out


# sweep observable registry: required base params, sweepable axis names,
# and the evaluator over the merged base+axis dict.

def _eval_strong_amplitudes(d):
    delta = d.get("delta")
    Omega_h = d["Omega_h"] if delta is None else d["omega0"] + d["nu"] - delta
    params = strong_coupling.StrongCouplingParams(
        g_h=d["g_h"], phi_h=d["phi_h"], omega0=d["omega0"], nu=d["nu"],
        Omega_h=Omega_h, n_s=int(d.get("n_s", 1)),
    )
    return params


def _eval_v_sq(d):
    params = _eval_strong_amplitudes(d)
    return abs(strong_coupling.rabi_amplitudes(params, d["t"]).v) ** 2


def _eval_ergotropy_gain(d):
    params = _eval_strong_amplitudes(d)
    return strong_coupling.ergotropy_gain(params, d["t"])


def _eval_power(d):
    params = strong_coupling.StrongCouplingParams(
        g_h=d["g_h"], phi_h=d["phi_h"], omega0=d["omega0"], nu=d["nu"],
        Omega_h=d["omega0"] + d["nu"],  # resonant by construction
        n_atoms=int(d.get("n_atoms", 1)),
    )
    return strong_coupling.max_power(params, int(d.get("m", 0)))


def _eval_gain(d):
    params = weak_coupling.WeakCouplingParams(
        g_h=d["g_h"], I_sq=d["I_sq"], n_h=d["n_h"], n_c=d["n_c"],
        nu=d.get("nu", 1.0), Omega_h=d.get("Omega_h", 2.0),
    )
    return weak_coupling.gain_diffusion(params).gain


def _eval_eta(d):
    return weak_coupling.efficiency_weak(
        nu=d["nu"], Omega_h=d["Omega_h"],
        alpha0=math.sqrt(d["alpha0_sq"]), t=d["t"], gain=d["gain"],
        n_h=d["n_h"], n_c=d["n_c"],
    )


_SWEEP_OBSERVABLES = {
    "v_sq": {
        "required": {"g_h", "phi_h", "omega0", "nu", "Omega_h", "t"},
        "axes": {"t", "delta", "g_h"},
        "fn": _eval_v_sq,
    },
    "ergotropy_gain": {
        "required": {"g_h", "phi_h", "omega0", "nu", "Omega_h", "t", "n_s"},
        "axes": {"t", "delta", "g_h"},
        "fn": _eval_ergotropy_gain,
    },
    "power": {
        "required": {"g_h", "phi_h", "omega0", "nu", "m", "n_atoms"},
        "axes": {"g_h", "nu"},
        "fn": _eval_power,
    },
    "gain": {
        "required": {"g_h", "I_sq", "n_h", "n_c"},
        "axes": {"n_h", "n_c", "g_h", "I_sq"},
        "fn": _eval_gain,
    },
    "eta": {
        "required": {"nu", "Omega_h", "n_h", "n_c", "alpha0_sq", "t", "gain"},
        "axes": {"alpha0_sq", "t", "n_h", "n_c", "gain"},
        "fn": _eval_eta,
    },
}


def _validate_sweep(params):
    where = "params"
    _reject_unknown(params, {"observable", "base", "axes"}, where)
    observable = params.get("observable")
    if observable not in _SWEEP_OBSERVABLES:
        raise ConfigError(
            f"params.observable must be one of {sorted(_SWEEP_OBSERVABLES)}, "
            f"got {observable!r}"
        )
    entry = _SWEEP_OBSERVABLES[observable]
    base = _require_mapping(params.get("base", {}), "params.base")
    base_out = {}
    for key in sorted(entry["required"]):
        if key in ("n_s", "m", "n_atoms"):
            base_out[key] = _integer(base, key, "params.base", minimum=0)
        else:
            base_out[key] = _number(base, key, "params.base")
    _reject_unknown(base, entry["required"], "params.base")

    axes_raw = params.get("axes")
    if not isinstance(axes_raw, list) or not 1 <= len(axes_raw) <= 2:
        raise ConfigError("params.axes must be a list of one or two axis objects")
    axes = []
    for i, axis in enumerate(axes_raw):
        axis = _require_mapping(axis, f"params.axes[{i}]")
        _reject_unknown(axis, {"name", "min", "max", "count", "scale"},
                        f"params.axes[{i}]")
        name = axis.get("name")
        if name not in entry["axes"]:
            raise ConfigError(
                f"cannot sweep '{name}' for observable '{observable}'; "
                f"valid axes: {sorted(entry['axes'])}"
            )
        grid_keys = {k: axis[k] for k in ("min", "max", "count", "scale")
                     if k in axis}
        axes.append({"name": name,
                     **_grid_spec({"grid": grid_keys}, "grid",
                                  f"params.axes[{i}]")})
    names = [a["name"] for a in axes]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate sweep axis {names}")
    return {"observable": observable, "base": base_out, "axes": axes}


_VALIDATORS = {
    "trajectory": _validate_trajectory,
    "modes": _validate_modes,
    "strong": _validate_strong,
    "weak": _validate_weak,
    "fig2": _validate_fig2,
    "fig3": _validate_fig3,
    "sweep": _validate_sweep,
}

SCENARIOS = tuple(sorted(_VALIDATORS))


def validate_config(cfg: dict) -> dict:
    """Validate and normalize a raw config dict (defaults materialized).

    The normalized dict is JSON-serializable and re-validates to itself,
    so a report's config echo reproduces its run.
    """
    cfg = _require_mapping(cfg, "config")
    _reject_unknown(cfg, {"scenario", "params", "plot", "float_format"},
                    "config")
    scenario = cfg.get("scenario")
    if scenario not in _VALIDATORS:
        raise ConfigError(
            f"scenario must be one of {list(SCENARIOS)}, got {scenario!r}"
        )
    plot = cfg.get("plot", True)
    if not isinstance(plot, bool):
        raise ConfigError(f"plot must be a boolean, got {plot!r}")
    float_format = cfg.get("float_format", "scientific17")
    if float_format not in _FLOAT_FORMATS:
        raise ConfigError(
            f"float_format must be one of {_FLOAT_FORMATS}, got {float_format!r}"
        )
    params = _require_mapping(cfg.get("params", _MISSING), "params") \
        if "params" in cfg else {}
    return {
        "scenario": scenario,
        "params": _VALIDATORS[scenario](params),
        "plot": plot,
        "float_format": float_format,
    }


# ---------------------------------------------------------------------------
# deterministic emission

def _format_float(value: float, fmt: str) -> str:
    if not math.isfinite(value):
        raise NumericError(f"refusing to emit non-finite value {value}")
    if fmt == "repr":
        return repr(value)
    return f"{value:.16e}"


def _format_cell(value, fmt: str) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return _format_float(float(value), fmt)


def _write_csv(path: Path, header: list[str], rows, fmt: str) -> int:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([_format_cell(cell, fmt) for cell in row])
            count += 1
    return count


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class FileRecord:
    path: str
    kind: str  # "csv" or "figure"
    sha256: str
    rows: int | None = None


@dataclass
class RunReport:
    """What a run did: config echo, derived quantities, emitted files."""

    scenario: str
    config: dict
    derived: dict
    outputs: list[FileRecord] = field(default_factory=list)
    validation: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "scenario": self.scenario,
            "config": self.config,
            "derived": self.derived,
            "outputs": [
                {k: v for k, v in vars(rec).items() if v is not None}
                for rec in self.outputs
            ],
            "validation": self.validation,
        }
        return out


# ---------------------------------------------------------------------------
# scenario runners: each returns (header, rows, derived)

def _run_trajectory(params):
    traj = geometry.integrate_geodesic(
        params["r_start"], params["r_end"], params["tol"],
        n_samples=params["n_samples"],
    )
    rows = []
    max_dev_tau = 0.0
    max_dev_t = 0.0
    for r, tau, t in zip(traj.r, traj.tau, traj.t):
        point = geometry.to_kruskal(t, r)
        rows.append((tau, r, t, geometry.regge_wheeler(r), point.T, point.X))
        max_dev_tau = max(max_dev_tau,
                          abs(tau - geometry.proper_time_of_radius(r)))
        max_dev_t = max(
            max_dev_t,
            abs(t - geometry.schwarzschild_time_of_radius(r, params["r_start"])),
        )
    derived = {
        "tau_end": float(traj.tau[-1]),
        "t_end": float(traj.t[-1]),
        "max_closed_form_deviation_tau": max_dev_tau,
        "max_closed_form_deviation_t": max_dev_t,
    }
    return ["tau", "r", "t", "r_star", "T", "X"], rows, derived


def _mode_spec_from_params(params) -> modes.ModeSpec:
    kind = modes.ModeKind(params["kind"])
    return modes.ModeSpec(
        kind=kind,
        omega=params.get("omega"),
        nu=params.get("nu"),
        mirror_radius=params.get("mirror_radius"),
    )


def _run_modes(params):
    spec = _mode_spec_from_params(params)
    taus = np.linspace(
        geometry.proper_time_of_radius(params["r_start"]),
        geometry.proper_time_of_radius(params["r_end"]),
        params["n_samples"],
    )
    samples = modes.evaluate_along_infall(spec, taus,
                                          r_ref=params.get("r_ref"))
    rows = [
        (s.tau, s.t, s.r, s.T, s.X, s.value.real, s.value.imag,
         int(s.in_support))
        for s in samples
    ]
    derived = {}
    if spec.kind in (modes.ModeKind.OUTGOING_PLANE,
                     modes.ModeKind.INGOING_RINDLER):
        derived["nu_equivalent"] = modes.nu_from_omega(spec.kind, spec.omega)
    elif spec.kind in (modes.ModeKind.SCHWARZSCHILD_OUTGOING,
                       modes.ModeKind.SCHWARZSCHILD_INGOING):
        derived["omega_equivalent"] = modes.omega_from_nu(spec.kind, spec.nu)
    return (["tau", "t", "r", "T", "X", "re", "im", "in_support"], rows,
            derived)


def _strong_params(params) -> strong_coupling.StrongCouplingParams:
    beta_h = math.inf if params["beta_h"] == "inf" else params["beta_h"]
    return strong_coupling.StrongCouplingParams(
        g_h=params["g_h"], phi_h=_as_complex(params["phi_h"]),
        omega0=params["omega0"], nu=params["nu"], Omega_h=params["Omega_h"],
        n_s=params["n_s"], beta_h=beta_h, n_atoms=params["n_atoms"],
    )


def _run_strong(params):
    sp = _strong_params(params)
    times = list(np.linspace(0.0, params["t_max"], params["n_samples"]))
    derived = {
        "detuning": sp.detuning,
        "rabi_rate": sp.rabi_rate,
        "eta_ssd": strong_coupling.efficiency_strong(sp.omega0, sp.nu),
        "hot_branch_weights": strong_coupling.hot_branch_weights(sp, 7),
    }
    if sp.on_resonance:
        pulses = [t for m in range(64)
                  if (t := (2 * m + 1) * math.pi / (2 * sp.rabi_rate))
                  <= params["t_max"]]
        times = sorted(set(times) | set(pulses))
        derived["pulse_times"] = pulses
        derived["max_power_m0"] = strong_coupling.max_power(sp, 0)
    rows = []
    for t in times:
        amp = strong_coupling.rabi_amplitudes(sp, t)
        gain = strong_coupling.ergotropy_gain(sp, t)
        power = sp.n_atoms * gain / t if t > 0.0 else 0.0
        rows.append((t, abs(amp.u) ** 2, abs(amp.v) ** 2, gain, power))
    return (["t", "u_abs_sq", "v_abs_sq", "ergotropy_gain", "power"], rows,
            derived)


def _run_weak(params):
    wp = weak_coupling.WeakCouplingParams(
        g_h=params["g_h"], I_sq=params["I_sq"], n_h=params["n_h"],
        n_c=params["n_c"], nu=params["nu"], Omega_h=params["Omega_h"],
        alpha0=_as_complex(params["alpha0"]), n_atoms=params["n_atoms"],
    )
    gd = weak_coupling.gain_diffusion(wp)
    rows = []
    for t in np.linspace(0.0, params["t_max"], params["n_samples"]):
        state = weak_coupling.evolve_p_function(wp.alpha0, gd.gain,
                                                gd.diffusion, t)
        alpha_sq = abs(state.alpha) ** 2
        work, power = weak_coupling.work_and_power(
            wp.alpha0, gd.gain, wp.nu, t, wp.n_atoms)
        eta = weak_coupling.efficiency_weak(
            wp.nu, wp.Omega_h, wp.alpha0, t, gd.gain, wp.n_h, wp.n_c)
        rows.append((t, state.alpha.real, state.alpha.imag, alpha_sq,
                     state.sigma_sq, alpha_sq + state.sigma_sq, work, power,
                     eta))
    derived = {
        "gain": gd.gain,
        "diffusion": gd.diffusion,
        "c": weak_coupling.saturation_occupancy(wp.n_h, wp.n_c),
        "omega0": wp.omega0,
        "eta_ssd": wp.nu / wp.Omega_h,
    }
    return (["t", "alpha_re", "alpha_im", "alpha_sq", "sigma_sq", "mean_n",
             "work", "power", "eta"], rows, derived)


def _run_fig2(params):
    c = weak_coupling.saturation_occupancy(params["n_h"], params["n_c"])
    eta_ssd = params["nu"] / params["Omega_h"]
    rows = []
    for alpha_sq in grid_values(params["alpha0_sq_grid"]):
        eta = weak_coupling.efficiency_weak(
            params["nu"], params["Omega_h"], math.sqrt(alpha_sq),
            params["t"], params["gain"], params["n_h"], params["n_c"],
        )
        rows.append((float(alpha_sq), eta, eta_ssd))
    derived = {"c": c, "eta_ssd": eta_ssd,
               "omega0": params["Omega_h"] - params["nu"]}
    return ["alpha0_sq", "eta", "eta_ssd"], rows, derived


def _run_fig3(params):
    gains = grid_values(params["gain_grid"])
    splits = weak_coupling.energy_split_vs_gain(
        math.sqrt(params["alpha0_sq"]), params["nu"], params["c"],
        [float(g) for g in gains], params["t"],
    )
    rows = [(s.gain, s.ergotropy, s.thermal, s.mean) for s in splits]
    return (["gain", "ergotropy", "thermal", "mean"], rows,
            {"c": params["c"]})


def _run_sweep(params):
    entry = _SWEEP_OBSERVABLES[params["observable"]]
    axes = params["axes"]
    values = [grid_values(axis) for axis in axes]
    points = list(itertools.product(*values))  # row-major, first axis outer

    def evaluate(point):
        merged = dict(params["base"])
        for axis, value in zip(axes, point):
            merged[axis["name"]] = float(value)
        return entry["fn"](merged)

    threads = int(os.environ.get("BHAMP_THREADS", "1") or "1")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluate, points))
    else:
        results = [evaluate(point) for point in points]
    rows = [tuple(float(x) for x in point) + (result,)
            for point, result in zip(points, results)]
    header = [axis["name"] for axis in axes] + [params["observable"]]
    derived = {"observable": params["observable"],
               "axes": [axis["name"] for axis in axes],
               "n_points": len(rows)}
    return header, rows, derived


_RUNNERS = {
    "trajectory": _run_trajectory,
    "modes": _run_modes,
    "strong": _run_strong,
    "weak": _run_weak,
    "fig2": _run_fig2,
    "fig3": _run_fig3,
    "sweep": _run_sweep,
}


def run_scenario(config: dict, out_dir) -> RunReport:
    """Validate ``config``, run its scenario and write outputs to ``out_dir``.

    Same config, same bytes: CSV emission is fully deterministic. Returns
    the report that is also written to ``<out_dir>/report.json``.
    """
    cfg = validate_config(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenario = cfg["scenario"]

    header, rows, derived = _RUNNERS[scenario](cfg["params"])
    if not rows:
        raise ConfigError(f"scenario {scenario} produced an empty grid")

    csv_name = f"{scenario}.csv"
    n_rows = _write_csv(out / csv_name, header, rows, cfg["float_format"])
    outputs = [FileRecord(path=csv_name, kind="csv",
                          sha256=_sha256(out / csv_name), rows=n_rows)]

    if cfg["plot"]:
        from . import plotting

        png_name = f"{scenario}.png"
        plotting.render(scenario, header, rows, out / png_name)
        outputs.append(FileRecord(path=png_name, kind="figure",
                                  sha256=_sha256(out / png_name)))

    report = RunReport(
        scenario=scenario,
        config=cfg,
        derived=derived,
        outputs=outputs,
        validation={"config_ok": True, "all_values_finite": True},
    )
    with open(out / "report.json", "w", encoding="utf-8", newline="") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return report


# ---------------------------------------------------------------------------
# command line

def _provenance(exc: BaseException) -> str:
    module = "bhamp.cli"
    tb = exc.__traceback__
    while tb is not None:
        name = tb.tb_frame.f_globals.get("__name__", "")
        if name.startswith("bhamp"):
            module = name
        tb = tb.tb_next
    return module


def _emit_error(kind: str, exc: BaseException) -> None:
    print(json.dumps({
        "error": kind,
        "module": _provenance(exc),
        "message": str(exc),
    }), file=sys.stderr)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bhamp",
        description="Black-hole-powered amplifier scenario runner",
    )
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", required=True,
                        help="path to the JSON scenario config")
    parser.add_argument("--out", default="out",
                        help="output directory (default: ./out)")
    parser.add_argument("--seedless", action="store_true",
                        help="accepted for interface stability; runs are "
                             "deterministic and use no RNG")
    args = parser.parse_args(argv)

    try:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        raw = _require_mapping(raw, "config")
        if "scenario" in raw and raw["scenario"] != args.scenario:
            raise ConfigError(
                f"config says scenario {raw['scenario']!r} but command line "
                f"says {args.scenario!r}"
            )
        raw = {**raw, "scenario": args.scenario}
        report = run_scenario(raw, args.out)
    except ValueError as exc:  # ConfigError, DomainError, ...
        _emit_error("validation", exc)
        return EXIT_VALIDATION
    except (NumericError, FloatingPointError, OverflowError) as exc:
        _emit_error("numeric", exc)
        return EXIT_NUMERIC

    for record in report.outputs:
        note = f" ({record.rows} rows)" if record.rows is not None else ""
        print(f"wrote {Path(args.out) / record.path}{note}")
    print(f"report: {Path(args.out) / 'report.json'}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
