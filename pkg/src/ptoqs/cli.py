"""Scenario runner: reproduces the trace, BLP, fidelity and concurrence series as CSV.

Usage::

    ptoqs --scenario blp --g 0.05,0.5,1 --out blp.csv
    ptoqs --config run.cfg --hermitian

Settings are resolved as command-line flags over config-file values over
built-in defaults.  The config file holds ``key = value`` lines using the flag
names without the leading dashes.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass
import io
import itertools
import logging
import math
import os
import re
import sys
import warnings

import numpy as np

from .dynamics import (
    LADDERS,
    BathSpec,
    build_single_hermitian_model,
    build_single_pt_model,
    build_two_hermitian_model,
    build_two_pt_model,
    evolve_rotated,
    improper_rho_trace,
    time_grid,
)
from .errors import BrokenPTError, InvariantError, SpectrumWarning
from .measures import RANGE_TOL, blp_functional, pseudo_concurrence, pseudo_fidelity, pseudo_trace_distance
from .pt import PTParams, check_generalized_state

SCENARIOS = ("trace-check", "blp", "fidelity", "concurrence")


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending setting."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    hermitian: bool = False
    r: float = 0.1
    s: float = 0.4
    psi: float = math.pi / 6
    omega_0: float = 2.0
    omega_c: float = 2.0
    temperature: float = 10.0
    bath_dim: int = 10
    g: tuple = (0.5,)
    j: tuple = (1.0,)
    t_max: float = 25.0
    steps: int = 500
    out_path: str = None
    parallel: bool = False
    ladder: str = "pauli"

    @property
    def params(self):
        return PTParams(self.r, self.s, self.psi)

    @property
    def bath(self):
        return BathSpec(self.omega_c, self.bath_dim, self.temperature)


# flag name -> ScenarioConfig field
_KEYS = {
    "scenario": "scenario", "hermitian": "hermitian", "r": "r", "s": "s", "psi": "psi",
    "omega0": "omega_0", "omega-c": "omega_c", "temperature": "temperature",
    "bath-dim": "bath_dim", "g": "g", "j": "j", "t-max": "t_max", "steps": "steps",
    "out": "out_path", "parallel": "parallel", "ladder": "ladder",
}
_BOOL_KEYS = ("hermitian", "parallel")
_PI_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi(?:\s*/\s*(\d+\.?\d*))?$")


def _parse_real(key, text):
    text = str(text).strip()
    m = _PI_RE.match(text)
    try:
        if m:
            coef = m.group(1)
            value = math.pi * (float(coef) if coef not in ("", "+", "-") else float(coef + "1"))
            return value / float(m.group(2)) if m.group(2) else value
        value = float(text)
    except ValueError:
        raise ConfigError(key, f"not a real number: {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(key, f"must be finite, got {text!r}")
    return value


def _parse_sweep(key, text):
    parts = [p.strip() for p in str(text).split(",")]
    if not parts or any(p == "" for p in parts):
        raise ConfigError(key, f"malformed sweep list {text!r}")
    return tuple(_parse_real(key, p) for p in parts)


def _parse_int(key, text):
    try:
        value = int(str(text).strip())
    except ValueError:
        raise ConfigError(key, f"not an integer: {text!r}") from None
    return value


def _parse_bool(key, text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(key, f"not a boolean: {text!r}")


def _convert(key, raw):
    field = _KEYS[key]
    if field in ("g", "j"):
        return _parse_sweep(key, raw)
    if field in ("bath_dim", "steps"):
        return _parse_int(key, raw)
    if field in _BOOL_KEYS:
        return raw if isinstance(raw, bool) else _parse_bool(key, raw)
    if field in ("scenario", "out_path", "ladder"):
        return str(raw).strip()
    return _parse_real(key, raw)


def read_config_text(text):
    """Parse flat ``key = value`` text into a ``{flag-name: raw-value}`` dict."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key = value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("_", "-")
        if key == "omega-0":
            key = "omega0"
        if key not in _KEYS:
            raise ConfigError(key, "unknown key")
        values[key] = value
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("argv", message)


def _build_parser():
    p = _Parser(prog="ptoqs", description=__doc__.split("\n\n")[0],
                argument_default=None)
    p.add_argument("--scenario", help="one of: " + ", ".join(SCENARIOS))
    p.add_argument("--hermitian", action="store_const", const=True,
                   help="run the Hermitian omega_0 sigma_z counterpart")
    p.add_argument("--r")
    p.add_argument("--s")
    p.add_argument("--psi", help="radians; 'pi/6' style accepted")
    p.add_argument("--omega0")
    p.add_argument("--omega-c")
    p.add_argument("--temperature")
    p.add_argument("--bath-dim")
    p.add_argument("--g", help="coupling, or comma-separated sweep")
    p.add_argument("--j", help="system-system coupling (concurrence), or sweep")
    p.add_argument("--t-max")
    p.add_argument("--steps")
    p.add_argument("--config", help="key = value file")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.add_argument("--parallel", action="store_const", const=True,
                   help="evaluate sweep points concurrently")
    p.add_argument("--ladder", help="PT coupling operators: " + " or ".join(LADDERS))
    return p


def parse_config(argv, file=None):
    """Resolve a :class:`ScenarioConfig` from command-line tokens and config text.

    ``file`` is config text supplied directly and is applied after any
    ``--config PATH`` file named in ``argv``.  Flags override both.
    """
    ns = _build_parser().parse_args(list(argv))
    merged = {}
    if ns.config is not None:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                merged.update(read_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
    if file is not None:
        merged.update(read_config_text(file))
    for key in _KEYS:
        value = getattr(ns, key.replace("-", "_"))
        if value is not None:
            merged[key] = value
    values = {_KEYS[k]: _convert(k, v) for k, v in merged.items()}
    if not values.get("scenario"):
        raise ConfigError("scenario", "required (one of " + ", ".join(SCENARIOS) + ")")
    cfg = ScenarioConfig(**values)
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    if cfg.scenario not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {cfg.scenario!r}")
    if cfg.ladder not in LADDERS:
        raise ConfigError("ladder", f"must be one of {LADDERS}")
    if cfg.steps < 2:
        raise ConfigError("steps", "must be at least 2")
    if not cfg.t_max > 0:
        raise ConfigError("t-max", "must be positive")
    if not cfg.g or not cfg.j:
        raise ConfigError("g" if not cfg.g else "j", "sweep list is empty")
    try:
        cfg.bath
    except ValueError as exc:
        raise ConfigError("bath", str(exc)) from None
    if not cfg.hermitian:
        try:
            cfg.params
        except BrokenPTError as exc:
            raise ConfigError("psi", str(exc)) from None


def _single_model(cfg, g):
    if cfg.hermitian:
        return build_single_hermitian_model(cfg.omega_0, cfg.bath, g)
    return build_single_pt_model(cfg.params, cfg.bath, g, cfg.ladder)


def _two_model(cfg, g, j):
    if cfg.hermitian:
        return build_two_hermitian_model(cfg.omega_0, cfg.bath, g, j)
    return build_two_pt_model(cfg.params, cfg.bath, g, j, cfg.ladder)


def _evolve_checked(model, rho0, times):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # truncation is reported once per run by the caller
        traj = evolve_rotated(model, rho0, times)
    metric = model.system_metric
    for t, state in zip(times, traj.states):
        try:
            check_generalized_state(state, metric)
        except InvariantError as exc:
            raise InvariantError(f"t = {t:.9g}: {exc}") from None
    return traj


def _trace_check(cfg, times, point):
    (g,) = point
    model = _single_model(cfg, g)
    traj = _evolve_checked(model, model.excited_state(), times)
    metric = model.system_metric
    tr = np.trace(traj.states, axis1=1, axis2=2).real
    improper = np.array([improper_rho_trace(s, metric) for s in traj.states])
    return {"tr_rho_G": tr, "tr_rho_improper": improper}, traj


def _blp(cfg, times, point):
    (g,) = point
    model = _single_model(cfg, g)
    a = _evolve_checked(model, model.excited_state(), times)
    b = _evolve_checked(model, model.ground_state(), times)
    metric = model.system_metric
    d = np.array([pseudo_trace_distance(x, y, metric) for x, y in zip(a.states, b.states)])
    return {"D": d}, a


def _fidelity(cfg, times, point):
    (g,) = point
    model = _single_model(cfg, g)
    rho0 = model.excited_state()
    traj = _evolve_checked(model, rho0, times)
    metric = model.system_metric
    return {"F": np.array([pseudo_fidelity(s, rho0, metric) for s in traj.states])}, traj


def _concurrence(cfg, times, point):
    g, j = point
    model = _two_model(cfg, g, j)
    traj = _evolve_checked(model, model.excited_state(), times)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SpectrumWarning)
        c = np.array([pseudo_concurrence(s, model.metric) for s in traj.states])
    flagged = sum(1 for w in caught if issubclass(w.category, SpectrumWarning))
    return {"C": c, "_spectrum_flags": flagged}, traj


_RUNNERS = {"trace-check": _trace_check, "blp": _blp, "fidelity": _fidelity,
            "concurrence": _concurrence}


def sweep_points(cfg):
    if cfg.scenario == "concurrence":
        return list(itertools.product(cfg.g, cfg.j))
    return [(g,) for g in cfg.g]


def _label(cfg, point):
    if cfg.scenario == "concurrence":
        return f"[g={point[0]:g};j={point[1]:g}]"
    return f"[g={point[0]:g}]"


def compute_scenario(cfg, diagnostics=None):
    """Run a scenario and return ``(header, rows)`` of formatted CSV cells.

    ``diagnostics``, if given, is a list that receives human-readable notes
    (truncation, non-real concurrence spectra).
    """
    validate_config(cfg)
    times = time_grid(cfg.t_max, cfg.steps)
    points = sweep_points(cfg)
    runner = _RUNNERS[cfg.scenario]
    job = lambda pt: runner(cfg, times, pt)  # noqa: E731
    # out-of-range measure values are summarised below instead of logged per point
    measures_log = logging.getLogger("ptoqs.measures")
    level = measures_log.level
    measures_log.setLevel(logging.ERROR)
    try:
        if cfg.parallel and len(points) > 1:
            with ThreadPoolExecutor(max_workers=min(len(points), os.cpu_count() or 1)) as pool:
                results = list(pool.map(job, points))
        else:
            results = [job(pt) for pt in points]
    finally:
        measures_log.setLevel(level)

    header, columns = ["t"], [times]
    multi = len(points) > 1
    for point, (series, traj) in zip(points, results):
        for name, values in series.items():
            if name.startswith("_"):
                continue
            header.append(name + (_label(cfg, point) if multi else ""))
            columns.append(values)
            above = values > 1 + RANGE_TOL
            if diagnostics is not None and name != "tr_rho_improper" and above.any():
                diagnostics.append(f"{_label(cfg, point)} {name} exceeds 1 at {above.sum()} "
                                   f"time points (max {values.max():.9g})")
        if diagnostics is not None:
            top = traj.top_fock_population
            if top is not None and top.max() >= 1e-3:
                diagnostics.append(
                    f"{_label(cfg, point)} highest Fock level population up to {top.max():.3g}")
            if series.get("_spectrum_flags"):
                diagnostics.append(
                    f"{_label(cfg, point)} {series['_spectrum_flags']} of {len(times)} time points "
                    "had a non-real concurrence spectrum (real parts of square roots used)")
    rows = [[_fmt(col[k]) for col in columns] for k in range(len(times))]
    if cfg.scenario == "blp":
        rows.append(["blp"] + [_fmt(blp_functional(col)) for col in columns[1:]])
    return header, rows


def _fmt(x):
    return f"{float(x):.9g}"


def run_scenario(cfg, stream=None):
    """Compute ``cfg`` and write the CSV to ``cfg.out_path`` (or ``stream``/stdout).

    Returns the process exit code (0 on success).
    """
    diagnostics = []
    header, rows = compute_scenario(cfg, diagnostics)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        (stream or sys.stdout).write(buf.getvalue())
    for note in diagnostics:
        print(f"note: {note}", file=sys.stderr)
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run_scenario(cfg)
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


__all__ = ["ScenarioConfig", "ConfigError", "parse_config", "run_scenario", "compute_scenario",
           "main", "SCENARIOS"]
