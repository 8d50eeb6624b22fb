"""Experiment runner: config parsing, dispatch, CSV tables, manifests."""

import argparse
import configparser
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from hydrostat import metrics, refsolver
from hydrostat.errors import HydrostatError
from hydrostat.mesh import Grid1D, Grid2D, project_initial_conditions
from hydrostat.problems import AtmosphereProblem, PolytropeProblem
from hydrostat.solver import (UNBALANCED, WELL_BALANCED, SimulationState,
                              evolve)
from hydrostat.timeint import TimeControls

EXPERIMENTS = ("atmosphere", "atmosphere_perturbed", "polytrope",
               "polytrope_perturbed", "blast")

_DEFAULT_T_END = {"atmosphere": 10.0, "atmosphere_perturbed": 0.2,
                  "polytrope": 30.0, "polytrope_perturbed": 0.2,
                  "blast": 0.02}
_DEFAULT_AMPLITUDE = {"atmosphere": 0.0, "atmosphere_perturbed": 1e-7,
                      "polytrope": 0.0, "polytrope_perturbed": 1e-2}
_SCHEME_ALIASES = {"wb": WELL_BALANCED, "well_balanced": WELL_BALANCED,
                   "unbalanced": UNBALANCED, "both": "both"}


class ConfigError(HydrostatError):
    """Invalid or inconsistent run configuration."""


@dataclass
class RunConfig:
    experiment: str
    scheme: str = WELL_BALANCED
    resolutions: tuple = (64,)
    amplitude: float = None
    t_end: float = None
    out: str = None
    cfl: float = 0.85
    snapshot_interval: float = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError("experiment: unknown name %r (choose from %s)"
                              % (self.experiment, ", ".join(EXPERIMENTS)))
        if self.scheme not in _SCHEME_ALIASES:
            raise ConfigError("scheme: unknown value %r" % self.scheme)
        self.scheme = _SCHEME_ALIASES[self.scheme]
        try:
            self.resolutions = tuple(int(n) for n in self.resolutions)
        except (TypeError, ValueError):
            raise ConfigError("resolutions: need a list of integers")
        if not self.resolutions or any(n < 4 for n in self.resolutions):
            raise ConfigError("resolutions: need integers >= 4")
        if self.experiment == "blast":
            if self.amplitude is not None:
                raise ConfigError("amplitude: blast uses a fixed pressure "
                                  "increment and accepts no amplitude")
        elif self.amplitude is None:
            self.amplitude = _DEFAULT_AMPLITUDE[self.experiment]
        else:
            self.amplitude = float(self.amplitude)
        if self.t_end is None:
            self.t_end = _DEFAULT_T_END[self.experiment]
        self.t_end = float(self.t_end)
        if self.t_end < 0.0:
            raise ConfigError("t_end: must be >= 0")
        if not 0.0 < float(self.cfl) <= 1.0:
            raise ConfigError("cfl: must be in (0, 1]")
        if self.out is None:
            self.out = os.path.join(
                os.environ.get("HYDROSTAT_OUT", "runs"), self.experiment)

    @property
    def schemes(self):
        return ((WELL_BALANCED, UNBALANCED) if self.scheme == "both"
                else (self.scheme,))

    @property
    def dim(self):
        return 1 if self.experiment.startswith("atmosphere") else 2

    def echo(self):
        return {"experiment": self.experiment, "scheme": self.scheme,
                "resolutions": list(self.resolutions),
                "amplitude": self.amplitude, "t_end": self.t_end,
                "cfl": self.cfl, "out": self.out}


def make_problem(experiment, amplitude=None):
    """Problem object for an experiment name (amplitude already resolved)."""
    a = 0.0 if amplitude is None else amplitude
    if experiment.startswith("atmosphere"):
        return AtmosphereProblem(amplitude=a)
    if experiment == "blast":
        return PolytropeProblem(blast=True)
    return PolytropeProblem(amplitude=a)


def make_state(experiment, n, scheme, amplitude=None):
    """Grid + projected initial averages, wrapped in a SimulationState."""
    problem = make_problem(experiment, amplitude)
    if experiment.startswith("atmosphere"):
        grid = Grid1D(n, problem.x_min, problem.x_max)
    else:
        b = (problem.x_min, problem.x_max)
        grid = Grid2D(n, n, b[0], b[1], b[0], b[1])
    u = project_initial_conditions(problem.u0, grid)
    return SimulationState(grid=grid, u=u, gravity=problem.gravity(),
                           gas=problem.gas, mode=scheme)


def equilibrium_averages(experiment, n):
    """Quadrature averages of the unperturbed equilibrium (all components)."""
    state = make_state(experiment, n, WELL_BALANCED, amplitude=None)
    problem = make_problem(experiment, None)
    return project_initial_conditions(problem.unperturbed().u0, state.grid)


def reference_config(experiment, amplitude, t_end):
    """Reference-run configuration matching a perturbed experiment."""
    if experiment == "atmosphere_perturbed":
        return refsolver.ReferenceConfig(
            problem=AtmosphereProblem(amplitude=amplitude), t_end=t_end,
            geometry=refsolver.PLANAR, n=32768, scheme=UNBALANCED)
    if experiment == "polytrope_perturbed":
        return refsolver.ReferenceConfig(
            problem=PolytropeProblem(amplitude=amplitude), t_end=t_end,
            geometry=refsolver.CYLINDRICAL, n=32768, scheme=WELL_BALANCED)
    raise ConfigError("experiment %r has no reference configuration"
                      % experiment)


def perturbation_error(state, config, eq_avg, ref=None):
    """err1 of the density perturbation against the downsampled reference.

    The reference perturbation is the difference between the perturbed
    reference run and an unperturbed run of the same reference scheme, so
    the reference's own secular drift off the equilibrium cancels instead
    of polluting small-amplitude comparisons.
    """
    if ref is None:
        ref = refsolver.run_reference(
            reference_config(config.experiment, config.amplitude,
                             config.t_end))
    ref_grid, ref_init, ref_final = ref
    delta_run = state.u[0] - eq_avg[0]
    if state.dim == 1:
        ratio = ref_grid.n // state.grid.n
        _, _, base_final = refsolver.run_reference(
            reference_config(config.experiment, 0.0, config.t_end))
        delta_ref = metrics.downsample(ref_final[0] - base_final[0], ratio)
        return metrics.err1(delta_run, delta_ref, state.grid)
    r_ref = ref_grid.interior_centers
    delta_ref = metrics.radial_to_grid2d(r_ref, ref_final[0] - ref_init[0],
                                         state.grid)
    return metrics.err1(delta_run, delta_ref, state.grid)


def run_single(config, n, scheme, ref=None):
    """One resolution, one scheme; returns (state, error, eq_averages)."""
    state = make_state(config.experiment, n, scheme, config.amplitude)
    controls = TimeControls(cfl=config.cfl, t_end=config.t_end)
    evolve(state, controls)
    eq_avg = equilibrium_averages(config.experiment, n)
    if config.experiment in ("atmosphere", "polytrope"):
        err = metrics.err_eq1(state.u[0], eq_avg[0], state.grid)
    elif config.experiment == "blast":
        err = None
    else:
        err = perturbation_error(state, config, eq_avg, ref=ref)
    return state, err, eq_avg


# --- artifact output ---------------------------------------------------


def _fmt(x):
    return "nan" if x is None or not np.isfinite(x) else "%.17e" % x


def write_error_table(path, resolutions, columns):
    """CSV with one (err, rate) column pair per scheme label."""
    labels = list(columns)
    with open(path, "w") as f:
        f.write("N," + ",".join("err_%s,rate_%s" % (s, s) for s in labels)
                + "\n")
        for k, n in enumerate(resolutions):
            row = [str(n)]
            for s in labels:
                errs = columns[s]
                rates = metrics.convergence_rates(errs) if len(errs) > 1 \
                    else np.array([])
                row.append(_fmt(errs[k]))
                row.append(_fmt(rates[k - 1]) if k > 0 and len(rates) else
                           "nan")
            f.write(",".join(row) + "\n")


def write_snapshot(path, grid, t, u):
    """Cell averages, row-major, with a one-line grid/time header."""
    u = np.asarray(u)
    with open(path, "w") as f:
        if isinstance(grid, Grid1D):
            f.write("# N=%d dx=%.17e t=%.17e vars=rho,momentum,energy\n"
                    % (grid.n, grid.dx, t))
            data = u.reshape(u.shape[0], -1)
        else:
            f.write("# N=%dx%d dx=%.17e dy=%.17e t=%.17e "
                    "vars=rho,momentum_x,momentum_y,energy\n"
                    % (grid.nx, grid.ny, grid.dx, grid.dy, t))
            data = u.reshape(u.shape[0], -1)
        for row in data.T:
            f.write(",".join("%.17e" % v for v in row) + "\n")


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir, config, artifacts, wall_time, diagnostics):
    manifest = {
        "config": config.echo(),
        "wall_time_seconds": wall_time,
        "diagnostics": diagnostics,
        "artifacts": {os.path.basename(p): _sha256(p) for p in artifacts},
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
    return path


# --- config parsing ----------------------------------------------------

_CONFIG_KEYS = ("experiment", "scheme", "resolutions", "amplitude", "t_end",
                "out", "cfl", "snapshot_interval")


def parse_config(path=None, overrides=None):
    """RunConfig from an INI-style file plus flag overrides."""
    values = {}
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError("config file not found: %s" % path)
        parser = configparser.ConfigParser()
        parser.read(path)
        if "run" not in parser:
            raise ConfigError("%s: missing [run] section" % path)
        for key, raw in parser["run"].items():
            if key not in _CONFIG_KEYS:
                raise ConfigError("%s: unknown key 'run.%s'" % (path, key))
            values[key] = raw
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    if "experiment" not in values:
        raise ConfigError("experiment: required (flag or config file)")
    if isinstance(values.get("resolutions"), str):
        values["resolutions"] = [s for s in
                                 values["resolutions"].replace(",", " ")
                                 .split() if s]
    for key in ("amplitude", "t_end", "cfl", "snapshot_interval"):
        if isinstance(values.get(key), str):
            try:
                values[key] = float(values[key])
            except ValueError:
                raise ConfigError("%s: not a number: %r" % (key, values[key]))
    return RunConfig(**values)


# --- commands ----------------------------------------------------------


def cmd_run(config):
    os.makedirs(config.out, exist_ok=True)
    t0 = time.time()
    artifacts = []
    diagnostics = {}
    for scheme in config.schemes:
        for n in config.resolutions:
            state, err, _ = run_single(config, n, scheme)
            name = "snapshot_%s_N%d.csv" % (scheme, n)
            path = os.path.join(config.out, name)
            write_snapshot(path, state.grid, state.t, state.u)
            artifacts.append(path)
            diag = dict(state.diagnostics)
            if err is not None:
                diag["error"] = err
            diagnostics["%s_N%d" % (scheme, n)] = diag
    write_manifest(config.out, config, artifacts, time.time() - t0,
                   diagnostics)
    return 0


def cmd_convergence(config):
    os.makedirs(config.out, exist_ok=True)
    t0 = time.time()
    ref = None
    if config.experiment in ("atmosphere_perturbed", "polytrope_perturbed"):
        ref = refsolver.run_reference(
            reference_config(config.experiment, config.amplitude,
                             config.t_end))
    columns = {}
    diagnostics = {}
    for scheme in config.schemes:
        errs = []
        for n in config.resolutions:
            state, err, _ = run_single(config, n, scheme, ref=ref)
            errs.append(err)
            diagnostics["%s_N%d" % (scheme, n)] = dict(state.diagnostics)
        columns[scheme] = np.array(errs, dtype=float)
    path = os.path.join(config.out, "errors.csv")
    write_error_table(path, config.resolutions, columns)
    write_manifest(config.out, config, [path], time.time() - t0, diagnostics)
    return 0


def cmd_reference(config):
    os.makedirs(config.out, exist_ok=True)
    t0 = time.time()
    ref_cfg = reference_config(config.experiment, config.amplitude,
                               config.t_end)
    grid, _, u_final = refsolver.run_reference(ref_cfg)
    path = os.path.join(config.out, "reference_%s.csv" % config.experiment)
    write_snapshot(path, grid, config.t_end, u_final)
    write_manifest(config.out, config, [path], time.time() - t0,
                   {"reference_n": ref_cfg.n})
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hydrostat",
        description="Finite volume experiments for gravitationally "
                    "stratified flows")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "evolve and store snapshots"),
                        ("convergence", "error/rate table over resolutions"),
                        ("reference", "compute or refresh a reference run")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", default=None)
        p.add_argument("--experiment", default=None, choices=EXPERIMENTS)
        p.add_argument("--scheme", default=None,
                       choices=sorted(_SCHEME_ALIASES))
        p.add_argument("--resolutions", default=None,
                       help="comma-separated, e.g. 32,64,128")
        p.add_argument("--amplitude", default=None, type=float)
        p.add_argument("--t-end", dest="t_end", default=None, type=float)
        p.add_argument("--out", default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in
                 ("experiment", "scheme", "resolutions", "amplitude",
                  "t_end", "out")}
    try:
        config = parse_config(args.config, overrides)
        command = {"run": cmd_run, "convergence": cmd_convergence,
                   "reference": cmd_reference}[args.command]
        return command(config)
    except HydrostatError as exc:
        print("%s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
