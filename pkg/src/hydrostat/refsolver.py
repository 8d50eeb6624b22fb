"""Second-order 1D reference runs, planar or cylindrically symmetric.

High-resolution reference solutions for the perturbation errors are
produced by a piecewise-linear (minmod) scheme with the same HLLC flux and
SSP-RK3 integrator as the main solver; the equilibrium recovery uses the
midpoint rule, where it is available in closed form.  Finished runs are
cached on disk, keyed by a hash of the full configuration.
"""

import dataclasses
import hashlib
import os

import numpy as np

from hydrostat.mesh import Grid1D, project_initial_conditions
from hydrostat.flux import hllc
from hydrostat.solver import (UNBALANCED, WELL_BALANCED, _eq_profile,
                              _internal_energy)
from hydrostat.timeint import TimeControls, compute_dt, ssprk3_step

PLANAR = "planar"
CYLINDRICAL = "cylindrical"


@dataclasses.dataclass
class ReferenceConfig:
    problem: object
    t_end: float
    geometry: str = PLANAR
    n: int = 32768
    scheme: str = UNBALANCED
    cfl: float = 0.85
    r_max: float = 0.75  # outer radius of the cylindrical section

    def __post_init__(self):
        if self.geometry not in (PLANAR, CYLINDRICAL):
            raise ValueError("unknown geometry %r" % self.geometry)
        if self.scheme not in (WELL_BALANCED, UNBALANCED):
            raise ValueError("unknown scheme %r" % self.scheme)

    def grid(self):
        if self.geometry == PLANAR:
            return Grid1D(self.n, self.problem.x_min, self.problem.x_max)
        return Grid1D(self.n, 0.0, self.r_max)

    def key(self):
        parts = [type(self.problem).__name__]
        for f in dataclasses.fields(self.problem):
            parts.append("%s=%r" % (f.name, getattr(self.problem, f.name)))
        parts += ["geometry=%s" % self.geometry, "n=%d" % self.n,
                  "scheme=%s" % self.scheme, "t_end=%r" % self.t_end,
                  "cfl=%r" % self.cfl]
        if self.geometry == CYLINDRICAL:
            parts.append("r_max=%r" % self.r_max)
        return hashlib.sha256(";".join(parts).encode()).hexdigest()


def cache_dir():
    return os.environ.get(
        "HYDROSTAT_CACHE",
        os.path.join(os.path.expanduser("~"), ".cache", "hydrostat"))


def _minmod(a, b):
    return 0.5 * (np.sign(a) + np.sign(b)) * np.minimum(np.abs(a), np.abs(b))


class _Reference1D:
    """Second-order semi-discrete operator on a 1D (possibly radial) grid."""

    def __init__(self, config):
        self.config = config
        self.grid = config.grid()
        self.gas = config.problem.gas
        gravity = (config.problem.gravity() if config.geometry == PLANAR
                   else config.problem.gravity_radial())
        self.phi_c = gravity.phi(self.grid.centers)
        self.phi_if = gravity.phi(self.grid.interfaces)
        self.grad_c = gravity.grad_phi(self.grid.centers)

    def initial_averages(self):
        p = self.config.problem
        u0 = p.u0 if self.config.geometry == PLANAR else p.u0_radial
        return project_initial_conditions(u0, self.grid)

    def _ghosted(self, u_interior):
        grid = self.grid
        g, n = grid.ghost, grid.n
        ufull = np.empty((3, n + 2 * g))
        ufull[:, grid.interior] = u_interior
        if self.config.geometry == CYLINDRICAL:
            # Reflecting axis: mirror cells across r = 0, flip the velocity.
            ufull[:, g - 1::-1] = ufull[:, g:2 * g]
            ufull[1, :g] *= -1.0
            self._hydro_ghost(ufull, g + n - 1, np.arange(g + n, n + 2 * g))
        else:
            self._hydro_ghost(ufull, g, np.arange(g))
            self._hydro_ghost(ufull, g + n - 1, np.arange(g + n, n + 2 * g))
        return ufull

    def _hydro_ghost(self, ufull, edge, ghosts):
        gamma = self.gas.gamma
        u_e = ufull[:, edge]
        rhoe = u_e[2] - 0.5 * u_e[1] ** 2 / u_e[0]
        if u_e[0] > 0.0 and rhoe > 0.0:
            h0 = gamma * rhoe / u_e[0]
            dphi_g = self.phi_c[edge] - self.phi_c[ghosts]
            if np.all(h0 + dphi_g > 0.0):
                a_c = (gamma - 1.0) / gamma * h0
                k_inv = u_e[0] / a_c ** (1.0 / (gamma - 1.0))
                rho_g, rhoe_g = _eq_profile(h0, k_inv, dphi_g, gamma)
                ufull[0, ghosts] = rho_g
                ufull[1, ghosts] = 0.0
                ufull[2, ghosts] = rhoe_g
                return
        ufull[:, ghosts] = u_e[:, None]

    def rhs(self, u_interior):
        grid, gas = self.grid, self.gas
        gamma = gas.gamma
        ufull = self._ghosted(u_interior)
        g, n = grid.ghost, grid.n
        rec = slice(g - 1, g + n + 1)
        m = n + 2

        rho_bar = ufull[0, rec]
        rhoe_bar = _internal_energy(ufull[:, rec])
        if self.config.scheme == WELL_BALANCED:
            ok = (rho_bar > 0.0) & (rhoe_bar > 0.0)
            h0 = np.where(ok, gamma * rhoe_bar / rho_bar, 1.0)
            # Midpoint rule: the equilibrium matches the averages exactly at
            # the cell center, so K follows from p = (gamma-1) rho e there.
            a_c = (gamma - 1.0) / gamma * h0
            k_inv = np.where(ok, rho_bar / a_c ** (1.0 / (gamma - 1.0)), 0.0)
        else:
            h0 = np.ones(m)
            k_inv = np.zeros(m)

        shifts = [slice(rec.start + o, rec.stop + o) for o in (-1, 0, 1)]
        phi_rec = self.phi_c[rec]
        dphi_if = np.stack([phi_rec - self.phi_if[rec],
                            phi_rec - self.phi_if[g:g + n + 2]])
        h_min = h0 + np.min(dphi_if, axis=0)
        delta = np.empty((3, 3, m))
        for k, s in enumerate(shifts):
            dphi = phi_rec - self.phi_c[s]
            h_min = np.minimum(h_min, h0 + dphi)
            rho_eq, rhoe_eq = _eq_profile(h0, k_inv, dphi, gamma)
            delta[0, k] = ufull[0, s] - rho_eq
            delta[1, k] = ufull[1, s]
            delta[2, k] = ufull[2, s] - rhoe_eq
        bad = ~(h_min > 0.0) & (k_inv != 0.0)
        if np.any(bad):
            k_inv = np.where(bad, 0.0, k_inv)
            for k, s in enumerate(shifts):
                delta[0, k] = np.where(bad, ufull[0, s], delta[0, k])
                delta[2, k] = np.where(bad, ufull[2, s], delta[2, k])

        slope = _minmod(delta[:, 1] - delta[:, 0], delta[:, 2] - delta[:, 1])
        rho_eq_if, rhoe_eq_if = _eq_profile(h0, k_inv, dphi_if, gamma)
        eq_if = np.zeros((3, 2, m))
        eq_if[0] = rho_eq_if
        eq_if[2] = rhoe_eq_if
        w_left = eq_if[:, 0] + delta[:, 1] - 0.5 * slope
        w_right = eq_if[:, 1] + delta[:, 1] + 0.5 * slope

        f = hllc(w_right[:, :-1], w_left[:, 1:], gas)

        p_eq_if = (gamma - 1.0) * rhoe_eq_if
        s_mom = (p_eq_if[1] - p_eq_if[0]) / grid.dx \
            - delta[0, 1] * self.grad_c[rec]
        s_ener = -delta[1, 1] * self.grad_c[rec]

        out = -(f[:, 1:] - f[:, :-1]) / grid.dx
        out[1] += s_mom[1:-1]
        out[2] += s_ener[1:-1]

        if self.config.geometry == CYLINDRICAL:
            uc = u_interior
            r = grid.interior_centers
            v = uc[1] / uc[0]
            p = (gamma - 1.0) * (uc[2] - 0.5 * uc[1] * v)
            out[0] -= uc[1] / r
            out[1] -= uc[1] * v / r
            out[2] -= (uc[2] + p) * v / r
        return out


def run_reference(config, use_cache=True):
    """Evolve (or load) a reference run; returns (grid, u_init, u_final)."""
    solver = _Reference1D(config)
    u_init = solver.initial_averages()
    path = os.path.join(cache_dir(), "ref_%s.csv" % config.key()[:16])
    if use_cache and os.path.exists(path):
        u_final = np.loadtxt(path, delimiter=",").T
        if u_final.shape == u_init.shape:
            return solver.grid, u_init, u_final

    controls = TimeControls(cfl=config.cfl, t_end=config.t_end)
    u = u_init.copy()
    t = 0.0
    while t < config.t_end * (1.0 - 1e-14):
        dt = compute_dt(u, solver.grid, solver.gas, controls, t)
        if dt <= 0.0:
            break
        u = ssprk3_step(u, solver.rhs, dt)
        t += dt

    if use_cache:
        os.makedirs(cache_dir(), exist_ok=True)
        header = ("key=%s n=%d t_end=%r geometry=%s scheme=%s\n"
                  "rho,momentum,energy"
                  % (config.key(), config.n, config.t_end, config.geometry,
                     config.scheme))
        np.savetxt(path, u.T, delimiter=",", fmt="%.17e", header=header)
    return solver.grid, u_init, u
