"""SSP-RK3 time stepping and CFL time-step control."""

from dataclasses import dataclass

import numpy as np

from hydrostat.errors import SimulationAbort


@dataclass
class TimeControls:
    cfl: float = 0.85
    t_end: float = 0.0
    dt_max: float = np.inf

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError("CFL number must be in (0, 1]")


def ssprk3_step(u, rhs, dt):
    """One step of the three-stage, third-order SSP Runge-Kutta method."""
    u1 = u + dt * rhs(u)
    u2 = 0.75 * u + 0.25 * (u1 + dt * rhs(u1))
    u_new = u / 3.0 + 2.0 / 3.0 * (u2 + dt * rhs(u2))
    if not np.all(np.isfinite(u_new)):
        raise SimulationAbort("non-finite state after SSP-RK3 step")
    return u_new


def max_wave_speed_sum(u, grid, gas):
    """max over cells of sum_axes (|v| + c) / dx, for the CFL bound."""
    u = np.asarray(u)
    rho = u[0]
    kinetic = 0.5 * np.sum(u[1:-1] ** 2, axis=0) / rho
    p = gas.pressure(rho, (u[-1] - kinetic) / rho)
    c = gas.sound_speed(rho, p)
    if u.shape[0] == 3:
        return np.max((np.abs(u[1] / rho) + c) / grid.dx)
    return np.max((np.abs(u[1] / rho) + c) / grid.dx
                  + (np.abs(u[2] / rho) + c) / grid.dy)


def compute_dt(u, grid, gas, controls, t=0.0):
    """CFL time step, clipped to land exactly on t_end."""
    speed = max_wave_speed_sum(u, grid, gas)
    if not np.isfinite(speed) or speed <= 0.0:
        raise SimulationAbort("non-finite wave speed in dt computation")
    dt = min(controls.cfl / speed, controls.dt_max)
    remaining = controls.t_end - t
    if remaining < dt * (1.0 + 1e-12):
        dt = remaining
    return dt
