import numpy as np
import pytest

from hydrostat.eos import IdealGas
from hydrostat.errors import SimulationAbort
from hydrostat.mesh import Grid1D
from hydrostat.timeint import (TimeControls, compute_dt, max_wave_speed_sum,
                               ssprk3_step)


def test_ssprk3_amplification_factor():
    # One step on u' = lambda u must produce the cubic Taylor polynomial of
    # exp(z), z = lambda dt, exactly.
    for lam in (-1.0, 0.5, -2.3):
        dt = 0.37
        z = lam * dt
        u = np.array([1.0])
        u_new = ssprk3_step(u, lambda v: lam * v, dt)
        expected = 1.0 + z + z ** 2 / 2.0 + z ** 3 / 6.0
        assert np.isclose(u_new[0], expected, rtol=1e-14)


def test_ssprk3_exact_for_quadratic_in_time():
    # Non-autonomous check via an autonomous augmentation: d/dt (t, u) with
    # u' = t gives u(t) = t^2 / 2 exactly under any third-order method.
    def rhs(v):
        return np.array([1.0, v[0]])

    v = np.array([0.0, 0.0])
    v = ssprk3_step(v, rhs, 0.5)
    assert np.isclose(v[1], 0.125, rtol=1e-14)


def test_ssprk3_aborts_on_nonfinite():
    with pytest.raises(SimulationAbort):
        ssprk3_step(np.array([1.0]), lambda v: v * np.nan, 0.1)


def test_time_controls_validation():
    with pytest.raises(ValueError):
        TimeControls(cfl=0.0)
    with pytest.raises(ValueError):
        TimeControls(cfl=1.5)
    TimeControls(cfl=1.0)


def test_max_wave_speed_sum_1d():
    gas = IdealGas(1.4)
    grid = Grid1D(4, 0.0, 1.0)
    u = np.tile(np.array([1.0, 0.5, 2.0])[:, None], (1, 4))
    p = 0.4 * (2.0 - 0.5 * 0.25)
    expected = (0.5 + np.sqrt(1.4 * p)) / grid.dx
    assert np.isclose(max_wave_speed_sum(u, grid, gas), expected)


def test_compute_dt_clips_to_t_end():
    gas = IdealGas(1.4)
    grid = Grid1D(4, 0.0, 1.0)
    u = np.tile(np.array([1.0, 0.0, 2.5])[:, None], (1, 4))
    controls = TimeControls(cfl=0.85, t_end=1e-5)
    assert compute_dt(u, grid, gas, controls, t=0.0) == 1e-5


def test_compute_dt_respects_dt_max():
    gas = IdealGas(1.4)
    grid = Grid1D(4, 0.0, 1.0)
    u = np.tile(np.array([1.0, 0.0, 2.5])[:, None], (1, 4))
    controls = TimeControls(cfl=0.85, t_end=10.0, dt_max=1e-4)
    assert compute_dt(u, grid, gas, controls, t=0.0) == 1e-4
