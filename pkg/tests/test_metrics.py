import numpy as np
import pytest

from hydrostat import metrics
from hydrostat.mesh import Grid1D, Grid2D


def test_err1_basic():
    grid = Grid1D(4, 0.0, 1.0)
    q = np.array([1.0, 2.0, 3.0, 4.0])
    q_ref = np.array([1.0, 2.5, 3.0, 3.0])
    assert np.isclose(metrics.err1(q, q_ref, grid), 0.25 * 1.5)
    with pytest.raises(ValueError):
        metrics.err1(q, q_ref[:3], grid)


def test_err1_2d_volume_factor():
    grid = Grid2D(2, 2, 0.0, 1.0, 0.0, 2.0)
    q = np.ones((2, 2))
    assert np.isclose(metrics.err_eq1(q, np.zeros((2, 2)), grid),
                      0.5 * 1.0 * 4)


def test_err1_delta():
    grid = Grid1D(2, 0.0, 1.0)
    q = np.array([2.0, 3.0])
    eq = np.array([1.0, 1.0])
    delta_ref = np.array([1.0, 1.0])
    assert np.isclose(metrics.err1_delta(q, eq, delta_ref, grid), 0.5)


def test_downsample_1d():
    q = np.arange(8.0)
    out = metrics.downsample(q, 2)
    assert np.allclose(out, [0.5, 2.5, 4.5, 6.5])
    assert np.allclose(metrics.downsample(q, 1), q)
    with pytest.raises(ValueError):
        metrics.downsample(np.arange(6.0), 4)


def test_downsample_2d():
    q = np.arange(16.0).reshape(4, 4)
    out = metrics.downsample(q, 2, dim=2)
    assert out.shape == (2, 2)
    assert np.isclose(out[0, 0], np.mean(q[:2, :2]))
    assert np.isclose(out[1, 1], np.mean(q[2:, 2:]))
    # Leading component axis is untouched.
    q3 = np.stack([q, 2.0 * q])
    out3 = metrics.downsample(q3, 2, dim=2)
    assert out3.shape == (2, 2, 2)
    assert np.allclose(out3[1], 2.0 * out)


def test_convergence_rates():
    errs = [1.0, 0.125, 0.125 / 8.0]
    assert np.allclose(metrics.convergence_rates(errs), [3.0, 3.0])
    rates = metrics.convergence_rates([1.0, 0.0])
    assert np.isnan(rates[0])
    with pytest.raises(ValueError):
        metrics.convergence_rates([1.0])


def test_error_report():
    rep = metrics.ErrorReport("err1", (32, 64, 128), [1.0, 0.25, 0.0625])
    assert rep.doubling
    assert np.allclose(rep.rates, [2.0, 2.0])
    rep2 = metrics.ErrorReport("err_eq1", (32, 100), [1.0, 0.5])
    assert not rep2.doubling
    assert np.all(np.isnan(rep2.rates))
    with pytest.raises(ValueError):
        metrics.ErrorReport("bogus", (32,), [1.0])
    with pytest.raises(ValueError):
        metrics.ErrorReport("err1", (32, 64), [1.0])


def test_sound_crossing_time_constant_speed():
    tau = metrics.sound_crossing_time(lambda x: 2.0 * np.ones_like(x),
                                      0.0, 3.0)
    assert np.isclose(tau, 2.0 * 3.0 / 2.0, rtol=1e-12)


def test_sound_crossing_time_linear_speed():
    # c(x) = 1 + x on [0, 1]: 2 * int 1/c = 2 ln 2.
    tau = metrics.sound_crossing_time(lambda x: 1.0 + x, 0.0, 1.0)
    assert np.isclose(tau, 2.0 * np.log(2.0), rtol=1e-8)


def test_sound_crossing_time_rejects_nonpositive():
    from hydrostat.errors import InvalidStateError
    with pytest.raises(InvalidStateError):
        metrics.sound_crossing_time(lambda x: x - 0.5, 0.0, 1.0)


def test_radial_to_grid2d_constant_and_radial():
    grid = Grid2D(8, 8, -0.5, 0.5, -0.5, 0.5)
    r_ref = np.linspace(0.0, 1.0, 4097)
    q_const = metrics.radial_to_grid2d(r_ref, np.ones_like(r_ref), grid)
    assert q_const.shape == (8, 8)
    assert np.allclose(q_const, 1.0)
    # Smooth radial profile: compare against a dense per-cell average.
    f = lambda r: np.exp(-4.0 * r * r)
    q = metrics.radial_to_grid2d(r_ref, f(r_ref), grid)
    i, j = 5, 2
    si, sj = grid.interior
    xc = grid.centers_x[si][i]
    yc = grid.centers_y[sj][j]
    xs = np.linspace(xc - 0.5 * grid.dx, xc + 0.5 * grid.dx, 201)[:, None]
    ys = np.linspace(yc - 0.5 * grid.dy, yc + 0.5 * grid.dy, 201)[None, :]
    dense = np.mean(f(np.sqrt(xs * xs + ys * ys)))
    assert np.isclose(q[i, j], dense, rtol=1e-4)
