import numpy as np
import pytest

from hydrostat.eos import IdealGas
from hydrostat.flux import hllc, physical_flux, pressure_of


def random_states(rng, n, ncomp):
    u = np.empty((ncomp, n))
    u[0] = rng.uniform(0.1, 5.0, n)
    for k in range(1, ncomp - 1):
        u[k] = u[0] * rng.uniform(-2.0, 2.0, n)
    kinetic = 0.5 * np.sum(u[1:-1] ** 2, axis=0) / u[0]
    u[-1] = kinetic + u[0] * rng.uniform(0.05, 5.0, n)
    return u


def test_physical_flux_1d():
    gas = IdealGas(1.4)
    u = np.array([2.0, 3.0, 5.0])
    v = 1.5
    p = gas.pressure(2.0, (5.0 - 0.5 * 3.0 * v) / 2.0)
    f = physical_flux(u, gas)
    assert np.allclose(f, [3.0, 3.0 * v + p, (5.0 + p) * v])


def test_hllc_consistency_1d():
    gas = IdealGas(1.4)
    rng = np.random.default_rng(11)
    u = random_states(rng, 500, 3)
    assert np.allclose(hllc(u, u, gas), physical_flux(u, gas),
                       rtol=1e-12, atol=1e-12)


def test_hllc_consistency_2d_both_axes():
    gas = IdealGas(2.0)
    rng = np.random.default_rng(12)
    u = random_states(rng, 500, 4)
    for axis in (0, 1):
        assert np.allclose(hllc(u, u, gas, axis=axis),
                           physical_flux(u, gas, axis=axis),
                           rtol=1e-12, atol=1e-12)


def test_hllc_mirror_symmetry():
    # Reflecting both states through the interface negates the flux of the
    # even-parity components and preserves the normal momentum flux.
    gas = IdealGas(1.4)
    rng = np.random.default_rng(13)
    uL = random_states(rng, 400, 3)
    uR = random_states(rng, 400, 3)
    f = hllc(uL, uR, gas)
    uLm, uRm = uR.copy(), uL.copy()
    uLm[1] *= -1.0
    uRm[1] *= -1.0
    fm = hllc(uLm, uRm, gas)
    assert np.allclose(fm[0], -f[0], rtol=1e-11, atol=1e-11)
    assert np.allclose(fm[1], f[1], rtol=1e-11, atol=1e-11)
    assert np.allclose(fm[2], -f[2], rtol=1e-11, atol=1e-11)


def test_hllc_supersonic_upwind():
    gas = IdealGas(1.4)
    uL = np.array([1.0, 5.0, 13.0])  # v = 5, c ~ 1.05: fully right-moving
    uR = np.array([1.0, 5.5, 16.0])
    assert np.allclose(hllc(uL, uR, gas), physical_flux(uL, gas))
    uLb, uRb = uL.copy(), uR.copy()
    uLb[1] *= -1.0
    uRb[1] *= -1.0
    assert np.allclose(hllc(uLb, uRb, gas), physical_flux(uRb, gas))


def test_hllc_sod_interface_finite():
    gas = IdealGas(1.4)
    uL = np.array([1.0, 0.0, 2.5])
    uR = np.array([0.125, 0.0, 0.25])
    f = hllc(uL, uR, gas)
    assert np.all(np.isfinite(f))
    assert f[0] > 0.0  # mass flows toward the low pressure side


def test_pressure_of_matches_eos():
    gas = IdealGas(1.4)
    u = np.array([[2.0], [1.0], [3.0]])
    e = (3.0 - 0.5 * 1.0 ** 2 / 2.0) / 2.0
    assert np.isclose(pressure_of(u, gas)[0], gas.pressure(2.0, e))


def test_component_count_validation():
    gas = IdealGas(1.4)
    with pytest.raises(ValueError):
        physical_flux(np.ones(5), gas)
