import numpy as np

from hydrostat.problems import AtmosphereProblem, PolytropeProblem


def test_atmosphere_hydrostatic_balance():
    p = AtmosphereProblem()
    x = np.linspace(0.05, 0.95, 41)
    h = 1e-6
    dpdx = (p.p0(x + h) - p.p0(x - h)) / (2.0 * h)
    assert np.allclose(dpdx, -p.rho0(x) * p.g, rtol=1e-7)


def test_atmosphere_enthalpy_identity():
    p = AtmosphereProblem()
    x = np.linspace(0.0, 1.0, 11)
    h = p.gamma / (p.gamma - 1.0) * p.K * p.rho0(x) ** (p.gamma - 1.0)
    assert np.allclose(h, p.enthalpy0(x), rtol=1e-12)


def test_atmosphere_pressure_bump():
    p = AtmosphereProblem(amplitude=1e-3)
    base = p.unperturbed()
    assert np.isclose(p.p0(0.5) - base.p0(0.5), 1e-3)
    # The bump decays fast away from its center.
    assert p.p0(0.0) - base.p0(0.0) < 1e-3 * 1e-40


def test_atmosphere_u0_zero_velocity():
    p = AtmosphereProblem()
    u = p.u0(np.array([0.25, 0.75]))
    assert u.shape == (3, 2)
    assert np.all(u[1] == 0.0)
    assert np.allclose(u[2] * (p.gamma - 1.0), p.p0([0.25, 0.75]))


def test_polytrope_center_values():
    p = PolytropeProblem()
    assert np.isclose(p.rho0_r(0.0), p.rho_c)
    assert np.isclose(p.p0_r(0.0), p.K * p.rho_c ** 2)
    assert np.isclose(p.phi_r(0.0), -2.0 * p.K * p.rho_c)


def test_polytrope_hydrostatic_balance_radial():
    p = PolytropeProblem()
    r = np.linspace(0.01, 0.7, 50)
    h = 1e-6
    dpdr = (p.p0_r(r + h) - p.p0_r(r - h)) / (2.0 * h)
    assert np.allclose(dpdr, -p.rho0_r(r) * p.dphi_dr(r), rtol=1e-6,
                       atol=1e-9)


def test_polytrope_gravity_gradient_consistency():
    p = PolytropeProblem()
    x = np.linspace(-0.4, 0.4, 9)
    y = np.linspace(-0.4, 0.4, 9)
    assert p.gravity().gradient_check((x, y + 0.013)) < 1e-8
    assert p.gravity_radial().gradient_check(x + 0.007) < 1e-8


def test_polytrope_gravity_smooth_at_center():
    p = PolytropeProblem()
    gx, gy = p.gravity().grad_phi(np.array([0.0, 1e-9]),
                                  np.array([0.0, 0.0]))
    assert np.all(np.isfinite(gx)) and np.all(np.isfinite(gy))
    assert abs(gx[0]) < 1e-12


def test_polytrope_multiplicative_perturbation():
    p = PolytropeProblem(amplitude=1e-2)
    base = PolytropeProblem()
    x, y = 0.0, 0.0
    assert np.isclose(p.pressure(x, y), base.pressure(x, y) * 1.01)
    assert np.isclose(p.pressure(0.4, 0.0), base.pressure(0.4, 0.0),
                      rtol=1e-12)


def test_blast_increments():
    p = PolytropeProblem(blast=True)
    base = PolytropeProblem()
    # Single ball: +100 inside, nothing outside.
    assert np.isclose(p.pressure(-0.25, 0.3) - base.pressure(-0.25, 0.3),
                      100.0)
    # Duplicated center counts twice.
    assert np.isclose(p.pressure(0.1, -0.1) - base.pressure(0.1, -0.1),
                      200.0)
    assert np.isclose(p.pressure(0.45, 0.45), base.pressure(0.45, 0.45))


def test_polytrope_u0_shapes():
    p = PolytropeProblem()
    x = np.linspace(-0.4, 0.4, 5)[:, None]
    y = np.linspace(-0.4, 0.4, 7)[None, :]
    u = p.u0(x, y)
    assert u.shape == (4, 5, 7)
    assert np.all(u[1] == 0.0) and np.all(u[2] == 0.0)
    ur = p.u0_radial(np.linspace(0, 0.7, 9))
    assert ur.shape == (3, 9)
