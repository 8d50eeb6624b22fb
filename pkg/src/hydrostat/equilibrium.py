"""Local hydrostatic equilibrium recovery and equilibrium-preserving pieces.

Within each cell the equilibrium specific enthalpy is modeled as
``h_eq(x) = h0 + phi_center - phi(x)``; the pair (h0, K0) is fixed by
demanding that the quadrature averages of the equilibrium density and
internal energy density match the cell's conserved averages.  For the ideal
gas this reduces to a scalar Newton iteration with an analytic derivative.
"""

from dataclasses import dataclass

import numpy as np

from hydrostat.eos import _pow
from hydrostat.errors import (EquilibriumSolveError, InvalidEquilibriumError,
                              InvalidStateError)
from hydrostat.mesh import GL2_OFFSETS, GL2_WEIGHTS

NEWTON_TOL = 1.0e-14
NEWTON_MAX_ITER = 50
BISECTION_MAX_ITER = 200


class GravityField:
    """Analytic gravitational potential and its gradient.

    In 1D ``phi(x)`` and ``grad_phi(x)`` are scalar-field callables; in 2D
    they take (x, y) and ``grad_phi`` returns the pair (d/dx, d/dy).
    """

    def __init__(self, phi, grad_phi, dim=1):
        self.phi = phi
        self.grad_phi = grad_phi
        self.dim = int(dim)

    def gradient_check(self, points, h=1e-6):
        """Max deviation between grad_phi and central differences of phi."""
        if self.dim == 1:
            x = np.asarray(points, dtype=float)
            fd = (self.phi(x + h) - self.phi(x - h)) / (2.0 * h)
            return float(np.max(np.abs(fd - self.grad_phi(x))))
        x, y = (np.asarray(p, dtype=float) for p in points)
        fdx = (self.phi(x + h, y) - self.phi(x - h, y)) / (2.0 * h)
        fdy = (self.phi(x, y + h) - self.phi(x, y - h)) / (2.0 * h)
        gx, gy = self.grad_phi(x, y)
        return float(max(np.max(np.abs(fdx - gx)), np.max(np.abs(fdy - gy))))


def internal_energy_average(u_bar):
    """Cell-averaged internal energy density from conserved averages.

    Exact at equilibrium (zero velocity); second-order accurate otherwise.
    ``u_bar`` has the component axis first, [rho, mom..., E].
    """
    u_bar = np.asarray(u_bar)
    rho = u_bar[0]
    if np.any(rho <= 0.0):
        raise InvalidStateError("non-positive cell-averaged density")
    kinetic = 0.5 * np.sum(u_bar[1:-1] ** 2, axis=0) / rho
    return u_bar[-1] - kinetic


def enthalpy_guess(rho_bar, rhoe_bar, gas):
    """Second-order starting guess from the cell-averaged state."""
    p = gas.pressure(rho_bar, rhoe_bar / rho_bar)
    return gas.gamma / (gas.gamma - 1.0) * p / rho_bar


def _eq_sums(h0, dphi, weights, gamma):
    """Normalized quadrature sums of the equilibrium profile powers.

    Returns (A, B, Aprime) with A = <a^{1/(g-1)}>, B = <a^{g/(g-1)}> and
    Aprime = dA/dh0, where a = (g-1)/g * (h0 + dphi) and <.> is the
    weighted mean over the quadrature nodes (leading axis of dphi).
    """
    h = h0 + dphi
    a = (gamma - 1.0) / gamma * h
    r = _pow(a, 1.0 / (gamma - 1.0))
    w = np.asarray(weights).reshape((-1,) + (1,) * (np.ndim(dphi) - 1))
    A = np.sum(w * r, axis=0)
    B = np.sum(w * (a * r), axis=0)
    Aprime = np.sum(w * (r / a), axis=0) / gamma
    return A, B, Aprime


def solve_h0(rho_bar, rhoe_bar, dphi, weights, gas,
             tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER):
    """Vectorized equilibrium solve for the cell-center enthalpy.

    ``dphi`` holds phi(center) - phi(node) with the node axis first; all
    other arguments broadcast against its trailing shape.  Returns
    (h0, K0, ok, residual) where ``ok`` flags cells whose solve converged
    with a positive enthalpy profile; failed cells carry NaN.
    """
    rho_bar = np.asarray(rho_bar, dtype=float)
    rhoe_bar = np.asarray(rhoe_bar, dtype=float)
    gamma = gas.gamma
    dphi_min = np.min(dphi, axis=0)

    valid = (rho_bar > 0.0) & (rhoe_bar > 0.0)
    h_guess = np.where(valid, gamma * rhoe_bar / np.where(valid, rho_bar, 1.0),
                       1.0)
    h = np.where(h_guess + dphi_min > 0.0, h_guess,
                 np.maximum(h_guess, 1e-300) - dphi_min * 1.5)

    converged = np.zeros(h.shape, dtype=bool)
    broken = ~valid
    for _ in range(max_iter):
        active = ~(converged | broken)
        if not np.any(active):
            break
        A, B, Aprime = _eq_sums(h, dphi, weights, gamma)
        f = rho_bar / (gamma - 1.0) * B / A
        fp = rho_bar / (gamma - 1.0) * (1.0 - B * Aprime / (A * A))
        res = f - rhoe_bar
        step = np.where(fp != 0.0, res / np.where(fp != 0.0, fp, 1.0), np.nan)
        h_new = h - step
        ok_step = np.isfinite(h_new) & (h_new + dphi_min > 0.0)
        converged |= active & ok_step & (
            (np.abs(step) <= tol * np.abs(h_new))
            | (np.abs(res) <= tol * np.abs(rhoe_bar)))
        broken |= active & ~ok_step
        h = np.where(active & ok_step, h_new, h)

    # Bisection fallback for cells Newton lost (or never converged).
    retry = ~(converged | (~valid))
    if np.any(retry):
        h_b, ok_b = _bisection(rho_bar, rhoe_bar, dphi, weights, gamma,
                               h_guess, dphi_min, retry, tol)
        h = np.where(retry & ok_b, h_b, h)
        converged |= retry & ok_b

    ok = converged & (h + dphi_min > 0.0)
    h = np.where(ok, h, np.nan)
    A, B, _ = _eq_sums(np.where(ok, h, 1.0 - dphi_min), dphi, weights, gamma)
    K0 = np.where(ok, _pow(A / rho_bar, gamma - 1.0), np.nan)
    residual = np.where(
        ok, np.abs(rho_bar / (gamma - 1.0) * B / A - rhoe_bar)
        / np.abs(rhoe_bar), np.nan)
    return h, K0, ok, residual


def _bisection(rho_bar, rhoe_bar, dphi, weights, gamma, h_guess, dphi_min,
               mask, tol):
    lo = np.maximum(h_guess / 10.0, -dphi_min * (1.0 + 1e-12) + 1e-300)
    hi = 10.0 * h_guess
    bad = np.zeros(lo.shape, dtype=bool)

    def residual(h):
        A, B, _ = _eq_sums(np.maximum(h, lo), dphi, weights, gamma)
        return rho_bar / (gamma - 1.0) * B / A - rhoe_bar

    r_lo = residual(lo)
    r_hi = residual(hi)
    bad |= np.sign(r_lo) == np.sign(r_hi)
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        r_mid = residual(mid)
        go_lo = np.sign(r_mid) == np.sign(r_lo)
        lo = np.where(go_lo, mid, lo)
        r_lo = np.where(go_lo, r_mid, r_lo)
        hi = np.where(go_lo, hi, mid)
        if np.all(~mask | bad | (hi - lo <= tol * np.abs(hi))):
            break
    return 0.5 * (lo + hi), mask & ~bad


@dataclass
class LocalEquilibrium:
    """Recovered per-cell equilibrium: h_eq(x) = h0 + phi_center - phi(x)."""

    h0: float
    K0: float
    phi_center: float
    gas: object
    gravity: GravityField

    def enthalpy_at(self, *coords):
        return self.h0 + self.phi_center - self.gravity.phi(*coords)

    def state_at(self, *coords):
        """Pointwise equilibrium conserved state [rho, 0(, 0), rho*e]."""
        h = self.enthalpy_at(*coords)
        if np.any(np.asarray(h) <= 0.0):
            raise InvalidEquilibriumError("equilibrium enthalpy <= 0")
        rho = self.gas.rho_from_enthalpy(h, self.K0)
        rhoe = self.gas.rhoe_from_enthalpy(h, self.K0)
        zeros = np.zeros_like(np.asarray(rho, dtype=float))
        mom = [zeros] * self.gravity.dim
        return np.stack([rho] + mom + [rhoe])

    def pressure_at(self, *coords):
        h = self.enthalpy_at(*coords)
        if np.any(np.asarray(h) <= 0.0):
            raise InvalidEquilibriumError("equilibrium enthalpy <= 0")
        rho = self.gas.rho_from_enthalpy(h, self.K0)
        return self.K0 * _pow(np.asarray(rho), self.gas.gamma)

    def cell_average(self, cell):
        """Average of the equilibrium state over any cell, by the GL2 rule.

        ``cell`` is ((xc, dx),) in 1D or ((xc, dx), (yc, dy)) in 2D; the
        cell need not be the owning one (equilibrium extrapolation).
        """
        if self.gravity.dim == 1:
            ((xc, dx),) = cell
            nodes = xc + GL2_OFFSETS * dx
            vals = self.state_at(nodes)
            return np.sum(GL2_WEIGHTS * vals, axis=-1)
        (xc, dx), (yc, dy) = cell
        X = (xc + GL2_OFFSETS * dx)[:, None]
        Y = (yc + GL2_OFFSETS * dy)[None, :]
        vals = self.state_at(X + 0.0 * Y, Y + 0.0 * X)
        w = np.multiply.outer(GL2_WEIGHTS, GL2_WEIGHTS)
        return np.sum(w * vals, axis=(-2, -1))


def solve_local_equilibrium(u_bar, cell, gravity, gas):
    """Recover the LocalEquilibrium of a single cell from its averages."""
    u_bar = np.asarray(u_bar, dtype=float)
    rho_bar = u_bar[0]
    rhoe_bar = internal_energy_average(u_bar)
    if rhoe_bar <= 0.0:
        raise InvalidStateError("non-positive cell-averaged internal energy")

    if gravity.dim == 1:
        ((xc, dx),) = cell
        nodes = xc + GL2_OFFSETS * dx
        phi_c = gravity.phi(xc)
        dphi = phi_c - gravity.phi(nodes)
        weights = GL2_WEIGHTS
    else:
        (xc, dx), (yc, dy) = cell
        X = np.repeat(xc + GL2_OFFSETS * dx, 2)
        Y = np.tile(yc + GL2_OFFSETS * dy, 2)
        phi_c = gravity.phi(xc, yc)
        dphi = phi_c - gravity.phi(X, Y)
        weights = np.full(4, 0.25)

    h0, K0, ok, _ = solve_h0(rho_bar, rhoe_bar, dphi, weights, gas)
    if not np.all(ok):
        raise EquilibriumSolveError("equilibrium solve failed in cell at %r"
                                    % (cell,))
    return LocalEquilibrium(float(h0), float(K0), float(phi_c), gas, gravity)


def uniqueness_bound_check(leq, cell, samples=65):
    """Appendix-style uniqueness condition h_max/h_min < bound over the cell."""
    gamma = leq.gas.gamma
    bound = gamma ** 0.5 if gamma <= 2.0 else gamma ** ((gamma - 1.0) / gamma)
    if leq.gravity.dim == 1:
        ((xc, dx),) = cell
        x = np.linspace(xc - 0.5 * dx, xc + 0.5 * dx, samples)
        h = leq.enthalpy_at(x)
    else:
        (xc, dx), (yc, dy) = cell
        x = np.linspace(xc - 0.5 * dx, xc + 0.5 * dx, samples)
        y = np.linspace(yc - 0.5 * dy, yc + 0.5 * dy, samples)
        h = leq.enthalpy_at(x[:, None], y[None, :])
    if np.any(h <= 0.0):
        raise InvalidEquilibriumError("equilibrium enthalpy <= 0 in cell")
    return bool(np.max(h) / np.min(h) < bound)


def well_balanced_reconstruct(stencil, leq, cell):
    """Equilibrium-preserving 1D reconstruction W = U_eq + R(perturbation).

    ``stencil`` is (ncomp, 3) cell averages around the owning cell; returns
    (delta_poly, evaluator) where delta_poly is the perturbation polynomial
    and evaluator(x) gives W(x).
    """
    from hydrostat.reconstruction import cweno3_1d

    ((xc, dx),) = cell
    stencil = np.asarray(stencil, dtype=float)
    delta = np.empty_like(stencil)
    for k, off in enumerate((-1, 0, 1)):
        eq_avg = leq.cell_average(((xc + off * dx, dx),))
        delta[:, k] = stencil[:, k] - eq_avg
    delta_poly = cweno3_1d(delta, dx, x_center=xc)

    def evaluator(x):
        return leq.state_at(x) + delta_poly(x)

    return delta_poly, evaluator


def wb_momentum_source(leq, delta_rho_poly, cell):
    """Well-balanced cell-averaged momentum source (1D form).

    The equilibrium part integrates exactly to a pressure difference; only
    the perturbation density is integrated numerically.
    """
    ((xc, dx),) = cell
    p_right = leq.pressure_at(xc + 0.5 * dx)
    p_left = leq.pressure_at(xc - 0.5 * dx)
    nodes = xc + GL2_OFFSETS * dx
    pert = np.sum(GL2_WEIGHTS * delta_rho_poly(nodes)
                  * leq.gravity.grad_phi(nodes))
    return (p_right - p_left) / dx - pert


def energy_source(momentum_at_nodes, gravity, cell):
    """Cell-averaged energy source -<rho v . grad(phi)> (1D form)."""
    ((xc, dx),) = cell
    nodes = xc + GL2_OFFSETS * dx
    return -np.sum(GL2_WEIGHTS * np.asarray(momentum_at_nodes)
                   * gravity.grad_phi(nodes))
