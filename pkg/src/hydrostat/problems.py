"""Closed-form initial conditions and gravity fields for the experiments.

All setups satisfy h + phi = const with a constant polytropic K before any
pressure perturbation is applied; the perturbations modify the pressure
only (density and velocity untouched).
"""

from dataclasses import dataclass, field

import numpy as np

from hydrostat.eos import IdealGas
from hydrostat.equilibrium import GravityField
from hydrostat.errors import InvalidStateError


@dataclass
class AtmosphereProblem:
    """Isentropic atmosphere in a linear potential phi = g x on [0, 1]."""

    g: float = 3.15
    gamma: float = 1.4
    h_top: float = 3.75  # enthalpy at x = 0
    K: float = 1.0
    amplitude: float = 0.0
    bump_center: float = 0.5
    bump_width: float = 0.05
    x_min: float = 0.0
    x_max: float = 1.0

    @property
    def gas(self):
        return IdealGas(self.gamma)

    def gravity(self):
        g = self.g
        return GravityField(lambda x: g * x,
                            lambda x: g * np.ones_like(np.asarray(x, float)),
                            dim=1)

    def enthalpy0(self, x):
        return self.h_top - self.g * np.asarray(x, dtype=float)

    def rho0(self, x):
        h = self.enthalpy0(x)
        if np.any(h <= 0.0):
            raise InvalidStateError("atmosphere enthalpy <= 0 in domain")
        gm = self.gamma
        return ((gm - 1.0) / (gm * self.K) * h) ** (1.0 / (gm - 1.0))

    def p0(self, x):
        p = self.K * self.rho0(x) ** self.gamma
        if self.amplitude != 0.0:
            x = np.asarray(x, dtype=float)
            p = p + self.amplitude * np.exp(
                -((x - self.bump_center) ** 2) / self.bump_width ** 2)
        return p

    def u0(self, x):
        """Pointwise conserved state [rho, 0, E]; velocity is zero."""
        rho = self.rho0(x)
        return np.stack([rho, np.zeros_like(rho),
                         self.p0(x) / (self.gamma - 1.0)])

    def unperturbed(self):
        return AtmosphereProblem(self.g, self.gamma, self.h_top, self.K, 0.0,
                                 self.bump_center, self.bump_width,
                                 self.x_min, self.x_max)


def _sinc(z):
    return np.sinc(np.asarray(z, dtype=float) / np.pi)


def _sinc_ratio(z):
    """(cos z - sinc z) / z**2, the removable-singularity part of grad(phi)."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-4
    zs = np.where(small, 1.0, z)
    full = (np.cos(zs) - _sinc(zs)) / zs ** 2
    series = -1.0 / 3.0 + z * z / 30.0
    return np.where(small, series, full)


@dataclass
class PolytropeProblem:
    """gamma = 2 polytrope (sinc density profile) on [-0.5, 0.5]^2.

    The pressure perturbation is multiplicative,
    p = (1 + A exp(-r^2/w^2)) p0; blast balls add a flat increment instead.
    """

    K: float = 1.0
    G: float = 1.0
    rho_c: float = 1.0
    gamma: float = 2.0
    amplitude: float = 0.0
    bump_width: float = 0.05
    blast: bool = False
    blast_increment: float = 100.0
    blast_radius: float = 0.05
    blast_centers: tuple = ((-0.25, 0.3), (-0.15, 0.1), (0.025, 0.3),
                            (0.025, 0.225), (0.1, -0.1), (0.1, -0.1))
    x_min: float = -0.5
    x_max: float = 0.5

    @property
    def alpha(self):
        return np.sqrt(4.0 * np.pi * self.G / (2.0 * self.K))

    @property
    def gas(self):
        return IdealGas(self.gamma)

    def rho0_r(self, r):
        return self.rho_c * _sinc(self.alpha * r)

    def p0_r(self, r):
        return self.K * self.rho0_r(r) ** self.gamma

    def phi_r(self, r):
        return -2.0 * self.K * self.rho_c * _sinc(self.alpha * r)

    def dphi_dr(self, r):
        # d/dr phi = -2 K rho_c alpha^2 r * (cos z - sinc z)/z^2, z = alpha r
        r = np.asarray(r, dtype=float)
        return -2.0 * self.K * self.rho_c * self.alpha ** 2 * r \
            * _sinc_ratio(self.alpha * r)

    def gravity(self):
        def phi(x, y):
            return self.phi_r(np.sqrt(x * x + y * y))

        def grad_phi(x, y):
            r = np.sqrt(x * x + y * y)
            common = -2.0 * self.K * self.rho_c * self.alpha ** 2 \
                * _sinc_ratio(self.alpha * r)
            return common * x, common * y

        return GravityField(phi, grad_phi, dim=2)

    def gravity_radial(self):
        """1D radial section phi(|x|), for the cylindrical reference solver."""
        def phi(x):
            return self.phi_r(np.abs(x))

        def grad_phi(x):
            x = np.asarray(x, dtype=float)
            return -2.0 * self.K * self.rho_c * self.alpha ** 2 * x \
                * _sinc_ratio(self.alpha * np.abs(x))

        return GravityField(phi, grad_phi, dim=1)

    def pressure(self, x, y):
        r2 = x * x + y * y
        p = self.p0_r(np.sqrt(r2))
        if self.blast:
            for cx, cy in self.blast_centers:
                inside = (x - cx) ** 2 + (y - cy) ** 2 < self.blast_radius ** 2
                p = p + self.blast_increment * inside
        elif self.amplitude != 0.0:
            p = p * (1.0 + self.amplitude * np.exp(-r2 / self.bump_width ** 2))
        return p

    def u0(self, x, y):
        """Pointwise conserved state [rho, 0, 0, E]; velocity is zero."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        rho = self.rho0_r(np.sqrt(x * x + y * y))
        rho, p = np.broadcast_arrays(rho, self.pressure(x, y))
        zeros = np.zeros_like(rho)
        return np.stack([rho, zeros, zeros, p / (self.gamma - 1.0)])

    def u0_radial(self, r):
        """Pointwise 1D conserved state along a radius (for the reference)."""
        rho = self.rho0_r(np.abs(r))
        p = self.p0_r(np.abs(r))
        if self.amplitude != 0.0 and not self.blast:
            p = p * (1.0 + self.amplitude * np.exp(-(r * r)
                                                   / self.bump_width ** 2))
        return np.stack([rho, np.zeros_like(rho), p / (self.gamma - 1.0)])

    def unperturbed(self):
        return PolytropeProblem(self.K, self.G, self.rho_c, self.gamma)
