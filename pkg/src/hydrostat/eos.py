"""Equation of state interfaces and the ideal gas law.

The solver core only talks to an EoS through the small interface below, so
tabulated or multiphysics equations of state can be plugged in later.  The
ideal gas implementation also provides the closed-form polytropic inversions
(density and internal energy density as functions of specific enthalpy and
the polytropic constant K) used by the hydrostatic equilibrium recovery.
"""

import abc

import numpy as np

from hydrostat.errors import InvalidStateError


def _require_positive(name, value):
    value = np.asarray(value)
    if not np.all(np.isfinite(value)) or np.any(value <= 0.0):
        raise InvalidStateError("%s must be positive and finite" % name)


def _pow(a, e):
    # np.power is the hot spot of the equilibrium solve; exponent 1 is the
    # common case for gamma = 2.
    if e == 1.0:
        return a
    return a ** e


class EquationOfState(abc.ABC):
    """Minimal EoS interface required by the solver."""

    @abc.abstractmethod
    def pressure(self, rho, e):
        """Pressure from density and specific internal energy."""

    @abc.abstractmethod
    def sound_speed(self, rho, p):
        """Adiabatic sound speed from density and pressure."""

    @abc.abstractmethod
    def rho_from_enthalpy(self, h, K):
        """Density on an isentrope K at specific enthalpy h."""

    @abc.abstractmethod
    def rhoe_from_enthalpy(self, h, K):
        """Internal energy density on an isentrope K at specific enthalpy h."""

    @abc.abstractmethod
    def polytropic_constant(self, rho, p):
        """Isentrope label K = p / rho^gamma (entropy proxy)."""


class IdealGas(EquationOfState):
    """Ideal gas law p = rho e (gamma - 1) in caloric and polytropic form."""

    def __init__(self, gamma=1.4):
        if not gamma > 1.0:
            raise InvalidStateError("gamma must be > 1")
        self.gamma = float(gamma)

    def pressure(self, rho, e):
        _require_positive("rho", rho)
        _require_positive("e", e)
        return np.asarray(rho) * np.asarray(e) * (self.gamma - 1.0)

    def sound_speed(self, rho, p):
        _require_positive("rho", rho)
        _require_positive("p", p)
        return np.sqrt(self.gamma * np.asarray(p) / np.asarray(rho))

    def polytropic_constant(self, rho, p):
        _require_positive("rho", rho)
        _require_positive("p", p)
        return np.asarray(p) / _pow(np.asarray(rho), self.gamma)

    def rho_from_enthalpy(self, h, K):
        _require_positive("h", h)
        _require_positive("K", K)
        g = self.gamma
        a = (g - 1.0) / (g * np.asarray(K)) * np.asarray(h)
        return _pow(a, 1.0 / (g - 1.0))

    def rhoe_from_enthalpy(self, h, K):
        _require_positive("h", h)
        _require_positive("K", K)
        g = self.gamma
        rho = self.rho_from_enthalpy(h, K)
        return np.asarray(K) * _pow(rho, g) / (g - 1.0)

    def __repr__(self):
        return "IdealGas(gamma=%r)" % self.gamma
