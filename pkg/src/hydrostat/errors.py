"""Typed errors raised by the solver components."""


class HydrostatError(Exception):
    """Base class for all solver errors."""


class InvalidStateError(HydrostatError, ValueError):
    """A thermodynamic state left the admissible region (rho, p, e, h, K > 0)."""


class InvalidEquilibriumError(HydrostatError, ValueError):
    """An equilibrium enthalpy profile became non-positive."""


class EquilibriumSolveError(HydrostatError, RuntimeError):
    """The per-cell equilibrium recovery did not converge."""


class OutOfCellError(HydrostatError, ValueError):
    """A reconstruction polynomial was evaluated outside its owning cell."""


class SimulationAbort(HydrostatError, RuntimeError):
    """The evolution loop encountered a non-finite state."""
