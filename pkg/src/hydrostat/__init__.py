"""Finite volume solvers for gravitationally stratified compressible flow.

The package provides a third-order scheme that preserves discrete
hydrostatic equilibria to round-off (via local equilibrium recovery) next
to the standard, unbalanced variant of the same scheme, plus the experiment
tooling to compare them.
"""

from hydrostat.eos import EquationOfState, IdealGas
from hydrostat.equilibrium import (GravityField, LocalEquilibrium,
                                   solve_local_equilibrium)
from hydrostat.errors import HydrostatError
from hydrostat.mesh import Grid1D, Grid2D, project_initial_conditions
from hydrostat.problems import AtmosphereProblem, PolytropeProblem
from hydrostat.solver import (UNBALANCED, WELL_BALANCED, SimulationState,
                              evolve)
from hydrostat.timeint import TimeControls

__all__ = [
    "AtmosphereProblem", "EquationOfState", "GravityField", "Grid1D",
    "Grid2D", "HydrostatError", "IdealGas", "LocalEquilibrium",
    "PolytropeProblem", "SimulationState", "TimeControls", "UNBALANCED",
    "WELL_BALANCED", "evolve", "project_initial_conditions",
    "solve_local_equilibrium",
]

__version__ = "0.1.0"
