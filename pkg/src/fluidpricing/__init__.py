"""Dynamic pricing under resource constraints.

Re-solve pricing policies (full-information, online-learned, and
informed-price variants), a certified fluid QP solver, and a seeded
simulation harness that benchmarks regret against the fluid upper bound.
"""

from ._kernels import backend_name
from .model import DemandModel, InformedPrior, Instance
from .fluid import FluidProblem, FluidSolution, grid_oracle, solve_fluid, solve_fluid_informed

__version__ = "0.1.0"

__all__ = [
    "DemandModel",
    "InformedPrior",
    "Instance",
    "FluidProblem",
    "FluidSolution",
    "solve_fluid",
    "solve_fluid_informed",
    "grid_oracle",
    "backend_name",
    "__version__",
]
