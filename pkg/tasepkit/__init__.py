"""tasepkit: the discrete-time TASEP with backward-sequential update.

Exact Green functions and generalized Green functions as determinants, the
signed determinantal process on auxiliary times with its correlation
kernel, Fredholm determinants for joint jump-off laws, Monte Carlo
cross-checks, and the Airy_2 scaling limit.
"""

__version__ = "0.1.0"

from .core.boundary import NBoundary, Staircase, boundary_measure
from .core.fcore import f_n, f_tilde
from .core.green import ggf_det, green_det
from .core.lattice import ConfigurationError, ParticleConfig, SpaceTimeConfig
from .core.params import (
    ConvergenceError,
    ModelParams,
    ParameterError,
    TasepError,
)
from .kernel.detprocess import KernelIndex, kernel
from .kernel.fredholm import CurrentQuery, joint_current_prob
from .presets import RunConfig, list_preset_ids, load_preset
from .simulation.montecarlo import run_jump_off

__all__ = [
    "__version__",
    # Model
    "ModelParams",
    "ParticleConfig",
    "SpaceTimeConfig",
    # Exact transition weights
    "f_tilde",
    "f_n",
    "green_det",
    "ggf_det",
    "Staircase",
    "NBoundary",
    "boundary_measure",
    # Determinantal structure
    "KernelIndex",
    "kernel",
    "CurrentQuery",
    "joint_current_prob",
    # Simulation
    "run_jump_off",
    # Presets
    "RunConfig",
    "load_preset",
    "list_preset_ids",
    # Errors
    "TasepError",
    "ParameterError",
    "ConfigurationError",
    "ConvergenceError",
]
