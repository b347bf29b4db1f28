"""Reconstructed differential evolution (RDE) for bound-constrained minimization."""
from .benchmarks import DESK_SUITE, ObjectiveFunction, make_problem, make_rotation
from .baseline import baseline_de_rand1
from .core import Candidate, ConfigurationError, ExternalArchive, Population
from .optimizer import RunConfig, RunResult, ablate, lshade_like, run

__all__ = [
    "DESK_SUITE",
    "Candidate",
    "ConfigurationError",
    "ExternalArchive",
    "ObjectiveFunction",
    "Population",
    "RunConfig",
    "RunResult",
    "ablate",
    "baseline_de_rand1",
    "lshade_like",
    "make_problem",
    "make_rotation",
    "run",
]
__version__ = "0.1.0"
