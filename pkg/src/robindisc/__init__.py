"""Ground states of the magnetic Robin Laplacian on the unit disc."""

from .asymptotics import e_inf, lambda1_prediction, mu1_prediction
from .diamag import DiscOptions, FiberCache, find_nonmonotone_witness, lambda1_disc, scan_b
from .errors import ConfigError, NumericFailure, RobinDiscError
from .fiber import EigResult, FiberParams, Method, SolverOptions, solve_fiber_fd, solve_fiber_ground

__version__ = "0.1.0"
