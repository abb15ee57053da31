"""Polynomial-chaos uncertainty quantification for transient models.

The toolkit builds a time-dependent polynomial surrogate of a model
output by stochastic collocation on a cubature rule, then compresses
the surrogate two ways: coefficient thresholding (which multi-indices
matter) and a rotated basis from a singular value decomposition of the
coefficient trajectories (how many directions matter).
"""

from .basis import IndexSet, basis_matrix, eval_basis, gram_matrix, total_degree_set
from .collocation import (CoefficientTrajectory, NodeSolutions, collocate,
                          project, solve_at_nodes, surrogate_eval)
from .config import RunConfig, build_model, load_config
from .errors import (ConfigError, DegenerateColumnError, DivergenceError,
                     DomainError, MeshError, NewtonError, NodeSolveError,
                     PcuqError, ShapeError, SizeError, SolverError,
                     StaleCacheError)
from .pod import PodBasis, pod, pod_error_curve, rotated_basis_eval
from .quadrature import CubatureRule, gauss_legendre_1d, make_rule, stroud5, tensor_gauss
from .space import ParameterSpace
from .sparsify import SparsityReport, global_set, optimal_set, sparsity_error, sweep

__version__ = "0.1.0"

__all__ = [
    "CoefficientTrajectory",
    "ConfigError",
    "CubatureRule",
    "DegenerateColumnError",
    "DivergenceError",
    "DomainError",
    "IndexSet",
    "MeshError",
    "NewtonError",
    "NodeSolutions",
    "NodeSolveError",
    "ParameterSpace",
    "PcuqError",
    "PodBasis",
    "RunConfig",
    "ShapeError",
    "SizeError",
    "SolverError",
    "SparsityReport",
    "StaleCacheError",
    "basis_matrix",
    "build_model",
    "collocate",
    "eval_basis",
    "gauss_legendre_1d",
    "global_set",
    "gram_matrix",
    "load_config",
    "make_rule",
    "optimal_set",
    "pod",
    "pod_error_curve",
    "project",
    "rotated_basis_eval",
    "solve_at_nodes",
    "sparsity_error",
    "stroud5",
    "surrogate_eval",
    "sweep",
    "tensor_gauss",
    "total_degree_set",
]
