"""Space-time DG solvers with local randomized neural network bases."""

from .assembly import (
    AssembledSystem,
    ConstraintRow,
    MethodConfig,
    RowTag,
    Scheme,
    assemble,
    assemble_lrnn_c0dg,
    assemble_lrnn_c1dg,
    assemble_lrnn_dg,
    consistency_residual,
)
from .basis import LocalRnnBasis, RnnConfig, build_local_bases, eval_linear_combination
from .linsolve import LeastSquaresReport, solve_least_squares
from .mesh import (
    BoundaryPartitionSpec,
    FaceKind,
    SpaceTimeMesh,
    TimeNodeKind,
    build_mesh,
    jump_average_spatial,
    jump_average_spatial_vector,
    jump_average_temporal,
)
from .problem import CASES, DvweProblem, ManufacturedCase, example_1d, example_2d, example_3d
from .quadrature import QuadratureRule, face_rule, gauss_1d, tensor_rule

__all__ = [
    "AssembledSystem", "ConstraintRow", "MethodConfig", "RowTag", "Scheme",
    "assemble", "assemble_lrnn_dg", "assemble_lrnn_c0dg", "assemble_lrnn_c1dg",
    "consistency_residual",
    "LocalRnnBasis", "RnnConfig", "build_local_bases", "eval_linear_combination",
    "LeastSquaresReport", "solve_least_squares",
    "BoundaryPartitionSpec", "FaceKind", "SpaceTimeMesh", "TimeNodeKind",
    "build_mesh", "jump_average_spatial", "jump_average_spatial_vector",
    "jump_average_temporal",
    "CASES", "DvweProblem", "ManufacturedCase",
    "example_1d", "example_2d", "example_3d",
    "QuadratureRule", "face_rule", "gauss_1d", "tensor_rule",
]

__version__ = "0.1.0"
