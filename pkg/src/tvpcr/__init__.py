"""Exact l1-anisotropic total-variation denoising and flow on rectilinear images."""

from .geometry import (
    CellSet,
    Grid,
    PCRFunction,
    Signature,
    adjacency,
    area,
    boundary_overlap,
    build_grid,
    induced_signature,
    interior_perimeter,
    level_partition,
)
from .energy import CheegerProblem, brute_force_min, eval_J, eval_J_check, min_relative_perimeter
from .cutsolve import build_cut_instance, dinkelbach_min_ratio, min_cut

__all__ = [
    "CellSet",
    "Grid",
    "PCRFunction",
    "Signature",
    "adjacency",
    "area",
    "boundary_overlap",
    "build_grid",
    "induced_signature",
    "interior_perimeter",
    "level_partition",
    "CheegerProblem",
    "brute_force_min",
    "eval_J",
    "eval_J_check",
    "min_relative_perimeter",
    "build_cut_instance",
    "dinkelbach_min_ratio",
    "min_cut",
]
