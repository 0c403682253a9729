"""Piecewise-flat surfaces with conical singularities."""

from .disks import (
    DiskReport,
    Sublevel,
    check_level_length_bound,
    level_curve_profile,
    sublevel_disk,
    vanishing_radius,
    verify_disk_inequality,
)
from .distance import DistanceField, geodesic_distance, steiner_graph
from .generate import cone_disk, flat_grid, random_disk_case, tetrahedron
from .mesh import CurvatureMeasure, PLSurface, curvature_measure, gauss_bonnet_residual, vertex_angles

__all__ = [
    "CurvatureMeasure",
    "DiskReport",
    "DistanceField",
    "PLSurface",
    "Sublevel",
    "check_level_length_bound",
    "cone_disk",
    "curvature_measure",
    "flat_grid",
    "gauss_bonnet_residual",
    "geodesic_distance",
    "level_curve_profile",
    "random_disk_case",
    "steiner_graph",
    "sublevel_disk",
    "tetrahedron",
    "vanishing_radius",
    "verify_disk_inequality",
    "vertex_angles",
]
