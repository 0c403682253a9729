"""Comparison triangles for nonpositively curved surfaces."""

from .core import (
    ConeTriangle,
    TriangleData,
    TriangleReport,
    comparison_base_angles,
    cone_comparison_triangle,
    glue_right_triangles,
    right_triangle_split_constant,
    verify_base_angle_inequality,
)
from .sources import ConeSource, ConstantCurvatureSource
from .verify import Decomposition, decompose_triangle, right_triangle_split, verify_triangle_theorem

__all__ = [
    "ConeSource",
    "ConeTriangle",
    "ConstantCurvatureSource",
    "Decomposition",
    "TriangleData",
    "TriangleReport",
    "comparison_base_angles",
    "cone_comparison_triangle",
    "decompose_triangle",
    "glue_right_triangles",
    "right_triangle_split",
    "right_triangle_split_constant",
    "verify_base_angle_inequality",
    "verify_triangle_theorem",
]
