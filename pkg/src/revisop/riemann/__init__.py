"""Smooth test surfaces given by conformal metrics e^{2u}(dx^2 + dy^2)."""

from .geodesic import GeodesicPath, chord_length, geodesic_connect, geodesic_distance, geodesic_shoot
from .measure import DiskMeasurement, MeasuredTriangle, fan_integral, measure_disk, measure_triangle
from .metrics import (
    NAMED_METRICS,
    ConformalSurface,
    CurvatureCertificate,
    Disk,
    FlatMetric,
    GaussBumpMetric,
    GridMetric,
    PoincareMetric,
    Rectangle,
    certify_curvature,
    curvature_at,
    grid_surface,
    load_surface,
    named_surface,
)
from .source import ConformalSource, intersect_geodesics, random_chart_triangle

__all__ = [
    "NAMED_METRICS",
    "ConformalSource",
    "ConformalSurface",
    "CurvatureCertificate",
    "Disk",
    "DiskMeasurement",
    "FlatMetric",
    "GaussBumpMetric",
    "GeodesicPath",
    "GridMetric",
    "MeasuredTriangle",
    "PoincareMetric",
    "Rectangle",
    "certify_curvature",
    "chord_length",
    "curvature_at",
    "fan_integral",
    "geodesic_connect",
    "geodesic_distance",
    "geodesic_shoot",
    "grid_surface",
    "intersect_geodesics",
    "load_surface",
    "measure_disk",
    "measure_triangle",
    "named_surface",
    "random_chart_triangle",
]
