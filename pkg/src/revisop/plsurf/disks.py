"""Metric disks on PL surfaces and the reverse isoperimetric check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .. import kernels
from .distance import BasePoint, DistanceField, geodesic_distance
from .mesh import PLSurface, curvature_measure


class Sublevel(NamedTuple):
    perimeter: float
    area: float
    level_length: float
    boundary_length: float
    touches_boundary: bool


def _boundary_part(field: DistanceField, t: float) -> float:
    # length of mesh boundary where the (edge-linear) distance is <= t
    s = field.surface
    g = field.graph
    be = s.boundary_edges
    if len(be) == 0:
        return 0.0
    N = g.subdivisions
    d = field.node_distances[g.chain_nodes[be]]
    d0, d1 = d[:, :-1], d[:, 1:]
    h = (s.lengths[be] / N)[:, None]
    lo, hi = np.minimum(d0, d1), np.maximum(d0, d1)
    frac = np.where(hi <= t, 1.0,
                    np.where(lo > t, 0.0, (t - lo) / np.where(hi > lo, hi - lo, 1.0)))
    return float((frac * h).sum())


def sublevel_disk(s: PLSurface, field: DistanceField, t: float) -> Sublevel:
    """Perimeter and area of ``{d <= t}`` from per-face linear interpolation.

    The perimeter is the length of the interpolated level curve plus any
    mesh boundary lying inside the sublevel set; a positive boundary part is
    flagged as ``touches_boundary``.
    """
    if field.surface is not s:
        raise ValueError("distance field belongs to a different surface")
    if not t > 0:
        raise ValueError("t must be positive")
    g = field.graph
    tri_xy = g.grid_xy[:, g.sub_tris].reshape(-1, 3, 2)
    tri_d = field.grid_distances[:, g.sub_tris].reshape(-1, 3)
    area, level = kernels.sublevel_measure(tri_xy, tri_d, float(t))
    bpart = _boundary_part(field, t)
    return Sublevel(float(level) + bpart, float(area), float(level), bpart, bpart > 0.0)


@dataclass(frozen=True)
class DiskReport:
    radius: float
    perimeter: float
    area: float
    omega_minus_total: float
    rhs: float
    margin: float
    refinement_level: int
    level_length: float = 0.0
    touches_boundary: bool = False
    warnings: tuple = field(default=())

    @staticmethod
    def bound(L: float, k_minus: float) -> float:
        return L * L / (4.0 * math.pi + 2.0 * k_minus)

    @property
    def rhs_consistent(self) -> bool:
        return self.bound(self.perimeter, self.omega_minus_total) == self.rhs

    @property
    def relative_margin(self) -> float:
        return self.margin / self.area if self.area > 0 else 0.0

    def as_dict(self) -> dict:
        return {
            "radius": self.radius,
            "perimeter": self.perimeter,
            "area": self.area,
            "omega_minus_total": self.omega_minus_total,
            "rhs": self.rhs,
            "margin": self.margin,
            "relative_margin": self.relative_margin,
            "refinement_level": self.refinement_level,
            "level_length": self.level_length,
            "touches_boundary": self.touches_boundary,
            "warnings": list(self.warnings),
        }


def omega_minus_inside(s: PLSurface, field: DistanceField, R: float) -> float:
    """Sum of omega^- over interior vertices at distance < R."""
    cm = curvature_measure(s)
    inside = field.vertex_distances < R
    return float(cm.omega_minus[inside].sum())


def verify_disk_inequality(s: PLSurface, base: BasePoint, R: float,
                           refinement_level: int = 16, field: DistanceField | None = None) -> DiskReport:
    """Measure the radius-R disk about ``base`` and compare A with L^2/(4 pi + 2 K^-)."""
    if not R > 0:
        raise ValueError("R must be positive")
    if field is None:
        field = geodesic_distance(s, base, refinement_level)
    sub = sublevel_disk(s, field, R)
    kminus = omega_minus_inside(s, field, R)
    rhs = DiskReport.bound(sub.perimeter, kminus)
    warns = []
    if sub.touches_boundary:
        warns.append("disk reaches the surface boundary; the bound does not apply")
    if len(field.unreachable):
        warns.append(f"{len(field.unreachable)} graph nodes unreachable from base")
    return DiskReport(float(R), sub.perimeter, sub.area, kminus, rhs, sub.area - rhs,
                      field.refinement_level, sub.level_length, sub.touches_boundary, tuple(warns))


def level_curve_profile(s: PLSurface, base: BasePoint, R: float, m: int = 33,
                        refinement_level: int = 16, field: DistanceField | None = None):
    """``[(t, L(C_t))]`` for m evenly spaced t in [0, R]; C_t is the circle of radius R - t."""
    if m < 2:
        raise ValueError("need at least two samples")
    if field is None:
        field = geodesic_distance(s, base, refinement_level)
    out = []
    for t in np.linspace(0.0, R, m):
        r = R - t
        L = sublevel_disk(s, field, r).perimeter if r > 0 else 0.0
        out.append((float(t), float(L)))
    return out


def check_level_length_bound(profile, L0: float, omega_minus_D: float) -> float:
    """min over samples of L(C_t) - (L0 - (2 pi + omega^-(D)) t); nonnegative in theory."""
    slope = 2.0 * math.pi + omega_minus_D
    return float(min(L - (L0 - slope * t) for t, L in profile))


def vanishing_radius(L0: float, omega_minus_D: float) -> float:
    """t0 = L0 / (2 pi + omega^-(D)), where the linear lower bound reaches zero."""
    return L0 / (2.0 * math.pi + omega_minus_D)
