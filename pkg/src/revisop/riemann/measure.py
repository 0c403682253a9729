"""Lengths, angles, areas and curvature integrals of geodesic triangles and disks.

Region integrals use a fan from a chart point O: for a closed curve gamma and
a density f (per dx dy),

    integral of f over the enclosed region
        = closed integral of [ int_0^1 f(O + t (gamma - O)) t dt ] (gamma - O) x gamma' ds,

which counts every point with its winding number, so it is exact for any
simple closed curve once O and the curve lie in a convex chart.  Both
integrals are done by Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from ..cone import reverse_isoperimetric_rhs
from ..errors import GeometryError
from ..trianglecmp.core import TriangleData
from .geodesic import GeodesicPath, geodesic_connect, geodesic_shoot
from .metrics import ConformalSurface

FAN_NODES = 32
SIDE_NODES = 64


def _gl(n: int):
    t, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (t + 1.0), 0.5 * w


def density(s: ConformalSurface, kind: str):
    """Integrand per dx dy: area (e^{2u}), curvature (K e^{2u}) or K^- (max(-K, 0) e^{2u})."""
    m = s.metric
    if kind == "area":
        return lambda x, y: np.exp(2.0 * m.u(x, y))
    if kind == "curvature":
        return lambda x, y: -m.laplacian(x, y)
    if kind == "k_minus":
        return lambda x, y: np.maximum(m.laplacian(x, y), 0.0)
    raise ValueError(f"unknown density {kind!r}")


def _fan(f, origin, pts, vel, weights, n_fan):
    # pts, vel: (n, 2) boundary samples and d/ds; weights: boundary quadrature weights
    t, w = _gl(n_fan)
    rel = pts - origin
    inner = origin + t[None, :, None] * rel[:, None, :]
    vals = f(inner[..., 0], inner[..., 1])
    radial = vals @ (w * t)
    cross = rel[:, 0] * vel[:, 1] - rel[:, 1] * vel[:, 0]
    return float(np.dot(weights, radial * cross))


def _piece_samples(path: GeodesicPath, s0: float, s1: float, n: int):
    # Gauss-Legendre samples of path between arc lengths s0 -> s1 (either order)
    t, w = _gl(n)
    s = s0 + (s1 - s0) * t
    z = path.state_at(s)
    return z[:2].T, z[2:].T, (s1 - s0) * w


def fan_integral(s: ConformalSurface, pieces, kind: str = "area", origin=None,
                 n_side: int = SIDE_NODES, n_fan: int = FAN_NODES) -> float:
    """Signed integral over the region bounded by ``pieces`` = [(path, s0, s1), ...].

    Positive when the closed curve runs counterclockwise in the chart.
    """
    samples = [_piece_samples(p, a, b, n_side) for p, a, b in pieces]
    pts = np.concatenate([x[0] for x in samples])
    vel = np.concatenate([x[1] for x in samples])
    wts = np.concatenate([x[2] for x in samples])
    if origin is None:
        origin = pts.mean(axis=0)
    return _fan(density(s, kind), np.asarray(origin, float), pts, vel, wts, n_fan)


def _polylines_cross(a: np.ndarray, b: np.ndarray, skip_ends: int = 1) -> bool:
    # True when polyline a crosses polyline b away from their shared endpoints
    a = a[skip_ends: len(a) - skip_ends]
    if len(a) < 2:
        return False
    p, r = a[:-1, None, :], (a[1:] - a[:-1])[:, None, :]
    q, sv = b[None, :-1, :], (b[1:] - b[:-1])[None, :, :]
    denom = r[..., 0] * sv[..., 1] - r[..., 1] * sv[..., 0]
    qp = q - p
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qp[..., 0] * sv[..., 1] - qp[..., 1] * sv[..., 0]) / denom
        u = (qp[..., 0] * r[..., 1] - qp[..., 1] * r[..., 0]) / denom
    hit = (denom != 0) & (t >= 0) & (t <= 1) & (u >= 0) & (u <= 1)
    return bool(hit.any())


def chart_angle(t1, t2) -> float:
    """Unsigned angle in [0, pi] between two chart tangent vectors."""
    return abs(math.atan2(t1[0] * t2[1] - t1[1] * t2[0], t1[0] * t2[0] + t1[1] * t2[1]))


@dataclass(frozen=True, eq=False)
class MeasuredTriangle:
    data: TriangleData
    vertices: tuple
    paths: tuple  # (A->B, B->C, C->A)
    curvature_integral: float
    orientation: int
    area_change: float  # |area - area at half the quadrature nodes|

    @property
    def area(self) -> float:
        return self.data.area

    @property
    def gauss_bonnet_residual(self) -> float:
        return self.curvature_integral - (self.data.angle_sum - math.pi)

    def boundary_pieces(self):
        return [(p, 0.0, p.length) for p in self.paths]


def measure_triangle(s: ConformalSurface, A, B, C, n_side: int = SIDE_NODES,
                     n_fan: int = FAN_NODES) -> MeasuredTriangle:
    """Sides, angles, area and total curvature of the geodesic triangle ABC.

    Angles are chart angles between the side tangents (the metric is
    conformal).  Raises GeometryError when the sides cross each other.
    """
    V = tuple(tuple(map(float, v)) for v in (A, B, C))
    if len(set(V)) < 3:
        raise GeometryError("triangle vertices must be distinct")
    ab, bc, ca = (geodesic_connect(s, V[i], V[(i + 1) % 3]) for i in range(3))
    lines = [p.polyline() for p in (ab, bc, ca)]
    for i in range(3):
        if _polylines_cross(lines[i], lines[(i + 1) % 3]) or _polylines_cross(lines[(i + 1) % 3], lines[i]):
            raise GeometryError("triangle sides intersect away from the vertices")

    def out_of(p: GeodesicPath, at_start: bool):
        if at_start:
            return p.start_tangent
        vx, vy = p.end_tangent
        return -vx, -vy

    alpha = chart_angle(out_of(ab, True), out_of(ca, False))
    beta = chart_angle(out_of(bc, True), out_of(ab, False))
    gamma = chart_angle(out_of(ca, True), out_of(bc, False))
    pieces = [(p, 0.0, p.length) for p in (ab, bc, ca)]
    signed = fan_integral(s, pieces, "area", n_side=n_side, n_fan=n_fan)
    coarse = fan_integral(s, pieces, "area", n_side=n_side // 2, n_fan=n_fan // 2)
    orient = 1 if signed > 0 else -1
    curv = orient * fan_integral(s, pieces, "curvature", n_side=n_side, n_fan=n_fan)
    data = TriangleData(bc.length, ca.length, ab.length, alpha, beta, gamma, abs(signed), s.name)
    return MeasuredTriangle(data, V, (ab, bc, ca), curv, orient, abs(abs(signed) - abs(coarse)))


@dataclass(frozen=True)
class DiskMeasurement:
    center: tuple
    radius: float
    rays: int
    perimeter: float
    area: float
    k_minus: float
    perimeter_change: float  # against the disk rebuilt from every other ray
    area_change: float

    @property
    def rhs(self) -> float:
        return reverse_isoperimetric_rhs(self.perimeter, self.k_minus)

    @property
    def margin(self) -> float:
        return self.area - self.rhs

    @property
    def weil_gap(self) -> float:
        """L^2 / 4 pi - area; nonnegative on nonpositively curved disks."""
        return self.perimeter ** 2 / (4.0 * math.pi) - self.area

    def as_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius, "rays": self.rays,
                "perimeter": self.perimeter, "area": self.area, "k_minus": self.k_minus,
                "rhs": self.rhs, "margin": self.margin, "weil_gap": self.weil_gap,
                "perimeter_change": self.perimeter_change, "area_change": self.area_change}


def _disk_from_endpoints(s: ConformalSurface, p, ends: np.ndarray, n_fan: int, oversample: int = 4):
    m = len(ends)
    phi = 2.0 * math.pi * np.arange(m + 1) / m
    spl = CubicSpline(phi, np.vstack([ends, ends[:1]]), bc_type="periodic")
    M = oversample * m
    grid = 2.0 * math.pi * np.arange(M) / M
    pts, vel = spl(grid), spl(grid, 1)
    w = np.full(M, 2.0 * math.pi / M)  # trapezoid rule, spectral for periodic integrands
    speed = np.exp(s.u(pts[:, 0], pts[:, 1])) * np.hypot(vel[:, 0], vel[:, 1])
    L = float(np.dot(w, speed))
    origin = np.asarray(p, float)
    area = _fan(density(s, "area"), origin, pts, vel, w, n_fan)
    kminus = _fan(density(s, "k_minus"), origin, pts, vel, w, n_fan)
    return L, area, kminus


def measure_disk(s: ConformalSurface, p, R: float, rays: int = 256, n_fan: int = FAN_NODES) -> DiskMeasurement:
    """Perimeter, area and total K^- of the geodesic disk of radius R about p.

    The boundary is the periodic cubic spline through the endpoints of
    ``rays`` equally spaced geodesic rays; the change against the spline on
    every other ray is reported as an error estimate.
    """
    if rays < 8 or rays % 2:
        raise ValueError("rays must be an even number >= 8")
    p = tuple(map(float, p))
    ends = np.array([geodesic_shoot(s, p, 2.0 * math.pi * j / rays, R).end for j in range(rays)])
    L, area, km = _disk_from_endpoints(s, p, ends, n_fan)
    L2, area2, _ = _disk_from_endpoints(s, p, ends[::2], n_fan)
    return DiskMeasurement(p, float(R), rays, L, area, km, abs(L - L2), abs(area - area2))
