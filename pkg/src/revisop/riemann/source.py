"""Geodesic triangles on conformal surfaces as inputs to the comparison verifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from ..errors import DecompositionFailed, GeometryError, NoConvergence, NoSuchTriangle
from ..trianglecmp.core import TriangleData
from .geodesic import GeodesicPath, geodesic_connect, geodesic_shoot
from .measure import MeasuredTriangle, chart_angle, fan_integral, measure_triangle
from .metrics import ConformalSurface

_SIDES = {"a": (1, 2, 0), "b": (2, 0, 1), "c": (0, 1, 2)}


def _first_crossing(a: np.ndarray, b: np.ndarray):
    # first segment pair (i, j) along a where polylines a and b cross, with parameters
    p, r = a[:-1, None, :], (a[1:] - a[:-1])[:, None, :]
    q, sv = b[None, :-1, :], (b[1:] - b[:-1])[None, :, :]
    denom = r[..., 0] * sv[..., 1] - r[..., 1] * sv[..., 0]
    qp = q - p
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qp[..., 0] * sv[..., 1] - qp[..., 1] * sv[..., 0]) / denom
        u = (qp[..., 0] * r[..., 1] - qp[..., 1] * r[..., 0]) / denom
    hit = (denom != 0) & (t >= 0) & (t <= 1) & (u >= 0) & (u <= 1)
    idx = np.argwhere(hit)
    if len(idx) == 0:
        return None
    i, j = idx[np.argmin(idx[:, 0] + t[hit])]
    return int(i), int(j), float(t[i, j]), float(u[i, j])


def _inside(pt, polygon: np.ndarray) -> bool:
    # even-odd rule
    x, y = pt
    xs, ys = polygon[:, 0], polygon[:, 1]
    xn, yn = np.roll(xs, -1), np.roll(ys, -1)
    cond = (ys > y) != (yn > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xc = xs + (y - ys) * (xn - xs) / (yn - ys)
    return bool(np.count_nonzero(cond & (x < xc)) % 2)


def intersect_geodesics(r1: GeodesicPath, r2: GeodesicPath, n: int = 513, tol: float = 1e-13):
    """First crossing of two paths: (point, s1, s2) or None."""
    s1g = np.linspace(0.0, r1.length, n)
    s2g = np.linspace(0.0, r2.length, n)
    a = r1.state_at(s1g)[:2].T
    b = r2.state_at(s2g)[:2].T
    hit = _first_crossing(a, b)
    if hit is None:
        return None
    i, j, t, u = hit
    s1 = s1g[i] + t * (s1g[i + 1] - s1g[i])
    s2 = s2g[j] + u * (s2g[j + 1] - s2g[j])
    for _ in range(20):
        z1, z2 = r1.state_at(s1), r2.state_at(s2)
        F = z1[:2] - z2[:2]
        if np.abs(F).max() < tol:
            break
        J = np.column_stack([z1[2:], -z2[2:]])
        d = np.linalg.solve(J, -F)
        s1, s2 = s1 + d[0], s2 + d[1]
    if not (0.0 <= s1 <= r1.length and 0.0 <= s2 <= r2.length):
        return None
    return r1.point_at(s1), float(s1), float(s2)


@dataclass(frozen=True, eq=False)
class ConformalSource:
    """Geodesic triangle ABC (chart points) on a conformal surface."""

    surface: ConformalSurface
    A: tuple
    B: tuple
    C: tuple
    tol: float = 1e-6

    @property
    def name(self) -> str:
        return f"conformal({self.surface.name})"

    @cached_property
    def measured(self) -> MeasuredTriangle:
        return measure_triangle(self.surface, self.A, self.B, self.C)

    def measure(self) -> TriangleData:
        return self.measured.data

    @property
    def vertices(self):
        return self.measured.vertices

    def _side(self, i: int, j: int):
        # (path, s_from, s_to) running from vertex i to vertex j along the triangle side
        paths = self.measured.paths
        if j == (i + 1) % 3:
            p = paths[i]
            return p, 0.0, p.length
        p = paths[j]
        return p, p.length, 0.0

    def _tangent(self, i: int, j: int):
        p, s0, _ = self._side(i, j)
        z = p.state_at(s0)
        return (z[2], z[3]) if s0 == 0.0 else (-z[2], -z[3])

    def _ray(self, i: int, j: int, m: int, angle: float, length: float) -> GeodesicPath:
        # ray at vertex i turned from side i->j by ``angle`` toward vertex m
        t_to, t_other = self._tangent(i, j), self._tangent(i, m)
        sign = 1.0 if t_to[0] * t_other[1] - t_to[1] * t_other[0] > 0 else -1.0
        phi = math.atan2(t_to[1], t_to[0]) + sign * angle
        return geodesic_shoot(self.surface, self.vertices[i], phi, length, on_exit="stop")

    def _polygon(self, n: int = 257) -> np.ndarray:
        return np.vstack([p.polyline(n)[:-1] for p in self.measured.paths])

    def base_triangle(self, side: str, angle1: float, angle2: float) -> TriangleData:
        i, j, m = _SIDES[side]
        data = self.measure()
        full = data.angles
        if not (0 < angle1 < full[i] + 1e-12 and 0 < angle2 < full[j] + 1e-12):
            raise DecompositionFailed("split angles must lie inside the triangle's angles")
        reach = sum(data.sides)
        r1 = self._ray(i, j, m, angle1, reach)
        r2 = self._ray(j, i, m, angle2, reach)
        hit = intersect_geodesics(r1, r2)
        if hit is None:
            raise DecompositionFailed(f"rays from the ends of side {side} do not meet")
        X, s1, s2 = hit
        if not _inside(X, self._polygon()):
            raise DecompositionFailed(f"rays from the ends of side {side} meet outside the triangle")
        z1, z2 = r1.state_at(s1), r2.state_at(s2)
        ang_x = chart_angle(-z1[2:], -z2[2:])
        base = data.sides[m]
        pieces = [self._side(i, j), (r2, 0.0, s2), (r1, s1, 0.0)]
        area = abs(fan_integral(self.surface, pieces, "area"))
        return TriangleData(s2, s1, base, angle1, angle2, ang_x, area, self.name)

    def height_split(self):
        data = self.measure()
        if not (data.alpha < math.pi / 2 and data.beta < math.pi / 2):
            raise NoSuchTriangle("both base angles must be acute")
        ab, _, _ = self._side(0, 1)
        C = self.vertices[2]

        def foot_angle(s):
            z = ab.state_at(s)
            hc = geodesic_connect(self.surface, (z[0], z[1]), C)
            return chart_angle((-z[2], -z[3]), hc.start_tangent) - math.pi / 2

        eps = 1e-9 * data.c
        try:
            s = brentq(foot_angle, eps, data.c - eps, xtol=1e-14, rtol=1e-15)
        except ValueError as exc:
            raise NoConvergence(f"no perpendicular foot on AB: {exc}") from exc
        H = ab.point_at(s)
        hc = geodesic_connect(self.surface, H, C)
        zh = ab.state_at(s)
        right = chart_angle((-zh[2], -zh[3]), hc.start_tangent)
        right_b = chart_angle((zh[2], zh[3]), hc.start_tangent)
        to_h = tuple(-v for v in hc.end_tangent)
        out = []
        for vtx, base, ang, rt in ((0, s, data.alpha, right), (1, data.c - s, data.beta, right_b)):
            cside = self._side(2, vtx)
            top = chart_angle(self._tangent(2, vtx), to_h)
            pieces = [(ab, s, 0.0 if vtx == 0 else data.c), self._side(vtx, 2), (hc, hc.length, 0.0)]
            area = abs(fan_integral(self.surface, pieces, "area"))
            full = cside[0].length
            out.append(TriangleData(hc.length, base, full, ang, top, rt, area, self.name))
        return out[0], out[1]


def random_chart_triangle(s: ConformalSurface, rng: np.random.Generator, radius: float | None = None,
                          min_angle: float = 0.3, center=None):
    """Three chart points in a disk about ``center`` whose chart triangle has all angles >= min_angle."""
    cx, cy = s.domain.center if center is None else center
    radius = 0.6 * s.domain.inradius if radius is None else radius
    for _ in range(10000):
        r = radius * np.sqrt(rng.uniform(0.0, 1.0, 3))
        a = rng.uniform(0.0, 2.0 * math.pi, 3)
        P = np.column_stack([cx + r * np.cos(a), cy + r * np.sin(a)])
        e = [P[(k + 1) % 3] - P[k] for k in range(3)]
        angs = [chart_angle(-e[k - 1], e[k]) for k in range(3)]
        if min(angs) >= min_angle:
            return tuple(map(tuple, P.tolist()))
    raise GeometryError("could not sample a triangle with the requested angles")
