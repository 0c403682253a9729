"""Surfaces that can measure a triangle and cut it along interior rays.

A source measures one fixed triangle ABC.  Besides :meth:`measure` it
answers two geometric queries used by the verifiers:

``base_triangle(side, angle1, angle2)``
    the triangle on one side of ABC cut off by the two rays leaving the
    side's endpoints into the triangle at the given angles from the side
    (side "a" runs B -> C, "b" runs C -> A, "c" runs A -> B).  Raises
    DecompositionFailed when the rays do not meet inside ABC.

``height_split()``
    the two right triangles cut off by the perpendicular from C to AB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .. import cone as _cone
from ..cone import ConePoint, ConeRay, ConeSpec
from ..constcurv import solve_asa, solve_sss
from ..errors import DecompositionFailed, NoSuchTriangle
from .core import TriangleData, right_triangle_split_constant

PI = math.pi
TWO_PI = 2.0 * PI

# ray directions this close to the apex direction are taken as exactly radial
APEX_DIRECTION_SNAP = 1e-10

_SIDES = {"a": (1, 2, 0), "b": (2, 0, 1), "c": (0, 1, 2)}


def _right_data(t, source: str) -> TriangleData:
    return TriangleData(t.a, t.b, t.c, t.alpha, t.beta, t.gamma, t.area, source)


@dataclass(frozen=True)
class ConstantCurvatureSource:
    """Triangle with sides a, b, c in the plane H_lam (lam = 0 is Euclidean)."""

    lam: float
    a: float
    b: float
    c: float
    tol: float = 1e-9

    @property
    def name(self) -> str:
        return "flat" if self.lam == 0 else f"hyperbolic({self.lam:g})"

    def _triangle(self):
        return solve_sss(self.lam, self.a, self.b, self.c)

    def measure(self) -> TriangleData:
        return TriangleData.from_plane(self._triangle(), self.name)

    def base_triangle(self, side: str, angle1: float, angle2: float) -> TriangleData:
        t = self._triangle()
        i, j, _ = _SIDES[side]
        full = t.angles
        length = t.sides[_SIDES[side][2]]
        if not (0 < angle1 < full[i] + 1e-12 and 0 < angle2 < full[j] + 1e-12):
            raise DecompositionFailed("split angles must lie inside the triangle's angles")
        # in a convex triangle of H_lam the two rays always cross inside it
        try:
            sub = solve_asa(self.lam, angle1, length, angle2)
        except NoSuchTriangle as exc:
            raise DecompositionFailed(str(exc)) from exc
        return TriangleData.from_plane(sub, self.name)

    def height_split(self):
        t1, t2 = right_triangle_split_constant(self.lam, self.measure())
        return _right_data(t1, self.name), _right_data(t2, self.name)


def _wrap(x: float) -> float:
    # into (-pi, pi]
    y = math.remainder(x, TWO_PI)
    return PI if y == -PI else y


@dataclass(frozen=True)
class ConeSource:
    """Triangle with vertices A, B, C on the cone ``spec``."""

    spec: ConeSpec
    A: ConePoint
    B: ConePoint
    C: ConePoint
    tol: float = 1e-9

    @property
    def name(self) -> str:
        return f"cone(lam={self.spec.lam:g}, theta={self.spec.theta / PI:.6g}pi)"

    @property
    def vertices(self):
        return (self.A, self.B, self.C)

    def measure(self) -> TriangleData:
        s, (A, B, C) = self.spec, self.vertices
        return TriangleData(
            _cone.cone_distance(s, B, C), _cone.cone_distance(s, C, A), _cone.cone_distance(s, A, B),
            _cone.vertex_angle(s, A, B, C), _cone.vertex_angle(s, B, C, A), _cone.vertex_angle(s, C, A, B),
            _cone.cone_triangle_area(s, A, B, C), self.name)

    def contains_apex(self) -> bool:
        return _cone.apex_inside(self.spec, *self.vertices)

    def _ray_into(self, p: ConePoint, toward: ConePoint, other: ConePoint, angle: float) -> ConeRay:
        # ray at p turned from the direction of ``toward`` by ``angle`` toward ``other``
        s_to = _cone.direction(self.spec, p, toward)
        s_other = _cone.direction(self.spec, p, other)
        sign = 1.0 if _wrap(s_other - s_to) > 0 else -1.0
        sigma = _wrap(s_to + sign * angle)
        if abs(sigma) < APEX_DIRECTION_SNAP:
            sigma = 0.0
        return ConeRay(self.spec, p, sigma)

    def _exit_length(self, ray: ConeRay, q: ConePoint, r: ConePoint) -> float:
        # where a ray from p leaves the triangle through the side q -> r
        side = ConeRay(self.spec, q, _cone.direction(self.spec, q, r))
        hit = _cone.intersect_rays(ray, side, tol=1e-12)
        if hit is None:
            return math.inf if ray.radial else -math.inf
        return hit[1]

    def base_triangle(self, side: str, angle1: float, angle2: float) -> TriangleData:
        i, j, m = _SIDES[side]
        V = self.vertices
        P, Q, R = V[i], V[j], V[m]
        full = self.measure().angles
        if not (0 < angle1 < full[i] + 1e-12 and 0 < angle2 < full[j] + 1e-12):
            raise DecompositionFailed("split angles must lie inside the triangle's angles")
        r1 = self._ray_into(P, Q, R, angle1)
        r2 = self._ray_into(Q, P, R, angle2)
        hit = _cone.intersect_rays(r1, r2, tol=1e-12)
        if hit is None:
            raise DecompositionFailed(f"rays from the ends of side {side} do not meet")
        X, s1, s2 = hit
        slack = 1e-9 * (1.0 + s1 + s2)
        if s1 > self._exit_length(r1, Q, R) + slack or s2 > self._exit_length(r2, R, P) + slack:
            raise DecompositionFailed(f"rays from the ends of side {side} meet outside the triangle")
        base = _cone.cone_distance(self.spec, P, Q)
        if X.is_apex:
            ang_x = _cone.angular_gap(self.spec, P, Q)
        else:
            ang_x = _cone.vertex_angle(self.spec, X, P, Q)
        area = _cone.cone_triangle_area(self.spec, P, Q, X)
        return TriangleData(s2, s1, base, angle1, angle2, ang_x, area, self.name)

    def height_split(self):
        s, (A, B, C) = self.spec, self.vertices
        data = self.measure()
        if not (data.alpha < PI / 2 and data.beta < PI / 2):
            raise NoSuchTriangle("both base angles must be acute")
        ray = ConeRay(s, A, _cone.direction(s, A, B))

        def g(t):
            h = ray.point_at(t)
            return _cone.vertex_angle(s, h, A, C) - PI / 2

        eps = 1e-9 * data.c
        foot = brentq(g, eps, data.c - eps, xtol=1e-15, rtol=1e-15)
        H = ray.point_at(foot)
        out = []
        for P, ang in ((A, data.alpha), (B, data.beta)):
            base = _cone.cone_distance(s, P, H)
            height = _cone.cone_distance(s, C, H)
            top = _cone.vertex_angle(s, C, P, H)
            right = _cone.vertex_angle(s, H, P, C)
            area = _cone.cone_triangle_area(s, P, C, H)
            full = _cone.cone_distance(s, P, C)
            out.append(TriangleData(height, base, full, ang, top, right, area, self.name))
        return out[0], out[1]
