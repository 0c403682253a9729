"""Metric geometry of the cone of constant curvature ``lam <= 0`` and angle ``theta``.

A point is stored in geodesic polar coordinates ``(r, phi)`` about the apex,
with ``phi`` taken modulo ``theta``.  Away from the apex the cone is locally
isometric to H_lam, so every geodesic that misses the apex develops into a
sector of angular width < pi and is handled with plane trigonometry.

Directions at a regular point ``p`` are encoded by a signed angle ``sigma``
measured from the inward radial direction (pointing at the apex); positive
values turn toward increasing ``phi``.  ``sigma = 0`` aims at the apex,
``sigma = +-pi`` points straight out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import constcurv
from .constcurv import curvature_scale, law_of_cosines
from .errors import ApexOutside, GeometryError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ConeSpec:
    lam: float
    theta: float

    def __post_init__(self):
        curvature_scale(self.lam)
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ValueError(f"cone angle must be positive, got {self.theta!r}")

    @property
    def k(self) -> float:
        return curvature_scale(self.lam)

    @property
    def total_curvature(self) -> float:
        return TWO_PI - self.theta

    @property
    def nonpositively_curved(self) -> bool:
        return self.theta >= TWO_PI


@dataclass(frozen=True)
class ConePoint:
    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"radius must be finite and >= 0, got {self.r!r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"angle must be finite, got {self.phi!r}")

    @property
    def is_apex(self) -> bool:
        return self.r == 0.0


def signed_gap(spec: ConeSpec, p: ConePoint, q: ConePoint) -> float:
    """Angle from ``p`` to ``q`` about the apex, reduced into (-theta/2, theta/2]."""
    d = math.fmod(q.phi - p.phi, spec.theta)
    if d <= -0.5 * spec.theta:
        d += spec.theta
    elif d > 0.5 * spec.theta:
        d -= spec.theta
    return d


def angular_gap(spec: ConeSpec, p: ConePoint, q: ConePoint) -> float:
    return abs(signed_gap(spec, p, q))


def cone_distance(spec: ConeSpec, p: ConePoint, q: ConePoint) -> float:
    """Intrinsic distance on the cone; goes through the apex when the gap exceeds pi."""
    if p.is_apex or q.is_apex:
        return p.r + q.r
    delta = angular_gap(spec, p, q)
    if delta > math.pi:
        return p.r + q.r
    return law_of_cosines(spec.lam, p.r, q.r, delta)


def vertex_disk(spec: ConeSpec, R: float) -> tuple[float, float]:
    """Perimeter and area of the apex-centered disk of radius ``R``."""
    if not (math.isfinite(R) and R > 0):
        raise ValueError(f"radius must be positive, got {R!r}")
    k = spec.k
    if k == 0.0:
        return spec.theta * R, 0.5 * spec.theta * R * R
    L = spec.theta * math.sinh(k * R) / k
    # cosh(kR) - 1 = 2 sinh^2(kR/2), free of cancellation for small kR
    s = math.sinh(0.5 * k * R)
    return L, spec.theta * 2.0 * s * s / (k * k)


def reverse_isoperimetric_rhs(L: float, k_minus: float) -> float:
    """Area lower bound ``L^2 / (4 pi + 2 k_minus)`` for a disk of perimeter ``L``."""
    if not (math.isfinite(L) and L >= 0):
        raise ValueError(f"perimeter must be >= 0, got {L!r}")
    if not (math.isfinite(k_minus) and k_minus >= 0):
        raise ValueError(f"negative-curvature mass must be >= 0, got {k_minus!r}")
    return L * L / (4.0 * math.pi + 2.0 * k_minus)


def hinge(lam: float, r1: float, r2: float, angle: float) -> tuple[float, float, float, float]:
    """Close a hinge, allowing the degenerate openings 0 and pi.

    Returns ``(third_side, angle_at_end1, angle_at_end2, area)``; the angle at
    the end of leg ``r1`` is opposite ``r2`` and vice versa.
    """
    c = law_of_cosines(lam, r1, r2, angle)
    if angle <= 0.0:
        if r1 == r2:
            return 0.0, 0.5 * math.pi, 0.5 * math.pi, 0.0
        return (c, math.pi, 0.0, 0.0) if r1 < r2 else (c, 0.0, math.pi, 0.0)
    if angle >= math.pi:
        return c, 0.0, 0.0, 0.0
    t = constcurv.solve_sas(lam, r1, angle, r2)
    # solve_sas puts r1 at side b (CA) and r2 at side a (CB)
    return c, t.alpha, t.beta, t.area


def direction(spec: ConeSpec, p: ConePoint, q: ConePoint) -> float:
    """Signed direction ``sigma`` at ``p`` of the geodesic toward ``q``."""
    if p.is_apex:
        raise GeometryError("directions are undefined at the apex")
    if q.is_apex:
        return 0.0
    g = signed_gap(spec, p, q)
    if abs(g) >= math.pi:
        return 0.0
    if g == 0.0:
        return 0.0 if q.r <= p.r else math.pi
    _, _, ang_p, _ = hinge(spec.lam, q.r, p.r, abs(g))
    return math.copysign(ang_p, g)


def angle_between(s1: float, s2: float) -> float:
    d = abs(s1 - s2) % TWO_PI
    return min(d, TWO_PI - d)


def vertex_angle(spec: ConeSpec, p: ConePoint, q: ConePoint, s: ConePoint) -> float:
    """Angle at ``p`` between the geodesics to ``q`` and ``s``."""
    return angle_between(direction(spec, p, q), direction(spec, p, s))


def _cyclic_order(spec: ConeSpec, pts):
    order = sorted(range(len(pts)), key=lambda i: pts[i].phi % spec.theta)
    phis = [pts[i].phi % spec.theta for i in order]
    gaps = [phis[(j + 1) % 3] - phis[j] for j in range(3)]
    gaps[2] += spec.theta
    return order, gaps


def apex_inside(spec: ConeSpec, p: ConePoint, q: ConePoint, s: ConePoint) -> bool:
    """True when the apex lies strictly inside the geodesic triangle ``pqs``."""
    pts = (p, q, s)
    if any(x.is_apex for x in pts):
        return False
    _, gaps = _cyclic_order(spec, pts)
    return all(g < math.pi for g in gaps)


def sub_triangles(spec: ConeSpec, p: ConePoint, q: ConePoint, s: ConePoint):
    """Split an apex-enclosing triangle into the three triangles on the apex.

    Returns, in the input vertex order, a list of
    ``(i, j, gap, side, angle_at_i, angle_at_j, area)`` for consecutive vertex
    pairs in the cyclic order about the apex.
    """
    pts = (p, q, s)
    if any(x.is_apex or x.r <= 0 for x in pts):
        raise ApexOutside("the apex must lie strictly inside, not on a vertex")
    order, gaps = _cyclic_order(spec, pts)
    if any(g > math.pi for g in gaps):
        raise ApexOutside(f"cyclic gaps {gaps} exceed pi; apex not enclosed")
    out = []
    for j in range(3):
        i1, i2 = order[j], order[(j + 1) % 3]
        c, a1, a2, area = hinge(spec.lam, pts[i1].r, pts[i2].r, gaps[j])
        out.append((i1, i2, gaps[j], c, a1, a2, area))
    return out


APEX_SNAP = 1e-12


def _snap(p: ConePoint) -> ConePoint:
    return ConePoint(0.0, 0.0) if p.r < APEX_SNAP else p


def _apex_triangle_area(spec: ConeSpec, x: ConePoint, y: ConePoint) -> float:
    g = angular_gap(spec, x, y)
    if g >= math.pi or x.is_apex or y.is_apex:
        return 0.0
    return hinge(spec.lam, x.r, y.r, g)[3]


def cone_triangle_area(spec: ConeSpec, p: ConePoint, q: ConePoint, s: ConePoint) -> float:
    """Area of the geodesic triangle ``pqs`` on the cone.

    Apex-enclosing triangles are the sum of their three apex triangles.  A
    side through the apex contributes nothing and the remaining apex
    triangles tile the region.  Otherwise the triangle sits in a sector of
    width < pi and its area is the absolute signed sum of apex triangles.
    """
    pts = [_snap(p), _snap(q), _snap(s)]
    apexes = [x for x in pts if x.is_apex]
    if apexes:
        rest = [x for x in pts if not x.is_apex]
        return _apex_triangle_area(spec, rest[0], rest[1]) if len(rest) == 2 else 0.0
    pairs = [(0, 1), (1, 2), (2, 0)]
    through = [angular_gap(spec, pts[i], pts[j]) >= math.pi for i, j in pairs]
    if any(through) or apex_inside(spec, *pts):
        return sum(_apex_triangle_area(spec, pts[i], pts[j])
                   for (i, j), t in zip(pairs, through) if not t)
    order, gaps = _cyclic_order(spec, pts)
    big = max(range(3), key=lambda j: gaps[j])
    seq = [order[(big + 1 + j) % 3] for j in range(3)]
    u1 = gaps[(big + 1) % 3]
    u2 = u1 + gaps[(big + 2) % 3]

    def sub(i, j, du):
        return hinge(spec.lam, pts[i].r, pts[j].r, du)[3]

    return abs(sub(seq[0], seq[1], u1) + sub(seq[1], seq[2], u2 - u1) - sub(seq[0], seq[2], u2))


def cone_gauss_bonnet_residual(spec: ConeSpec, p: ConePoint, q: ConePoint, s: ConePoint) -> float:
    """``lam * area + (2 pi - theta) + sum(pi - interior angle) - 2 pi`` for an apex triangle.

    Interior angles and area are assembled from the three apex triangles, so
    the value vanishes up to roundoff for every apex-enclosing triangle.
    """
    subs = sub_triangles(spec, p, q, s)
    interior = [0.0, 0.0, 0.0]
    area = 0.0
    for i1, i2, _, _, a1, a2, ar in subs:
        interior[i1] += a1
        interior[i2] += a2
        area += ar
    turning = sum(math.pi - a for a in interior)
    return spec.lam * area + spec.total_curvature + turning - TWO_PI


# Rays.  A non-radial geodesic ray is a straight line in the Klein chart of
# H_lam centered at the apex (radial coordinate rho = r for lam = 0 and
# tanh(k r) otherwise), drawn in a sector unwrapped about the ray's start.

def _klein(k: float, r: float) -> float:
    return r if k == 0.0 else math.tanh(k * r)


def _klein_inv(k: float, rho: float) -> float:
    return rho if k == 0.0 else math.atanh(rho) / k


def _klein_dist(k: float, x, y) -> float:
    if k == 0.0:
        return math.hypot(x[0] - y[0], x[1] - y[1])
    num = 1.0 - (x[0] * y[0] + x[1] * y[1])
    den = math.sqrt(max((1.0 - x[0] ** 2 - x[1] ** 2) * (1.0 - y[0] ** 2 - y[1] ** 2), 1e-300))
    return math.acosh(max(num / den, 1.0)) / k


@dataclass(frozen=True)
class ConeRay:
    spec: ConeSpec
    start: ConePoint
    sigma: float

    @property
    def radial(self) -> bool:
        return self.sigma == 0.0

    def point_at(self, s: float) -> ConePoint:
        """Point at arclength ``s``; radial rays stop at the apex."""
        p = self.start
        if self.radial:
            return ConePoint(max(p.r - s, 0.0), p.phi)
        a = abs(self.sigma)
        if s == 0.0:
            return p
        c = law_of_cosines(self.spec.lam, p.r, s, a)
        # angle at the apex of the triangle (apex, start, X) is opposite s
        ang_o = constcurv.angle_from_sides(self.spec.lam, s, p.r, c, tol=1e-9) if c > 0 else 0.0
        return ConePoint(c, p.phi + math.copysign(ang_o, self.sigma))

    def _chart(self, rot: float):
        # start and a second point of the ray, in the Klein chart rotated so
        # that phi = rot maps to the positive x-axis direction offset
        k = self.spec.k
        p = self.start
        rho0 = _klein(k, p.r)
        if self.radial:
            return (rho0 * math.cos(rot), rho0 * math.sin(rot)), (0.0, 0.0)
        step = min(p.r, 1.0 if k == 0.0 else 0.5 / k)
        q = self.point_at(step)
        off = q.phi - p.phi
        rho1 = _klein(k, q.r)
        return ((rho0 * math.cos(rot), rho0 * math.sin(rot)),
                (rho1 * math.cos(rot + off), rho1 * math.sin(rot + off)))


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def intersect_rays(r1: ConeRay, r2: ConeRay, tol: float = 1e-12):
    """First intersection of two rays on the same cone.

    Returns ``(point, s1, s2)`` with arclengths along each ray, or None.
    """
    spec = r1.spec
    k = spec.k
    best = None
    base = r1.start.phi
    p0, p1 = r1._chart(0.0)
    d1 = (p1[0] - p0[0], p1[1] - p0[1])
    jmax = int(math.ceil(2 * math.pi / spec.theta)) + 1
    for j in range(-jmax, jmax + 1):
        delta = r2.start.phi + j * spec.theta - base
        if abs(delta) >= 2 * math.pi:
            continue
        q0, q1 = r2._chart(delta)
        d2 = (q1[0] - q0[0], q1[1] - q0[1])
        den = _cross(d1, d2)
        w = (q0[0] - p0[0], q0[1] - p0[1])
        if abs(den) < 1e-15:
            continue
        t1 = _cross(w, d2) / den
        t2 = _cross(w, d1) / den
        if t1 < -tol or t2 < -tol:
            continue
        if (r1.radial and t1 > 1 + tol) or (r2.radial and t2 > 1 + tol):
            continue
        z = (p0[0] + t1 * d1[0], p0[1] + t1 * d1[1])
        rz = math.hypot(*z)
        if k > 0 and rz >= 1.0:
            continue
        if rz < 1e-12:
            point = ConePoint(0.0, 0.0)
            off1 = 0.0
        else:
            off1 = math.atan2(_cross(p0, z), p0[0] * z[0] + p0[1] * z[1]) if math.hypot(*p0) > 0 else 0.0
            off2 = math.atan2(_cross(q0, z), q0[0] * z[0] + q0[1] * z[1]) if math.hypot(*q0) > 0 else 0.0
            if abs(off1 - (delta + off2)) > 1e-9:
                continue
            point = ConePoint(_klein_inv(k, rz), base + off1)
        s1 = _klein_dist(k, p0, z)
        s2 = _klein_dist(k, q0, z)
        if best is None or s1 < best[1]:
            best = (point, s1, s2)
    return best
