"""Trigonometry of geodesic triangles in the model plane H_lambda, lambda <= 0.

All hyperbolic formulas are written in terms of the generalized sine
``S(x) = sinh(k x) / k`` with ``k = sqrt(-lambda)`` so that the Euclidean
case ``S(x) = x`` is the exact limit and conditioning does not degrade as
``lambda -> 0``.  The Euclidean case nonetheless has its own code path.

Angles are recovered from half-angle forms

    sin^2(A/2) = S((a - b + c)/2) S((a + b - c)/2) / (S(b) S(c))

which avoid the cancellation of the raw cosine law for thin triangles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoSuchTriangle

DEFAULT_TOL = 1e-12


def curvature_scale(lam: float) -> float:
    """Return k = sqrt(-lam) after validating the curvature level."""
    if not math.isfinite(lam):
        raise ValueError(f"curvature must be finite, got {lam!r}")
    if lam > 0:
        raise ValueError(f"only nonpositive curvature is supported, got {lam!r}")
    return math.sqrt(-lam)


def gsin(k: float, x: float) -> float:
    """Generalized sine S(x); x itself when k == 0."""
    if k == 0.0:
        return x
    return math.sinh(k * x) / k


def agsin(k: float, y: float) -> float:
    """Inverse of :func:`gsin`."""
    if k == 0.0:
        return y
    return math.asinh(k * y) / k


def _check_length(name: str, x: float) -> None:
    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x!r}")
    if x < 0:
        raise ValueError(f"{name} must be nonnegative, got {x!r}")


def law_of_cosines(lam: float, r1: float, r2: float, angle: float) -> float:
    """Third side of a geodesic hinge with legs ``r1``, ``r2`` and opening ``angle``.

    Uses ``sinh^2(k d/2) = sinh^2(k (r1 - r2)/2) + sinh(k r1) sinh(k r2) sin^2(angle/2)``,
    an exact rearrangement of the hyperbolic cosine law.
    """
    k = curvature_scale(lam)
    _check_length("r1", r1)
    _check_length("r2", r2)
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle!r}")
    if angle < 0 or angle > math.pi:
        raise ValueError(f"hinge angle must lie in [0, pi], got {angle!r}")
    s = math.sin(0.5 * angle)
    if k == 0.0:
        dr = r1 - r2
        return math.sqrt(dr * dr + 4.0 * r1 * r2 * s * s)
    h = math.sinh(0.5 * k * (r1 - r2))
    q = h * h + math.sinh(k * r1) * math.sinh(k * r2) * s * s
    return 2.0 * math.asinh(math.sqrt(q)) / k


def angle_from_sides(lam: float, opp: float, s1: float, s2: float,
                     tol: float = DEFAULT_TOL) -> float:
    """Angle between sides ``s1`` and ``s2`` opposite to side ``opp``.

    The squared half-angle sine is clamped into [0, 1] when it overshoots by
    at most ``tol``; larger overshoots mean the sides do not close up.
    """
    k = curvature_scale(lam)
    p = 0.5 * (opp - s1 + s2)
    q = 0.5 * (opp + s1 - s2)
    den = gsin(k, s1) * gsin(k, s2)
    if den <= 0:
        raise NoSuchTriangle("adjacent sides must be positive")
    val = gsin(k, p) * gsin(k, q) / den
    if val < -tol or val > 1.0 + tol:
        raise NoSuchTriangle(
            f"sides ({opp}, {s1}, {s2}) violate the triangle inequality")
    val = min(max(val, 0.0), 1.0)
    return 2.0 * math.asin(math.sqrt(val))


def _area_from_sides(k: float, a: float, b: float, c: float) -> float:
    # Heron (Kahan's ordering) for k == 0; hyperbolic L'Huilier otherwise.
    if k == 0.0:
        x, y, z = sorted((a, b, c), reverse=True)
        prod = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z))
        return 0.25 * math.sqrt(max(prod, 0.0))
    s = 0.5 * (a + b + c)
    t = (math.tanh(0.5 * k * s) * math.tanh(0.5 * k * (s - a))
         * math.tanh(0.5 * k * (s - b)) * math.tanh(0.5 * k * (s - c)))
    defect = 4.0 * math.atan(math.sqrt(max(t, 0.0)))
    return defect / (k * k)


@dataclass(frozen=True)
class PlaneTriangle:
    """Geodesic triangle in H_lam; side ``a`` is opposite the angle ``alpha``."""

    lam: float
    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float
    area: float

    def __post_init__(self):
        curvature_scale(self.lam)
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise NoSuchTriangle(f"side {name} must be positive, got {v!r}")
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0 < v < math.pi):
                raise NoSuchTriangle(f"angle {name} must lie in (0, pi), got {v!r}")

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    @property
    def angle_sum(self) -> float:
        return self.alpha + self.beta + self.gamma

    def gauss_bonnet_residual(self) -> float:
        """``(alpha + beta + gamma - pi) - lam * area``; zero up to roundoff."""
        return (self.angle_sum - math.pi) - self.lam * self.area


def _strict_triangle_inequality(a: float, b: float, c: float) -> None:
    for name, v in (("a", a), ("b", b), ("c", c)):
        if not math.isfinite(v) or v <= 0:
            raise NoSuchTriangle(f"side {name} must be positive, got {v!r}")
    if not (a < b + c and b < a + c and c < a + b):
        raise NoSuchTriangle(f"sides ({a}, {b}, {c}) violate the strict triangle inequality")


def solve_sss(lam: float, a: float, b: float, c: float,
              tol: float = DEFAULT_TOL) -> PlaneTriangle:
    """Triangle with the given side lengths."""
    k = curvature_scale(lam)
    _strict_triangle_inequality(a, b, c)
    alpha = angle_from_sides(lam, a, b, c, tol)
    beta = angle_from_sides(lam, b, c, a, tol)
    gamma = angle_from_sides(lam, c, a, b, tol)
    return PlaneTriangle(lam, a, b, c, alpha, beta, gamma, _area_from_sides(k, a, b, c))


def solve_sas(lam: float, r1: float, angle: float, r2: float,
              tol: float = DEFAULT_TOL) -> PlaneTriangle:
    """Close the hinge at C with ``CA = r1`` (side b) and ``CB = r2`` (side a)."""
    if not (0 < angle < math.pi):
        raise NoSuchTriangle(f"hinge angle must lie in (0, pi), got {angle!r}")
    if not (r1 > 0 and r2 > 0):
        raise NoSuchTriangle("hinge legs must be positive")
    k = curvature_scale(lam)
    c = law_of_cosines(lam, r1, r2, angle)
    a, b = r2, r1
    alpha = angle_from_sides(lam, a, b, c, tol)
    beta = angle_from_sides(lam, b, c, a, tol)
    return PlaneTriangle(lam, a, b, c, alpha, beta, angle, _area_from_sides(k, a, b, c))


def solve_asa(lam: float, alpha: float, c: float, beta: float) -> PlaneTriangle:
    """Triangle with base ``AB = c`` and angles ``alpha`` at A, ``beta`` at B.

    In H_lam with lam < 0 the two rays may fail to meet even when
    ``alpha + beta < pi``: the apex exists iff
    ``cos^2((alpha + beta)/2) > sin(alpha) sin(beta) sinh^2(k c / 2)``.
    """
    k = curvature_scale(lam)
    if not (math.isfinite(c) and c > 0):
        raise NoSuchTriangle(f"base must be positive, got {c!r}")
    if not (alpha > 0 and beta > 0):
        raise NoSuchTriangle("base angles must be positive")
    if alpha + beta >= math.pi:
        raise NoSuchTriangle(f"alpha + beta = {alpha + beta} >= pi")
    sa, sb = math.sin(alpha), math.sin(beta)
    if k == 0.0:
        gamma = math.pi - alpha - beta
        sg = math.sin(gamma)
        a = c * sa / sg
        b = c * sb / sg
    else:
        ch = math.cos(0.5 * (alpha + beta))
        sh = math.sinh(0.5 * k * c)
        s2 = ch * ch - sa * sb * sh * sh
        if s2 <= 0:
            raise NoSuchTriangle("the rays from the base do not meet in H_lambda")
        gamma = 2.0 * math.asin(math.sqrt(min(s2, 1.0)))
        sg = math.sin(gamma)
        sc = gsin(k, c)
        a = agsin(k, sc * sa / sg)
        b = agsin(k, sc * sb / sg)
    return PlaneTriangle(lam, a, b, c, alpha, beta, gamma, _area_from_sides(k, a, b, c))


def triangle_area(t: PlaneTriangle) -> float:
    """Area of ``t``: Heron for lam = 0, angle defect over k^2 otherwise."""
    k = curvature_scale(t.lam)
    if k == 0.0:
        return _area_from_sides(0.0, t.a, t.b, t.c)
    return (math.pi - t.angle_sum) / (k * k)


def angle_derivatives(lam: float, opp: float, s1: float, s2: float, angle: float,
                      far1: float, far2: float) -> tuple[float, float, float]:
    """Partial derivatives of ``angle`` with respect to ``(opp, s1, s2)``.

    ``far1`` is the angle at the far end of side ``s1`` and ``far2`` the one
    at the far end of ``s2``.  With ``d = S(opp) / (S(s1) S(s2) sin(angle))``
    the partials are ``(d, -cos(far1) d, -cos(far2) d)``.
    """
    k = curvature_scale(lam)
    d = gsin(k, opp) / (gsin(k, s1) * gsin(k, s2) * math.sin(angle))
    return d, -math.cos(far1) * d, -math.cos(far2) * d
