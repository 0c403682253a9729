"""Conformal metrics e^{2u}(dx^2 + dy^2) on planar chart domains.

A metric supplies ``u`` and its Laplacian as vectorized functions and the
gradient as a scalar function, which is what the geodesic integrator
calls in its inner loop.  Curvature is K = -e^{-2u} Laplacian(u),
so K dA = -Laplacian(u) dx dy.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.interpolate import RectBivariateSpline

from ..errors import GeometryError


# -- domains ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rectangle:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("empty rectangle")

    def margin(self, x: float, y: float) -> float:
        """Euclidean distance to the boundary, negative outside."""
        return min(x - self.x0, self.x1 - x, y - self.y0, self.y1 - y)

    def contains(self, x: float, y: float) -> bool:
        return self.margin(x, y) > 0

    @property
    def bounds(self):
        return self.x0, self.x1, self.y0, self.y1

    @property
    def inradius(self) -> float:
        return 0.5 * min(self.x1 - self.x0, self.y1 - self.y0)

    @property
    def center(self):
        return 0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)

    def mask(self, X, Y):
        return (X > self.x0) & (X < self.x1) & (Y > self.y0) & (Y < self.y1)


@dataclass(frozen=True)
class Disk:
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("disk radius must be positive")

    def margin(self, x: float, y: float) -> float:
        return self.r - math.hypot(x - self.cx, y - self.cy)

    def contains(self, x: float, y: float) -> bool:
        return self.margin(x, y) > 0

    @property
    def bounds(self):
        return self.cx - self.r, self.cx + self.r, self.cy - self.r, self.cy + self.r

    @property
    def inradius(self) -> float:
        return self.r

    @property
    def center(self):
        return self.cx, self.cy

    def mask(self, X, Y):
        return np.hypot(X - self.cx, Y - self.cy) < self.r


# -- metrics -------------------------------------------------------------------------------

class FlatMetric:
    name = "flat"

    def u(self, x, y):
        return np.zeros(np.broadcast(x, y).shape)

    def grad(self, x, y):
        return 0.0, 0.0

    def laplacian(self, x, y):
        return np.zeros(np.broadcast(x, y).shape)


class PoincareMetric:
    """u = ln(2 / (1 - x^2 - y^2)), curvature -1 on the unit disk."""

    name = "poincare"

    def u(self, x, y):
        return math.log(2.0) - np.log1p(-(np.square(x) + np.square(y)))

    def grad(self, x, y):
        w = 2.0 / (1.0 - x * x - y * y)
        return w * x, w * y

    def laplacian(self, x, y):
        q = 1.0 - (np.square(x) + np.square(y))
        return 4.0 / (q * q)


class GaussBumpMetric:
    """u = c (x^2 + y^2), curvature -4c e^{-2u} < 0."""

    name = "gauss-bump-neg"

    def __init__(self, c: float = 1.0):
        if not c > 0:
            raise ValueError("bump coefficient must be positive")
        self.c = float(c)

    def u(self, x, y):
        return self.c * (np.square(x) + np.square(y))

    def grad(self, x, y):
        return 2.0 * self.c * x, 2.0 * self.c * y

    def laplacian(self, x, y):
        return np.full(np.broadcast(x, y).shape, 4.0 * self.c)


class GridMetric:
    """u sampled on a regular grid, evaluated by a bicubic spline.

    ``values[i][j]`` is u at ``(x0 + i dx, y0 + j dy)``.
    """

    name = "grid"

    def __init__(self, x0, y0, dx, dy, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or min(values.shape) < 4:
            raise GeometryError("grid metric needs at least 4 x 4 samples")
        if not (dx > 0 and dy > 0):
            raise GeometryError("grid spacing must be positive")
        if not np.isfinite(values).all():
            raise GeometryError("grid values must be finite")
        self.x0, self.y0, self.dx, self.dy = float(x0), float(y0), float(dx), float(dy)
        self.values = values
        nx, ny = values.shape
        self.xs = self.x0 + self.dx * np.arange(nx)
        self.ys = self.y0 + self.dy * np.arange(ny)
        self._spl = RectBivariateSpline(self.xs, self.ys, values, kx=3, ky=3, s=0)

    @property
    def domain(self) -> Rectangle:
        return Rectangle(self.xs[0], self.xs[-1], self.ys[0], self.ys[-1])

    def u(self, x, y):
        return self._spl.ev(x, y)

    def grad(self, x, y):
        s = self._spl
        return float(s.ev(x, y, dx=1)), float(s.ev(x, y, dy=1))

    def laplacian(self, x, y):
        return self._spl.ev(x, y, dx=2) + self._spl.ev(x, y, dy=2)

    def to_json(self) -> dict:
        nx, ny = self.values.shape
        return {"shape": [nx, ny], "origin": [self.x0, self.y0], "spacing": [self.dx, self.dy],
                "values": self.values.tolist()}

    @classmethod
    def from_json(cls, d: dict) -> "GridMetric":
        try:
            nx, ny = d["shape"]
            x0, y0 = d["origin"]
            dx, dy = d["spacing"]
            values = np.asarray(d["values"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise GeometryError(f"malformed grid metric: {exc}") from exc
        if values.shape != (nx, ny):
            raise GeometryError(f"grid values have shape {values.shape}, expected {(nx, ny)}")
        return cls(x0, y0, dx, dy, values)


# -- surfaces --------------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureCertificate:
    """Record of a sampled check that K <= lambda0 on the chart."""

    lambda0: float
    max_curvature: float
    margin: float
    grid: tuple
    n_points: int
    tol: float = 1e-12

    @property
    def passed(self) -> bool:
        return self.margin >= -self.tol

    def as_dict(self) -> dict:
        return {"lambda0": self.lambda0, "max_curvature": self.max_curvature, "margin": self.margin,
                "grid": list(self.grid), "n_points": self.n_points, "passed": self.passed}


@dataclass(frozen=True, eq=False)
class ConformalSurface:
    name: str
    metric: object
    domain: object
    certificate: CurvatureCertificate | None = field(default=None)

    def u(self, x, y):
        return self.metric.u(x, y)

    def conformal_factor(self, x, y):
        """e^{u}: metric length per unit Euclidean length."""
        return np.exp(self.metric.u(x, y))

    def contains(self, x: float, y: float) -> bool:
        return self.domain.contains(x, y)

    def curvature(self, x, y):
        """Vectorized K; no domain check."""
        return -np.exp(-2.0 * self.metric.u(x, y)) * self.metric.laplacian(x, y)

    def certified(self, lambda0: float, n: int = 512) -> "ConformalSurface":
        cert = certify_curvature(self, lambda0, n)
        if not cert.passed:
            raise GeometryError(f"K reaches {cert.max_curvature:.6g} > lambda0 = {lambda0:g} on {self.name}")
        return replace(self, certificate=cert)


def curvature_at(s: ConformalSurface, x: float, y: float) -> float:
    if not s.contains(x, y):
        raise GeometryError(f"point ({x:g}, {y:g}) is outside the domain of {s.name}")
    return float(s.curvature(x, y))


def certify_curvature(s: ConformalSurface, lambda0: float, n: int = 512) -> CurvatureCertificate:
    """Sample K on an n x n grid over the domain's bounding box (interior points only)."""
    x0, x1, y0, y1 = s.domain.bounds
    # cell centers, so no sample sits on the domain boundary
    xs = x0 + (x1 - x0) * (np.arange(n) + 0.5) / n
    ys = y0 + (y1 - y0) * (np.arange(n) + 0.5) / n
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    inside = s.domain.mask(X, Y)
    K = s.curvature(X[inside], Y[inside])
    kmax = float(K.max())
    return CurvatureCertificate(float(lambda0), kmax, float(lambda0) - kmax, (n, n), int(inside.sum()))


NAMED_METRICS = ("flat", "poincare", "gauss-bump-neg")


def named_surface(name: str) -> ConformalSurface:
    """Built-in test surfaces.

    The hyperbolic and bump charts are truncated: ``poincare`` to Euclidean
    radius 0.95 (hyperbolic radius ~3.66), ``gauss-bump-neg`` to radius 1.5.
    """
    if name == "flat":
        return ConformalSurface("flat", FlatMetric(), Rectangle(-20.0, 20.0, -20.0, 20.0))
    if name == "poincare":
        return ConformalSurface("poincare", PoincareMetric(), Disk(0.0, 0.0, 0.95))
    if name == "gauss-bump-neg":
        return ConformalSurface("gauss-bump-neg", GaussBumpMetric(1.0), Disk(0.0, 0.0, 1.5))
    raise GeometryError(f"unknown metric {name!r}; choose from {', '.join(NAMED_METRICS)} or a grid file")


def grid_surface(metric: GridMetric, name: str = "grid") -> ConformalSurface:
    return ConformalSurface(name, metric, metric.domain)


def load_surface(spec: str) -> ConformalSurface:
    """A named metric, or a path to a JSON grid file."""
    if spec in NAMED_METRICS:
        return named_surface(spec)
    path = Path(spec)
    if not path.exists():
        raise GeometryError(f"unknown metric {spec!r} (not a built-in name or an existing file)")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise GeometryError(f"{path}: {exc}") from exc
    return grid_surface(GridMetric.from_json(data), path.stem)
