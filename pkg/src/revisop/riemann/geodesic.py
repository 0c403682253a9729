"""Geodesics of a conformal metric by ODE integration.

With velocity v in chart coordinates the geodesic equation of
e^{2u}(dx^2 + dy^2) is

    x'' = -2 (grad u . v) v + |v|^2 grad u,

and unit metric speed means e^{u} |v| = 1.  Paths are parametrized by
metric arc length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import DomainExit, GeometryError, NoConvergence
from .metrics import ConformalSurface

RTOL = 1e-11
ATOL = 1e-12
METHOD = "DOP853"
CONNECT_TOL = 1e-12
CONNECT_MAX_ITER = 40
FD_STEP = 1e-7


@dataclass(frozen=True, eq=False)
class GeodesicPath:
    """Unit-speed geodesic; ``states`` rows are (x, y, dx/ds, dy/ds) at ``s``."""

    surface: ConformalSurface
    s: np.ndarray
    states: np.ndarray
    length: float
    sol: object
    exited: bool = False

    @property
    def start(self):
        return float(self.states[0, 0]), float(self.states[0, 1])

    @property
    def end(self):
        return float(self.states[-1, 0]), float(self.states[-1, 1])

    @property
    def start_tangent(self):
        return float(self.states[0, 2]), float(self.states[0, 3])

    @property
    def end_tangent(self):
        return float(self.states[-1, 2]), float(self.states[-1, 3])

    @property
    def points(self) -> np.ndarray:
        return self.states[:, :2]

    def state_at(self, s) -> np.ndarray:
        """Dense-output state(s) at arc length ``s``; shape (4,) or (4, n)."""
        return self.sol(np.clip(s, 0.0, self.length))

    def point_at(self, s: float):
        z = self.state_at(s)
        return float(z[0]), float(z[1])

    def direction_at(self, s: float) -> float:
        z = self.state_at(s)
        return math.atan2(z[3], z[2])

    def speed_drift(self) -> float:
        """max |e^{u} |v| - 1| over the integrator's steps."""
        x, y, vx, vy = self.states.T
        speed = np.exp(self.surface.u(x, y)) * np.hypot(vx, vy)
        return float(np.abs(speed - 1.0).max())

    def polyline(self, n: int = 129) -> np.ndarray:
        s = np.linspace(0.0, self.length, n)
        return self.state_at(s)[:2].T


def _rhs(metric):
    grad = metric.grad

    def f(_, z):
        x, y, vx, vy = z
        ux, uy = grad(x, y)
        d = ux * vx + uy * vy
        w = vx * vx + vy * vy
        return [vx, vy, w * ux - 2.0 * d * vx, w * uy - 2.0 * d * vy]

    return f


def geodesic_shoot(s: ConformalSurface, start, angle: float, length: float,
                   on_exit: str = "raise", rtol: float = RTOL, atol: float = ATOL) -> GeodesicPath:
    """Integrate the unit-speed geodesic from ``start`` leaving at chart angle ``angle``.

    ``on_exit="raise"`` raises DomainExit when the path leaves the chart;
    ``"stop"`` returns the path truncated at the boundary with ``exited`` set.
    """
    x0, y0 = map(float, start)
    if not s.contains(x0, y0):
        raise GeometryError(f"start point ({x0:g}, {y0:g}) is outside the domain of {s.name}")
    if not (math.isfinite(length) and length > 0):
        raise ValueError(f"length must be positive, got {length!r}")
    if on_exit not in ("raise", "stop"):
        raise ValueError("on_exit must be 'raise' or 'stop'")
    w = math.exp(-float(s.u(x0, y0)))
    z0 = [x0, y0, w * math.cos(angle), w * math.sin(angle)]
    domain = s.domain

    def leave(_, z):
        return domain.margin(z[0], z[1])

    leave.terminal = True
    leave.direction = -1
    sol = solve_ivp(_rhs(s.metric), (0.0, float(length)), z0, method=METHOD, rtol=rtol, atol=atol,
                    dense_output=True, events=leave)
    if sol.status == -1:
        raise NoConvergence(f"geodesic integration failed: {sol.message}")
    exited = sol.status == 1
    if exited and on_exit == "raise":
        loc = tuple(map(float, sol.y_events[0][0][:2]))
        raise DomainExit(f"geodesic left the domain of {s.name} at ({loc[0]:.6g}, {loc[1]:.6g})", loc)
    return GeodesicPath(s, sol.t, sol.y.T.copy(), float(sol.t[-1]), sol.sol, exited)


def _endpoint(s, p, phi, ell):
    path = geodesic_shoot(s, p, phi, ell)
    return path, np.array(path.end)


def chord_length(s: ConformalSurface, p, q, n: int = 32) -> float:
    """Metric length of the straight chart segment p -> q (Gauss-Legendre)."""
    t, w = np.polynomial.legendre.leggauss(n)
    t = 0.5 * (t + 1.0)
    p, q = np.asarray(p, float), np.asarray(q, float)
    pts = p + t[:, None] * (q - p)
    return float(0.5 * np.dot(w, np.exp(s.u(pts[:, 0], pts[:, 1]))) * np.linalg.norm(q - p))


def geodesic_connect(s: ConformalSurface, p, q, tol: float = CONNECT_TOL,
                     max_iter: int = CONNECT_MAX_ITER) -> GeodesicPath:
    """The geodesic from p to q, by Newton's method on (initial angle, length).

    The angle column of the Jacobian is a forward difference of the endpoint;
    the length column is the end velocity.  Steps that leave the chart or do
    not reduce the miss are halved.
    """
    p = tuple(map(float, p))
    q = tuple(map(float, q))
    for pt in (p, q):
        if not s.contains(*pt):
            raise GeometryError(f"point ({pt[0]:g}, {pt[1]:g}) is outside the domain of {s.name}")
    target = np.array(q)
    scale = max(1.0, float(np.abs(target).max()))
    if math.hypot(q[0] - p[0], q[1] - p[1]) == 0.0:
        raise GeometryError("endpoints coincide")
    phi = math.atan2(q[1] - p[1], q[0] - p[0])
    ell = chord_length(s, p, q)
    path, end = _endpoint(s, p, phi, ell)
    miss = float(np.linalg.norm(end - target))
    for _ in range(max_iter):
        if miss <= tol * scale:
            return path
        _, end_h = _endpoint(s, p, phi + FD_STEP, ell)
        J = np.column_stack([(end_h - end) / FD_STEP, path.end_tangent])
        try:
            step = np.linalg.solve(J, target - end)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular shooting Jacobian: {exc}") from exc
        lam = 1.0
        for _ in range(30):
            phi_n, ell_n = phi + lam * step[0], ell + lam * step[1]
            if ell_n > 0:
                try:
                    cand, end_n = _endpoint(s, p, phi_n, ell_n)
                except DomainExit:
                    cand = None
                if cand is not None:
                    miss_n = float(np.linalg.norm(end_n - target))
                    if miss_n < miss or miss_n <= tol * scale:
                        break
            lam *= 0.5
        else:
            raise NoConvergence(f"shooting from {p} to {q} stalled at miss {miss:.3e}")
        phi, ell, path, end, miss = phi_n, ell_n, cand, end_n, miss_n
    if miss <= 1e3 * tol * scale:
        return path
    raise NoConvergence(f"shooting from {p} to {q} did not converge (miss {miss:.3e})")


def geodesic_distance(s: ConformalSurface, p, q) -> float:
    return geodesic_connect(s, p, q).length
