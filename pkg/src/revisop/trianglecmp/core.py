"""Comparison triangles in constant curvature planes and cones."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import constcurv
from ..cone import ConeSpec
from ..constcurv import PlaneTriangle, angle_derivatives, solve_asa, solve_sas, solve_sss
from ..errors import NonexistentComparisonTriangle, NoSuchTriangle

PI = math.pi

# residual tolerance of the apex solve and the number of multistart seeds
SOLVE_TOL = 1e-11
MULTISTARTS = 8
MAX_ITER = 200


@dataclass(frozen=True)
class TriangleData:
    """Side lengths, angles and (optionally) area of a measured triangle.

    ``a`` is opposite the vertex A carrying ``alpha``, and so on.
    """

    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float
    area: float | None = None
    source: str = ""
    angle_tol: float = field(default=1e-9, repr=False, compare=False)

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise NoSuchTriangle(f"side {name} must be positive, got {v!r}")
        a, b, c = self.a, self.b, self.c
        if not (a < b + c and b < a + c and c < a + b):
            raise NoSuchTriangle(f"sides ({a}, {b}, {c}) violate the strict triangle inequality")
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not (0 < v < PI):
                raise NoSuchTriangle(f"angle {name} must lie in (0, pi), got {v!r}")
        if self.angle_sum > PI + self.angle_tol:
            raise NoSuchTriangle(f"angle sum {self.angle_sum} exceeds pi; not nonpositively curved")

    @classmethod
    def from_plane(cls, t: PlaneTriangle, source: str | None = None) -> "TriangleData":
        return cls(t.a, t.b, t.c, t.alpha, t.beta, t.gamma, t.area,
                   source if source is not None else f"H({t.lam:g})")

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    @property
    def angle_sum(self) -> float:
        return self.alpha + self.beta + self.gamma

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "alpha": self.alpha, "beta": self.beta,
                "gamma": self.gamma, "area": self.area, "source": self.source}


@dataclass(frozen=True)
class TriangleReport:
    area_lhs: float | None
    area_rhs: float | None
    margin: float | None
    leftover_area: float | None = None
    equality: bool = False
    theta: float | None = None
    theta_prescribed: float | None = None
    error: str | None = None
    notes: tuple = ()

    @property
    def ok(self) -> bool:
        return self.error is None

    def as_dict(self) -> dict:
        return {
            "area_lhs": self.area_lhs,
            "area_rhs": self.area_rhs,
            "margin": self.margin,
            "leftover_area_X": self.leftover_area,
            "equality": self.equality,
            "theta": self.theta,
            "theta_prescribed": self.theta_prescribed,
            "error": self.error,
            "notes": list(self.notes),
        }


# -- base-angle comparison ---------------------------------------------------------

def comparison_base_angles(lambda0: float, base_c: float, alpha: float, beta: float) -> PlaneTriangle:
    """Triangle of H_lambda0 with base ``base_c`` and adjacent angles ``alpha``, ``beta``."""
    return solve_asa(lambda0, alpha, base_c, beta)


def verify_base_angle_inequality(delta: TriangleData, lambda0: float, tol: float = 1e-7) -> TriangleReport:
    """area(delta) against the base-angle comparison triangle in H_lambda0."""
    if delta.area is None:
        raise ValueError("the triangle's area must be supplied by its measuring source")
    cmp = comparison_base_angles(lambda0, delta.c, delta.alpha, delta.beta)
    margin = delta.area - cmp.area
    same_sides = abs(cmp.a - delta.a) < tol and abs(cmp.b - delta.b) < tol
    return TriangleReport(delta.area, cmp.area, margin, equality=abs(margin) < tol and same_sides)


def right_triangle_split_constant(lam: float, delta: TriangleData):
    """Split a triangle of H_lam by its height from C (both base angles acute).

    Returns two right triangles as PlaneTriangles with the right angle at C
    (their vertex C is the foot H), vertex A at the base vertex and vertex B
    at the original C; so ``alpha`` is the base angle and ``beta`` the part
    of gamma.
    """
    if not (delta.alpha < PI / 2 and delta.beta < PI / 2):
        raise NoSuchTriangle("both base angles must be acute")
    k = constcurv.curvature_scale(lam)
    out = []
    for ang, side in ((delta.alpha, delta.b), (delta.beta, delta.a)):
        if k == 0.0:
            foot = side * math.cos(ang)
            height = side * math.sin(ang)
        else:
            foot = math.atanh(math.tanh(k * side) * math.cos(ang)) / k
            height = math.asinh(math.sinh(k * side) * math.sin(ang)) / k
        out.append(solve_sas(lam, foot, PI / 2, height))
    return out[0], out[1]


def glue_right_triangles(t1: PlaneTriangle, t2: PlaneTriangle, lambda0: float) -> PlaneTriangle:
    """Glue two right triangles of H_lambda0 along their feet.

    Each input has its right angle at C, base leg ``b`` (from the foot to
    the base vertex A) and height leg ``a``.  The glued base has length
    ``b1 + b2``; the result is the triangle on that base with the two base
    angles, i.e. the union when the heights agree and otherwise the triangle
    obtained by extending the shorter hypotenuse.
    """
    for t in (t1, t2):
        if abs(t.gamma - PI / 2) > 1e-9:
            raise ValueError("inputs must be right-angled at C")
    try:
        return solve_asa(lambda0, t1.alpha, t1.b + t2.b, t2.alpha)
    except NoSuchTriangle as exc:
        raise NoSuchTriangle(f"hypotenuses diverge: {exc}") from exc


# -- cone comparison -----------------------------------------------------------------

@dataclass(frozen=True)
class ConeTriangle:
    """Triangle on a cone with the apex inside, split into three apex triangles.

    Sub-triangle ``x`` in {a, b, c} contains side x; ``psi_x`` is its angle at
    the apex.  ``alpha1``/``alpha2`` are the parts of alpha adjacent to sides
    c/b, ``beta1``/``beta2`` to a/c and ``gamma1``/``gamma2`` to b/a.
    """

    spec: ConeSpec
    a: float
    b: float
    c: float
    dA: float
    dB: float
    dC: float
    psi_a: float
    psi_b: float
    psi_c: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    gamma1: float
    gamma2: float
    sub_areas: tuple
    area: float
    degenerate: bool = False
    iterations: int = 0
    residual: float = 0.0

    @property
    def theta(self) -> float:
        return self.spec.theta

    @property
    def alpha(self) -> float:
        return self.alpha1 + self.alpha2

    @property
    def beta(self) -> float:
        return self.beta1 + self.beta2

    @property
    def gamma(self) -> float:
        return self.gamma1 + self.gamma2

    @property
    def apex_distances(self) -> tuple[float, float, float]:
        return (self.dA, self.dB, self.dC)

    def sub_triangles(self):
        """The apex triangles (a, b, c) of H_lambda0, apex at vertex A of each."""
        if self.degenerate:
            raise ValueError("flat comparison triangle has no apex split")
        return _subs(self.spec.lam, self.a, self.b, self.c, self.apex_distances)

    def gauss_bonnet_residual(self) -> float:
        """lambda0 * area - (theta + alpha + beta + gamma - 3 pi); zero for any solve."""
        return self.spec.lam * self.area - (self.theta + self.alpha + self.beta + self.gamma - 3 * PI)

    def as_dict(self) -> dict:
        return {
            "lambda0": self.spec.lam, "theta": self.theta,
            "dA": self.dA, "dB": self.dB, "dC": self.dC,
            "psi": [self.psi_a, self.psi_b, self.psi_c],
            "splits": {"alpha": [self.alpha1, self.alpha2], "beta": [self.beta1, self.beta2],
                       "gamma": [self.gamma1, self.gamma2]},
            "area": self.area, "degenerate": self.degenerate,
            "iterations": self.iterations, "residual": self.residual,
        }


def _subs(lam: float, a: float, b: float, c: float, d):
    """Apex triangles for apex distances ``d = (dA, dB, dC)``, apex at vertex A of each.

    ta = (O, B, C), tb = (O, C, A), tc = (O, A, B), so e.g. ``ta.beta`` is the
    angle at B and ``ta.gamma`` the angle at C.
    """
    dA, dB, dC = d
    return (solve_sss(lam, a, dC, dB), solve_sss(lam, b, dA, dC), solve_sss(lam, c, dB, dA))


def _residual(data: TriangleData, subs) -> np.ndarray:
    ta, tb, tc = subs
    return np.array([tb.gamma + tc.beta - data.alpha,
                     ta.beta + tc.gamma - data.beta,
                     ta.gamma + tb.beta - data.gamma])


# (row, sub-triangle, corner) for each residual term; columns of b', c' per sub-triangle
_TERMS = ((0, 1, "gamma"), (0, 2, "beta"), (1, 0, "beta"), (1, 2, "gamma"), (2, 0, "gamma"), (2, 1, "beta"))
_LEG_COLS = ((2, 1), (0, 2), (1, 0))


def _jacobian(lam: float, subs) -> np.ndarray:
    J = np.zeros((3, 3))
    for row, m, corner in _TERMS:
        t = subs[m]
        col_b, col_c = _LEG_COLS[m]
        if corner == "beta":
            ang, opp, leg, base, far_base = t.beta, t.b, t.c, t.a, t.gamma
            c_opp, c_leg = col_b, col_c
        else:
            ang, opp, leg, base, far_base = t.gamma, t.c, t.b, t.a, t.beta
            c_opp, c_leg = col_c, col_b
        # the apex-side leg ends at the apex, whose angle is t.alpha
        d_opp, d_leg, _ = angle_derivatives(lam, opp, leg, base, ang, t.alpha, far_base)
        J[row, c_opp] += d_opp
        J[row, c_leg] += d_leg
    return J


def _try_subs(lam, data, d):
    if np.any(d <= 0) or not np.all(np.isfinite(d)):
        return None
    try:
        return _subs(lam, data.a, data.b, data.c, d)
    except NoSuchTriangle:
        return None


def _newton(lam: float, data: TriangleData, d0: np.ndarray, tol: float, max_iter: int):
    d = d0.copy()
    subs = _try_subs(lam, data, d)
    if subs is None:
        return None
    F = _residual(data, subs)
    nrm = float(np.abs(F).max())
    stalled = 0
    for it in range(1, max_iter + 1):
        if nrm < tol:
            return d, subs, nrm, it - 1
        try:
            step = np.linalg.solve(_jacobian(lam, subs), -F)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        h = 1.0
        for _ in range(40):
            trial = d + h * step
            ts = _try_subs(lam, data, trial)
            if ts is not None:
                Ft = _residual(data, ts)
                nt = float(np.abs(Ft).max())
                if nt < nrm or nt < tol:
                    # heavily damped steps that barely help mean a boundary sink
                    stalled = stalled + 1 if (h < 1e-3 and nt > 0.999 * nrm) else 0
                    d, subs, F, nrm = trial, ts, Ft, nt
                    break
            h *= 0.5
        else:
            return None
        if stalled >= 5:
            return None
    return (d, subs, nrm, max_iter) if nrm < tol else None


def _mobius(p: complex, z: complex) -> complex:
    # isometry of the unit disk taking 0 to p with unit derivative direction
    return (z + p) / (1 + p.conjugate() * z)


def _mobius_inv(p: complex, z: complex) -> complex:
    return (z - p) / (1 - p.conjugate() * z)


def _development_seed(lam: float, data: TriangleData):
    """Apex distances from unrolling the cone along the ray to A.

    The chain A -> B -> C -> A' is rigid given the sides and the angles at B
    and C.  Gluing A' back to A with interior angle alpha is an isometry
    whose fixed point is the apex.  Returns None when that isometry has no
    fixed point or the apex is not to the left of every side.
    """
    k = constcurv.curvature_scale(lam)
    a, b, c = data.a, data.b, data.c
    if k == 0.0:
        A1 = 0j
        B = complex(c, 0.0)
        h1 = PI - data.beta
        C = B + a * complex(math.cos(h1), math.sin(h1))
        h2 = h1 + PI - data.gamma
        A2 = C + b * complex(math.cos(h2), math.sin(h2))
        rot = complex(math.cos(h2 + PI - data.alpha), math.sin(h2 + PI - data.alpha))
        if abs(1 - rot) < 1e-14:
            return None
        O = A2 / (1 - rot)
        pts = (A1, B, C, A2)
        dist = [abs(z - O) for z in pts]
        vecs = [z - O for z in pts]
    else:
        # Poincare disk of curvature -1 with lengths scaled by k
        A1 = 0j
        B = complex(math.tanh(0.5 * k * c), 0.0)
        hb = math.atan2(*reversed(_xy(_mobius_inv(B, A1))))
        C = _mobius(B, math.tanh(0.5 * k * a) * _cis(hb - data.beta))
        hc = math.atan2(*reversed(_xy(_mobius_inv(C, B))))
        A2 = _mobius(C, math.tanh(0.5 * k * b) * _cis(hc - data.gamma))
        ha = math.atan2(*reversed(_xy(_mobius_inv(A2, C))))
        e = _cis(ha - data.alpha)
        # fixed points of z -> mobius(A2, e z)
        qa = A2.conjugate() * e
        qb = 1 - e
        qc = -A2
        if abs(qa) < 1e-15:
            return None
        disc = np.sqrt(complex(qb * qb - 4 * qa * qc))
        roots = [(-qb + disc) / (2 * qa), (-qb - disc) / (2 * qa)]
        inside = [z for z in roots if abs(z) < 1 - 1e-14]
        if len(inside) != 1:
            return None
        O = inside[0]
        pts = (A1, B, C, A2)
        dist = [2.0 * math.atanh(abs(_mobius_inv(O, z))) / k for z in pts]
        vecs = [_mobius_inv(O, z) for z in pts]
    for u, v in zip(vecs, vecs[1:]):
        if (u.conjugate() * v).imag <= 0:
            return None
    d = np.array([dist[0], dist[1], dist[2]])
    return d if np.all(d > 0) else None


def _cis(x: float) -> complex:
    return complex(math.cos(x), math.sin(x))


def _xy(z: complex):
    return (z.real, z.imag)


def _flat_comparison(data: TriangleData) -> ConeTriangle:
    # apex placed at the incenter, which splits every angle in half
    t = solve_sss(0.0, data.a, data.b, data.c)
    s = 0.5 * (t.a + t.b + t.c)
    rin = t.area / s
    dA, dB, dC = (rin / math.sin(0.5 * x) for x in (t.alpha, t.beta, t.gamma))
    psi = (PI - 0.5 * (t.beta + t.gamma), PI - 0.5 * (t.gamma + t.alpha), PI - 0.5 * (t.alpha + t.beta))
    return ConeTriangle(ConeSpec(0.0, 2 * PI), t.a, t.b, t.c, dA, dB, dC, *psi,
                        0.5 * t.alpha, 0.5 * t.alpha, 0.5 * t.beta, 0.5 * t.beta,
                        0.5 * t.gamma, 0.5 * t.gamma,
                        (0.5 * rin * t.a, 0.5 * rin * t.b, 0.5 * rin * t.c), t.area, degenerate=True)


def cone_comparison_triangle(lambda0: float, data: TriangleData, tol: float = SOLVE_TOL,
                             starts: int = MULTISTARTS, max_iter: int = MAX_ITER,
                             seed: int = 0) -> ConeTriangle:
    """Triangle on a cone of curvature ``lambda0`` with the sides and angles of ``data``.

    Solves for the apex distances with damped Newton.  The first seed comes
    from unrolling the cone (exact up to roundoff when the triangle exists);
    then ``d_i = (sum of the two sides at vertex i) / 2`` and up to ``starts``
    perturbed copies of it.  The cone angle is the sum of the three apex angles.
    Data with angle sum pi (to 1e-12) gives the flat triangle, flagged
    ``degenerate``.  Failure raises NonexistentComparisonTriangle.
    """
    constcurv.curvature_scale(lambda0)
    if data.angle_sum >= PI - 1e-12:
        return _flat_comparison(data)
    seed0 = 0.5 * np.array([data.b + data.c, data.a + data.c, data.a + data.b])
    rng = np.random.default_rng(seed)
    seeds = [seed0] + [seed0 * rng.uniform(0.25, 1.5, size=3) for _ in range(starts)]
    dev = _development_seed(lambda0, data)
    if dev is not None:
        seeds.insert(0, dev)
    found = None
    for d0 in seeds:
        found = _newton(lambda0, data, d0, tol, max_iter)
        if found is not None:
            break
    if found is None:
        raise NonexistentComparisonTriangle(
            f"no apex placement found from {len(seeds)} starts (lambda0={lambda0})")
    d, subs, nrm, iters = found
    # polish: plain Newton steps while they keep improving
    for _ in range(3):
        try:
            trial = d + np.linalg.solve(_jacobian(lambda0, subs), -_residual(data, subs))
        except np.linalg.LinAlgError:
            break
        ts = _try_subs(lambda0, data, trial)
        if ts is None:
            break
        nt = float(np.abs(_residual(data, ts)).max())
        if nt >= nrm:
            break
        d, subs, nrm = trial, ts, nt
    ta, tb, tc = subs
    theta = ta.alpha + tb.alpha + tc.alpha
    area = ta.area + tb.area + tc.area
    return ConeTriangle(ConeSpec(lambda0, theta), data.a, data.b, data.c, *map(float, d),
                        ta.alpha, tb.alpha, tc.alpha,
                        tc.beta, tb.gamma, ta.beta, tc.gamma, tb.beta, ta.gamma,
                        (ta.area, tb.area, tc.area), area, iterations=iters, residual=nrm)
