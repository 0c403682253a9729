"""Seeded trials shared by the command line and the acceptance suite.

Every trial draws from its own generator ``default_rng([seed, index])`` so
results do not depend on the order (or process) in which trials run.
"""

from __future__ import annotations

import math

import numpy as np

from . import cone as _cone
from .cone import ConePoint, ConeSpec
from .errors import GeometryError
from .plsurf import (
    check_level_length_bound,
    cone_disk,
    gauss_bonnet_residual,
    geodesic_distance,
    level_curve_profile,
    random_disk_case,
    verify_disk_inequality,
)
from .trianglecmp import ConeSource, ConstantCurvatureSource, verify_triangle_theorem

PI = math.pi

PL_SWEEP_COLUMNS = ("trial", "theta", "base", "radius", "perimeter", "area", "omega_minus", "rhs",
                    "margin", "relative_margin", "level_violation", "relative_level_violation",
                    "gauss_bonnet_residual", "refinement_level", "tolerance", "passed")

TRIANGLE_SWEEP_COLUMNS = ("trial", "source", "a", "b", "c", "alpha", "beta", "gamma", "area",
                          "area_rhs", "margin", "theta", "theta_prescribed", "leftover_area",
                          "tolerance", "status")

CONVERGENCE_COLUMNS = ("refinement_level", "perimeter", "area", "rhs", "margin", "relative_margin",
                       "exact_perimeter", "exact_area")


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def pl_trial(seed: int, index: int, refinement_level: int = 16, tol: float = 0.02,
             profile_samples: int = 17) -> dict:
    """One random nonpositively curved PL disk: reverse isoperimetric and level-length checks."""
    rng = trial_rng(seed, index)
    case = random_disk_case(rng, refinement_level)
    s = case.surface
    rep = verify_disk_inequality(s, case.base, case.radius, refinement_level, field=case.field)
    prof = level_curve_profile(s, case.base, case.radius, profile_samples, refinement_level, field=case.field)
    L0 = prof[0][1]
    viol = check_level_length_bound(prof, L0, rep.omega_minus_total)
    rel_viol = viol / L0 if L0 > 0 else 0.0
    gb = gauss_bonnet_residual(s)
    passed = rep.margin >= -tol * rep.area and rel_viol >= -tol and not rep.touches_boundary
    return {"trial": index, "theta": case.theta, "base": case.base, "radius": case.radius,
            "perimeter": rep.perimeter, "area": rep.area, "omega_minus": rep.omega_minus_total,
            "rhs": rep.rhs, "margin": rep.margin, "relative_margin": rep.relative_margin,
            "level_violation": viol, "relative_level_violation": rel_viol,
            "gauss_bonnet_residual": gb, "refinement_level": refinement_level, "tolerance": tol,
            "passed": passed}


def random_hyperbolic_source(rng: np.random.Generator, lam: float = -1.0,
                             side_range=(0.2, 3.0)) -> ConstantCurvatureSource:
    while True:
        a, b, c = rng.uniform(*side_range, 3)
        if a < b + c and b < a + c and c < a + b:
            return ConstantCurvatureSource(lam, float(a), float(b), float(c))


def random_cone_triangle(rng: np.random.Generator, lam: float = 0.0, theta_range=(2 * PI, 4 * PI),
                         radius_range=(0.3, 2.0), min_gap: float = 0.01):
    """A random apex-enclosing triangle on a cone with angle drawn from ``theta_range``.

    Apex-enclosing triangles need every angular gap below pi, so draws with
    theta >= 3 pi - 3 min_gap are rejected and redrawn.  The gaps are uniform
    on {sum = theta, each < pi - min_gap}, which is itself a simplex and is
    sampled directly rather than by rejection.
    """
    hi = min(theta_range[1], 3 * PI - 3 * min_gap)
    if hi <= theta_range[0]:
        raise GeometryError("no apex-enclosing triangles for this cone angle range")
    while True:
        theta = float(rng.uniform(*theta_range))
        if theta < hi:
            break
    cap = PI - min_gap
    while True:
        gaps = cap - (3 * cap - theta) * rng.dirichlet([1.0, 1.0, 1.0])
        if gaps.min() > 0:  # only binds when theta < 2 cap
            break
    phi = np.cumsum([0.0, gaps[0], gaps[1]])
    r = rng.uniform(*radius_range, 3)
    spec = ConeSpec(lam, theta)
    pts = tuple(ConePoint(float(r[i]), float(phi[i])) for i in range(3))
    return ConeSource(spec, *pts)


def random_flat_source(rng: np.random.Generator) -> ConstantCurvatureSource:
    return random_hyperbolic_source(rng, 0.0, (0.5, 3.0))


def triangle_row(index: int, source, lambda0: float) -> dict:
    rep = verify_triangle_theorem(source, lambda0)
    d = source.measure()
    status = "nonexistent" if rep.error else ("pass" if rep.margin >= -source.tol else "fail")
    return {"trial": index, "source": source.name, "a": d.a, "b": d.b, "c": d.c, "alpha": d.alpha,
            "beta": d.beta, "gamma": d.gamma, "area": d.area, "area_rhs": rep.area_rhs,
            "margin": rep.margin, "theta": rep.theta, "theta_prescribed": rep.theta_prescribed,
            "leftover_area": rep.leftover_area, "tolerance": source.tol, "status": status}


def triangle_trial(seed: int, index: int, source_kind: str, lambda0: float,
                   curvature: float | None = None, metric: str = "gauss-bump-neg") -> dict:
    rng = trial_rng(seed, index)
    if source_kind == "hyperbolic":
        src = random_hyperbolic_source(rng, -1.0 if curvature is None else curvature)
    elif source_kind == "flat":
        src = random_flat_source(rng)
    elif source_kind == "cone":
        src = random_cone_triangle(rng, lambda0 if curvature is None else curvature)
    elif source_kind == "conformal":
        from .riemann import ConformalSource, load_surface, random_chart_triangle

        surface = load_surface(metric)
        src = ConformalSource(surface, *random_chart_triangle(surface, rng, 0.6 * surface.domain.inradius))
    else:
        raise ValueError(f"unknown source {source_kind!r}")
    return triangle_row(index, src, lambda0)


def cone_convergence(theta: float, radius: float, levels, rings: int = 6) -> list[dict]:
    """Apex disk of a PL cone at several refinement levels against the closed form."""
    s, _ = cone_disk(theta, radius=1.5 * radius, rings=rings)
    L_ex, A_ex = _cone.vertex_disk(ConeSpec(0.0, theta), radius)
    rows = []
    for n in levels:
        field = geodesic_distance(s, 0, n)
        rep = verify_disk_inequality(s, 0, radius, n, field=field)
        rows.append({"refinement_level": n, "perimeter": rep.perimeter, "area": rep.area, "rhs": rep.rhs,
                     "margin": rep.margin, "relative_margin": rep.relative_margin,
                     "exact_perimeter": L_ex, "exact_area": A_ex})
    return rows


def cone_info(theta: float, lam: float, radius: float) -> dict:
    """Apex disk of the cone C_lam^theta and its reverse isoperimetric margin."""
    spec = ConeSpec(lam, theta)
    L, A = _cone.vertex_disk(spec, radius)
    # curvature measure: atom 2 pi - theta at the apex plus lam dA elsewhere
    k_minus = max(theta - 2 * PI, 0.0) + (-lam) * A
    rhs = _cone.reverse_isoperimetric_rhs(L, k_minus)
    return {"theta": theta, "lambda": lam, "radius": radius, "perimeter": L, "area": A,
            "total_curvature": spec.total_curvature + lam * A, "k_minus": k_minus, "rhs": rhs,
            "margin": A - rhs, "relative_margin": (A - rhs) / A}
