"""Verifiers that pair a measured triangle with its comparison triangle."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DecompositionFailed, NonexistentComparisonTriangle
from .core import ConeTriangle, TriangleData, TriangleReport, cone_comparison_triangle

PI = math.pi


def right_triangle_split(source):
    """The two right triangles cut from the source's triangle by its height from C.

    Each comes back as TriangleData with the base vertex at A, the original
    C at B and the foot H at C, so ``alpha`` is the base angle, ``beta`` the
    part of gamma and ``gamma`` the right angle.
    """
    return source.height_split()


@dataclass(frozen=True)
class Decomposition:
    parts: tuple  # (delta_a, delta_b, delta_c) as TriangleData
    leftover_area: float

    @property
    def part_areas(self) -> tuple:
        return tuple(p.area for p in self.parts)


def decompose_triangle(source, splits: ConeTriangle, area: float | None = None) -> Decomposition:
    """Cut the source's triangle by rays at the comparison triangle's split angles.

    Triangle ``delta_x`` sits on side x with the two split angles adjacent to
    x; the leftover area is ``area(triangle) - sum of the three``.
    """
    if area is None:
        area = source.measure().area
    da = source.base_triangle("a", splits.beta1, splits.gamma2)
    db = source.base_triangle("b", splits.gamma1, splits.alpha2)
    dc = source.base_triangle("c", splits.alpha1, splits.beta2)
    return Decomposition((da, db, dc), area - (da.area + db.area + dc.area))


def verify_triangle_theorem(source, lambda0: float, tol: float | None = None,
                            data: TriangleData | None = None, decompose: bool = True) -> TriangleReport:
    """Compare the source's triangle with its cone comparison triangle.

    A missing comparison triangle is reported through ``error`` instead of a
    margin.  For lambda0 < 0 the cone angle comes out of the solve; the
    report records both it and 3 pi - (alpha + beta + gamma).
    """
    tol = getattr(source, "tol", 1e-7) if tol is None else tol
    if data is None:
        data = source.measure()
    prescribed = 3 * PI - data.angle_sum
    try:
        ct = cone_comparison_triangle(lambda0, data)
    except NonexistentComparisonTriangle as exc:
        return TriangleReport(data.area, None, None, theta_prescribed=prescribed, error=str(exc))
    margin = data.area - ct.area
    notes = []
    if ct.degenerate:
        notes.append("flat data: comparison triangle is the Euclidean triangle, theta = 2 pi")
    elif lambda0 < 0:
        notes.append(f"lambda0 < 0: solved theta differs from 3pi - angle sum by {ct.theta - prescribed:.3e}")
    leftover = None
    if decompose:
        try:
            dec = decompose_triangle(source, ct, data.area)
            leftover = dec.leftover_area
            if margin < leftover - tol:
                notes.append(f"margin {margin:.3e} below leftover area {leftover:.3e}")
        except DecompositionFailed as exc:
            notes.append(f"decomposition failed: {exc}")
    return TriangleReport(data.area, ct.area, margin, leftover, abs(margin) < tol,
                          ct.theta, prescribed, None, tuple(notes))
