import json
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from revisop.constcurv import solve_asa
from revisop.errors import DomainExit, GeometryError
from revisop.riemann import (
    ConformalSource,
    GridMetric,
    certify_curvature,
    curvature_at,
    geodesic_connect,
    geodesic_shoot,
    grid_surface,
    intersect_geodesics,
    load_surface,
    measure_disk,
    measure_triangle,
    named_surface,
    random_chart_triangle,
)
from revisop.riemann.measure import _polylines_cross
from revisop.trianglecmp import right_triangle_split, verify_triangle_theorem

FLAT = named_surface("flat")
POINCARE = named_surface("poincare")
BUMP = named_surface("gauss-bump-neg")


def hyperbolic_distance(p, q):
    p, q = np.asarray(p), np.asarray(q)
    d2 = float(np.sum((p - q) ** 2))
    return math.acosh(1 + 2 * d2 / ((1 - p @ p) * (1 - q @ q)))


# -- curvature ------------------------------------------------------------------------------------

def test_flat_curvature_zero():
    assert curvature_at(FLAT, 1.0, -3.0) == 0.0


def test_poincare_curvature_symbolic_oracle():
    sp = pytest.importorskip("sympy")
    x, y = sp.symbols("x y", real=True)
    u = sp.log(2 / (1 - x ** 2 - y ** 2))
    K = sp.lambdify((x, y), sp.simplify(-sp.exp(-2 * u) * (sp.diff(u, x, 2) + sp.diff(u, y, 2))))
    rng = np.random.default_rng(0)
    for _ in range(50):
        r, a = 0.9 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi)
        px, py = r * math.cos(a), r * math.sin(a)
        assert curvature_at(POINCARE, px, py) == pytest.approx(float(K(px, py)), abs=1e-8)
        assert curvature_at(POINCARE, px, py) == pytest.approx(-1.0, abs=1e-8)


def test_bump_curvature():
    for px, py in [(0, 0), (0.3, -0.7), (1.1, 0.2)]:
        assert curvature_at(BUMP, px, py) == pytest.approx(-4 * math.exp(-2 * (px * px + py * py)), rel=1e-14)


def test_curvature_outside_domain():
    with pytest.raises(GeometryError):
        curvature_at(POINCARE, 0.96, 0.0)


def test_certificates():
    assert certify_curvature(FLAT, 0.0, n=64).passed
    cert = certify_curvature(BUMP, 0.0, n=128)
    assert cert.passed and cert.margin > 0
    assert cert.max_curvature == pytest.approx(-4 * math.exp(-2 * 1.5 ** 2), rel=0.05)
    assert certify_curvature(POINCARE, -1.0, n=64).passed
    assert not certify_curvature(POINCARE, -1.5, n=64).passed
    assert POINCARE.certified(-1.0, n=32).certificate.lambda0 == -1.0
    with pytest.raises(GeometryError):
        BUMP.certified(-1.0, n=32)


def quadratic_grid(c=1.0, n=41, half=1.5):
    xs = np.linspace(-half, half, n)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    return GridMetric(-half, -half, xs[1] - xs[0], xs[1] - xs[0], c * (X ** 2 + Y ** 2))


def test_grid_metric_reproduces_quadratic():
    s = grid_surface(quadratic_grid())
    for px, py in [(0.1, 0.2), (-0.4, 0.9), (1.0, -1.0)]:
        assert curvature_at(s, px, py) == pytest.approx(curvature_at(BUMP, px, py), rel=1e-9)


def test_grid_metric_json_round_trip(tmp_path):
    g = quadratic_grid(0.5, n=9, half=1.0)
    path = tmp_path / "bump.json"
    path.write_text(json.dumps(g.to_json()))
    s = load_surface(str(path))
    assert s.name == "bump"
    assert np.array_equal(s.metric.values, g.values)
    assert curvature_at(s, 0.2, 0.1) == pytest.approx(curvature_at(grid_surface(g), 0.2, 0.1))


def test_grid_metric_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"shape": [4, 4], "origin": [0, 0], "spacing": [1, 1], "values": [[0] * 4] * 3}))
    with pytest.raises(GeometryError):
        load_surface(str(bad))
    with pytest.raises(GeometryError):
        load_surface("no-such-metric")


# -- geodesics -----------------------------------------------------------------------------------

def test_flat_shoot_is_straight():
    p = geodesic_shoot(FLAT, (1.0, 2.0), 0.7, 3.0)
    assert p.end == pytest.approx((1 + 3 * math.cos(0.7), 2 + 3 * math.sin(0.7)), abs=1e-12)
    assert p.length == 3.0


def test_poincare_radial_shoot():
    for L in (0.5, 1.0, 2.5):
        p = geodesic_shoot(POINCARE, (0.0, 0.0), 1.1, L)
        x, y = p.end
        assert math.hypot(x, y) == pytest.approx(math.tanh(L / 2), abs=1e-10)
        assert math.atan2(y, x) == pytest.approx(1.1, abs=1e-10)


def test_unit_speed_drift():
    for s, start in ((POINCARE, (0.2, -0.3)), (BUMP, (0.4, 0.1))):
        for ang in np.linspace(0, 2 * math.pi, 7)[:-1]:
            p = geodesic_shoot(s, start, ang, 1.5)
            assert p.speed_drift() < 1e-9 * p.length


def test_bump_shoot_self_convergence():
    # reference: same equations, 100x tighter tolerance and bounded steps
    start, ang, L = (0.3, -0.2), 0.8, 1.2
    p = geodesic_shoot(BUMP, start, ang, L)
    w = math.exp(-(start[0] ** 2 + start[1] ** 2))

    def f(_, z):
        x, y, vx, vy = z
        ux, uy = 2 * x, 2 * y
        d = ux * vx + uy * vy
        return [vx, vy, (vx * vx + vy * vy) * ux - 2 * d * vx, (vx * vx + vy * vy) * uy - 2 * d * vy]

    ref = solve_ivp(f, (0, L), [*start, w * math.cos(ang), w * math.sin(ang)], method="DOP853",
                    rtol=1e-13, atol=1e-14, max_step=L / 1000)
    assert np.abs(np.array(p.end) - ref.y[:2, -1]).max() < 1e-8


def test_domain_exit():
    with pytest.raises(DomainExit) as exc:
        geodesic_shoot(POINCARE, (0.0, 0.0), 0.0, 10.0)
    assert exc.value.location[0] == pytest.approx(0.95, abs=1e-8)
    p = geodesic_shoot(POINCARE, (0.0, 0.0), 0.0, 10.0, on_exit="stop")
    assert p.exited and p.length == pytest.approx(2 * math.atanh(0.95), rel=1e-8)


def test_connect_flat_segment():
    p = geodesic_connect(FLAT, (0.0, 0.0), (3.0, 4.0))
    assert p.length == pytest.approx(5.0, rel=1e-12)


def test_connect_poincare_diameter():
    p = geodesic_connect(POINCARE, (-0.5, 0.0), (0.7, 0.0))
    assert p.length == pytest.approx(2 * math.atanh(0.5) + 2 * math.atanh(0.7), rel=1e-11)
    assert np.abs(p.states[:, 1]).max() < 1e-12


def test_connect_poincare_random_pairs():
    rng = np.random.default_rng(4)
    for _ in range(20):
        p, q = rng.uniform(-0.6, 0.6, (2, 2))
        path = geodesic_connect(POINCARE, p, q)
        assert path.length == pytest.approx(hyperbolic_distance(p, q), rel=1e-9)


def test_connect_bump_hits_target():
    rng = np.random.default_rng(5)
    for _ in range(20):
        p, q = rng.uniform(-0.9, 0.9, (2, 2))
        path = geodesic_connect(BUMP, p, q)
        assert np.hypot(*(np.array(path.end) - q)) < 1e-9
        back = geodesic_connect(BUMP, q, p)
        assert back.length == pytest.approx(path.length, rel=1e-10)


def test_intersect_flat_rays():
    r1 = geodesic_shoot(FLAT, (0.0, 0.0), math.pi / 4, 5.0)
    r2 = geodesic_shoot(FLAT, (2.0, 0.0), 3 * math.pi / 4, 5.0)
    X, s1, s2 = intersect_geodesics(r1, r2)
    assert X == pytest.approx((1.0, 1.0), abs=1e-12)
    assert s1 == pytest.approx(math.sqrt(2), abs=1e-12) and s2 == pytest.approx(math.sqrt(2), abs=1e-12)


def test_polyline_crossing_helper():
    a = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
    b = np.array([[0.0, 2.0], [2.0, 0.0]])
    assert _polylines_cross(a, b, skip_ends=0)
    assert not _polylines_cross(a, b + 5.0, skip_ends=0)


# -- triangles -----------------------------------------------------------------------------------

def test_measure_flat_345():
    m = measure_triangle(FLAT, (0, 0), (4, 0), (0, 3))
    d = m.data
    assert (d.a, d.b, d.c) == pytest.approx((5, 3, 4), rel=1e-12)
    assert d.alpha == pytest.approx(math.pi / 2, abs=1e-12)
    assert d.area == pytest.approx(6.0, rel=1e-12)
    assert m.curvature_integral == 0.0


def test_measure_poincare_symmetric_triangle():
    V = [(0.5 * math.cos(a), 0.5 * math.sin(a)) for a in (0.1, 0.1 + 2 * math.pi / 3, 0.1 + 4 * math.pi / 3)]
    m = measure_triangle(POINCARE, *V)
    d = m.data
    assert d.area == pytest.approx(math.pi - d.angle_sum, abs=1e-5)
    assert d.alpha == pytest.approx(d.beta, abs=1e-10) and d.beta == pytest.approx(d.gamma, abs=1e-10)
    assert d.a == pytest.approx(hyperbolic_distance(V[1], V[2]), rel=1e-10)


def test_measure_orientation_independent():
    V = [(0.5, -0.2), (0.1, 0.6), (-0.6, 0.1)]
    m1 = measure_triangle(BUMP, *V)
    m2 = measure_triangle(BUMP, V[0], V[2], V[1])
    assert m1.orientation == -m2.orientation
    assert m1.area == pytest.approx(m2.area, rel=1e-12)
    assert m1.curvature_integral == pytest.approx(m2.curvature_integral, rel=1e-10)


def test_bump_gauss_bonnet():
    rng = np.random.default_rng(6)
    for _ in range(10):
        m = measure_triangle(BUMP, *random_chart_triangle(BUMP, rng, 0.9))
        assert abs(m.gauss_bonnet_residual) < 1e-4
        assert m.curvature_integral < 0
        assert m.data.angle_sum < math.pi


def test_degenerate_vertices_rejected():
    with pytest.raises(GeometryError):
        measure_triangle(FLAT, (0, 0), (0, 0), (1, 1))


# -- disks -------------------------------------------------------------------------------------

def test_flat_disk():
    d = measure_disk(FLAT, (1.0, -2.0), 1.0, rays=256)
    assert d.perimeter == pytest.approx(2 * math.pi, rel=1e-3)
    assert d.area == pytest.approx(math.pi, rel=1e-3)
    assert d.k_minus == 0.0


@pytest.mark.parametrize("center", [(0.0, 0.0), (0.3, -0.2)])
def test_poincare_disk(center):
    # every point of H_{-1} is a center of symmetry
    d = measure_disk(POINCARE, center, 1.0, rays=256)
    assert d.perimeter == pytest.approx(2 * math.pi * math.sinh(1), rel=1e-3)
    assert d.area == pytest.approx(2 * math.pi * (math.cosh(1) - 1), rel=1e-3)
    assert d.k_minus == pytest.approx(d.area, rel=1e-9)
    assert d.perimeter_change < 1e-5 and d.area_change < 1e-5


def test_bump_disk_signs():
    d = measure_disk(BUMP, (0.2, 0.1), 0.3, rays=128)
    assert d.perimeter >= 2 * math.pi * 0.3
    assert d.weil_gap >= 0
    assert d.margin >= 0


def test_disk_rays_validation():
    with pytest.raises(ValueError):
        measure_disk(FLAT, (0, 0), 1.0, rays=7)


# -- conformal sources -------------------------------------------------------------------------

def test_flat_source_base_triangle_matches_asa():
    src = ConformalSource(FLAT, (0.0, 0.0), (4.0, 0.0), (1.0, 3.0))
    data = src.measure()
    sub = src.base_triangle("c", 0.5 * data.alpha, 0.4 * data.beta)
    ref = solve_asa(0.0, 0.5 * data.alpha, data.c, 0.4 * data.beta)
    assert sub.area == pytest.approx(ref.area, rel=1e-10)
    assert sub.gamma == pytest.approx(ref.gamma, abs=1e-10)
    assert (sub.a, sub.b) == pytest.approx((ref.a, ref.b), rel=1e-10)


def test_flat_source_height_split():
    src = ConformalSource(FLAT, (0.0, 0.0), (4.0, 0.0), (1.0, 3.0))
    t1, t2 = right_triangle_split(src)
    assert (t1.a, t1.b) == pytest.approx((3.0, 1.0), rel=1e-10)
    assert (t2.a, t2.b) == pytest.approx((3.0, 3.0), rel=1e-10)
    assert t1.area == pytest.approx(1.5, rel=1e-10) and t2.area == pytest.approx(4.5, rel=1e-10)
    assert t1.gamma == pytest.approx(math.pi / 2, abs=1e-10)


def test_poincare_source_equality_case():
    src = ConformalSource(POINCARE, (0.5, -0.2), (0.1, 0.6), (-0.6, 0.1))
    rep = verify_triangle_theorem(src, -1.0)
    assert abs(rep.margin) < 1e-8
    assert rep.theta == pytest.approx(2 * math.pi, abs=1e-8)
    strict = verify_triangle_theorem(src, 0.0)
    assert strict.margin > 0


def test_poincare_height_split_additive():
    src = ConformalSource(POINCARE, (0.5, -0.2), (0.1, 0.6), (-0.6, 0.1))
    d = src.measure()
    t1, t2 = right_triangle_split(src)
    assert t1.area + t2.area == pytest.approx(d.area, abs=1e-9)
    assert t1.beta + t2.beta == pytest.approx(d.gamma, abs=1e-9)
    assert t1.b + t2.b == pytest.approx(d.c, abs=1e-9)
    assert t1.gamma == pytest.approx(math.pi / 2, abs=1e-9)


def test_bump_source_theorem():
    rng = np.random.default_rng(7)
    for _ in range(5):
        src = ConformalSource(BUMP, *random_chart_triangle(BUMP, rng, 0.9))
        rep = verify_triangle_theorem(src, 0.0)
        assert rep.error is None
        assert rep.margin > 0
        assert rep.leftover_area > -1e-9
        assert rep.margin >= rep.leftover_area - 1e-6
