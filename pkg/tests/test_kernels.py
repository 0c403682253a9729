import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as sp_dijkstra

from revisop import kernels

BACKENDS = kernels.backends()


def random_graph(rng, n=200, m=800):
    u = rng.integers(n, size=m)
    v = rng.integers(n, size=m)
    keep = u != v
    u, v = u[keep], v[keep]
    w = rng.uniform(0.1, 2.0, size=len(u))
    # symmetric, deduplicated by min
    g = csr_matrix((np.concatenate([w, w]), (np.concatenate([u, v]), np.concatenate([v, u]))), shape=(n, n))
    g.sum_duplicates()
    return g


def test_cython_backend_built():
    assert "cython" in BACKENDS, "compiled kernels missing; run build_ext"
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("name", list(BACKENDS))
def test_dijkstra_matches_scipy(name):
    rng = np.random.default_rng(0)
    g = random_graph(rng)
    impl = BACKENDS[name]
    got = impl.dijkstra(g.indptr, g.indices, g.data, np.array([3]), np.array([0.0]))
    ref = sp_dijkstra(g, indices=3)
    np.testing.assert_allclose(got, ref, rtol=0, atol=1e-12)


@pytest.mark.parametrize("name", list(BACKENDS))
def test_dijkstra_multisource_with_offsets(name):
    rng = np.random.default_rng(1)
    g = random_graph(rng, n=150, m=500)
    src = np.array([0, 7, 42])
    init = np.array([0.3, 0.0, 1.1])
    got = BACKENDS[name].dijkstra(g.indptr, g.indices, g.data, src, init)
    full = sp_dijkstra(g, indices=src)
    ref = (full + init[:, None]).min(0)
    np.testing.assert_allclose(got, ref, atol=1e-12)


@pytest.mark.parametrize("name", list(BACKENDS))
def test_dijkstra_unreachable_is_inf(name):
    # two disjoint edges
    indptr = np.array([0, 1, 2, 3, 4])
    indices = np.array([1, 0, 3, 2])
    w = np.ones(4)
    d = BACKENDS[name].dijkstra(indptr, indices, w, np.array([0]), np.array([0.0]))
    assert d[1] == 1.0 and np.isinf(d[2]) and np.isinf(d[3])


def test_backends_agree_on_min_plus_and_sublevel():
    if len(BACKENDS) < 2:
        pytest.skip("only one backend available")
    rng = np.random.default_rng(2)
    g = rng.normal(size=(30, 21, 2))
    b = rng.normal(size=(30, 9, 2))
    bd = rng.uniform(0, 2, size=(30, 9))
    a = BACKENDS["cython"].extend_min_plus(g, b, bd)
    p = BACKENDS["python"].extend_min_plus(g, b, bd)
    np.testing.assert_allclose(a, p, atol=1e-14)
    tri = rng.normal(size=(500, 3, 2))
    td = rng.uniform(0, 1, size=(500, 3))
    for t in (0.1, 0.5, 0.9):
        ca, cl = BACKENDS["cython"].sublevel_measure(tri, td, t)
        pa, pl = BACKENDS["python"].sublevel_measure(tri, td, t)
        assert ca == pytest.approx(pa, abs=1e-12)
        assert cl == pytest.approx(pl, abs=1e-12)


@pytest.mark.parametrize("name", list(BACKENDS))
def test_sublevel_single_triangle(name):
    # d = x on the right triangle (0,0),(1,0),(0,1): {x <= t} has area t - t^2/2
    tri = np.array([[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]])
    d = np.array([[0.0, 1.0, 0.0]])
    t = 0.3
    area, length = BACKENDS[name].sublevel_measure(tri, d, t)
    assert area == pytest.approx(t - t * t / 2, abs=1e-15)
    assert length == pytest.approx(1 - t, abs=1e-15)
