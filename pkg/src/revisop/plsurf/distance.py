"""Approximate geodesic distance on PL surfaces via Steiner-point graphs.

Each edge carries ``n`` equally spaced Steiner points, so its ``N = n + 1``
subdivisions match a barycentric grid on every face.  Graph edges join
nodes on different sides of a common face (weight: straight-line length in
the unfolded face) and consecutive nodes along a mesh edge.  Distances at
face-interior grid points come from the min-plus extension over the face's
boundary nodes, which is what the level-set code interpolates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np

from .. import kernels
from ..errors import GeometryError, MeshError
from .mesh import PLSurface

# a base point is a vertex index or (face index, barycentric weights)
BasePoint = Union[int, tuple]


@lru_cache(maxsize=None)
def _face_grid(N: int):
    """Grid layout shared by every face at subdivision N.

    Returns barycentric (i, j) pairs, the grid index of each of the 3N
    boundary positions, the valid boundary pairs for clique edges and the
    sub-triangle corner indices.
    """
    ij = [(i, j) for i in range(N + 1) for j in range(N + 1 - i)]
    index = {p: g for g, p in enumerate(ij)}
    # boundary positions: side 0 runs v0->v1, side 1 v1->v2, side 2 v2->v0
    bpos = []
    for m in range(N):
        bpos.append(index[(m, 0)])
    for m in range(N):
        bpos.append(index[(N - m, m)])
    for m in range(N):
        bpos.append(index[(0, N - m)])
    sides = np.zeros((3 * N, 3), dtype=bool)
    for p in range(3 * N):
        s, m = divmod(p, N)
        sides[p, s] = True
        if m == 0:
            sides[p, (s - 1) % 3] = True
    share = (sides[:, None, :] & sides[None, :, :]).any(-1)
    pa, pb = np.nonzero(np.triu(~share, 1))
    tris = []
    for i in range(N):
        for j in range(N - i):
            tris.append((index[(i, j)], index[(i + 1, j)], index[(i, j + 1)]))
            if i + j <= N - 2:
                tris.append((index[(i + 1, j)], index[(i + 1, j + 1)], index[(i, j + 1)]))
    return (np.array(ij, dtype=float), np.array(bpos, dtype=np.int64), pa, pb,
            np.array(tris, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class SteinerGraph:
    surface: PLSurface
    refinement_level: int
    n_nodes: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    grid_xy: np.ndarray = field(repr=False)      # (F, G, 2) planar grid per face
    bnd_nodes: np.ndarray = field(repr=False)    # (F, 3N) node id per boundary position
    bnd_pos: np.ndarray = field(repr=False)      # (3N,) grid index per boundary position
    sub_tris: np.ndarray = field(repr=False)     # (N^2, 3) grid indices
    chain_nodes: np.ndarray = field(repr=False)  # (E, N+1) node ids along each edge

    @property
    def subdivisions(self) -> int:
        return self.refinement_level + 1

    def edge_node(self, e: int, m: int) -> int:
        """Node at fraction m/N along edge e from its lower-index endpoint."""
        return int(self.chain_nodes[e, m])


def _build_graph(s: PLSurface, n: int) -> SteinerGraph:
    if n < 0:
        raise ValueError("refinement level must be >= 0")
    N = n + 1
    V, E, F = s.n_vertices, s.n_edges, s.n_faces
    ij, bpos, pa, pb, tris = _face_grid(N)

    layout = s.face_layout()
    p0 = layout[:, 0][:, None, :]
    grid_xy = (p0 + (ij[None, :, 0:1] / N) * (layout[:, 1] - layout[:, 0])[:, None, :]
               + (ij[None, :, 1:2] / N) * (layout[:, 2] - layout[:, 0])[:, None, :])

    chain = np.empty((E, N + 1), dtype=np.int64)
    chain[:, 0] = s.edges[:, 0]
    chain[:, N] = s.edges[:, 1]
    if n:
        chain[:, 1:N] = V + np.arange(E)[:, None] * n + np.arange(n)[None, :]

    bnd = np.empty((F, 3 * N), dtype=np.int64)
    for side in range(3):
        e = s.face_edges[:, side]
        a = s.faces[:, side]
        b = s.faces[:, (side + 1) % 3]
        m = np.arange(N)
        forward = (a < b)[:, None]
        col = np.where(forward, m[None, :], N - m[None, :])
        bnd[:, side * N:(side + 1) * N] = chain[e[:, None], col]

    bxy = grid_xy[:, bpos]
    rows = [bnd[:, pa].ravel(), chain[:, :-1].ravel()]
    cols = [bnd[:, pb].ravel(), chain[:, 1:].ravel()]
    wts = [np.sqrt(((bxy[:, pa] - bxy[:, pb]) ** 2).sum(-1)).ravel(),
           np.repeat(s.lengths / N, N)]
    u = np.concatenate(rows)
    v = np.concatenate(cols)
    w = np.concatenate(wts)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    n_nodes = V + E * n
    # keep the shortest copy of any repeated pair
    key = lo * n_nodes + hi
    order = np.lexsort((w, key))
    key, lo, hi, w = key[order], lo[order], hi[order], w[order]
    first = np.ones(len(key), dtype=bool)
    first[1:] = key[1:] != key[:-1]
    lo, hi, w = lo[first], hi[first], w[first]

    src = np.concatenate([lo, hi])
    dst = np.concatenate([hi, lo])
    ww = np.concatenate([w, w])
    order = np.argsort(src, kind="stable")
    src, dst, ww = src[order], dst[order], ww[order]
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return SteinerGraph(s, n, n_nodes, indptr, dst.astype(np.int64), ww, grid_xy, bnd, bpos, tris, chain)


@lru_cache(maxsize=16)
def steiner_graph(s: PLSurface, n: int) -> SteinerGraph:
    """Cached Steiner graph for surface ``s`` at refinement level ``n``."""
    return _build_graph(s, n)


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Distance from a base point sampled on the refined graph and face grids."""

    graph: SteinerGraph = field(repr=False)
    base: BasePoint
    node_distances: np.ndarray = field(repr=False)
    grid_distances: np.ndarray = field(repr=False)  # (F, G)

    @property
    def surface(self) -> PLSurface:
        return self.graph.surface

    @property
    def refinement_level(self) -> int:
        return self.graph.refinement_level

    @property
    def unreachable(self) -> np.ndarray:
        return np.nonzero(~np.isfinite(self.node_distances))[0]

    def at_vertex(self, v: int) -> float:
        return float(self.node_distances[v])

    @property
    def vertex_distances(self) -> np.ndarray:
        return self.node_distances[: self.surface.n_vertices]

    def lipschitz_defect(self) -> float:
        """max over graph edges of |d(u) - d(v)| - w(u, v); <= 0 up to roundoff."""
        g = self.graph
        src = np.repeat(np.arange(g.n_nodes), np.diff(g.indptr))
        d = self.node_distances
        ok = np.isfinite(d[src]) & np.isfinite(d[g.indices])
        diff = np.abs(d[src] - d[g.indices]) - g.weights
        return float(diff[ok].max()) if ok.any() else 0.0


def _base_sources(s: PLSurface, g: SteinerGraph, base: BasePoint):
    """Graph sources with starting distances, plus the direct-distance face if any."""
    if isinstance(base, (int, np.integer)):
        v = int(base)
        if not 0 <= v < s.n_vertices:
            raise GeometryError(f"base vertex {v} outside the surface")
        return np.array([v]), np.array([0.0]), None
    try:
        f, bary = base
        f = int(f)
        bary = np.asarray(bary, dtype=float).reshape(3)
    except (TypeError, ValueError) as exc:
        raise GeometryError(f"bad base point {base!r}") from exc
    if not 0 <= f < s.n_faces:
        raise GeometryError(f"base face {f} outside the surface")
    if np.any(bary < -1e-12) or abs(bary.sum() - 1.0) > 1e-9:
        raise GeometryError("barycentric weights must be nonnegative and sum to 1")
    lay = s.face_layout()[f]
    x = bary @ lay
    bxy = g.grid_xy[f, g.bnd_pos]
    init = np.sqrt(((bxy - x) ** 2).sum(-1))
    return g.bnd_nodes[f], init, (f, x)


def geodesic_distance(s: PLSurface, base: BasePoint, refinement_level: int = 8) -> DistanceField:
    """Steiner-graph distance from ``base`` at every graph node and face-grid point.

    The result overestimates the true intrinsic distance and converges to it
    as the refinement level grows.  Nodes not connected to the base are
    ``inf`` and listed by :attr:`DistanceField.unreachable`.
    """
    g = steiner_graph(s, int(refinement_level))
    sources, init, direct = _base_sources(s, g, base)
    nd = kernels.dijkstra(g.indptr, g.indices, g.weights, sources, init)
    nd = np.asarray(nd, dtype=float)
    bd = nd[g.bnd_nodes]
    grid = kernels.extend_min_plus(g.grid_xy, g.grid_xy[:, g.bnd_pos], bd)
    grid = np.asarray(grid, dtype=float)
    grid[:, g.bnd_pos] = bd
    if direct is not None:
        f, x = direct
        grid[f] = np.minimum(grid[f], np.sqrt(((g.grid_xy[f] - x) ** 2).sum(-1)))
    return DistanceField(g, base, nd, grid)


def distance_between(s: PLSurface, a: int, b: int, refinement_level: int = 8) -> float:
    """Graph-approximate distance between two vertices."""
    if not (0 <= a < s.n_vertices and 0 <= b < s.n_vertices):
        raise MeshError("vertex index out of range")
    return geodesic_distance(s, a, refinement_level).at_vertex(b)


def max_distance(field: DistanceField) -> float:
    d = field.node_distances
    fin = d[np.isfinite(d)]
    return float(fin.max()) if len(fin) else math.inf
