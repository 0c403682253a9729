"""Reference implementations of the hot loops, in numpy and scipy."""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra


def dijkstra(indptr, indices, weights, sources, init):
    """Multi-source shortest paths on a symmetric CSR graph.

    ``init[i]`` is the starting distance of ``sources[i]``; unreachable nodes
    come back as ``inf``.
    """
    n = len(indptr) - 1
    sources = np.asarray(sources, dtype=np.int64)
    init = np.asarray(init, dtype=np.float64)
    g = csr_matrix((weights, indices, indptr), shape=(n, n))
    if np.all(init == 0.0):
        return _sp_dijkstra(g, directed=True, indices=sources, min_only=True)
    # a virtual root joined to every source by its starting distance; the
    # zero-weight case is handled above because csgraph drops explicit zeros
    coo = g.tocoo()
    rows = np.concatenate([coo.row, np.full(len(sources), n)])
    cols = np.concatenate([coo.col, sources])
    vals = np.concatenate([coo.data, np.maximum(init, 1e-300)])
    aug = csr_matrix((vals, (rows, cols)), shape=(n + 1, n + 1))
    dist = _sp_dijkstra(aug, directed=True, indices=n)
    return dist[:n]


def extend_min_plus(grid_xy, bnd_xy, bnd_d, chunk=64):
    """``out[f, g] = min_b bnd_d[f, b] + |grid_xy[f, g] - bnd_xy[f, b]|``."""
    F, G = grid_xy.shape[:2]
    out = np.empty((F, G))
    for s in range(0, F, chunk):
        gx = grid_xy[s:s + chunk, :, None, :]
        bx = bnd_xy[s:s + chunk, None, :, :]
        d = np.sqrt(((gx - bx) ** 2).sum(-1))
        out[s:s + chunk] = (d + bnd_d[s:s + chunk, None, :]).min(-1)
    return out


def sublevel_measure(tri_xy, tri_d, t):
    """Area of ``{d <= t}`` and length of ``{d = t}`` over linear triangles.

    ``tri_xy`` is (T, 3, 2) planar corners and ``tri_d`` (T, 3) corner values.
    """
    inside = tri_d <= t
    cnt = inside.sum(1)
    p0, p1, p2 = tri_xy[:, 0], tri_xy[:, 1], tri_xy[:, 2]
    full = 0.5 * np.abs((p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1])
                        - (p1[:, 1] - p0[:, 1]) * (p2[:, 0] - p0[:, 0]))
    area = full[cnt == 3].sum()
    length = 0.0
    for c in (1, 2):
        sel = np.nonzero(cnt == c)[0]
        if len(sel) == 0:
            continue
        ins = inside[sel]
        # the lone corner: inside when c == 1, outside when c == 2
        lone = np.argmax(ins if c == 1 else ~ins, axis=1)
        j = (lone + 1) % 3
        k = (lone + 2) % 3
        r = np.arange(len(sel))
        d = tri_d[sel]
        xy = tri_xy[sel]
        di, dj, dk = d[r, lone], d[r, j], d[r, k]
        fj = (t - di) / (dj - di)
        fk = (t - di) / (dk - di)
        pi, pj, pk = xy[r, lone], xy[r, j], xy[r, k]
        qj = pi + fj[:, None] * (pj - pi)
        qk = pi + fk[:, None] * (pk - pi)
        length += np.sqrt(((qj - qk) ** 2).sum(1)).sum()
        corner = full[sel] * fj * fk
        area += corner.sum() if c == 1 else (full[sel] - corner).sum()
    return float(area), float(length)
