"""Independent reference computations used to freeze or cross-check values."""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra


def cone_graph_distance(theta, lam, p, q, n_r=48, n_phi=360, r_max=3.0, window=8):
    """Shortest path between two cone points on a dense polar grid graph.

    Nodes sit on a polar grid (plus the apex); each node is joined to every
    node within ``window`` angular steps by the local chord length of the
    flat or hyperbolic sector.  Only short chords are used, so the global
    through-apex rule of the implementation is not assumed.
    """
    k = math.sqrt(-lam)
    rs = np.linspace(r_max / n_r, r_max, n_r)
    rs = np.union1d(rs, [p[0], q[0]])
    phis = np.arange(n_phi) * theta / n_phi
    extra = [p[1] % theta, q[1] % theta]
    phis = np.union1d(phis, extra)
    R, P = np.meshgrid(rs, phis, indexing="ij")
    R = R.ravel()
    P = P.ravel()
    n = len(R)
    apex = n
    rows, cols, w = [], [], []
    order = np.argsort(P, kind="stable")
    ranks = np.empty(n, dtype=int)
    ranks[order] = np.arange(n)
    uphis = np.unique(P)
    m = len(uphis)
    idx_of_phi = np.searchsorted(uphis, P)
    buckets = [np.nonzero(idx_of_phi == j)[0] for j in range(m)]
    for j in range(m):
        src = buckets[j]
        for dj in range(0, window + 1):
            jj = (j + dj) % m
            dphi = (uphis[jj] - uphis[j]) % theta
            dst = buckets[jj]
            a = R[src][:, None]
            b = R[dst][None, :]
            s2 = math.sin(0.5 * dphi) ** 2
            if k == 0:
                d = np.sqrt((a - b) ** 2 + 4 * a * b * s2)
            else:
                h = np.sinh(0.5 * k * (a - b))
                d = 2 * np.arcsinh(np.sqrt(h * h + np.sinh(k * a) * np.sinh(k * b) * s2)) / k
            ii, jjj = np.meshgrid(src, dst, indexing="ij")
            rows.append(ii.ravel())
            cols.append(jjj.ravel())
            w.append(d.ravel())
    inner = np.nonzero(R == rs[0])[0]
    rows.append(inner)
    cols.append(np.full(len(inner), apex))
    w.append(np.full(len(inner), rs[0]))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    w = np.concatenate(w)
    keep = rows != cols
    g = coo_matrix((w[keep], (rows[keep], cols[keep])), shape=(n + 1, n + 1)).tocsr()

    def node(pt):
        i = np.nonzero((np.abs(R - pt[0]) < 1e-12) & (np.abs(P - pt[1] % theta) < 1e-12))[0]
        return int(i[0])

    dist = dijkstra(g, directed=False, indices=node(p))
    return float(dist[node(q)])


def poincare_distance(z1: complex, z2: complex) -> float:
    return math.acosh(1 + 2 * abs(z1 - z2) ** 2 / ((1 - abs(z1) ** 2) * (1 - abs(z2) ** 2)))
