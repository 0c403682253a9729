# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the PL-surface inner loops.

Signatures and results match :mod:`revisop.kernels._pykernels`.
"""

import numpy as np
from libc.math cimport sqrt, fabs, INFINITY


cdef inline void _sift_down(double[::1] key, long[::1] item, long n, long pos) noexcept nogil:
    cdef long child
    cdef double k0 = key[pos]
    cdef long i0 = item[pos]
    while True:
        child = 2 * pos + 1
        if child >= n:
            break
        if child + 1 < n and key[child + 1] < key[child]:
            child += 1
        if key[child] >= k0:
            break
        key[pos] = key[child]
        item[pos] = item[child]
        pos = child
    key[pos] = k0
    item[pos] = i0


cdef inline void _sift_up(double[::1] key, long[::1] item, long pos) noexcept nogil:
    cdef long parent
    cdef double k0 = key[pos]
    cdef long i0 = item[pos]
    while pos > 0:
        parent = (pos - 1) // 2
        if key[parent] <= k0:
            break
        key[pos] = key[parent]
        item[pos] = item[parent]
        pos = parent
    key[pos] = k0
    item[pos] = i0


def dijkstra(indptr, indices, weights, sources, init):
    cdef const long long[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const long long[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const long long[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef const double[::1] d0 = np.ascontiguousarray(init, dtype=np.float64)
    cdef long n = ip.shape[0] - 1
    dist_arr = np.full(n, np.inf)
    cdef double[::1] dist = dist_arr
    cdef char[::1] done = np.zeros(n, dtype=np.int8)
    # lazy-deletion heap; each relaxation pushes at most once per edge
    cdef long cap = ix.shape[0] + src.shape[0] + 1
    cdef double[::1] hk = np.empty(cap)
    cdef long[::1] hi = np.empty(cap, dtype=np.int_)
    cdef long size = 0
    cdef long i, u, v, e
    cdef double du, nd
    with nogil:
        for i in range(src.shape[0]):
            u = src[i]
            if d0[i] < dist[u]:
                dist[u] = d0[i]
                hk[size] = d0[i]
                hi[size] = u
                size += 1
                _sift_up(hk, hi, size - 1)
        while size > 0:
            du = hk[0]
            u = hi[0]
            size -= 1
            if size > 0:
                hk[0] = hk[size]
                hi[0] = hi[size]
                _sift_down(hk, hi, size, 0)
            if done[u]:
                continue
            done[u] = 1
            for e in range(ip[u], ip[u + 1]):
                v = ix[e]
                nd = du + w[e]
                if nd < dist[v]:
                    dist[v] = nd
                    hk[size] = nd
                    hi[size] = v
                    size += 1
                    _sift_up(hk, hi, size - 1)
    return dist_arr


def extend_min_plus(grid_xy, bnd_xy, bnd_d, chunk=None):
    cdef const double[:, :, ::1] g = np.ascontiguousarray(grid_xy, dtype=np.float64)
    cdef const double[:, :, ::1] b = np.ascontiguousarray(bnd_xy, dtype=np.float64)
    cdef const double[:, ::1] bd = np.ascontiguousarray(bnd_d, dtype=np.float64)
    cdef long F = g.shape[0], G = g.shape[1], B = b.shape[1]
    out_arr = np.empty((F, G))
    cdef double[:, ::1] out = out_arr
    cdef long f, i, j
    cdef double best, dx, dy, val
    with nogil:
        for f in range(F):
            for i in range(G):
                best = INFINITY
                for j in range(B):
                    dx = g[f, i, 0] - b[f, j, 0]
                    dy = g[f, i, 1] - b[f, j, 1]
                    val = bd[f, j] + sqrt(dx * dx + dy * dy)
                    if val < best:
                        best = val
                out[f, i] = best
    return out_arr


def sublevel_measure(tri_xy, tri_d, double t):
    cdef const double[:, :, ::1] xy = np.ascontiguousarray(tri_xy, dtype=np.float64)
    cdef const double[:, ::1] d = np.ascontiguousarray(tri_d, dtype=np.float64)
    cdef long T = xy.shape[0]
    cdef long m, c, lone, j, k, q
    cdef double area = 0.0, length = 0.0, full, fj, fk
    cdef double xi, yi, xa, ya, xb, yb
    cdef int ins0, ins1, ins2
    with nogil:
        for m in range(T):
            ins0 = d[m, 0] <= t
            ins1 = d[m, 1] <= t
            ins2 = d[m, 2] <= t
            c = ins0 + ins1 + ins2
            if c == 0:
                continue
            full = 0.5 * fabs((xy[m, 1, 0] - xy[m, 0, 0]) * (xy[m, 2, 1] - xy[m, 0, 1])
                              - (xy[m, 1, 1] - xy[m, 0, 1]) * (xy[m, 2, 0] - xy[m, 0, 0]))
            if c == 3:
                area += full
                continue
            if c == 1:
                lone = 0 if ins0 else (1 if ins1 else 2)
            else:
                lone = 0 if not ins0 else (1 if not ins1 else 2)
            j = (lone + 1) % 3
            k = (lone + 2) % 3
            fj = (t - d[m, lone]) / (d[m, j] - d[m, lone])
            fk = (t - d[m, lone]) / (d[m, k] - d[m, lone])
            xi = xy[m, lone, 0]
            yi = xy[m, lone, 1]
            xa = xi + fj * (xy[m, j, 0] - xi)
            ya = yi + fj * (xy[m, j, 1] - yi)
            xb = xi + fk * (xy[m, k, 0] - xi)
            yb = yi + fk * (xy[m, k, 1] - yi)
            length += sqrt((xa - xb) * (xa - xb) + (ya - yb) * (ya - yb))
            if c == 1:
                area += full * fj * fk
            else:
                area += full * (1.0 - fj * fk)
    return area, length
