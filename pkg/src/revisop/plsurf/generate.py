"""Test surfaces: tetrahedron, flat grids, PL cone disks and random
nonpositively curved disks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..cone import ConePoint, ConeSpec, cone_distance
from ..errors import MeshError
from .distance import DistanceField, geodesic_distance
from .mesh import TWO_PI, PLSurface, corner_angles_from_lengths, vertex_angles


def tetrahedron(edge: float = 1.0) -> PLSurface:
    """Boundary of the regular tetrahedron."""
    faces = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
    lens = {(i, j): edge for i in range(4) for j in range(i + 1, 4)}
    return PLSurface.from_lengths(4, faces, lens)


def flat_grid(nx: int, ny: int, width: float = 1.0, height: float | None = None) -> PLSurface:
    """Rectangle split into nx*ny squares, each cut along its anti-diagonal."""
    if nx < 1 or ny < 1:
        raise MeshError("grid needs at least one cell each way")
    height = width if height is None else height
    xs = np.linspace(0.0, width, nx + 1)
    ys = np.linspace(0.0, height, ny + 1)
    xy = np.array([(x, y) for y in ys for x in xs])

    def vid(i, j):
        return j * (nx + 1) + i

    faces = []
    for j in range(ny):
        for i in range(nx):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            faces.append((a, b, d))
            faces.append((b, c, d))
    return PLSurface.from_coordinates(xy, faces)


def cone_disk(theta: float, radius: float = 1.5, rings: int = 6, base_count: int | None = None):
    """Flat cone of angle ``theta`` triangulated in concentric rings about the apex.

    Ring j (j >= 1) has ``m0 * j`` vertices evenly spaced in angle, with
    ``m0 = max(6, ceil(theta / (pi/3)))`` unless given.  Vertex 0 is the apex.
    Returns the surface and the list of cone coordinates of its vertices.
    """
    if rings < 1:
        raise MeshError("need at least one ring")
    spec = ConeSpec(0.0, theta)
    m0 = base_count or max(6, math.ceil(theta / (math.pi / 3) - 1e-9))
    pts = [ConePoint(0.0, 0.0)]
    start = [0]
    for j in range(1, rings + 1):
        start.append(len(pts))
        mj = m0 * j
        r = radius * j / rings
        pts.extend(ConePoint(r, theta * k / mj) for k in range(mj))

    faces = []
    m1 = m0
    for k in range(m1):
        faces.append((0, start[1] + k, start[1] + (k + 1) % m1))
    for j in range(1, rings):
        a, b = m0 * j, m0 * (j + 1)
        sa, sb = start[j], start[j + 1]
        k = l = 0
        while k < a or l < b:
            next_a = (k + 1) / a
            next_b = (l + 1) / b
            if l >= b or (k < a and next_a <= next_b):
                faces.append((sa + k % a, sa + (k + 1) % a, sb + l % b))
                k += 1
            else:
                faces.append((sa + k % a, sb + (l + 1) % b, sb + l % b))
                l += 1
    lens = {}
    for f in faces:
        for c in range(3):
            u, v = f[c], f[(c + 1) % 3]
            key = (min(u, v), max(u, v))
            if key not in lens:
                lens[key] = cone_distance(spec, pts[u], pts[v])
    return PLSurface.from_lengths(len(pts), faces, lens), pts


def ring_of_vertices(theta: float, rings: int, base_count: int | None = None) -> np.ndarray:
    """Ring index of every vertex of ``cone_disk(theta, rings=rings)``."""
    m0 = base_count or max(6, math.ceil(theta / (math.pi / 3) - 1e-9))
    out = [0]
    for j in range(1, rings + 1):
        out.extend([j] * (m0 * j))
    return np.array(out)


def perturb_nonpositive(s: PLSurface, rng: np.random.Generator, proposals: int,
                        scale: float = 0.1, slack: float = 1e-3, tol: float = 1e-12) -> PLSurface:
    """Random single-edge rescalings accepted only if every interior vertex
    keeps omega <= tol and every face keeps triangle slack >= ``slack``."""
    lengths = s.lengths.copy()
    interior = s.interior_mask
    sums = vertex_angles(s)
    if np.any(interior & (TWO_PI - sums > tol)):
        raise MeshError("starting surface has positive interior curvature")
    faces = s.faces
    fe = s.face_edges[:, [1, 2, 0]]
    for _ in range(proposals):
        e = int(rng.integers(s.n_edges))
        factor = 1.0 + scale * rng.uniform(-1.0, 1.0)
        fs = s.edge_faces[e]
        old_fl = lengths[fe[fs]]
        new_len = lengths[e] * factor
        new_fl = np.where(fe[fs] == e, new_len, old_fl)
        if np.any(new_fl.sum(1)[:, None] - 2.0 * new_fl < slack):
            continue
        delta = corner_angles_from_lengths(new_fl) - corner_angles_from_lengths(old_fl)
        new_sums = sums.copy()
        np.add.at(new_sums, faces[fs].ravel(), delta.ravel())
        touched = np.unique(faces[fs])
        if np.any(interior[touched] & (TWO_PI - new_sums[touched] > tol)):
            continue
        lengths[e] = new_len
        sums = new_sums
    return s.with_lengths(lengths)


def certify_nonpositive(s: PLSurface, tol: float = 1e-12) -> bool:
    sums = vertex_angles(s)
    return bool(np.all(TWO_PI - sums[s.interior_mask] <= tol))


@dataclass(frozen=True, eq=False)
class DiskCase:
    surface: PLSurface
    base: int
    radius: float
    theta: float
    field: DistanceField


def random_disk_case(rng: np.random.Generator, refinement_level: int = 16, rings: int = 4,
                     theta_range=(2.0 * math.pi, 3.0 * math.pi), sweeps: int = 4) -> DiskCase:
    """Random certified nonpositively curved disk with a base and a radius.

    The mesh starts as a PL cone disk with angle drawn from ``theta_range``
    (so the apex carries omega <= 0) and is then perturbed.  The base is a
    random vertex within one ring of the apex; the radius is a random
    fraction in [0.4, 0.85] of the distance from the base to the boundary.
    """
    theta = float(rng.uniform(*theta_range))
    s0, _ = cone_disk(theta, radius=1.0, rings=rings)
    s = perturb_nonpositive(s0, rng, sweeps * s0.n_edges)
    if not certify_nonpositive(s):
        raise MeshError("generator produced positive interior curvature")
    ring = ring_of_vertices(theta, rings)
    candidates = np.nonzero(ring <= 1)[0]
    base = int(rng.choice(candidates))
    field = geodesic_distance(s, base, refinement_level)
    g = field.graph
    bnd_nodes = np.unique(g.chain_nodes[s.boundary_edges])
    reach = float(field.node_distances[bnd_nodes].min())
    R = float(rng.uniform(0.4, 0.85)) * reach
    return DiskCase(s, base, R, theta, field)
