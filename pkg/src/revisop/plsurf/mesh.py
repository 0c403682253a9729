"""Piecewise-flat surfaces given by combinatorics and edge lengths."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import MeshError

TWO_PI = 2.0 * math.pi


def _edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def corner_angles_from_lengths(fl: np.ndarray) -> np.ndarray:
    """Angles opposite each column of an (F, 3) array of side lengths (half-angle form)."""
    a, b, c = fl[..., 0], fl[..., 1], fl[..., 2]
    out = np.empty_like(fl, dtype=float)
    for col, (x, y, z) in enumerate(((a, b, c), (b, c, a), (c, a, b))):
        val = (x - y + z) * (x + y - z) / (4.0 * y * z)
        out[..., col] = 2.0 * np.arcsin(np.sqrt(np.clip(val, 0.0, 1.0)))
    return out


@dataclass(frozen=True, eq=False)
class PLSurface:
    """Triangulated surface with intrinsic edge lengths.

    ``faces`` is an (F, 3) integer array; ``edges`` the sorted unique (E, 2)
    vertex pairs with ``lengths`` aligned to it.  ``face_edges[f, c]`` is the
    edge joining corners ``c`` and ``c + 1`` of face ``f``.
    """

    n_vertices: int
    faces: np.ndarray
    edges: np.ndarray
    lengths: np.ndarray
    face_edges: np.ndarray
    edge_faces: list = field(repr=False)
    coordinates: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_lengths(cls, n_vertices, faces, edge_lengths, coordinates=None, check=True):
        """Build from a face list and a map ``{(i, j): length}`` (any order of i, j)."""
        faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
        if faces.size and (faces.min() < 0 or faces.max() >= n_vertices):
            raise MeshError("face index out of range")
        keys = {}
        for f in faces:
            for c in range(3):
                a, b = int(f[c]), int(f[(c + 1) % 3])
                if a == b:
                    raise MeshError(f"face {f.tolist()} repeats a vertex")
                keys[_edge_key(a, b)] = None
        edges = np.array(sorted(keys), dtype=np.int64).reshape(-1, 2)
        index = {tuple(e): i for i, e in enumerate(edges.tolist())}
        lookup = {_edge_key(int(i), int(j)): float(v) for (i, j), v in edge_lengths.items()}
        missing = [e for e in index if e not in lookup]
        if missing:
            raise MeshError(f"missing edge lengths for {missing[:5]}")
        lengths = np.array([lookup[e] for e in index])
        face_edges = np.empty_like(faces)
        edge_faces = [[] for _ in range(len(edges))]
        for fi, f in enumerate(faces):
            for c in range(3):
                e = index[_edge_key(int(f[c]), int(f[(c + 1) % 3]))]
                face_edges[fi, c] = e
                edge_faces[e].append(fi)
        if coordinates is not None:
            coordinates = np.asarray(coordinates, dtype=float)
        surf = cls(int(n_vertices), faces, edges, lengths, face_edges, edge_faces, coordinates)
        if check:
            surf.validate()
        return surf

    @classmethod
    def from_coordinates(cls, coordinates, faces, check=True):
        """Edge lengths measured from an embedding in R^2 or R^3."""
        xyz = np.asarray(coordinates, dtype=float)
        faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
        lens = {}
        for f in faces:
            for c in range(3):
                a, b = int(f[c]), int(f[(c + 1) % 3])
                lens[_edge_key(a, b)] = float(np.linalg.norm(xyz[a] - xyz[b]))
        return cls.from_lengths(len(xyz), faces, lens, coordinates=xyz, check=check)

    def with_lengths(self, lengths, check=True) -> "PLSurface":
        lengths = np.asarray(lengths, dtype=float)
        surf = PLSurface(self.n_vertices, self.faces, self.edges, lengths, self.face_edges,
                         self.edge_faces, None)
        if check:
            surf.validate()
        return surf

    # combinatorics -------------------------------------------------------

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def boundary_edges(self) -> np.ndarray:
        return np.array([i for i, fs in enumerate(self.edge_faces) if len(fs) == 1], dtype=np.int64)

    @property
    def boundary_vertices(self) -> np.ndarray:
        be = self.boundary_edges
        if len(be) == 0:
            return np.zeros(0, dtype=np.int64)
        return np.unique(self.edges[be].ravel())

    @property
    def interior_mask(self) -> np.ndarray:
        mask = np.ones(self.n_vertices, dtype=bool)
        mask[self.boundary_vertices] = False
        return mask

    @property
    def boundary_length(self) -> float:
        be = self.boundary_edges
        return float(self.lengths[be].sum()) if len(be) else 0.0

    def face_lengths(self) -> np.ndarray:
        """(F, 3) lengths; column c is the side opposite corner c."""
        return self.lengths[self.face_edges[:, [1, 2, 0]]]

    def edge_index(self, i: int, j: int) -> int:
        key = _edge_key(i, j)
        k = np.searchsorted(self.edges[:, 0], key[0], side="left")
        while k < len(self.edges) and self.edges[k, 0] == key[0]:
            if self.edges[k, 1] == key[1]:
                return int(k)
            k += 1
        raise KeyError(key)

    def validate(self) -> None:
        if self.n_faces == 0:
            raise MeshError("surface has no faces")
        if np.any(~np.isfinite(self.lengths)) or np.any(self.lengths <= 0):
            raise MeshError("edge lengths must be positive and finite")
        fl = self.face_lengths()
        slack = fl.sum(1)[:, None] - 2 * fl
        if np.any(slack <= 0):
            bad = int(np.argmin(slack.min(1)))
            raise MeshError(f"face {bad} violates the strict triangle inequality")
        counts = np.array([len(fs) for fs in self.edge_faces])
        if np.any(counts > 2):
            raise MeshError("an edge is shared by more than two faces")
        used = np.zeros(self.n_vertices, dtype=bool)
        used[self.faces.ravel()] = True
        if not used.all():
            raise MeshError("isolated vertices")
        self._check_vertex_links()
        self._check_connected()

    def _check_vertex_links(self) -> None:
        # the faces around each vertex must form one fan (disk or half-disk)
        corners = [[] for _ in range(self.n_vertices)]
        for fi, f in enumerate(self.faces):
            for c in range(3):
                corners[f[c]].append(fi)
        for v, fs in enumerate(corners):
            adj = {f: [] for f in fs}
            for f in fs:
                for c in range(3):
                    e = self.face_edges[f, c]
                    if v in self.edges[e]:
                        for g in self.edge_faces[e]:
                            if g != f:
                                adj[f].append(g)
            seen = {fs[0]}
            stack = [fs[0]]
            while stack:
                f = stack.pop()
                for g in adj[f]:
                    if g not in seen:
                        seen.add(g)
                        stack.append(g)
            if len(seen) != len(fs):
                raise MeshError(f"vertex {v} is not a manifold point")

    def _check_connected(self) -> None:
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(int(a)), find(int(b))
            if ra != rb:
                parent[ra] = rb
        roots = {find(v) for v in range(self.n_vertices)}
        if len(roots) != 1:
            raise MeshError(f"surface has {len(roots)} connected components")

    # geometry ------------------------------------------------------------

    def corner_angles(self) -> np.ndarray:
        """(F, 3) Euclidean corner angles; column c is the angle at corner c."""
        return corner_angles_from_lengths(self.face_lengths())

    def face_areas(self) -> np.ndarray:
        fl = np.sort(self.face_lengths(), axis=1)[:, ::-1]
        x, y, z = fl[:, 0], fl[:, 1], fl[:, 2]
        prod = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z))
        return 0.25 * np.sqrt(np.maximum(prod, 0.0))

    @property
    def total_area(self) -> float:
        return float(self.face_areas().sum())

    def face_layout(self) -> np.ndarray:
        """(F, 3, 2) isometric planar placement of each face, corner 0 at the origin."""
        fl = self.face_lengths()
        l01 = fl[:, 2]
        l02 = fl[:, 1]
        l12 = fl[:, 0]
        x2 = (l01 ** 2 + l02 ** 2 - l12 ** 2) / (2 * l01)
        y2 = np.sqrt(np.maximum(l02 ** 2 - x2 ** 2, 0.0))
        out = np.zeros((self.n_faces, 3, 2))
        out[:, 1, 0] = l01
        out[:, 2, 0] = x2
        out[:, 2, 1] = y2
        return out

    # i/o -----------------------------------------------------------------

    def to_json(self) -> dict:
        doc = {
            "vertices": self.n_vertices,
            "faces": self.faces.tolist(),
            "edge_lengths": {f"{i}-{j}": float(v) for (i, j), v in zip(self.edges.tolist(), self.lengths)},
        }
        if self.coordinates is not None:
            doc["coordinates"] = self.coordinates.tolist()
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "PLSurface":
        try:
            n = int(doc["vertices"])
            faces = doc["faces"]
            raw = doc["edge_lengths"]
        except (KeyError, TypeError, ValueError) as exc:
            raise MeshError(f"malformed mesh document: {exc}") from exc
        lens = {}
        for key, val in raw.items():
            try:
                i, j = (int(t) for t in key.split("-"))
            except ValueError as exc:
                raise MeshError(f"bad edge key {key!r}") from exc
            if not i < j:
                raise MeshError(f"edge key {key!r} must have i < j")
            lens[(i, j)] = float(val)
        return cls.from_lengths(n, faces, lens, coordinates=doc.get("coordinates"))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "PLSurface":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise MeshError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_json(doc)


@dataclass(frozen=True)
class CurvatureMeasure:
    """Atomic curvature of a PL surface.

    ``omega`` is 2 pi minus the angle sum at interior vertices (0 on the
    boundary); ``boundary_turning`` is pi minus the angle sum at boundary
    vertices (0 inside).
    """

    omega: np.ndarray
    omega_plus: np.ndarray
    omega_minus: np.ndarray
    boundary_turning: np.ndarray

    @property
    def total(self) -> float:
        return float(self.omega.sum())

    @property
    def total_minus(self) -> float:
        return float(self.omega_minus.sum())


def vertex_angles(s: PLSurface) -> np.ndarray:
    """Angle sum at every vertex."""
    ang = s.corner_angles()
    if np.any(ang <= 0) or np.any(ang >= math.pi):
        raise MeshError("degenerate face: a corner angle is 0 or pi")
    out = np.zeros(s.n_vertices)
    np.add.at(out, s.faces.ravel(), ang.ravel())
    return out


def curvature_measure(s: PLSurface) -> CurvatureMeasure:
    sums = vertex_angles(s)
    interior = s.interior_mask
    omega = np.where(interior, TWO_PI - sums, 0.0)
    turning = np.where(interior, 0.0, math.pi - sums)
    return CurvatureMeasure(omega, np.maximum(omega, 0.0), np.maximum(-omega, 0.0), turning)


def gauss_bonnet_residual(s: PLSurface) -> float:
    """Total curvature plus boundary turning minus 2 pi chi; zero for any valid surface."""
    cm = curvature_measure(s)
    return float(cm.omega.sum() + cm.boundary_turning.sum() - TWO_PI * s.euler_characteristic)
