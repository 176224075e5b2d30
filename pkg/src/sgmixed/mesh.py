"""Triangulations of the unit square with edge topology."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

log = logging.getLogger(__name__)

MIN_ANGLE_DEG = 20.0


@dataclass(frozen=True)
class Mesh:
    """Counterclockwise triangles plus unique edges.

    ``edges[e] = (a, b)`` with ``a < b``; ``edge_triangles[e]`` holds the
    adjacent triangle ids (second entry ``-1`` on the boundary, first entry
    always the lower id).  ``triangle_edges[t, i]`` is the edge opposite
    local vertex ``i``.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray
    edge_triangles: np.ndarray
    triangle_edges: np.ndarray
    boundary_vertices: np.ndarray
    boundary_edges: np.ndarray
    n: int = 0
    perturb: float = 0.0
    seed: int = 0

    @property
    def nvertices(self) -> int:
        return len(self.vertices)

    @property
    def ntriangles(self) -> int:
        return len(self.triangles)

    @property
    def nedges(self) -> int:
        return len(self.edges)

    @property
    def corners(self) -> np.ndarray:
        return self.vertices[self.triangles]

    @property
    def areas(self) -> np.ndarray:
        X = self.corners
        a = X[:, 1] - X[:, 0]
        b = X[:, 2] - X[:, 0]
        return 0.5 * (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])

    @property
    def diameters(self) -> np.ndarray:
        X = self.corners
        return np.max([np.linalg.norm(X[:, i] - X[:, j], axis=1)
                       for i, j in ((0, 1), (1, 2), (2, 0))], axis=0)

    @property
    def h(self) -> float:
        return float(self.diameters.max())

    @property
    def min_angle(self) -> float:
        return float(triangle_angles(self.corners).min())

    @property
    def sigma0(self) -> float:
        """Inverse-assumption ratio ``h / min h_K``."""
        return self.h / float(self.diameters.min())

    def normal_signs(self) -> np.ndarray:
        """``(ntri, 3)``: +1 if the global edge normal is outward for this triangle."""
        t = np.arange(self.ntriangles)[:, None]
        first = self.edge_triangles[self.triangle_edges, 0]
        return np.where(first == t, 1.0, -1.0)

    def edge_flips(self) -> np.ndarray:
        """``(ntri, 3)``: True where the local edge direction is high-to-low global id.

        Locally edge ``i`` runs from vertex ``i+2`` to vertex ``i+1``.
        """
        T = self.triangles
        start = T[:, [2, 0, 1]]
        end = T[:, [1, 2, 0]]
        return start > end

    def stats(self) -> dict:
        return {
            "n": self.n, "perturb": self.perturb, "seed": self.seed,
            "nvertices": self.nvertices, "ntriangles": self.ntriangles,
            "nedges": self.nedges, "h": self.h, "min_angle": self.min_angle,
            "sigma0": self.sigma0,
        }


def triangle_angles(X: np.ndarray) -> np.ndarray:
    """Interior angles in degrees, shape ``(ntri, 3)``."""
    out = []
    for i in range(3):
        a = X[:, (i + 1) % 3] - X[:, i]
        b = X[:, (i + 2) % 3] - X[:, i]
        c = np.einsum("ij,ij->i", a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
        out.append(np.degrees(np.arccos(np.clip(c, -1, 1))))
    return np.stack(out, axis=1)


def from_triangles(vertices, triangles, n: int = 0, perturb: float = 0.0, seed: int = 0) -> Mesh:
    """Build edge topology for a triangle list (orientation fixed to CCW)."""
    V = np.asarray(vertices, dtype=float)
    T = np.asarray(triangles, dtype=np.int64).copy()
    X = V[T]
    det = ((X[:, 1, 0] - X[:, 0, 0]) * (X[:, 2, 1] - X[:, 0, 1])
           - (X[:, 1, 1] - X[:, 0, 1]) * (X[:, 2, 0] - X[:, 0, 0]))
    cw = det < 0
    T[cw] = T[cw][:, [0, 2, 1]]
    if np.any(det == 0):
        raise ValueError("degenerate triangle")

    local = np.stack([T[:, [1, 2]], T[:, [2, 0]], T[:, [0, 1]]], axis=1)  # opposite vertex i
    pairs = np.sort(local.reshape(-1, 2), axis=1)
    edges, inverse = np.unique(pairs, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    tri_edges = inverse.reshape(-1, 3)
    owner = np.repeat(np.arange(len(T)), 3)
    et = np.full((len(edges), 2), -1, dtype=np.int64)
    order = np.argsort(inverse, kind="stable")
    counts = np.bincount(inverse, minlength=len(edges))
    if counts.max() > 2:
        raise ValueError("non-manifold edge")
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    et[:, 0] = owner[order[starts]]
    two = counts == 2
    et[two, 1] = owner[order[starts[two] + 1]]
    bedges = np.flatnonzero(~two)
    bverts = np.unique(edges[bedges].ravel())
    return Mesh(V, T, edges, et, tri_edges, bverts, bedges, n, perturb, seed)


def _structured(n: int):
    x = np.linspace(0.0, 1.0, n + 1)
    X, Y = np.meshgrid(x, x, indexing="xy")
    V = np.column_stack([X.ravel(), Y.ravel()])
    idx = lambda i, j: j * (n + 1) + i  # noqa: E731
    tris = []
    for j in range(n):
        for i in range(n):
            a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return V, np.array(tris, dtype=np.int64)


def unit_square_mesh(n: int, perturb: float = 0.2, seed: int = 1) -> Mesh:
    """``n x n`` grid split along the ``(+1, +1)`` diagonals, interior vertices jittered.

    Interior vertices move by ``perturb / n * (dx, dy)`` with ``dx, dy``
    uniform in ``[-1, 1]``.  If the minimum angle drops below 20 degrees the
    perturbation is halved and the mesh regenerated.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= perturb <= 0.3:
        raise ValueError("perturb must lie in [0, 0.3]")
    V0, T = _structured(n)
    on_bdry = (np.isclose(V0, 0.0) | np.isclose(V0, 1.0)).any(axis=1)
    p = perturb
    while True:
        rng = np.random.default_rng(seed)
        delta = rng.uniform(-1.0, 1.0, size=V0.shape)
        V = V0 + (p / n) * delta * (~on_bdry)[:, None]
        mesh = from_triangles(V, T, n=n, perturb=p, seed=seed)
        if mesh.min_angle >= MIN_ANGLE_DEG or p == 0.0:
            break
        log.warning("min angle %.1f deg < %.0f with perturb=%g; halving",
                    mesh.min_angle, MIN_ANGLE_DEG, p)
        p = p / 2 if p > 1e-3 else 0.0
    return mesh


@dataclass(frozen=True)
class EdgeGeometry:
    tangent: np.ndarray
    normal: np.ndarray
    length: float
    triangles: tuple
    signs: tuple


def edge_geometry(mesh: Mesh, edge_id: int) -> EdgeGeometry:
    """Tangent (low to high vertex id), global normal, length and adjacency signs.

    The global normal is the outward normal of the lower-id adjacent
    triangle (outward from the domain on boundary edges).
    """
    a, b = mesh.edges[edge_id]
    t = mesh.vertices[b] - mesh.vertices[a]
    length = float(np.linalg.norm(t))
    t = t / length
    rot = np.array([-t[1], t[0]])
    t0 = mesh.edge_triangles[edge_id, 0]
    tri = mesh.triangles[t0]
    opp = mesh.vertices[[v for v in tri if v not in (a, b)][0]]
    n = rot if rot @ (mesh.vertices[a] - opp) > 0 else -rot
    tris = tuple(int(x) for x in mesh.edge_triangles[edge_id] if x >= 0)
    signs = (1,) if len(tris) == 1 else (1, -1)
    return EdgeGeometry(t, n, length, tris, signs)


def edge_normals(mesh: Mesh) -> np.ndarray:
    """Global unit normals of all edges, ``(nedges, 2)``."""
    a, b = mesh.edges[:, 0], mesh.edges[:, 1]
    t = mesh.vertices[b] - mesh.vertices[a]
    t = t / np.linalg.norm(t, axis=1)[:, None]
    rot = np.column_stack([-t[:, 1], t[:, 0]])
    tri = mesh.triangles[mesh.edge_triangles[:, 0]]
    centroid = mesh.vertices[tri].mean(axis=1)
    s = np.sign(np.einsum("ij,ij->i", rot, mesh.vertices[a] - centroid))
    return rot * s[:, None]


def write_mesh(mesh: Mesh, path: Union[str, Path]) -> None:
    """Plain text: ``ntri nvert`` header, coordinates, then connectivity."""
    lines = [f"{mesh.ntriangles} {mesh.nvertices}"]
    lines += [f"{x:.17g} {y:.17g}" for x, y in mesh.vertices]
    lines += [f"{a} {b} {c}" for a, b, c in mesh.triangles]
    Path(path).write_text("\n".join(lines) + "\n")


def read_mesh(path: Union[str, Path]) -> Mesh:
    rows = Path(path).read_text().split("\n")
    ntri, nv = (int(x) for x in rows[0].split())
    V = np.array([[float(x) for x in r.split()] for r in rows[1:1 + nv]])
    T = np.array([[int(x) for x in r.split()] for r in rows[1 + nv:1 + nv + ntri]])
    return from_triangles(V, T)
