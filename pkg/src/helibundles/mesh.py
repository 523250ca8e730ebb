"""Closed oriented meshes of the unit momentum sphere.

Two families: latitude/longitude grids (quad belts with triangle fans at
the poles) and subdivided icosahedra. Faces are stored counterclockwise
as seen from outside, so signed face solid angles are positive and sum
to 4 pi.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ResolutionTooLow

MIN_N_THETA = 4
MIN_N_PHI = 8


@dataclass(frozen=True)
class SphereMesh:
    """Unit-sphere mesh: (n, 3) vertex array plus oriented vertex cycles."""

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]
    metadata: dict = field(default_factory=dict)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def faces_by_size(self) -> dict[int, np.ndarray]:
        """Group faces into (m, size) index arrays, keeping original order."""
        groups: dict[int, list] = {}
        order: dict[int, list] = {}
        for i, f in enumerate(self.faces):
            groups.setdefault(len(f), []).append(f)
            order.setdefault(len(f), []).append(i)
        return {n: (np.asarray(order[n]), np.asarray(groups[n]))
                for n in groups}


def edge_audit(faces) -> int:
    """Check the closed-oriented invariant; return the undirected edge count.

    Every directed edge must occur exactly once, and its reversal exactly
    once (each undirected edge is shared by two faces traversed in
    opposite directions). Raises ValueError otherwise.
    """
    directed = set()
    for f in faces:
        for a, b in zip(f, tuple(f[1:]) + (f[0],)):
            if a == b:
                raise ValueError(f"degenerate edge ({a},{b})")
            if (a, b) in directed:
                raise ValueError(f"directed edge ({a},{b}) appears twice")
            directed.add((a, b))
    for a, b in directed:
        if (b, a) not in directed:
            raise ValueError(f"boundary edge ({a},{b}) has no opposite")
    return len(directed) // 2


def euler_characteristic(mesh: SphereMesh) -> int:
    e = edge_audit(mesh.faces)
    return mesh.n_vertices - e + mesh.n_faces


def _validate(mesh: SphereMesh) -> SphereMesh:
    norms = np.linalg.norm(mesh.vertices, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-12:
        raise ValueError("mesh vertices must be unit vectors")
    if euler_characteristic(mesh) != 2:
        raise ValueError("mesh is not a topological sphere")
    return mesh


def latlon_mesh(n_theta: int, n_phi: int) -> SphereMesh:
    """Latitude/longitude mesh: n_theta bands by n_phi sectors.

    Interior bands are quads; both pole caps are triangle fans. Vertices
    are the two poles plus (n_theta - 1) rings of n_phi points.
    """
    if n_theta < MIN_N_THETA or n_phi < MIN_N_PHI:
        raise ResolutionTooLow(
            f"latlon needs n_theta >= {MIN_N_THETA} and n_phi >= {MIN_N_PHI}")
    thetas = np.pi * np.arange(1, n_theta) / n_theta
    phis = 2.0 * np.pi * np.arange(n_phi) / n_phi
    st, ct = np.sin(thetas), np.cos(thetas)
    ring = np.stack([np.outer(st, np.cos(phis)),
                     np.outer(st, np.sin(phis)),
                     np.outer(ct, np.ones(n_phi))], axis=2).reshape(-1, 3)
    vertices = np.vstack([[[0.0, 0.0, 1.0]], ring, [[0.0, 0.0, -1.0]]])
    south = vertices.shape[0] - 1

    def idx(i: int, j: int) -> int:
        return 1 + i * n_phi + (j % n_phi)

    faces: list[tuple[int, ...]] = []
    for j in range(n_phi):
        faces.append((0, idx(0, j), idx(0, j + 1)))
    for i in range(n_theta - 2):
        for j in range(n_phi):
            faces.append((idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)))
    for j in range(n_phi):
        faces.append((south, idx(n_theta - 2, j + 1), idx(n_theta - 2, j)))
    mesh = SphereMesh(vertices=vertices, faces=tuple(faces),
                      metadata={"family": "latlon", "n_theta": n_theta, "n_phi": n_phi})
    return _validate(mesh)


_ICO_FACES = (
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
)


def _icosahedron() -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    t = (1.0 + np.sqrt(5.0)) / 2.0
    raw = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    verts = raw / np.linalg.norm(raw, axis=1)[:, None]
    faces = []
    for a, b, c in _ICO_FACES:
        # enforce outward (counterclockwise seen from outside) traversal
        if np.linalg.det(verts[[a, b, c]]) < 0:
            b, c = c, b
        faces.append((a, b, c))
    return verts, faces


def icosphere_mesh(level: int) -> SphereMesh:
    """Icosahedron subdivided `level` times, vertices projected to the sphere."""
    if level < 1:
        raise ResolutionTooLow("icosphere needs subdivision level >= 1")
    verts, faces = _icosahedron()
    verts = [v for v in verts]
    for _ in range(level):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(a: int, b: int) -> int:
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    mesh = SphereMesh(vertices=np.asarray(verts), faces=tuple(faces),
                      metadata={"family": "icosphere", "level": level})
    return _validate(mesh)


def build_mesh(family: str, **params) -> SphereMesh:
    """Dispatch on family: 'latlon' (n_theta, n_phi) or 'icosphere' (level)."""
    family = family.lower()
    if family == "latlon":
        return latlon_mesh(params["n_theta"], params["n_phi"])
    if family in ("icosphere", "ico"):
        return icosphere_mesh(params["level"])
    raise ValueError(f"unknown mesh family {family!r}")


def triangle_solid_angles(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Signed solid angles of spherical triangles (Van Oosterom-Strackee)."""
    num = np.einsum("ij,ij->i", a, np.cross(b, c))
    den = (1.0 + np.einsum("ij,ij->i", a, b)
           + np.einsum("ij,ij->i", b, c)
           + np.einsum("ij,ij->i", c, a))
    return 2.0 * np.arctan2(num, den)


def face_solid_angles(mesh: SphereMesh) -> np.ndarray:
    """Per-face signed solid angle, positive for outward orientation."""
    out = np.empty(mesh.n_faces)
    v = mesh.vertices
    for size, (order, idx) in mesh.faces_by_size().items():
        total = np.zeros(len(idx))
        for i in range(1, size - 1):
            total += triangle_solid_angles(v[idx[:, 0]], v[idx[:, i]], v[idx[:, i + 1]])
        out[order] = total
    return out


def reversed_mesh(mesh: SphereMesh) -> SphereMesh:
    """Same mesh with all face cycles reversed (inward orientation)."""
    return SphereMesh(vertices=mesh.vertices,
                      faces=tuple(tuple(reversed(f)) for f in mesh.faces),
                      metadata={**mesh.metadata, "reversed": True})


def mesh_to_json(mesh: SphereMesh) -> str:
    """Debug export: {"vertices": [[x,y,z],...], "faces": [[i,j,k,...],...]}."""
    return json.dumps({"vertices": mesh.vertices.tolist(),
                       "faces": [list(f) for f in mesh.faces]})


def mesh_from_json(text: str) -> SphereMesh:
    data = json.loads(text)
    mesh = SphereMesh(vertices=np.asarray(data["vertices"], dtype=float),
                      faces=tuple(tuple(f) for f in data["faces"]),
                      metadata={"family": "json"})
    return _validate(mesh)
