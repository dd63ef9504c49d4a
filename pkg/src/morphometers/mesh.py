"""Triangulated pore/solid interface and its area, mean curvature and Euler number.

Two extraction styles are available. ``MARCHING_CUBES`` runs marching cubes
on the pore indicator at isolevel 0.5, so every vertex is a voxel-edge
midpoint. ``RECTILINEAR`` emits two triangles per exposed pore voxel face.
Vertices are welded by exact lattice position (kept as integer doubled index
coordinates) and scaled by the spacing into world ``(z, y, x)``. Faces are
oriented with normals pointing from pore to solid.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _mc_table
from ._parallel import map_slabs
from .volume import BoundaryMode, VoxelSpacing, as_binary


class MeshStyle(enum.Enum):
    RECTILINEAR = "rect"
    MARCHING_CUBES = "mc"


class UnsupportedModeError(ValueError):
    pass


@dataclass(frozen=True)
class TriangleMesh:
    vertices: np.ndarray  # (V, 3) float64 world coordinates, (z, y, x) order
    faces: np.ndarray  # (F, 3) int64
    style: MeshStyle = MeshStyle.MARCHING_CUBES

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        f = np.ascontiguousarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if f.size and (f.min() < 0 or f.max() >= len(v)):
            raise ValueError("face indices out of range")
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)
        object.__setattr__(self, "style", MeshStyle(self.style))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def face_normals(self, unit: bool = True) -> np.ndarray:
        v = self.vertices
        out = np.empty((self.n_faces, 3))
        for i in range(0, self.n_faces, 1 << 20):
            f = self.faces[i:i + (1 << 20)]
            n = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
            if unit:
                n /= np.linalg.norm(n, axis=1, keepdims=True)
            out[i:i + len(f)] = n
        return out


def _empty(style):
    return TriangleMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), style)


def _mc_slab(p: np.ndarray, z0: int, z1: int):
    """Doubled vertex coordinates (T, 3, 3) of triangles in cells z0:z1."""
    block = p[z0:z1 + 1]
    case = np.zeros((z1 - z0, p.shape[1] - 1, p.shape[2] - 1), dtype=np.uint8)
    for i, (dz, dy, dx) in enumerate(_mc_table.CORNER_OFFSETS):
        case |= block[dz:dz + z1 - z0, dy:dy + case.shape[1], dx:dx + case.shape[2]].astype(np.uint8) << i
    active = np.nonzero((case != 0) & (case != 255))
    cases = case[active].astype(np.int64)
    origin = np.stack(active, axis=1).astype(np.int32)
    origin[:, 0] += z0
    counts = _mc_table.NTRI[cases]
    cell = np.repeat(np.arange(len(cases), dtype=np.int32), counts)
    # position of each triangle within its cell's list
    local = np.arange(len(cell), dtype=np.int32) - np.repeat((np.cumsum(counts) - counts).astype(np.int32), counts)
    edges = _mc_table.TRI_TABLE[cases[cell], local]  # (T, 3)
    return 2 * origin[cell][:, None, :] + _EDGE_OFFSETS[edges]


def _rect_templates():
    """Per direction (axis, sign): doubled corner offsets of the outward square."""
    out = {}
    for axis in range(3):
        u, v = [a for a in range(3) if a != axis]
        for sign in (-1, 1):
            corners = []
            for du, dv in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
                c = np.zeros(3, dtype=np.int64)
                c[axis], c[u], c[v] = sign, du, dv
                corners.append(c)
            corners = np.array(corners)
            normal = np.cross(corners[1] - corners[0], corners[2] - corners[0])
            if normal[axis] * sign < 0:
                corners = corners[::-1]
            out[axis, sign] = corners.astype(np.int32)
    return out


_RECT = _rect_templates()
_EDGE_OFFSETS = _mc_table.EDGE_OFFSETS.astype(np.int32)


def _quad_slab(p: np.ndarray, z0: int, z1: int):
    """Doubled corner coordinates (Q, 4, 3) of exposed pore faces in layers z0:z1."""
    quads = []
    for axis in range(3):
        for sign in (-1, 1):
            nb = np.ones_like(p[z0:z1])
            src = [slice(z0, z1), slice(None), slice(None)]
            dst = [slice(None)] * 3
            n = p.shape[axis]
            # neighbour of voxel i along axis is i + sign; missing neighbours stay "pore"
            if axis == 0:
                lo, hi = max(z0 + sign, 0), min(z1 + sign, n)
                dst[0] = slice(lo - sign - z0, hi - sign - z0)
                src[0] = slice(lo, hi)
            else:
                dst[axis] = slice(max(-sign, 0), n - max(sign, 0))
                src[axis] = slice(max(sign, 0), n + min(sign, 0))
            nb[tuple(dst)] = p[tuple(src)]
            exposed = np.nonzero(p[z0:z1] & ~nb)
            centre = np.stack(exposed, axis=1).astype(np.int32)
            centre[:, 0] += z0
            quads.append(2 * centre[:, None, :] + _RECT[axis, sign][None])
    return np.concatenate(quads, axis=0)


def _rect_slab(p: np.ndarray, z0: int, z1: int):
    quad = _quad_slab(p, z0, z1)
    return np.concatenate([quad[:, [0, 1, 2]], quad[:, [0, 2, 3]]], axis=0)


def _boundary_grid(bin_vol, boundary):
    boundary = BoundaryMode(boundary)
    if boundary is BoundaryMode.PERIODIC:
        raise UnsupportedModeError("periodic boundaries are not supported for meshing")
    p = as_binary(bin_vol).pores()
    if boundary is BoundaryMode.PAD_SOLID:
        return np.pad(p, 1, constant_values=False), 1
    return p, 0


def exposed_face_quads(bin_vol, boundary=BoundaryMode.OPEN) -> np.ndarray:
    """Doubled index coordinates (Q, 4, 3) of every exposed pore voxel face."""
    p, shift = _boundary_grid(bin_vol, boundary)
    if not p.any():
        return np.zeros((0, 4, 3), dtype=np.int64)
    return _quad_slab(p, 0, p.shape[0]) - 2 * shift


def _vertex_keys(tri_coords: np.ndarray, shape) -> np.ndarray:
    """Pack doubled coordinates (T, 3, 3) into one int64 key per corner (T, 3)."""
    ext = [2 * n + 2 for n in shape]
    c = tri_coords.astype(np.int64) + 1
    return (c[..., 0] * ext[1] + c[..., 1]) * ext[2] + c[..., 2]


def _weld(keys: np.ndarray, shape, shift: int, spacing: VoxelSpacing, style) -> TriangleMesh:
    """Merge corners with equal keys into shared vertices; faces in canonical order."""
    if len(keys) == 0:
        return _empty(style)
    ext = np.array([2 * n + 2 for n in shape], dtype=np.int64)
    uniq, inverse = np.unique(keys.ravel(), return_inverse=True)
    doubled = np.stack([uniq // (ext[1] * ext[2]), uniq // ext[2] % ext[1], uniq % ext[2]], axis=1)
    del uniq
    doubled -= 1 + 2 * shift
    verts = doubled.astype(np.float64) * 0.5 * spacing.as_array()
    faces = inverse.reshape(-1, 3)
    # canonical order, independent of slab partitioning: rotate each triangle
    # so its smallest index leads (winding kept), then sort rows
    rot = np.argmin(faces, axis=1)[:, None]
    faces = np.take_along_axis(faces, (rot + np.arange(3)) % 3, axis=1)
    faces = faces[np.lexsort(faces.T[::-1])]
    # both triangle tables are free of degenerate triangles (checked in the tests)
    return TriangleMesh(verts, faces, style)


def extract_interface(bin_vol, spacing: VoxelSpacing | None = None, style=MeshStyle.MARCHING_CUBES,
                      boundary=BoundaryMode.OPEN, threads=None, progress=None) -> TriangleMesh:
    """Triangulate the pore/solid interface in world coordinates.

    ``PAD_SOLID`` treats samples outside the grid as solid, closing the
    surface; ``OPEN`` leaves it open at the box. Periodic is not supported.
    """
    spacing = spacing or VoxelSpacing()
    style = MeshStyle(style)
    p, shift = _boundary_grid(bin_vol, boundary)
    if not p.any() or p.all():
        return _empty(style)

    if style is MeshStyle.MARCHING_CUBES:
        if min(p.shape) < 2:
            return _empty(style)
        parts = list(map_slabs(lambda z0, z1: _vertex_keys(_mc_slab(p, z0, z1), p.shape),
                               (p.shape[0] - 1,) + p.shape[1:], threads, progress))
    else:
        parts = list(map_slabs(lambda z0, z1: _vertex_keys(_rect_slab(p, z0, z1), p.shape),
                               p.shape, threads, progress))
    keys = np.concatenate(parts, axis=0) if parts else np.zeros((0, 3), dtype=np.int64)
    del parts
    return _weld(keys, p.shape, shift, spacing, style)


_CHUNK = 1 << 20  # rows per block in the per-edge float work


@dataclass(frozen=True)
class EdgeTable:
    """Consolidated undirected edges.

    ``faces`` holds the first two incident faces (-1 when missing) and
    ``opposite`` the vertex across the edge in each. ``dihedral`` is the
    signed angle between the two face normals (positive on convex edges,
    NaN unless the edge has exactly two faces).
    """

    edges: np.ndarray
    face_count: np.ndarray
    faces: np.ndarray
    opposite: np.ndarray
    length: np.ndarray
    dihedral: np.ndarray

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def open_edge_count(self) -> int:
        """Edges not shared by exactly two faces (boundary or nonmanifold)."""
        return int(np.count_nonzero(self.face_count != 2))


def build_edge_table(mesh: TriangleMesh) -> EdgeTable:
    f = mesh.faces
    v = mesh.vertices
    nf, nv = len(f), len(v)
    if nf == 0:
        z = np.zeros(0)
        return EdgeTable(np.zeros((0, 2), dtype=np.int64), z.astype(np.int64),
                         np.zeros((0, 2), dtype=np.int64), np.zeros((0, 2), dtype=np.int64), z, z)
    # half-edge h = 3 * face + slot joins corners slot and slot + 1; the
    # opposite corner is slot + 2
    key = np.empty((nf, 3), dtype=np.int64)
    for slot in range(3):
        a, b = f[:, slot], f[:, (slot + 1) % 3]
        key[:, slot] = np.minimum(a, b) * nv + np.maximum(a, b)
    key = key.ravel()
    order = np.argsort(key, kind="stable")
    sorted_key = key[order]
    del key
    first = np.ones(len(order), dtype=bool)
    first[1:] = sorted_key[1:] != sorted_key[:-1]
    start = np.flatnonzero(first)
    del first
    counts = np.diff(np.append(start, len(order)))
    uniq = sorted_key[start]
    del sorted_key
    edges = np.stack([uniq // nv, uniq % nv], axis=1)
    del uniq

    def incident(h):
        face = h // 3
        return face, f[face, (h % 3 + 2) % 3]

    faces = np.full((len(start), 2), -1, dtype=np.int64)
    opposite = np.full((len(start), 2), -1, dtype=np.int64)
    faces[:, 0], opposite[:, 0] = incident(order[start])
    multi = counts >= 2
    faces[multi, 1], opposite[multi, 1] = incident(order[start[multi] + 1])
    del order, start

    length = np.linalg.norm(v[edges[:, 1]] - v[edges[:, 0]], axis=1)
    dihedral = np.full(len(edges), np.nan)
    two = np.flatnonzero(counts == 2)
    normals = mesh.face_normals() if len(two) else None
    for i in range(0, len(two), _CHUNK):
        idx = two[i:i + _CHUNK]
        n1 = normals[faces[idx, 0]]
        n2 = normals[faces[idx, 1]]
        angle = np.arctan2(np.linalg.norm(np.cross(n1, n2), axis=1), np.einsum("ij,ij->i", n1, n2))
        # convex when the far vertex of face 2 lies behind face 1
        behind = np.einsum("ij,ij->i", n1, v[opposite[idx, 1]] - v[edges[idx, 0]])
        dihedral[idx] = np.where(behind < 0, angle, -angle)
    return EdgeTable(edges, counts, faces, opposite, length, dihedral)


def mesh_surface_area(mesh: TriangleMesh) -> float:
    if mesh.n_faces == 0:
        return 0.0
    # pairwise summation over the full array keeps the result independent of chunking
    return float(0.5 * np.linalg.norm(mesh.face_normals(unit=False), axis=1).sum())


def mesh_total_mean_curvature(mesh: TriangleMesh, edges: EdgeTable | None = None) -> float:
    """``1/2 * sum_e length_e * signed dihedral_e`` over edges with two faces.

    Open or nonmanifold edges are skipped (see ``EdgeTable.open_edge_count``).
    Returns NaN for an empty mesh.
    """
    if mesh.n_faces == 0:
        return math.nan
    edges = edges if edges is not None else build_edge_table(mesh)
    ok = edges.face_count == 2
    return float(0.5 * np.sum(edges.length[ok] * edges.dihedral[ok]))


def mesh_euler(mesh: TriangleMesh, edges: EdgeTable | None = None) -> tuple[int, int]:
    """``(chi_surface, chi_object)``.

    ``chi_object`` is ``chi_surface / 2`` for a closed surface and equals
    ``chi_surface`` when the mesh has open edges.
    """
    edges = edges if edges is not None else build_edge_table(mesh)
    used = np.unique(mesh.faces).size
    chi_surface = used - edges.n_edges + mesh.n_faces
    closed = edges.open_edge_count == 0
    chi_object = chi_surface // 2 if closed and chi_surface % 2 == 0 else chi_surface
    return int(chi_surface), int(chi_object)


def normalized_mean_curvature(m: float, a: float) -> float:
    """``M / A``; NaN when the area is zero."""
    if a == 0 or math.isnan(a):
        return math.nan
    return m / a


@dataclass(frozen=True)
class MeshResult:
    surface_area: float
    total_mean_curvature: float
    chi_surface: int
    chi_object: int
    open_edge_count: int
    mesh: TriangleMesh
    edges: EdgeTable


def mesh_metrics(bin_vol, spacing: VoxelSpacing | None = None, style=MeshStyle.MARCHING_CUBES,
                 boundary=BoundaryMode.OPEN, threads=None, progress=None) -> MeshResult:
    mesh = extract_interface(bin_vol, spacing, style, boundary, threads, progress)
    edges = build_edge_table(mesh)
    area = mesh_surface_area(mesh)
    m = mesh_total_mean_curvature(mesh, edges)
    chi_s, chi_o = mesh_euler(mesh, edges)
    return MeshResult(area, m, chi_s, chi_o, edges.open_edge_count, mesh, edges)
