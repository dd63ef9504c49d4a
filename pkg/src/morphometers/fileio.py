"""TIFF stack input, binary QC stacks, STL meshes and OBJ wireframes.

Files use the conventional ``x y z`` coordinate order; meshes are stored
internally as ``(z, y, x)``, so winding is reversed on export to keep
normals pointing from pore to solid.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
import tifffile

from .mesh import EdgeTable, TriangleMesh, build_edge_table, exposed_face_quads
from .volume import BinaryVolume, BoundaryMode, EmptyInputError, IntensityVolume, VoxelSpacing, as_binary

STL_HEADER = b"morphometers binary STL".ljust(80, b"\0")
STL_RECORD = np.dtype([
    ("normal", "<f4", (3,)),
    ("vertices", "<f4", (3, 3)),
    ("attr", "<u2"),
])

_COMPRESSION_OK = {1, 8, 32946}  # none, Adobe deflate, deflate
_GRAY = {0, 1}  # min-is-white, min-is-black


class FormatError(ValueError):
    """Unsupported or inconsistent image stack."""


def _page_array(page, path) -> np.ndarray:
    if page.samplesperpixel != 1 or page.photometric not in _GRAY:
        raise FormatError(f"{path}: only single-channel grayscale TIFF is supported")
    if page.compression not in _COMPRESSION_OK:
        raise FormatError(f"{path}: unsupported TIFF compression {page.compression!r}")
    if page.dtype not in (np.uint8, np.uint16):
        raise FormatError(f"{path}: unsupported sample type {page.dtype} (need 8- or 16-bit unsigned)")
    arr = page.asarray()
    if arr.ndim != 2:
        raise FormatError(f"{path}: expected 2D pages, got shape {arr.shape}")
    return arr


def _read_tiff_pages(path) -> list[np.ndarray]:
    try:
        with tifffile.TiffFile(path) as tif:
            return [_page_array(page, path) for page in tif.pages]
    except FormatError:
        raise
    except (tifffile.TiffFileError, ValueError) as exc:
        raise FormatError(f"{path}: not a readable TIFF ({exc})") from exc


def read_stack(path) -> IntensityVolume:
    """Read a multi-page TIFF or a directory of single-page TIFF slices.

    Directory slices are ordered by file name; each page/file is one z-slice.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix.lower() in (".tif", ".tiff"))
        slices = []
        for f in files:
            pages = _read_tiff_pages(f)
            if len(pages) != 1:
                raise FormatError(f"{f}: directory slices must be single-page TIFFs")
            slices.append(pages[0])
    elif path.exists():
        slices = _read_tiff_pages(path)
    else:
        raise FileNotFoundError(f"{path}: no such file or directory")
    if not slices:
        raise EmptyInputError(f"{path}: stack has no slices")
    shapes = {s.shape for s in slices}
    if len(shapes) != 1:
        raise FormatError(f"{path}: slices have mixed dimensions {sorted(shapes)}")
    dtypes = {s.dtype for s in slices}
    dtype = np.uint16 if np.dtype(np.uint16) in dtypes else np.uint8
    return IntensityVolume(np.stack([s.astype(dtype, copy=False) for s in slices]))


def write_stack(values: np.ndarray, path) -> None:
    """Multi-page uncompressed grayscale TIFF, one page per z-slice."""
    values = np.asarray(values)
    try:
        tifffile.imwrite(path, values, photometric="minisblack", metadata=None)
    except OSError as exc:
        raise OSError(f"{path}: cannot write TIFF stack ({exc})") from exc


def write_binary_stack(bin_vol, path) -> None:
    """8-bit stack with pore = 0 and solid = 255."""
    bv = as_binary(bin_vol)
    write_stack(bv.values * np.uint8(255), path)


def _xyz(mesh: TriangleMesh):
    """Vertices in x, y, z order and faces with winding adjusted to match."""
    return mesh.vertices[:, ::-1], mesh.faces[:, [0, 2, 1]]


def write_stl(mesh: TriangleMesh, path, chunk: int = 1 << 20) -> None:
    """Binary little-endian STL: 84 + 50 * faces bytes, written in chunks."""
    if mesh.n_faces > np.iinfo(np.uint32).max:
        raise OverflowError(f"{mesh.n_faces} faces exceed the STL 32-bit triangle count")
    v, f = _xyz(mesh)
    try:
        with open(path, "wb") as fh:
            fh.write(STL_HEADER)
            fh.write(np.uint32(mesh.n_faces).tobytes())
            for i in range(0, mesh.n_faces, chunk):
                tri = v[f[i:i + chunk]]
                n = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
                norm = np.linalg.norm(n, axis=1, keepdims=True)
                rec = np.zeros(len(tri), dtype=STL_RECORD)
                rec["normal"] = np.divide(n, norm, out=np.zeros_like(n), where=norm > 0)
                rec["vertices"] = tri
                fh.write(rec.tobytes())
    except OSError as exc:
        raise OSError(f"{path}: cannot write STL ({exc})") from exc


def read_stl(path):
    """Return ``(normals, triangles)`` in file (x, y, z) order; used for checks."""
    data = Path(path).read_bytes()
    count = int(np.frombuffer(data, dtype="<u4", count=1, offset=80)[0])
    rec = np.frombuffer(data, dtype=STL_RECORD, count=count, offset=84)
    return rec["normal"].astype(np.float64), rec["vertices"].astype(np.float64)


def _fmt(x: float) -> str:
    return repr(x)


def _write_obj(path, vertices_xyz: np.ndarray, lines: np.ndarray, chunk: int = 1 << 16) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("# morphometers wireframe\n")
            for i in range(0, len(vertices_xyz), chunk):
                fh.writelines(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n" for x, y, z in vertices_xyz[i:i + chunk].tolist())
            for i in range(0, len(lines), chunk):
                fh.writelines(f"l {a + 1} {b + 1}\n" for a, b in lines[i:i + chunk].tolist())
    except OSError as exc:
        raise OSError(f"{path}: cannot write OBJ ({exc})") from exc


def write_obj_wireframe(source, path, spacing: VoxelSpacing | None = None,
                        boundary=BoundaryMode.OPEN, edges: EdgeTable | None = None) -> None:
    """Text OBJ of ``v``/``l`` records.

    ``source`` is a :class:`TriangleMesh` (consolidated mesh edges) or a binary
    volume (the four sides of every exposed pore face, welded and deduplicated).
    ``spacing`` and ``boundary`` only apply to volume sources; ``edges`` may
    pass an already built table for a mesh source.
    """
    if isinstance(source, TriangleMesh):
        table = edges if edges is not None else build_edge_table(source)
        used = np.unique(source.faces)
        remap = np.full(source.n_vertices, -1, dtype=np.int64)
        remap[used] = np.arange(len(used))
        verts = source.vertices[used][:, ::-1]
        lines = remap[table.edges]
    else:
        spacing = spacing or VoxelSpacing()
        quads = exposed_face_quads(as_binary(source), BoundaryMode(boundary))
        verts, lines = _weld_wire(quads, spacing)
    _write_obj(path, verts, lines)


def _weld_wire(quads: np.ndarray, spacing: VoxelSpacing):
    if len(quads) == 0:
        return np.zeros((0, 3)), np.zeros((0, 2), dtype=np.int64)
    flat = quads.reshape(-1, 3)
    uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
    idx = inverse.reshape(-1, 4)
    seg = np.concatenate([idx[:, [k, (k + 1) % 4]] for k in range(4)], axis=0)
    seg = np.unique(np.sort(seg, axis=1), axis=0)
    verts = uniq.astype(np.float64) * 0.5 * spacing.as_array()
    return verts[:, ::-1], seg


def read_obj(path):
    """Parse ``v``/``l`` records; returns ``(vertices_xyz, lines)`` (0-based)."""
    verts, lines = [], []
    for row in Path(path).read_text().splitlines():
        parts = row.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(t) for t in parts[1:4]])
        elif parts[0] == "l":
            lines.append([int(t) - 1 for t in parts[1:3]])
    return np.array(verts, dtype=np.float64).reshape(-1, 3), np.array(lines, dtype=np.int64).reshape(-1, 2)


def read_binary_stack(path) -> BinaryVolume:
    """Read back a QC stack written by :func:`write_binary_stack` (0 = pore)."""
    vol = read_stack(path)
    return BinaryVolume((vol.values != 0).astype(np.uint8))
