"""Closed-form morphometry on the cubical complex of pore voxels.

One streaming pass over z-slabs accumulates, for the pore indicator ``P``:

* ``n3`` pore voxels, ``n2{x,y,z}`` face-adjacent pore pairs,
* ``n1{xy,yz,zx}`` fully-pore 2x2 squares, ``n0`` fully-pore 2x2x2 cubes,
* per-axis signed edge classes from the 2x2 window around every lattice edge
  (1 pore of 4 is convex, 3 of 4 concave, 2 adjacent flat, 2 diagonal pinch).

From these: ``A`` is the exposed-face area, ``M = pi/4 * sum_d s_d (L_convex(d)
- L_concave(d))`` the total mean curvature and ``chi = n3 - sum n2 + sum n1 - n0``
the Euler characteristic with 6-connected pores.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from ._parallel import map_slabs
from .volume import BinaryVolume, BoundaryMode, EmptyInputError, VoxelSpacing, as_binary

NO_INTERFACE = "no pore/solid interface (all-pore or all-solid): A=0, M=NaN"


@dataclass(frozen=True)
class CellCounts:
    n3: int = 0
    n2x: int = 0
    n2y: int = 0
    n2z: int = 0
    n1xy: int = 0
    n1yz: int = 0
    n1zx: int = 0
    n0: int = 0
    # pore faces lying on the box itself, only non-zero for OPEN boundaries
    open_x: int = 0
    open_y: int = 0
    open_z: int = 0

    def __add__(self, other: "CellCounts") -> "CellCounts":
        return CellCounts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))


@dataclass(frozen=True)
class EdgeClassCounts:
    """Unit-edge tallies per axis; ``*_x`` counts edges parallel to x."""

    convex_x: int = 0
    convex_y: int = 0
    convex_z: int = 0
    concave_x: int = 0
    concave_y: int = 0
    concave_z: int = 0
    pinch_x: int = 0
    pinch_y: int = 0
    pinch_z: int = 0

    def __add__(self, other: "EdgeClassCounts") -> "EdgeClassCounts":
        return EdgeClassCounts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    @property
    def pinches(self) -> int:
        return self.pinch_x + self.pinch_y + self.pinch_z


def _pair(a: np.ndarray, axis: int, periodic: bool):
    """(lo, hi) views of neighbouring samples along ``axis``."""
    if periodic:
        return a, np.roll(a, -1, axis=axis)
    lo = [slice(None)] * a.ndim
    hi = [slice(None)] * a.ndim
    lo[axis] = slice(None, -1)
    hi[axis] = slice(1, None)
    return a[tuple(lo)], a[tuple(hi)]


def _windows(lo: np.ndarray, hi: np.ndarray, axis: int, periodic: bool):
    """Classify 2x2 windows spanned by layers (lo, hi) and a shift along ``axis``.

    Returns (convex, concave, pinch, full, full_mask).
    """
    a, c = _pair(lo, axis, periodic)
    b, d = _pair(hi, axis, periodic)
    k = a.astype(np.uint8) + b + c + d
    hist = np.bincount(k.ravel(), minlength=5)
    pinch = int(np.count_nonzero((k == 2) & (a == d)))
    full = k == 4
    return int(hist[1]), int(hist[3]), pinch, int(hist[4]), full


def _scan_slab(p: np.ndarray, z0: int, z1: int, periodic: bool):
    """Counts for owned layers ``z0:z1`` of the full pore array ``p``."""
    nz = p.shape[0]
    cur = p[z0:z1]
    if periodic:
        nxt = p[(np.arange(z0, z1) + 1) % nz]
    else:
        nxt = p[z0 + 1:min(z1 + 1, nz)]
    m = nxt.shape[0]  # owned layers that have a successor
    cz = cur[:m]

    n3 = int(np.count_nonzero(cur))
    lo, hi = _pair(cur, 2, periodic)
    n2x = int(np.count_nonzero(lo & hi))
    lo, hi = _pair(cur, 1, periodic)
    n2y = int(np.count_nonzero(lo & hi))
    n2z = int(np.count_nonzero(cz & nxt))

    # edges parallel to z: windows in the (y, x) plane of each owned layer
    ylo, yhi = _pair(cur, 1, periodic)
    cvz, ccz, pz, n1xy, _ = _windows(ylo, yhi, 2, periodic)
    # edges parallel to x: windows in the (z, y) plane
    cvx, ccx, px, n1yz, full_zy = _windows(cz, nxt, 1, periodic)
    # edges parallel to y: windows in the (z, x) plane
    cvy, ccy, py, n1zx, _ = _windows(cz, nxt, 2, periodic)

    lo, hi = _pair(full_zy, 2, periodic)
    n0 = int(np.count_nonzero(lo & hi))

    cells = CellCounts(n3, n2x, n2y, n2z, n1xy, n1yz, n1zx, n0)
    edges = EdgeClassCounts(cvx, cvy, cvz, ccx, ccy, ccz, px, py, pz)
    return cells, edges


def _pore_grid(bv: BinaryVolume, boundary: BoundaryMode) -> np.ndarray:
    p = bv.pores()
    if boundary is BoundaryMode.PAD_SOLID:
        p = np.pad(p, 1, constant_values=False)
    return p


def scan_pores(bin_vol, boundary=BoundaryMode.OPEN, threads: int | None = None, progress=None):
    """Single pass returning ``(CellCounts, EdgeClassCounts)`` for the pore phase.

    ``PAD_SOLID`` treats out-of-grid voxels as solid (equivalent to, and
    idempotent with, explicit padding); ``OPEN`` leaves box faces open;
    ``PERIODIC`` wraps all three axes.
    """
    bv = as_binary(bin_vol)
    boundary = BoundaryMode(boundary)
    p = _pore_grid(bv, boundary)
    return _scan_array(p, boundary, threads, progress)


def _scan_array(p: np.ndarray, boundary: BoundaryMode, threads=None, progress=None):
    periodic = boundary is BoundaryMode.PERIODIC
    cells = CellCounts()
    edges = EdgeClassCounts()
    if p.size == 0:
        return cells, edges
    for c, e in map_slabs(lambda z0, z1: _scan_slab(p, z0, z1, periodic), p.shape, threads, progress):
        cells = cells + c
        edges = edges + e

    if boundary is BoundaryMode.OPEN:
        def faces(axis):
            first = np.take(p, 0, axis=axis)
            last = np.take(p, -1, axis=axis)
            return int(np.count_nonzero(first)) + int(np.count_nonzero(last))

        cells = replace(cells, open_x=faces(2), open_y=faces(1), open_z=faces(0))
    return cells, edges


def count_cells(bin_vol, boundary=BoundaryMode.OPEN, threads=None) -> CellCounts:
    return scan_pores(bin_vol, boundary, threads)[0]


def edge_classes(bin_vol, boundary=BoundaryMode.OPEN, threads=None) -> EdgeClassCounts:
    return scan_pores(bin_vol, boundary, threads)[1]


def porosity(bin_vol) -> float:
    """Pore voxel fraction of the grid; independent of spacing."""
    bv = as_binary(bin_vol)
    if bv.size == 0:
        raise EmptyInputError("porosity of an empty volume is undefined")
    return int(np.count_nonzero(bv.values == 0)) / bv.size


def surface_area_voxel(counts: CellCounts, spacing: VoxelSpacing) -> float:
    """Area of pore faces touching solid, scaled per axis.

    Faces on an open box (``counts.open_*``) are not interface.
    """
    c, s = counts, spacing
    fx = 2 * c.n3 - 2 * c.n2x - c.open_x
    fy = 2 * c.n3 - 2 * c.n2y - c.open_y
    fz = 2 * c.n3 - 2 * c.n2z - c.open_z
    return fx * s.s_y * s.s_z + fy * s.s_x * s.s_z + fz * s.s_x * s.s_y


def mean_curvature_from_edges(edges: EdgeClassCounts, spacing: VoxelSpacing) -> float:
    """``pi/4 * sum_d s_d (L_convex(d) - L_concave(d))``."""
    e, s = edges, spacing
    net = (
        (e.convex_x - e.concave_x) * s.s_x
        + (e.convex_y - e.concave_y) * s.s_y
        + (e.convex_z - e.concave_z) * s.s_z
    )
    return math.pi / 4 * net


def mean_curvature_voxel(bin_vol, spacing: VoxelSpacing, boundary=BoundaryMode.OPEN, threads=None) -> float:
    """Signed total mean curvature of the pore interface (NaN without interface)."""
    cells, edges = scan_pores(bin_vol, boundary, threads)
    if surface_area_voxel(cells, spacing) == 0:
        return math.nan
    return mean_curvature_from_edges(edges, spacing)


def euler_voxel(counts: CellCounts) -> int:
    """Euler characteristic of the pore set with 6-connected pores."""
    c = counts
    return c.n3 - (c.n2x + c.n2y + c.n2z) + (c.n1xy + c.n1yz + c.n1zx) - c.n0


def euler_voxel_26(bin_vol, boundary=BoundaryMode.OPEN, threads=None) -> int:
    """Euler characteristic with 26-connected pores (6-connected solid).

    This is ``V - E + F - C`` of the union of closed pore cubes. Vertices and
    edges touching a pore are obtained as total lattice windows minus the
    fully-solid windows counted on the complement.
    """
    bv = as_binary(bin_vol)
    boundary = BoundaryMode(boundary)
    periodic = boundary is BoundaryMode.PERIODIC
    p = bv.pores()
    if not periodic:
        p = np.pad(p, 1, constant_values=False)
    pc, _ = _scan_array(p, BoundaryMode.PERIODIC if periodic else BoundaryMode.OPEN, threads)
    sc, _ = _scan_array(~p, BoundaryMode.PERIODIC if periodic else BoundaryMode.OPEN, threads)
    nz, ny, nx = p.shape
    if periodic:
        w0 = w_x = w_y = w_z = nz * ny * nx
    else:
        w0 = (nz - 1) * (ny - 1) * (nx - 1)
        w_x = (nz - 1) * (ny - 1) * nx
        w_y = (nz - 1) * ny * (nx - 1)
        w_z = nz * (ny - 1) * (nx - 1)
    verts = w0 - sc.n0
    edges = (w_x - sc.n1yz) + (w_y - sc.n1zx) + (w_z - sc.n1xy)
    faces = (2 * pc.n3 - pc.n2x) + (2 * pc.n3 - pc.n2y) + (2 * pc.n3 - pc.n2z)
    return verts - edges + faces - pc.n3


@dataclass(frozen=True)
class VoxelResult:
    porosity: float
    surface_area: float
    total_mean_curvature: float
    euler_characteristic: int
    counts: CellCounts
    edges: EdgeClassCounts
    warnings: tuple[str, ...] = ()


def voxel_metrics(bin_vol, spacing: VoxelSpacing | None = None, boundary=BoundaryMode.OPEN,
                  connectivity: int = 6, threads=None, progress=None) -> VoxelResult:
    """All four descriptors from one pass over the pore phase."""
    bv = as_binary(bin_vol)
    spacing = spacing or VoxelSpacing()
    boundary = BoundaryMode(boundary)
    if connectivity not in (6, 26):
        raise ValueError("connectivity must be 6 or 26")
    cells, edges = scan_pores(bv, boundary, threads, progress)
    area = surface_area_voxel(cells, spacing)
    warnings = list(bv.warnings)
    if area == 0:
        m = math.nan
        warnings.append(NO_INTERFACE)
    else:
        m = mean_curvature_from_edges(edges, spacing)
    chi = euler_voxel(cells) if connectivity == 6 else euler_voxel_26(bv, boundary, threads)
    return VoxelResult(porosity(bv), area, m, chi, cells, edges, tuple(warnings))
