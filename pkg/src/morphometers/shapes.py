"""Deterministic synthetic volumes (sphere, box, torus) for validation and demos.

Generators return an :class:`IntensityVolume` with ``foreground`` inside the
shape and the complementary 8-bit value (255 <-> 0) elsewhere.
"""
from __future__ import annotations

import warnings

import numpy as np

from ._parallel import slab_bounds
from .volume import IntensityVolume


def _check(dims, foreground):
    dims = tuple(int(n) for n in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise ValueError(f"dims must be three positive integers, got {dims}")
    if foreground not in (0, 255):
        raise ValueError("foreground must be 0 or 255")
    return dims, 255 - foreground


def _fill(dims, foreground, background, inside):
    """Evaluate ``inside(z, y, x)`` slab by slab on broadcast index grids."""
    out = np.full(dims, background, dtype=np.uint8)
    y = np.arange(dims[1], dtype=np.float64)[None, :, None]
    x = np.arange(dims[2], dtype=np.float64)[None, None, :]
    for z0, z1 in slab_bounds(dims):
        z = np.arange(z0, z1, dtype=np.float64)[:, None, None]
        out[z0:z1][inside(z, y, x)] = foreground
    return IntensityVolume(out)


def generate_sphere(dims, center, radius: float, foreground: int = 255) -> IntensityVolume:
    """Closed digital ball: voxel centres with squared distance <= r²."""
    dims, background = _check(dims, foreground)
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius!r}")
    cz, cy, cx = (float(c) for c in center)
    r2 = float(radius) ** 2
    if any(c - radius < 0 or c + radius > n - 1 for c, n in zip((cz, cy, cx), dims)):
        warnings.warn("sphere is clipped by the volume bounds", stacklevel=2)
    return _fill(dims, foreground, background,
                 lambda z, y, x: (z - cz) ** 2 + (y - cy) ** 2 + (x - cx) ** 2 <= r2)


def generate_box(dims, lo, hi, foreground: int = 255) -> IntensityVolume:
    """Axis-aligned box covering voxels ``lo..hi`` inclusive on every axis."""
    dims, background = _check(dims, foreground)
    lo = tuple(int(v) for v in lo)
    hi = tuple(int(v) for v in hi)
    for a, b, n in zip(lo, hi, dims):
        if not 0 <= a <= b < n:
            raise ValueError(f"box corners {lo}..{hi} invalid for dims {dims}")
    out = np.full(dims, background, dtype=np.uint8)
    out[lo[0]:hi[0] + 1, lo[1]:hi[1] + 1, lo[2]:hi[2] + 1] = foreground
    return IntensityVolume(out)


def generate_torus(dims, center, major_radius: float, minor_radius: float,
                   foreground: int = 255) -> IntensityVolume:
    """Solid torus around the z axis through ``center``."""
    dims, background = _check(dims, foreground)
    R, r = float(major_radius), float(minor_radius)
    if not 0 < r < R:
        raise ValueError(f"need 0 < minor < major radius, got minor={r}, major={R}")
    cz, cy, cx = (float(c) for c in center)
    return _fill(dims, foreground, background,
                 lambda z, y, x: (np.sqrt((x - cx) ** 2 + (y - cy) ** 2) - R) ** 2 + (z - cz) ** 2 <= r * r)
