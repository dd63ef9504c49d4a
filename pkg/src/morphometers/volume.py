"""Voxel grid data model: spacing, intensity/binary volumes and phase conventions.

All arrays are indexed ``(z, y, x)``. Binary volumes use the fixed convention
``0 = pore`` and ``1 = solid``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

PORE = 0
SOLID = 1


class EmptyInputError(ValueError):
    """Raised when a volume has no voxels."""


class PhasePolarity(enum.Enum):
    PORES_DARK = "dark"
    PORES_BRIGHT = "bright"


class BoundaryMode(enum.Enum):
    """How voxels outside the grid are treated.

    ``OPEN`` treats them as missing data (interfaces stay open at the box),
    ``PAD_SOLID`` as solid (closes the interface), ``PERIODIC`` wraps the grid
    toroidally. Periodic is only supported by the voxel path.
    """

    OPEN = "open"
    PAD_SOLID = "pad"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class VoxelSpacing:
    s_z: float = 1.0
    s_y: float = 1.0
    s_x: float = 1.0
    unit: str = "px"

    def __post_init__(self):
        for name in ("s_z", "s_y", "s_x"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"spacing {name} must be positive, got {v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def isotropic(cls, s: float = 1.0, unit: str = "px") -> "VoxelSpacing":
        return cls(s, s, s, unit)

    def as_array(self) -> np.ndarray:
        return np.array([self.s_z, self.s_y, self.s_x], dtype=np.float64)

    def scaled(self, factor: float) -> "VoxelSpacing":
        return VoxelSpacing(self.s_z * factor, self.s_y * factor, self.s_x * factor, self.unit)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class IntensityVolume:
    """Raw scalar field as loaded from a stack, stored as uint16."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.ndim != 3:
            raise ValueError(f"expected a 3D array, got shape {arr.shape}")
        if arr.dtype.kind == "b":
            arr = arr.astype(np.uint8)
        if arr.dtype.kind not in "ui":
            raise ValueError(f"intensities must be integer-valued, got dtype {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > np.iinfo(np.uint16).max):
            raise ValueError("intensities must fit in the unsigned 16-bit range")
        object.__setattr__(self, "values", _frozen(arr.astype(np.uint16, copy=False)))

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(int(n) for n in self.values.shape)


@dataclass(frozen=True)
class BinaryVolume:
    """Strict {0, 1} field, 0 = pore and 1 = solid.

    ``warnings`` carries run metadata such as degenerate-input notices raised
    while the volume was produced.
    """

    values: np.ndarray
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.ndim != 3:
            raise ValueError(f"expected a 3D array, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and not np.isin(arr, (0, 1)).all():
                raise ValueError("binary volume values must be exactly 0 or 1")
            arr = arr.astype(np.uint8)
        elif arr.size and arr.max() > 1:
            raise ValueError("binary volume values must be exactly 0 or 1")
        object.__setattr__(self, "values", _frozen(arr))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @classmethod
    def from_pores(cls, pores, warnings=()) -> "BinaryVolume":
        """Build from a boolean pore mask (True = pore)."""
        return cls((~np.asarray(pores, dtype=bool)).astype(np.uint8), warnings)

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(int(n) for n in self.values.shape)

    @property
    def size(self) -> int:
        return int(self.values.size)

    def pores(self) -> np.ndarray:
        """Boolean pore indicator ``P = 1[B == 0]``."""
        return self.values == PORE

    def __eq__(self, other):
        if not isinstance(other, BinaryVolume):
            return NotImplemented
        return self.dims == other.dims and bool(np.array_equal(self.values, other.values))

    __hash__ = None


def as_binary(vol) -> BinaryVolume:
    """Accept a BinaryVolume or a 0/1 array-like."""
    return vol if isinstance(vol, BinaryVolume) else BinaryVolume(np.asarray(vol))


def world_coords(index, spacing: VoxelSpacing, dims=None) -> tuple[float, float, float]:
    """Map a ``(z, y, x)`` voxel index to physical coordinates.

    When ``dims`` is given the index is bounds-checked.
    """
    z, y, x = (int(i) for i in index)
    if dims is not None:
        for i, n in zip((z, y, x), dims):
            if not 0 <= i < n:
                raise IndexError(f"index {tuple(index)} out of bounds for dims {tuple(dims)}")
    return (spacing.s_z * z, spacing.s_y * y, spacing.s_x * x)


def intensity_extrema(vol) -> tuple[int, int]:
    values = vol.values if isinstance(vol, (IntensityVolume, BinaryVolume)) else np.asarray(vol)
    if values.size == 0:
        raise EmptyInputError("cannot take extrema of an empty volume")
    return int(values.min()), int(values.max())
