"""Intensity -> pore/solid mapping, optional morphology and solid padding."""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from .volume import (
    BinaryVolume,
    EmptyInputError,
    IntensityVolume,
    PhasePolarity,
    as_binary,
    intensity_extrema,
)

DEGENERATE_INTENSITY = "constant-intensity input: every voxel mapped to pore"


def thresholds(i_min: float, i_max: float, epsilon: float) -> tuple[float, float]:
    """Return ``(tau_low, tau_high)`` for the given extrema and tolerance."""
    span = i_max - i_min
    return i_min + epsilon * span, i_max - epsilon * span


def binarize(vol, polarity=PhasePolarity.PORES_DARK, epsilon: float = 0.0) -> BinaryVolume:
    """Map intensities to 0 = pore / 1 = solid with an inclusive pore branch.

    Pores dark: ``I <= tau_low`` is pore. Pores bright: ``I >= tau_high`` is
    pore. ``epsilon`` is a fraction of the intensity range in ``[0, 0.1]``.
    """
    if not 0.0 <= epsilon <= 0.1:
        raise ValueError(f"epsilon must lie in [0, 0.1], got {epsilon!r}")
    if not isinstance(vol, IntensityVolume):
        vol = IntensityVolume(np.asarray(vol))
    polarity = PhasePolarity(polarity)
    if vol.values.size == 0:
        raise EmptyInputError("cannot binarize an empty volume")

    i_min, i_max = intensity_extrema(vol)
    tau_low, tau_high = thresholds(i_min, i_max, epsilon)
    if polarity is PhasePolarity.PORES_DARK:
        pores = vol.values <= tau_low
    else:
        pores = vol.values >= tau_high
    warnings = (DEGENERATE_INTENSITY,) if i_min == i_max else ()
    return BinaryVolume.from_pores(pores, warnings)


def ball(radius: int) -> np.ndarray:
    """Euclidean ball structuring element: offsets with dz²+dy²+dx² <= r²."""
    r = int(radius)
    z, y, x = np.ogrid[-r:r + 1, -r:r + 1, -r:r + 1]
    return (z * z + y * y + x * x) <= r * r


def morph_stabilize(bin_vol, r_open: int = 0, r_close: int = 0) -> BinaryVolume:
    """Pore opening with a ball of ``r_open``, then solid closing with ``r_close``.

    Voxels outside the grid count as solid for both operations. Radii are in
    voxels and bounded by a quarter of the smallest dimension.
    """
    bv = as_binary(bin_vol)
    r_open, r_close = int(r_open), int(r_close)
    if r_open < 0 or r_close < 0:
        raise ValueError("morphology radii must be non-negative")
    bound = min(bv.dims) / 4
    for name, r in (("r_open", r_open), ("r_close", r_close)):
        if r > bound:
            raise ValueError(f"{name}={r} exceeds the sanity bound min(dims)/4 = {bound:g}")
    if r_open == 0 and r_close == 0:
        return bv

    pores = bv.pores()
    if r_open:
        pad = r_open + 1
        p = np.pad(pores, pad, constant_values=False)
        se = ball(r_open)
        p = ndimage.binary_dilation(ndimage.binary_erosion(p, se), se)
        pores = p[pad:-pad, pad:-pad, pad:-pad]
    if r_close:
        pad = r_close + 1
        s = np.pad(~pores, pad, constant_values=True)
        se = ball(r_close)
        s = ndimage.binary_erosion(ndimage.binary_dilation(s, se), se)
        pores = ~s[pad:-pad, pad:-pad, pad:-pad]
    return BinaryVolume.from_pores(pores, bv.warnings)


def pad_solid(bin_vol) -> BinaryVolume:
    """Surround the grid with a one-voxel solid shell."""
    bv = as_binary(bin_vol)
    return BinaryVolume(np.pad(bv.values, 1, constant_values=1), bv.warnings)
