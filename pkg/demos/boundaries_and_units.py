"""
Boundary modes and physical units
=================================

The same pore pattern measured three ways. OPEN treats the box faces as
no-data, PAD_SOLID closes the surface against a virtual solid border, and
PERIODIC wraps the grid (voxel path only).
"""
import numpy as np
from scipy import ndimage

from morphometers import BinaryVolume, BoundaryMode, VoxelSpacing, voxel_metrics

rng = np.random.default_rng(0)
field = ndimage.gaussian_filter(rng.random((48, 48, 48)), 2.0, mode="wrap")
bv = BinaryVolume.from_pores(field > np.median(field))

spacing = VoxelSpacing(2.0, 1.0, 1.0, "um")  # thicker slices along z
for mode in BoundaryMode:
    r = voxel_metrics(bv, spacing, mode)
    print(f"{mode.value:9s} A {r.surface_area:10.1f} um^2   M {r.total_mean_curvature:9.2f} um"
          f"   chi {r.euler_characteristic:4d}")

# %%
# Periodic results are extensive: tiling the cell 2 x 2 x 2 multiplies A, M
# and chi by 8, which no other mode does.
base = voxel_metrics(bv, spacing, BoundaryMode.PERIODIC)
big = voxel_metrics(BinaryVolume.from_pores(np.tile(bv.pores(), (2, 2, 2))), spacing, BoundaryMode.PERIODIC)
print("tiling ratios", big.surface_area / base.surface_area,
      big.total_mean_curvature / base.total_mean_curvature,
      big.euler_characteristic / base.euler_characteristic)

# %%
# Scaling every spacing by lambda scales A by lambda^2 and M by lambda;
# porosity and chi do not move.
lam = 3.0
a = voxel_metrics(bv, spacing)
b = voxel_metrics(bv, spacing.scaled(lam))
print("A ratio", b.surface_area / a.surface_area, " M ratio", b.total_mean_curvature / a.total_mean_curvature)
print("porosity", a.porosity, b.porosity, " chi", a.euler_characteristic, b.euler_characteristic)
