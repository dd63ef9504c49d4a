"""
Boxes, shells and tori
======================

Closed-form checks that make the estimators easy to trust: a box of a x b x c
voxels has A = 2(ab + bc + ca), M = pi (a + b + c) and chi = 1; a hollow shell
has chi = 2; a solid torus has chi = 0.
"""
import math

import numpy as np

from morphometers import BinaryVolume, MeshStyle, VoxelSpacing, generate_box, generate_torus
from morphometers import mesh_metrics, voxel_metrics

# %%
# A box, pores bright
box = generate_box((12, 12, 12), (2, 3, 4), (6, 8, 10))  # 5 x 6 x 7 voxels (z, y, x)
bv = BinaryVolume.from_pores(box.values == 255)
r = voxel_metrics(bv)
c, b, a = 5, 6, 7
print("box   A", r.surface_area, "expected", 2 * (a * b + b * c + c * a))
print("box   M", r.total_mean_curvature, "expected", math.pi * (a + b + c))
print("box chi", r.euler_characteristic)

# Anisotropic voxels scale each edge family by its own spacing
s = VoxelSpacing(0.5, 2.0, 1.25, "mm")
r = voxel_metrics(bv, s)
print("mm-box M", r.total_mean_curvature, "expected", math.pi * (a * 1.25 + b * 2.0 + c * 0.5))

# %%
# Hollow shell: one component enclosing one cavity
p = np.zeros((9, 9, 9), bool)
p[1:8, 1:8, 1:8] = True
p[3:6, 3:6, 3:6] = False
print("shell chi", voxel_metrics(BinaryVolume.from_pores(p)).euler_characteristic)

# %%
# Torus, on both paths. The mesh reports chi_surface = V - E + F of the
# closed surface and chi_object = chi_surface / 2.
t = BinaryVolume.from_pores(generate_torus((32, 32, 32), (16, 16, 16), 8, 2).values == 255)
print("torus voxel chi", voxel_metrics(t).euler_characteristic)
m = mesh_metrics(t, style=MeshStyle.MARCHING_CUBES)
print("torus mesh chi_surface", m.chi_surface, "chi_object", m.chi_object)

# %%
# Rectilinear meshes reproduce the voxel path to rounding
for name, vol in (("box", bv), ("torus", t)):
    v, m = voxel_metrics(vol), mesh_metrics(vol, style=MeshStyle.RECTILINEAR)
    print(f"{name:6s} A {v.surface_area:.6f} vs {m.surface_area:.6f}   "
          f"M {v.total_mean_curvature:.6f} vs {m.total_mean_curvature:.6f}")
