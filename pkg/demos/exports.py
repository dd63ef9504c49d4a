"""
Writing every artifact
======================

One run through the pipeline with all exports: a binary QC stack, an STL of
the marching-cubes interface, OBJ wireframes from the mesh and from exposed
voxel faces, and CSV/JSON reports. The same run from the shell is

    morphometers compute --input porous.tif --pores dark --pad --spacing 2,1,1 \\
        --unit um --out-csv r.csv --out-json r.json --export-stl m.stl \\
        --export-obj m.obj --export-binary qc.tif
"""
import os
import sys
import tempfile
from pathlib import Path

import numpy as np
from scipy import ndimage

from morphometers import VoxelSpacing, analyze
from morphometers.fileio import read_stack, write_binary_stack, write_obj_wireframe, write_stack, write_stl
from morphometers.report import report_csv, write_report

out = Path(sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="morpho-"))
out.mkdir(parents=True, exist_ok=True)

# a noisy grayscale stack: pores near 20, solid near 220
rng = np.random.default_rng(1)
field = ndimage.gaussian_filter(rng.random((40, 64, 64)), 2.5)
gray = np.where(field < np.median(field), 20, 220) + rng.integers(0, 20, field.shape)
gray = gray.astype(np.uint8)
write_stack(gray, out / "porous.tif")

# eps = 0.1 puts the pore threshold at I_min + 0.1 (I_max - I_min), above the noise band
vol = read_stack(out / "porous.tif")
res = analyze(vol, VoxelSpacing(2.0, 1.0, 1.0, "um"), polarity="dark", epsilon=0.1,
              boundary="pad", mode="mesh", input_name="porous.tif")
print(report_csv([res.report]))

write_binary_stack(res.binary, out / "qc.tif")
write_stl(res.mesh.mesh, out / "mesh.stl")
write_obj_wireframe(res.mesh.mesh, out / "mesh.obj", edges=res.mesh.edges)
write_obj_wireframe(res.binary, out / "faces.obj", VoxelSpacing(2.0, 1.0, 1.0), "pad")
write_report(res.report, out / "report.csv", "csv")
write_report(res.report, out / "report.json", "json")

for f in sorted(out.iterdir()):
    print(f"{f.name:12s} {os.path.getsize(f):>10d} bytes")
# STL size is always 84 + 50 * faces
print("faces", res.mesh.mesh.n_faces, "->", 84 + 50 * res.mesh.mesh.n_faces, "bytes expected")
