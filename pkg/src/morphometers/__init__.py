"""Porosity, interface area, total mean curvature and Euler characteristic of
porous media from 3D image stacks, via a mesh path and a closed-form voxel path."""

__version__ = "0.1.0"

from .binarize import binarize, morph_stabilize, pad_solid
from .mesh import (
    EdgeTable,
    MeshStyle,
    TriangleMesh,
    build_edge_table,
    extract_interface,
    mesh_euler,
    mesh_metrics,
    mesh_surface_area,
    mesh_total_mean_curvature,
    normalized_mean_curvature,
)
from .pipeline import analyze
from .report import MorphometricReport, convert_density_metrics, write_report
from .shapes import generate_box, generate_sphere, generate_torus
from .volume import (
    BinaryVolume,
    BoundaryMode,
    IntensityVolume,
    PhasePolarity,
    VoxelSpacing,
    intensity_extrema,
    world_coords,
)
from .voxel import (
    CellCounts,
    EdgeClassCounts,
    count_cells,
    edge_classes,
    euler_voxel,
    euler_voxel_26,
    mean_curvature_voxel,
    porosity,
    scan_pores,
    surface_area_voxel,
    voxel_metrics,
)
