"""End-to-end analysis: binarize -> morphology -> boundary -> metric path -> report."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .binarize import binarize, morph_stabilize
from .mesh import MeshResult, MeshStyle, mesh_metrics, normalized_mean_curvature
from .report import MorphometricReport
from .voxel import NO_INTERFACE, VoxelResult, porosity, voxel_metrics
from .volume import BinaryVolume, BoundaryMode, IntensityVolume, PhasePolarity, VoxelSpacing


@dataclass
class Analysis:
    report: MorphometricReport
    binary: BinaryVolume
    mesh: MeshResult | None = None
    voxel: VoxelResult | None = None


def analyze(volume, spacing: VoxelSpacing | None = None, *, polarity=PhasePolarity.PORES_DARK,
            epsilon: float = 0.0, r_open: int = 0, r_close: int = 0,
            boundary=BoundaryMode.OPEN, mode: str = "mesh", mesh_style=MeshStyle.MARCHING_CUBES,
            euler_connectivity: int = 6, input_name: str = "<memory>",
            threads: int | None = None, progress=None) -> Analysis:
    """Compute the four morphometers of the pore phase.

    ``volume`` may be an :class:`IntensityVolume` (thresholded with
    ``polarity``/``epsilon``) or an already binary :class:`BinaryVolume`.
    ``progress(stage, fraction)`` is called as stages advance.
    """
    spacing = spacing or VoxelSpacing()
    polarity = PhasePolarity(polarity)
    boundary = BoundaryMode(boundary)
    mesh_style = MeshStyle(mesh_style)
    if mode not in ("mesh", "voxel"):
        raise ValueError(f"mode must be 'mesh' or 'voxel', got {mode!r}")
    if mode == "mesh" and boundary is BoundaryMode.PERIODIC:
        raise ValueError("periodic boundaries are only available in voxel mode")

    def stage(name):
        return None if progress is None else (lambda f: progress(name, f))

    if isinstance(volume, BinaryVolume):
        bv = volume
    else:
        if not isinstance(volume, IntensityVolume):
            volume = IntensityVolume(volume)
        bv = binarize(volume, polarity, epsilon)
    if progress:
        progress("binarize", 1.0)
    bv = morph_stabilize(bv, r_open, r_close)
    if progress:
        progress("morphology", 1.0)

    warnings = list(bv.warnings)
    mesh_res = vox_res = None
    chi_surface = open_edges = None
    if mode == "voxel":
        vox_res = voxel_metrics(bv, spacing, boundary, euler_connectivity, threads, stage("geometry"))
        area, m, chi = vox_res.surface_area, vox_res.total_mean_curvature, vox_res.euler_characteristic
        warnings = list(vox_res.warnings)
    else:
        mesh_res = mesh_metrics(bv, spacing, mesh_style, boundary, threads, stage("meshing"))
        area = mesh_res.surface_area
        m = mesh_res.total_mean_curvature if area > 0 else math.nan
        chi, chi_surface, open_edges = mesh_res.chi_object, mesh_res.chi_surface, mesh_res.open_edge_count
        if area == 0:
            warnings.append(NO_INTERFACE)
        elif open_edges:
            warnings.append(f"open surface: {open_edges} edges without exactly two faces were skipped")

    report = MorphometricReport(
        input=str(input_name), mode=mode, porosity=porosity(bv),
        surface_area=float(area), total_mean_curvature=float(m),
        normalized_mean_curvature=float(normalized_mean_curvature(m, area)),
        euler_characteristic=int(chi), spacing=spacing,
        mesh_style=mesh_style.value if mode == "mesh" else None,
        boundary=boundary.value, polarity=polarity.value, epsilon=float(epsilon),
        r_open=int(r_open), r_close=int(r_close), euler_connectivity=int(euler_connectivity),
        chi_surface=chi_surface, open_edge_count=open_edges, warnings=warnings,
    )
    return Analysis(report, bv, mesh_res, vox_res)
