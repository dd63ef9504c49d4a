"""Morphometric reports (CSV / JSON) and conversion of density outputs to totals."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

from .volume import VoxelSpacing

CSV_FIELDS = (
    "input", "mode", "mesh_style", "boundary", "polarity", "epsilon", "unit",
    "s_z", "s_y", "s_x", "porosity_percent", "solid_fraction_percent",
    "surface_area", "total_mean_curvature", "normalized_mean_curvature",
    "euler_characteristic", "chi_surface", "open_edge_count",
)


@dataclass
class MorphometricReport:
    input: str
    mode: str
    porosity: float
    surface_area: float
    total_mean_curvature: float
    normalized_mean_curvature: float
    euler_characteristic: int
    spacing: VoxelSpacing = field(default_factory=VoxelSpacing)
    mesh_style: str | None = None
    boundary: str = "open"
    polarity: str = "dark"
    epsilon: float = 0.0
    r_open: int = 0
    r_close: int = 0
    euler_connectivity: int = 6
    chi_surface: int | None = None
    open_edge_count: int | None = None
    warnings: list[str] = field(default_factory=list)
    manifest: dict = field(default_factory=dict)

    @property
    def porosity_percent(self) -> float:
        return 100.0 * self.porosity

    @property
    def solid_fraction_percent(self) -> float:
        return 100.0 - self.porosity_percent

    @property
    def unit(self) -> str:
        return self.spacing.unit

    def row(self) -> dict:
        """Flat CSV row keyed by :data:`CSV_FIELDS`."""
        s = self.spacing
        return {
            "input": self.input, "mode": self.mode, "mesh_style": self.mesh_style,
            "boundary": self.boundary, "polarity": self.polarity, "epsilon": self.epsilon,
            "unit": s.unit, "s_z": s.s_z, "s_y": s.s_y, "s_x": s.s_x,
            "porosity_percent": self.porosity_percent,
            "solid_fraction_percent": self.solid_fraction_percent,
            "surface_area": self.surface_area,
            "total_mean_curvature": self.total_mean_curvature,
            "normalized_mean_curvature": self.normalized_mean_curvature,
            "euler_characteristic": self.euler_characteristic,
            "chi_surface": self.chi_surface, "open_edge_count": self.open_edge_count,
        }

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spacing"] = {"s_z": self.spacing.s_z, "s_y": self.spacing.s_y,
                        "s_x": self.spacing.s_x, "unit": self.spacing.unit}
        d["porosity_percent"] = self.porosity_percent
        d["solid_fraction_percent"] = self.solid_fraction_percent
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MorphometricReport":
        d = dict(d)
        d.pop("porosity_percent", None)
        d.pop("solid_fraction_percent", None)
        d["spacing"] = VoxelSpacing(**d["spacing"])
        return cls(**d)


def format_value(v) -> str:
    """Shortest round-trip text; NaN as ``NaN``, missing as empty."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "NaN" if math.isnan(v) else repr(v)
    return str(v)


def report_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        row = r.row()
        w.writerow([format_value(row[k]) for k in CSV_FIELDS])
    return buf.getvalue()


def report_json(report: MorphometricReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def write_report(report: MorphometricReport, path, fmt: str = "csv") -> None:
    fmt = fmt.lower()
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown report format {fmt!r}")
    text = report_csv([report]) if fmt == "csv" else report_json(report)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"{path}: cannot write report ({exc})") from exc


def read_report_json(path) -> MorphometricReport:
    with open(path) as fh:
        return MorphometricReport.from_dict(json.load(fh))


class DensityTotals(NamedTuple):
    porosity_percent: float
    surface_area: float
    integrated_mean_curvature: float
    euler_characteristic: float


def convert_density_metrics(volume_density: float, surface_area_density: float,
                            mean_breadth_density: float, euler_density: float,
                            dims, spacing=(1.0, 1.0, 1.0)) -> DensityTotals:
    """Turn per-volume densities (e.g. from a Crofton-type analyzer) into totals.

    With ``V = n_x n_y n_z v_x v_y v_z``: porosity ``100 (1 - V_V)``, area
    ``S_V V``, integrated mean curvature ``2 pi B_V V`` and Euler number ``E_V V``.
    """
    if isinstance(spacing, VoxelSpacing):
        spacing = (spacing.s_z, spacing.s_y, spacing.s_x)
    if any(int(n) <= 0 for n in dims) or any(float(s) <= 0 for s in spacing):
        raise ValueError("dims and spacing must be positive")
    nz, ny, nx = (int(n) for n in dims)
    vz, vy, vx = (float(s) for s in spacing)
    volume = nx * ny * nz * vx * vy * vz
    return DensityTotals(
        100.0 * (1.0 - volume_density),
        surface_area_density * volume,
        2.0 * math.pi * mean_breadth_density * volume,
        euler_density * volume,
    )
