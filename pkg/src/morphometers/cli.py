"""Command-line interface: ``morphometers compute | generate | convert-density``.

Exit codes: 0 ok, 2 invalid arguments, 3 input format error, 4 incompatible
options, 5 I/O failure.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from .fileio import FormatError, read_stack, write_binary_stack, write_obj_wireframe, write_stack, write_stl
from .mesh import MeshStyle
from .pipeline import analyze
from .report import convert_density_metrics, write_report
from .shapes import generate_box, generate_sphere, generate_torus
from .volume import BoundaryMode, EmptyInputError, PhasePolarity, VoxelSpacing

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_INCOMPATIBLE, EXIT_IO = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


class IncompatibleError(Exception):
    pass


def _triple(kind):
    def parse(text):
        parts = text.split(",")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"expected three comma-separated values, got {text!r}")
        try:
            return tuple(kind(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value list {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="morphometers", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute porosity, area, mean curvature and Euler number")
    c.add_argument("--input", required=True, help="multi-page TIFF or directory of TIFF slices")
    c.add_argument("--pores", choices=["dark", "bright"], default="dark")
    c.add_argument("--epsilon", type=float, default=0.0)
    c.add_argument("--spacing", type=_triple(float), default=(1.0, 1.0, 1.0), metavar="SZ,SY,SX")
    c.add_argument("--unit", default="px")
    c.add_argument("--pad", action=argparse.BooleanOptionalAction, default=False)
    c.add_argument("--periodic", action="store_true")
    c.add_argument("--open-radius", type=int, default=0)
    c.add_argument("--close-radius", type=int, default=0)
    c.add_argument("--mode", choices=["mesh", "voxel"], default="mesh")
    c.add_argument("--mesh-style", choices=["mc", "rect"], default="mc")
    c.add_argument("--out-csv")
    c.add_argument("--out-json")
    c.add_argument("--export-stl")
    c.add_argument("--export-obj")
    c.add_argument("--obj-source", choices=["mesh", "voxel"])
    c.add_argument("--export-binary")
    c.add_argument("--euler-connectivity", type=int, choices=[6, 26], default=6)

    g = sub.add_parser("generate", help="write a synthetic sphere, box or torus stack")
    g.add_argument("--shape", choices=["sphere", "box", "torus"], required=True)
    g.add_argument("--dims", type=_triple(int), required=True, metavar="NZ,NY,NX")
    g.add_argument("--center", type=_triple(float), metavar="CZ,CY,CX")
    g.add_argument("--radius", type=float)
    g.add_argument("--lo", type=_triple(int), metavar="Z,Y,X")
    g.add_argument("--hi", type=_triple(int), metavar="Z,Y,X")
    g.add_argument("--major", type=float)
    g.add_argument("--minor", type=float)
    g.add_argument("--foreground", type=int, choices=[0, 255], default=255)
    g.add_argument("--out", required=True)

    d = sub.add_parser("convert-density", help="convert density outputs to totals")
    for name in ("volume_density", "surface_density", "mean_breadth_density", "euler_density"):
        d.add_argument(name, type=float)
    d.add_argument("--dims", type=_triple(int), required=True, metavar="NZ,NY,NX")
    d.add_argument("--spacing", type=_triple(float), default=(1.0, 1.0, 1.0), metavar="SZ,SY,SX")
    return ap


def _progress(stage, frac):
    print(f"[{stage}] {100 * frac:5.1f}%", file=sys.stderr)


def _fmt(v):
    if isinstance(v, float) and math.isnan(v):
        return "NaN"
    return repr(v)


def cmd_compute(args) -> int:
    if not 0.0 <= args.epsilon <= 0.1:
        raise UsageError("--epsilon must lie in [0, 0.1]")
    if args.open_radius < 0 or args.close_radius < 0:
        raise UsageError("morphology radii must be non-negative")
    if args.periodic and args.pad:
        raise IncompatibleError("--periodic and --pad are mutually exclusive")
    if args.periodic and args.mode == "mesh":
        raise IncompatibleError("--periodic requires --mode voxel")
    if args.export_stl and args.mode == "voxel":
        raise IncompatibleError("--export-stl requires --mode mesh")
    obj_source = args.obj_source or ("mesh" if args.mode == "mesh" else "voxel")
    if args.export_obj and obj_source == "mesh" and args.mode == "voxel":
        raise IncompatibleError("--obj-source mesh requires --mode mesh")
    try:
        spacing = VoxelSpacing(*args.spacing, unit=args.unit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    boundary = (BoundaryMode.PERIODIC if args.periodic
                else BoundaryMode.PAD_SOLID if args.pad else BoundaryMode.OPEN)

    volume = read_stack(args.input)
    _progress("read", 1.0)
    try:
        result = analyze(
            volume, spacing, polarity=PhasePolarity(args.pores), epsilon=args.epsilon,
            r_open=args.open_radius, r_close=args.close_radius, boundary=boundary,
            mode=args.mode, mesh_style=MeshStyle(args.mesh_style),
            euler_connectivity=args.euler_connectivity, input_name=args.input, progress=_progress,
        )
    except ValueError as exc:
        if isinstance(exc, (FormatError, EmptyInputError)):
            raise
        raise UsageError(str(exc)) from None
    report = result.report
    report.manifest = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    report.manifest["obj_source"] = obj_source

    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    u = spacing.unit
    print(f"porosity_percent\t{_fmt(report.porosity_percent)}")
    print(f"solid_fraction_percent\t{_fmt(report.solid_fraction_percent)}")
    print(f"surface_area[{u}^2]\t{_fmt(report.surface_area)}")
    print(f"total_mean_curvature[{u}]\t{_fmt(report.total_mean_curvature)}")
    print(f"normalized_mean_curvature[{u}^-1]\t{_fmt(report.normalized_mean_curvature)}")
    print(f"euler_characteristic\t{report.euler_characteristic}")

    if args.out_csv:
        write_report(report, args.out_csv, "csv")
    if args.out_json:
        write_report(report, args.out_json, "json")
    if args.export_binary:
        write_binary_stack(result.binary, args.export_binary)
    if args.export_stl:
        write_stl(result.mesh.mesh, args.export_stl)
    if args.export_obj:
        if obj_source == "mesh":
            write_obj_wireframe(result.mesh.mesh, args.export_obj, edges=result.mesh.edges)
        else:
            wire_boundary = BoundaryMode.OPEN if boundary is BoundaryMode.PERIODIC else boundary
            write_obj_wireframe(result.binary, args.export_obj, spacing, wire_boundary)
    _progress("export", 1.0)
    return EXIT_OK


def cmd_generate(args) -> int:
    dims = args.dims
    center = args.center or tuple(n / 2 for n in dims)
    try:
        if args.shape == "sphere":
            if args.radius is None:
                raise UsageError("--radius is required for a sphere")
            vol = generate_sphere(dims, center, args.radius, args.foreground)
        elif args.shape == "box":
            if args.lo is None or args.hi is None:
                raise UsageError("--lo and --hi are required for a box")
            vol = generate_box(dims, args.lo, args.hi, args.foreground)
        else:
            if args.major is None or args.minor is None:
                raise UsageError("--major and --minor are required for a torus")
            vol = generate_torus(dims, center, args.major, args.minor, args.foreground)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_stack(vol.values.astype("uint8"), args.out)
    return EXIT_OK


def cmd_convert_density(args) -> int:
    try:
        totals = convert_density_metrics(
            args.volume_density, args.surface_density, args.mean_breadth_density, args.euler_density, dims=args.dims, spacing=args.spacing)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"porosity_percent\t{totals.porosity_percent:.3f}")
    print(f"surface_area\t{totals.surface_area:.3f}")
    print(f"integrated_mean_curvature\t{totals.integrated_mean_curvature:.3f}")
    print(f"euler_characteristic\t{totals.euler_characteristic:.3f}")
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "generate": cmd_generate, "convert-density": cmd_convert_density}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IncompatibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except (FormatError, EmptyInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
