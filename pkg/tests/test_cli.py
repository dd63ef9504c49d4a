import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
import tifffile

from morphometers.cli import main
from morphometers.fileio import read_binary_stack, read_stack


def parse_stdout(text):
    out = {}
    for line in text.strip().splitlines():
        key, value = line.split("\t")
        out[key.split("[")[0]] = float(value)
    return out


@pytest.fixture
def box_tif(tmp_path):
    path = tmp_path / "box.tif"
    assert main(["generate", "--shape", "box", "--dims", "8,8,8", "--lo", "2,2,2", "--hi", "5,5,5",
                 "--out", str(path)]) == 0
    return path


def test_generate_box(box_tif):
    v = read_stack(box_tif).values
    assert v.shape == (8, 8, 8)
    assert (v == 255).sum() == 64 and (v[2:6, 2:6, 2:6] == 255).all()


def test_generate_torus_and_sphere(tmp_path, capsys):
    assert main(["generate", "--shape", "torus", "--dims", "32,32,32", "--major", "8", "--minor", "2",
                 "--out", str(tmp_path / "t.tif")]) == 0
    assert main(["compute", "--input", str(tmp_path / "t.tif"), "--pores", "bright", "--mode", "voxel"]) == 0
    assert parse_stdout(capsys.readouterr().out)["euler_characteristic"] == 0
    assert main(["generate", "--shape", "sphere", "--dims", "9,9,9", "--radius", "0.5",
                 "--center", "4,4,4", "--out", str(tmp_path / "s.tif")]) == 0
    assert (read_stack(tmp_path / "s.tif").values == 255).sum() == 1


@pytest.mark.parametrize("argv", [
    ["generate", "--shape", "sphere", "--dims", "8,8,8", "--radius", "-1"],
    ["generate", "--shape", "sphere", "--dims", "8,8,8"],
    ["generate", "--shape", "torus", "--dims", "8,8,8", "--major", "1", "--minor", "2"],
    ["generate", "--shape", "box", "--dims", "8,8,8", "--lo", "0,0,0", "--hi", "9,9,9"],
    ["generate", "--shape", "cone", "--dims", "8,8,8"],
    ["generate", "--shape", "box", "--dims", "8,8"],
])
def test_generate_invalid(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path / "x.tif")]) == 2


def test_compute_voxel_box(box_tif, capsys):
    assert main(["compute", "--input", str(box_tif), "--pores", "bright", "--mode", "voxel"]) == 0
    cap = capsys.readouterr()
    d = parse_stdout(cap.out)
    assert d["surface_area"] == 96
    assert d["total_mean_curvature"] == pytest.approx(12 * math.pi)
    assert d["euler_characteristic"] == 1
    assert d["porosity_percent"] == 100 * 64 / 512
    assert "%" in cap.err


def test_compute_mesh_outputs(box_tif, tmp_path, capsys):
    out = tmp_path / "o"
    argv = ["compute", "--input", str(box_tif), "--pores", "bright", "--pad", "--spacing", "2,1,1",
            "--unit", "um", "--out-csv", f"{out}.csv", "--out-json", f"{out}.json",
            "--export-stl", f"{out}.stl", "--export-obj", f"{out}.obj", "--export-binary", f"{out}.tif"]
    assert main(argv) == 0
    d = parse_stdout(capsys.readouterr().out)
    assert d["euler_characteristic"] == 1
    j = json.loads(open(f"{out}.json").read())
    assert j["manifest"]["pad"] is True and j["manifest"]["obj_source"] == "mesh"
    assert j["spacing"] == {"s_z": 2.0, "s_y": 1.0, "s_x": 1.0, "unit": "um"}
    assert j["chi_surface"] == 2 and j["open_edge_count"] == 0
    stl_faces = int(np.frombuffer(open(f"{out}.stl", "rb").read()[80:84], "<u4")[0])
    assert os.path.getsize(f"{out}.stl") == 84 + 50 * stl_faces
    assert read_binary_stack(f"{out}.tif").pores().sum() == 64
    assert open(f"{out}.csv").read().count("\n") == 2


def test_compute_voxel_obj(box_tif, tmp_path):
    assert main(["compute", "--input", str(box_tif), "--pores", "bright", "--mode", "voxel",
                 "--export-obj", str(tmp_path / "w.obj")]) == 0
    lines = (tmp_path / "w.obj").read_text().splitlines()
    # grid lines on the surface of a 4x4x4 block: 5^3 - 3^3 vertices, V - E + F = 2
    assert sum(r.startswith("v ") for r in lines) == 98
    assert sum(r.startswith("l ") for r in lines) == 192


@pytest.mark.parametrize("fill", [0, 255])
def test_degenerate_input_warns(tmp_path, capsys, fill):
    tifffile.imwrite(tmp_path / "u.tif", np.full((3, 4, 4), fill, np.uint8), photometric="minisblack")
    assert main(["compute", "--input", str(tmp_path / "u.tif"), "--out-csv", str(tmp_path / "u.csv")]) == 0
    cap = capsys.readouterr()
    d = parse_stdout(cap.out)
    assert d["surface_area"] == 0
    assert math.isnan(d["total_mean_curvature"]) and math.isnan(d["normalized_mean_curvature"])
    assert "warning" in cap.err
    assert ",NaN,NaN," in (tmp_path / "u.csv").read_text()


@pytest.mark.parametrize("extra, code", [
    (["--periodic"], 4),
    (["--periodic", "--mode", "voxel", "--pad"], 4),
    (["--mode", "voxel", "--export-stl", "x.stl"], 4),
    (["--mode", "voxel", "--export-obj", "x.obj", "--obj-source", "mesh"], 4),
    (["--epsilon", "0.5"], 2),
    (["--epsilon", "nan"], 2),
    (["--open-radius", "-1"], 2),
    (["--spacing", "1,0,1"], 2),
    (["--spacing", "1,1"], 2),
    (["--mode", "fast"], 2),
    (["--euler-connectivity", "18"], 2),
    (["--open-radius", "5"], 2),
])
def test_compute_error_codes(box_tif, extra, code):
    assert main(["compute", "--input", str(box_tif)] + extra) == code


def test_periodic_voxel_ok(box_tif):
    assert main(["compute", "--input", str(box_tif), "--periodic", "--mode", "voxel"]) == 0


def test_format_and_io_errors(tmp_path):
    tifffile.imwrite(tmp_path / "rgb.tif", np.zeros((4, 4, 3), np.uint8), photometric="rgb")
    assert main(["compute", "--input", str(tmp_path / "rgb.tif")]) == 3
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["compute", "--input", str(empty)]) == 3
    assert main(["compute", "--input", str(tmp_path / "missing.tif")]) == 5


def test_unwritable_output(box_tif, tmp_path):
    bad = tmp_path / "no" / "such" / "dir" / "r.csv"
    assert main(["compute", "--input", str(box_tif), "--out-csv", str(bad)]) == 5


def test_convert_density(capsys):
    assert main(["convert-density", "0.008", "3.900e-4", "9.664e-7", "7.494e-9", "--dims", "512,512,512"]) == 0
    out = capsys.readouterr().out.split()
    assert out[1::2] == ["99.200", "52344.914", "814.979", "1.006"]
    assert main(["convert-density", "0", "0", "0", "0", "--dims", "4,4,4"]) == 0
    assert capsys.readouterr().out.split()[1::2] == ["100.000", "0.000", "0.000", "0.000"]
    assert main(["convert-density", "1", "0", "0", "0", "--dims", "4,4,4"]) == 0
    assert capsys.readouterr().out.split()[1] == "0.000"


def test_convert_density_missing_values():
    assert main(["convert-density", "0.1", "0.2", "--dims", "4,4,4"]) == 2


def test_module_entry_point(box_tif):
    r = subprocess.run([sys.executable, "-m", "morphometers", "compute", "--input", str(box_tif),
                        "--pores", "bright", "--mode", "voxel"], capture_output=True, text=True)
    assert r.returncode == 0
    assert parse_stdout(r.stdout)["euler_characteristic"] == 1
