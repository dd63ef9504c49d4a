import math

import numpy as np
import pytest

import oracles
from morphometers.mesh import (
    MeshStyle,
    TriangleMesh,
    UnsupportedModeError,
    build_edge_table,
    extract_interface,
    mesh_euler,
    mesh_metrics,
    mesh_surface_area,
    mesh_total_mean_curvature,
    normalized_mean_curvature,
)
from morphometers.volume import BinaryVolume, BoundaryMode, VoxelSpacing
from morphometers.voxel import count_cells, edge_classes, voxel_metrics

RECT, MC = MeshStyle.RECTILINEAR, MeshStyle.MARCHING_CUBES
OPEN, PAD = BoundaryMode.OPEN, BoundaryMode.PAD_SOLID


def single_voxel():
    v = np.ones((3, 3, 3), np.uint8)
    v[1, 1, 1] = 0
    return BinaryVolume(v)


def digital_ball(r):
    n = 2 * r + 5
    c = n // 2
    z, y, x = np.ogrid[:n, :n, :n]
    return BinaryVolume.from_pores((z - c) ** 2 + (y - c) ** 2 + (x - c) ** 2 <= r * r)


# --- extraction ---------------------------------------------------------

def test_single_voxel_rectilinear():
    m = extract_interface(single_voxel(), style=RECT)
    assert (m.n_vertices, m.n_faces) == (8, 12)
    assert np.allclose(m.vertices.min(0), 0.5) and np.allclose(m.vertices.max(0), 1.5)
    r = mesh_metrics(single_voxel(), style=RECT)
    assert r.surface_area == 6.0
    assert r.total_mean_curvature == pytest.approx(3 * math.pi, rel=1e-12)
    assert (r.chi_surface, r.chi_object, r.open_edge_count) == (2, 1, 0)
    assert r.edges.n_edges == 18


@pytest.mark.parametrize("style", [RECT, MC])
def test_normals_point_away_from_pore(style):
    for b in (single_voxel(), digital_ball(4)):
        m = extract_interface(b, style=style)
        centre = np.argwhere(b.pores()).mean(0)
        tri_centre = m.vertices[m.faces].mean(1)
        assert (np.einsum("ij,ij->i", m.face_normals(), tri_centre - centre) > 0).all()


@pytest.mark.parametrize("style", [RECT, MC])
@pytest.mark.parametrize("fill", [0, 1])
def test_uniform_volume_gives_empty_mesh(style, fill):
    b = BinaryVolume(np.full((4, 4, 4), fill, np.uint8))
    m = extract_interface(b, style=style)
    assert (m.n_vertices, m.n_faces) == (0, 0)
    r = mesh_metrics(b, style=style)
    assert r.surface_area == 0
    assert math.isnan(r.total_mean_curvature)


def test_periodic_is_rejected():
    with pytest.raises(UnsupportedModeError):
        extract_interface(single_voxel(), boundary=BoundaryMode.PERIODIC)


@pytest.mark.parametrize("style", [RECT, MC])
@pytest.mark.parametrize("seed", range(8))
def test_padded_meshes_are_watertight(style, seed):
    rng = np.random.default_rng(seed)
    if style is RECT:
        # face-per-face meshes are nonmanifold at pinch edges, so use pinch-free sets
        p = oracles.well_composed(rng, tuple(rng.integers(4, 12, 3)))
    else:
        p = rng.random(tuple(rng.integers(2, 10, 3))) < rng.uniform(0.2, 0.8)
    m = extract_interface(BinaryVolume.from_pores(p), style=style, boundary=PAD)
    t = build_edge_table(m)
    assert t.open_edge_count == 0
    assert (t.face_count == 2).all()
    assert 2 * t.n_edges == 3 * m.n_faces
    # every face index valid and no degenerate triangles
    assert (np.linalg.norm(m.face_normals(unit=False), axis=1) > 0).all()
    assert mesh_euler(m, t)[0] % 2 == 0


def test_rectilinear_pinch_edge_is_flagged():
    v = np.ones((4, 4, 3), np.uint8)
    v[1, 1, 1] = v[2, 2, 1] = 0
    r = mesh_metrics(BinaryVolume(v), style=RECT)
    assert r.open_edge_count == 1
    assert (r.edges.face_count == 4).sum() == 1
    # the shared edge is skipped, like a pinch window in the voxel path
    assert r.total_mean_curvature == pytest.approx(voxel_metrics(BinaryVolume(v)).total_mean_curvature)


def test_open_boundary_leaves_open_edges():
    # pore slab touching the box faces: the mesh is not closed
    v = np.ones((4, 4, 4), np.uint8)
    v[:, :, :2] = 0
    r = mesh_metrics(BinaryVolume(v), style=RECT, boundary=OPEN)
    assert r.open_edge_count > 0
    assert r.chi_object == r.chi_surface


def test_pad_mode_equals_explicit_padding():
    rng = np.random.default_rng(1)
    p = rng.random((5, 6, 7)) < 0.5
    for style in (RECT, MC):
        a = mesh_metrics(BinaryVolume.from_pores(p), style=style, boundary=PAD)
        b = mesh_metrics(BinaryVolume.from_pores(np.pad(p, 1)), style=style, boundary=OPEN)
        assert a.surface_area == pytest.approx(b.surface_area, rel=1e-12)
        assert a.total_mean_curvature == pytest.approx(b.total_mean_curvature, rel=1e-12)
        assert a.chi_surface == b.chi_surface


# --- metric primitives --------------------------------------------------

def test_one_triangle_area():
    m = TriangleMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
    assert mesh_surface_area(m) == 0.5
    assert mesh_total_mean_curvature(m) == 0.0  # its edges are all open


def test_coplanar_pair_contributes_nothing():
    m = TriangleMesh([[0, 0, 0], [0, 1, 0], [0, 0, 1], [0, 1, 1]], [[0, 1, 2], [1, 3, 2]])
    t = build_edge_table(m)
    shared = t.face_count == 2
    assert shared.sum() == 1
    assert t.dihedral[shared][0] == 0.0  # signed bending angle
    assert mesh_total_mean_curvature(m, t) == pytest.approx(0.0, abs=1e-15)


def test_empty_mesh_metrics():
    m = TriangleMesh(np.zeros((0, 3)), np.zeros((0, 3), int))
    assert mesh_surface_area(m) == 0
    assert math.isnan(mesh_total_mean_curvature(m))
    assert mesh_euler(m) == (0, 0)


def test_two_disjoint_cubes():
    v = np.ones((3, 3, 5), np.uint8)
    v[1, 1, 1] = v[1, 1, 3] = 0
    r = mesh_metrics(BinaryVolume(v), style=RECT)
    assert (r.chi_surface, r.chi_object) == (4, 2)
    assert r.total_mean_curvature == pytest.approx(6 * math.pi)


def test_normalized_mean_curvature_examples():
    assert normalized_mean_curvature(3 * math.pi, 6.0) == pytest.approx(math.pi / 2)
    assert math.isnan(normalized_mean_curvature(1.0, 0.0))
    assert math.isnan(normalized_mean_curvature(math.nan, 0.0))


def test_concave_edges_are_negative():
    # solid voxel cube inside a pore box: the interface curves the other way
    v = np.zeros((5, 5, 5), np.uint8)
    v[2, 2, 2] = 1
    r = mesh_metrics(BinaryVolume(v), style=RECT, boundary=OPEN)
    assert r.total_mean_curvature == pytest.approx(-3 * math.pi)


# --- agreement with the voxel path -------------------------------------

@pytest.mark.parametrize("seed", range(20))
def test_rectilinear_agrees_with_voxel_path(seed):
    rng = np.random.default_rng(seed)
    shape = tuple(int(n) for n in rng.integers(4, 25, 3))
    p = oracles.well_composed(rng, shape)
    spacing = VoxelSpacing(*rng.choice([0.5, 1.0, 1.25, 2.0], 3))
    b = BinaryVolume.from_pores(p)
    vx = voxel_metrics(b, spacing, OPEN)
    ms = mesh_metrics(b, spacing, RECT, OPEN)
    assert ms.open_edge_count == 0
    assert ms.surface_area == pytest.approx(vx.surface_area, rel=1e-9)
    assert ms.total_mean_curvature == pytest.approx(vx.total_mean_curvature, rel=1e-9, abs=1e-9)
    assert ms.chi_object == vx.euler_characteristic


@pytest.mark.parametrize("seed", range(10))
def test_area_and_curvature_agree_even_with_pinches(seed):
    rng = np.random.default_rng(50 + seed)
    p = np.pad(rng.random((8, 8, 8)) < 0.5, 1)
    b = BinaryVolume.from_pores(p)
    assert edge_classes(b).pinches > 0 or seed  # most seeds do have pinches
    vx = voxel_metrics(b)
    ms = mesh_metrics(b, style=RECT)
    assert ms.surface_area == pytest.approx(vx.surface_area, rel=1e-12)
    assert ms.total_mean_curvature == pytest.approx(vx.total_mean_curvature, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("style", [RECT, MC])
def test_spacing_scaling(style):
    rng = np.random.default_rng(7)
    b = BinaryVolume.from_pores(oracles.well_composed(rng, (10, 12, 9)))
    base = VoxelSpacing(0.5, 1.0, 1.5)
    r1 = mesh_metrics(b, base, style)
    r2 = mesh_metrics(b, base.scaled(3.0), style)
    assert r2.surface_area == pytest.approx(9 * r1.surface_area, rel=1e-12)
    assert r2.total_mean_curvature == pytest.approx(3 * r1.total_mean_curvature, rel=1e-12)
    assert r2.chi_object == r1.chi_object


# --- marching cubes -----------------------------------------------------

@pytest.mark.parametrize("r", [8, 16, 32])
def test_mc_ball_area_between_sphere_and_staircase(r):
    b = digital_ball(r)
    ms = mesh_metrics(b, style=MC)
    staircase = voxel_metrics(b).surface_area
    assert 4 * math.pi * r * r < ms.surface_area < staircase
    assert ms.open_edge_count == 0
    assert (ms.chi_surface, ms.chi_object) == (2, 1)
    assert ms.total_mean_curvature > 4 * math.pi * r * 0.9


def test_mc_single_voxel_octahedron():
    r = mesh_metrics(single_voxel(), style=MC)
    assert (r.mesh.n_vertices, r.mesh.n_faces) == (6, 8)
    assert r.surface_area == pytest.approx(8 * math.sqrt(3) / 8)
    assert r.chi_object == 1


def test_mc_torus_topology():
    from morphometers.shapes import generate_torus

    t = generate_torus((32, 32, 32), (16, 16, 16), 8, 2)
    r = mesh_metrics(BinaryVolume.from_pores(t.values == 255), style=MC)
    assert r.open_edge_count == 0
    assert (r.chi_surface, r.chi_object) == (0, 0)


@pytest.mark.parametrize("seed", range(6))
def test_mc_topology_matches_26_connected_euler_when_well_composed(seed):
    rng = np.random.default_rng(200 + seed)
    p = oracles.well_composed(rng, (12, 12, 12))
    r = mesh_metrics(BinaryVolume.from_pores(p), style=MC)
    assert r.open_edge_count == 0
    assert r.chi_object == oracles.euler6_cells(p)


def test_slab_partitioning_does_not_change_mesh(monkeypatch):
    from morphometers import _parallel

    rng = np.random.default_rng(3)
    b = BinaryVolume.from_pores(rng.random((11, 7, 9)) < 0.5)
    ref = {s: extract_interface(b, style=s, boundary=PAD) for s in (RECT, MC)}
    monkeypatch.setattr(_parallel, "SLAB_VOXELS", 1)
    for s, m in ref.items():
        got = extract_interface(b, style=s, boundary=PAD, threads=4)
        assert np.array_equal(got.vertices, m.vertices)
        assert np.array_equal(got.faces, m.faces)


def test_triangle_tables_have_no_degenerate_triangles():
    from morphometers import _mc_table
    from morphometers.mesh import _RECT

    for case in range(256):
        for t in range(_mc_table.NTRI[case]):
            pts = _mc_table.EDGE_OFFSETS[_mc_table.TRI_TABLE[case, t]]
            assert np.cross(pts[1] - pts[0], pts[2] - pts[0]).any()
            assert len({tuple(p) for p in pts.tolist()}) == 3
    for quad in _RECT.values():
        for tri in (quad[[0, 1, 2]], quad[[0, 2, 3]]):
            assert np.cross(tri[1] - tri[0], tri[2] - tri[0]).any()


def test_mc_table_is_complementary():
    from morphometers import _mc_table

    assert _mc_table.NTRI[0] == _mc_table.NTRI[255] == 0
    assert (_mc_table.NTRI[1:255] > 0).all()
    assert _mc_table.NTRI.max() <= 5


@pytest.mark.parametrize("r", [16, 32])
def test_mc_agrees_with_independent_extractor(r):
    # an independent marching-cubes implementation, measured with the same edge table
    measure = pytest.importorskip("skimage.measure")
    b = digital_ball(r)
    ours = mesh_metrics(b, style=MC)
    verts, faces, _, _ = measure.marching_cubes(np.pad(b.pores(), 1).astype(np.float32), 0.5)
    ref = TriangleMesh(verts, faces)
    ref_area = mesh_surface_area(ref)
    ref_m = mesh_total_mean_curvature(ref)
    # skimage winds its triangles the other way round; compare magnitudes
    assert ours.surface_area == pytest.approx(ref_area, rel=0.01)
    assert ours.total_mean_curvature == pytest.approx(abs(ref_m), rel=0.03)
