"""Marching-cubes case table built from a face rule.

Corner ``i`` of a cell sits at offset ``(i >> 2 & 1, i >> 1 & 1, i & 1)`` in
``(z, y, x)``; case bit ``i`` is set when that corner is pore. On every cube
face the contour separates pore from solid corners, and on an ambiguous face
(diagonal pore pair) the pore corners are cut off individually. The decision
depends only on the face's four samples, so adjacent cells agree and the
surface is closed. Loops are oriented with the normal pointing from pore to
solid and triangulated without diagonals lying in a cube face.

All vertex positions are edge midpoints, kept as integer "doubled"
coordinates ``off(a) + off(b)``.
"""
from __future__ import annotations

import numpy as np

CORNER_OFFSETS = np.array([((i >> 2) & 1, (i >> 1) & 1, i & 1) for i in range(8)], dtype=np.int64)
EDGES = [(a, b) for a in range(8) for b in range(a + 1, 8) if bin(a ^ b).count("1") == 1]
EDGE_INDEX = {e: k for k, e in enumerate(EDGES)}
# doubled coordinates of each edge midpoint
EDGE_OFFSETS = np.array([CORNER_OFFSETS[a] + CORNER_OFFSETS[b] for a, b in EDGES], dtype=np.int64)


def _faces():
    """(cyclic corner list, outward normal) for the six cube faces."""
    out = []
    for bit, axis in ((1, 2), (2, 1), (4, 0)):
        u, v = [b for b in (1, 2, 4) if b != bit]
        for side in (0, 1):
            base = bit if side else 0
            ring = [base, base | u, base | u | v, base | v]
            normal = np.zeros(3, dtype=np.int64)
            normal[axis] = 1 if side else -1
            out.append((ring, normal))
    return out


FACES = _faces()


def _edge(a, b):
    return EDGE_INDEX[(min(a, b), max(a, b))]


def _face_segments(case):
    segs = []
    for ring, normal in FACES:
        inside = [bool(case >> c & 1) for c in ring]
        cross = [i for i in range(4) if inside[i] != inside[(i + 1) % 4]]
        if not cross:
            continue
        if len(cross) == 2:
            p, q = (_edge(ring[i], ring[(i + 1) % 4]) for i in cross)
            pairs = [((p, q), [ring[i] for i in range(4) if inside[i]])]
        else:
            pairs = []
            for i in range(4):
                if inside[i]:
                    pairs.append(((_edge(ring[i - 1], ring[i]), _edge(ring[i], ring[(i + 1) % 4])), [ring[i]]))
        for (p, q), pore_corners in pairs:
            pp, qq = EDGE_OFFSETS[p], EDGE_OFFSETS[q]
            w = 2 * CORNER_OFFSETS[pore_corners].mean(axis=0) - pp
            if np.dot(np.cross(normal, qq - pp), w) < 0:
                p, q = q, p
            segs.append((p, q))
    return segs


def _edge_faces(e):
    a, b = EDGES[e]
    return {k for k, (ring, _) in enumerate(FACES) if a in ring and b in ring}


def _triangulate(loop):
    """Triangulate a loop, never using a diagonal that lies in a cube face."""
    n = len(loop)
    if n == 3:
        return [tuple(loop)]

    def ok_diag(i, j):
        return not (_edge_faces(loop[i]) & _edge_faces(loop[j]))

    def area2(tri):
        a, b, c = (EDGE_OFFSETS[e] for e in tri)
        return np.cross(b - a, c - a)

    for start in range(n):
        order = loop[start:] + loop[:start]
        idx = [(start + k) % n for k in range(n)]
        if all(ok_diag(idx[0], idx[k]) for k in range(2, n - 1)):
            tris = [(order[0], order[k], order[k + 1]) for k in range(1, n - 1)]
            if all(np.any(area2(t)) for t in tris):
                return tris
    raise RuntimeError(f"no admissible triangulation for loop {loop}")


def _case_triangles(case):
    segs = _face_segments(case)
    nxt = {}
    for p, q in segs:
        assert p not in nxt, "inconsistent segment orientation"
        nxt[p] = q
    assert sorted(nxt) == sorted(nxt.values())
    tris = []
    seen = set()
    for s in sorted(nxt):
        if s in seen:
            continue
        loop = [s]
        seen.add(s)
        while nxt[loop[-1]] != s:
            loop.append(nxt[loop[-1]])
            seen.add(loop[-1])
        tris.extend(_triangulate(loop))
    return tris


def _orientation_sign():
    """+1 if loops as built face away from the pore corner, else -1."""
    (a, b, c), = _case_triangles(1)
    pa, pb, pc = EDGE_OFFSETS[[a, b, c]]
    n = np.cross(pb - pa, pc - pa)
    return 1 if np.dot(n, (pa + pb + pc) / 3 - 2 * CORNER_OFFSETS[0]) > 0 else -1


def build_table():
    """Return ``(ntri[256], tri[256, max, 3])`` of edge indices."""
    flip = _orientation_sign() < 0
    cases = []
    for case in range(256):
        tris = _case_triangles(case)
        if flip:
            tris = [(a, c, b) for a, b, c in tris]
        cases.append(tris)
    width = max(1, max(len(t) for t in cases))
    ntri = np.array([len(t) for t in cases], dtype=np.int64)
    table = np.zeros((256, width, 3), dtype=np.int64)
    for case, tris in enumerate(cases):
        if tris:
            table[case, :len(tris)] = tris
    return ntri, table


NTRI, TRI_TABLE = build_table()
