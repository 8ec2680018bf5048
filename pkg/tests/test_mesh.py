import random
from fractions import Fraction

import pytest
from helpers import annulus, bideg, fix_a, fix_b, fix_c, fix_d, fix_e, mesh_from_boxes, random_tmesh, random_triangulation, total

from splinedim.mesh import (
    HORIZONTAL,
    VERTICAL,
    DegreeDistribution,
    Mesh,
    MeshError,
    classify_interior,
    detect_segments,
    edge_line_form,
    induced_spaces,
    make_segment,
    segment_vertices,
    slopes_at_vertex,
    transversal_edges,
    validate,
)
from splinedim.polyspace import LinearForm


def codes(mesh):
    return {v.code for v in validate(mesh)}


@pytest.mark.parametrize("build", [fix_a, fix_b, fix_c, fix_d, fix_e, annulus])
def test_fixtures_validate(build):
    assert validate(build()) == []


def test_crossing_edges():
    # two quads whose edges cross away from any vertex
    mesh = Mesh([(0, 0), (2, 0), (2, 2), (0, 2), (1, -1), (3, 1), (3, 3), (1, 3)],
                [[0, 1, 2, 3], [4, 5, 6, 7]])
    assert "edge-intersection" in codes(mesh)


def test_disconnected():
    mesh = Mesh([(0, 0), (1, 0), (0, 1), (5, 5), (6, 5), (5, 6)], [[0, 1, 2], [3, 4, 5]])
    assert codes(mesh) == {"connectivity"}


def test_clockwise_face():
    mesh = Mesh([(0, 0), (1, 0), (0, 1)], [[0, 2, 1]])
    assert "orientation" in codes(mesh)


def test_hanging_vertex_missing_from_loop():
    # left face omits the vertex (1, 1) lying on its right side
    mesh = Mesh([(0, 0), (1, 0), (1, 2), (0, 2), (2, 0), (2, 1), (1, 1), (2, 2)],
                [[0, 1, 2, 3], [1, 4, 5, 6], [6, 5, 7, 2]])
    assert "edge-intersection" in codes(mesh)


def test_overlapping_faces():
    mesh = Mesh([(0, 0), (4, 0), (0, 4), (1, 1)], [[0, 1, 2], [0, 1, 3]])
    found = codes(mesh)
    assert "overlap" in found or "face-overlap" in found


def test_violations_carry_cells():
    mesh = Mesh([(0, 0), (1, 0), (0, 1)], [[0, 2, 1]])
    (v,) = validate(mesh)
    assert v.cells == (0,)
    assert v.as_dict()["code"] == "orientation"


def test_classify_interior():
    assert [len(x) for x in classify_interior(fix_a())] == [1, 0]
    assert [len(x) for x in classify_interior(fix_b())] == [4, 1]
    assert [len(x) for x in classify_interior(fix_d())] == [4, 1]
    assert [len(x) for x in classify_interior(fix_e())] == [9, 3]


def test_classify_interior_stable_under_vertex_reordering():
    rng = random.Random(3)
    for _ in range(10):
        mesh = random_triangulation(rng)
        perm = list(range(len(mesh.vertices)))
        rng.shuffle(perm)
        inv = {old: new for new, old in enumerate(perm)}
        other = Mesh([mesh.vertices[p] for p in perm], [[inv[v] for v in f] for f in mesh.faces])
        edges, verts = classify_interior(mesh)
        edges2, verts2 = classify_interior(other)
        assert {mesh.vertices[v] for v in verts} == {other.vertices[v] for v in verts2}
        as_points = lambda m, es: {frozenset(m.vertices[v] for v in m.edges[e].vertices) for e in es}
        assert as_points(mesh, edges) == as_points(other, edges2)


def test_edge_line_form():
    mesh = fix_a()
    assert edge_line_form(mesh, mesh.edge_id(1, 3)) == LinearForm(1, 1, -1)
    b = fix_b()
    assert edge_line_form(b, b.edge_id(1, 4)) == LinearForm(1, 0, -1)
    assert edge_line_form(b, b.edge_id(6, 7)) == LinearForm(0, 1, -2)


def test_slopes():
    assert slopes_at_vertex(fix_d(), 4) == 2
    assert slopes_at_vertex(fix_b(), 4) == 2
    assert slopes_at_vertex(fix_e(), 3) == 4
    # three non-collinear edges meeting at vertex 3
    mesh = Mesh([(0, 0), (4, 0), (0, 4), (1, 1)], [[0, 1, 3], [1, 2, 3], [2, 0, 3]])
    assert slopes_at_vertex(mesh, 3) == 3


@pytest.mark.parametrize("build", [fix_a, fix_b, fix_c, fix_d, fix_e])
def test_interior_vertices_have_two_slopes(build):
    mesh = build()
    assert all(slopes_at_vertex(mesh, v) >= 2 for v in mesh.interior_vertices)


def test_euler_count():
    for build in (fix_a, fix_b, fix_c, fix_d, fix_e):
        assert build().euler_count() == 1
    assert annulus().euler_count() == 0
    assert annulus().boundary_components() == 2
    rng = random.Random(5)
    for _ in range(20):
        assert random_triangulation(rng).euler_count() == 1
        assert random_tmesh(rng).euler_count() == 1


def test_induced_spaces():
    spaces = induced_spaces(fix_a(), total(fix_a(), 2))
    assert {s.m for s in spaces.edges + spaces.vertices} == {2}
    mesh = fix_b()
    spaces = induced_spaces(mesh, DegreeDistribution("bidegree", (2, 3, 2, 3)))
    assert spaces.edges[mesh.edge_id(1, 4)].m == 3
    assert spaces.vertices[4].m == 3
    with pytest.raises(MeshError):
        induced_spaces(mesh, DegreeDistribution("bidegree", (2, 3)))


def test_detect_segments():
    mesh = fix_c()
    segs = detect_segments(mesh, bideg(mesh, 2))
    y1 = [s for s in segs if s.axis == HORIZONTAL and s.coord == 1]
    assert len(y1) == 1 and len(y1[0]) == 3
    b = fix_b()
    x1 = [s for s in detect_segments(b, bideg(b, 2)) if s.axis == VERTICAL and s.coord == 1]
    assert len(x1) == 1 and len(x1[0]) == 2


def test_segments_split_where_degree_changes():
    mesh = fix_c()
    degrees = [2] * 9
    degrees[4] = 3
    deg = DegreeDistribution("bidegree", tuple(degrees))
    y1 = [s for s in detect_segments(mesh, deg) if s.axis == HORIZONTAL and s.coord == 1]
    # the middle edge borders the raised face, its neighbours do not
    assert [len(s) for s in y1] == [1, 1, 1]
    assert [s.m for s in y1] == [2, 3, 2]


def test_segments_cover_each_edge_once():
    rng = random.Random(11)
    for _ in range(20):
        mesh = random_tmesh(rng)
        deg = DegreeDistribution("bidegree", tuple(rng.randint(1, 3) for _ in mesh.faces))
        seen = [e for s in detect_segments(mesh, deg) for e in s.edges]
        assert sorted(seen) == sorted(mesh.interior_edges)


def test_segments_need_tmesh():
    with pytest.raises(MeshError, match="segments defined only for T-meshes"):
        detect_segments(fix_d(), total(fix_d(), 2))


def test_make_segment_checks():
    mesh = fix_c()
    deg = bideg(mesh, 2)
    with pytest.raises(MeshError):
        make_segment(mesh, deg, [mesh.edge_id(0, 1)])
    with pytest.raises(MeshError):
        make_segment(mesh, deg, [mesh.edge_id(4, 5), mesh.edge_id(6, 7)])
    with pytest.raises(MeshError):
        make_segment(mesh, deg, [mesh.edge_id(4, 5), mesh.edge_id(5, 9)])
    seg = make_segment(mesh, deg, [mesh.edge_id(6, 7), mesh.edge_id(5, 6)])
    assert segment_vertices(mesh, seg) == [5, 6, 7]


def test_transversal_edges():
    mesh = fix_c()
    deg = bideg(mesh, 2)
    full = make_segment(mesh, deg, [mesh.edge_id(4, 5), mesh.edge_id(5, 6), mesh.edge_id(6, 7)])
    ts = transversal_edges(mesh, deg, full)
    assert sorted({t.a for t in ts}) == [0, 1, 2, 3]
    assert {t.a for t in ts if not t.interior} == {0, 3}
    middle = make_segment(mesh, deg, [mesh.edge_id(5, 6)])
    assert sorted({t.a for t in transversal_edges(mesh, deg, middle)}) == [1, 2]
    b = fix_b()
    x1 = make_segment(b, bideg(b, 2), [b.edge_id(1, 4), b.edge_id(4, 7)])
    assert sorted({t.a for t in transversal_edges(b, bideg(b, 2), x1)}) == [0, 1, 2]


def test_tmesh_with_hanging_vertex():
    # left half one box, right half split: vertex (1, 1) hangs on the left face
    mesh = mesh_from_boxes([(0, 0, 1, 2), (1, 0, 2, 1), (1, 1, 2, 2)])
    assert validate(mesh) == []
    assert mesh.is_tmesh
    left = mesh.faces[0]
    assert len(left) == 5
    assert mesh.interior_vertices == [mesh.vertices.index((1, 1))]
    assert len(mesh.interior_edges) == 3


def test_rational_coordinates():
    mesh = Mesh([(0, 0), ("1/2", 0), ("1/2", "1/3"), (0, "1/3")], [[0, 1, 2, 3]])
    assert validate(mesh) == []
    assert mesh.vertices[2] == (Fraction(1, 2), Fraction(1, 3))


def test_without_faces_maps():
    mesh, vmap, fmap = fix_c().without_faces([4])
    assert len(mesh.faces) == 8
    assert fmap == {0: 0, 1: 1, 2: 2, 3: 3, 5: 4, 6: 5, 7: 6, 8: 7}
    assert len(vmap) == 16
