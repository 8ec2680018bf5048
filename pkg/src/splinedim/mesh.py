"""Planar polygonal meshes with exact rational coordinates.

A mesh is given by its vertices and counterclockwise face loops; edges are
derived from the loops and identified by their sorted endpoint pair.  An edge
is oriented from its lower to its higher vertex index.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactla import as_fraction
from .polyspace import BIDEGREE, TOTAL, LinearForm, PolySpaceSpec, larger

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


class MeshError(ValueError):
    """Raised when a mesh operation is applied to an unsuitable mesh."""


@dataclass(frozen=True)
class Edge:
    id: int
    vertices: tuple[int, int]  # (tail, head), tail < head
    line: LinearForm
    faces: tuple[int, ...]

    @property
    def interior(self) -> bool:
        return len(self.faces) == 2

    @property
    def key(self) -> tuple[int, int]:
        return self.vertices


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    cells: tuple = ()

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "cells": list(self.cells)}


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, a, b) -> bool:
    """p lies on the closed segment ab (assumes collinearity already checked)."""
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def signed_area(points: Sequence) -> Fraction:
    n = len(points)
    s = Fraction(0)
    for i in range(n):
        (x0, y0), (x1, y1) = points[i], points[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s / 2


class Mesh:
    """Faces, edges and vertices of a planar polygonal mesh.

    Parameters
    ----------
    vertices : sequence of (x, y)
        Exact coordinates (ints, Fractions or ``"p/q"`` strings).
    faces : sequence of vertex-index loops
        Each loop lists the face boundary counterclockwise, including every
        mesh vertex on it (hanging vertices of T-junctions too).
    """

    def __init__(self, vertices: Sequence, faces: Sequence[Sequence[int]]):
        self.vertices: tuple = tuple((as_fraction(x), as_fraction(y)) for x, y in vertices)
        self.faces: tuple = tuple(tuple(int(v) for v in f) for f in faces)
        for f in self.faces:
            for v in f:
                if not 0 <= v < len(self.vertices):
                    raise MeshError(f"face references unknown vertex {v}")

        pairs: dict = {}
        for fi, loop in enumerate(self.faces):
            for k in range(len(loop)):
                a, b = loop[k], loop[(k + 1) % len(loop)]
                if a == b:
                    continue
                pairs.setdefault((min(a, b), max(a, b)), []).append(fi)
        self._edge_index: dict = {}
        edges = []
        for eid, key in enumerate(sorted(pairs)):
            p, q = self.vertices[key[0]], self.vertices[key[1]]
            line = LinearForm.through(p, q) if p != q else None
            edges.append(Edge(eid, key, line, tuple(pairs[key])))
            self._edge_index[key] = eid
        self.edges: tuple = tuple(edges)

        self.face_edges: tuple = tuple(
            tuple(
                (self._edge_index[(min(a, b), max(a, b))], 1 if a < b else -1)
                for a, b in zip(loop, loop[1:] + loop[:1])
                if a != b
            )
            for loop in self.faces
        )
        v_edges = [[] for _ in self.vertices]
        for e in self.edges:
            for v in e.vertices:
                v_edges[v].append(e.id)
        self.vertex_edges: tuple = tuple(tuple(x) for x in v_edges)
        v_faces = [set() for _ in self.vertices]
        for fi, loop in enumerate(self.faces):
            for v in loop:
                v_faces[v].add(fi)
        self.vertex_faces: tuple = tuple(tuple(sorted(s)) for s in v_faces)

    # -- lookup -------------------------------------------------------------
    def edge_id(self, i: int, j: int) -> int:
        try:
            return self._edge_index[(min(i, j), max(i, j))]
        except KeyError:
            raise KeyError(f"no edge between vertices {i} and {j}") from None

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edge_index

    @property
    def interior_edges(self) -> list[int]:
        return [e.id for e in self.edges if e.interior]

    @property
    def interior_vertices(self) -> list[int]:
        return [v for v, es in enumerate(self.vertex_edges) if es and all(self.edges[e].interior for e in es)]

    def is_interior_vertex(self, v: int) -> bool:
        es = self.vertex_edges[v]
        return bool(es) and all(self.edges[e].interior for e in es)

    def face_points(self, f: int) -> list:
        return [self.vertices[v] for v in self.faces[f]]

    def face_corners(self, f: int) -> list[int]:
        """Vertices of face ``f`` where the boundary actually turns."""
        loop = self.faces[f]
        n = len(loop)
        out = []
        for k in range(n):
            p, q, r = (self.vertices[loop[(k + d) % n]] for d in (-1, 0, 1))
            if _cross(p, q, r) != 0:
                out.append(loop[k])
        return out

    def is_convex_face(self, f: int) -> bool:
        loop = self.faces[f]
        n = len(loop)
        return all(
            _cross(*(self.vertices[loop[(k + d) % n]] for d in (-1, 0, 1))) >= 0 for k in range(n)
        )

    # -- classes ------------------------------------------------------------
    @property
    def is_triangulation(self) -> bool:
        return all(len(self.face_corners(f)) == 3 and len(self.faces[f]) == 3 for f in range(len(self.faces)))

    @property
    def is_tmesh(self) -> bool:
        """All edges axis-parallel and every face an axis-aligned box."""
        if any(e.line is None or not e.line.is_axis_parallel for e in self.edges):
            return False
        for f in range(len(self.faces)):
            corners = [self.vertices[v] for v in self.face_corners(f)]
            if len(corners) != 4:
                return False
            xs = {p[0] for p in corners}
            ys = {p[1] for p in corners}
            if len(xs) != 2 or len(ys) != 2:
                return False
        return True

    def axis(self, e: int) -> str | None:
        line = self.edges[e].line
        if line is None:
            return None
        if line.a == 0:
            return HORIZONTAL
        if line.b == 0:
            return VERTICAL
        return None

    def euler_count(self) -> int:
        """``#faces - #interior edges + #interior vertices``."""
        return len(self.faces) - len(self.interior_edges) + len(self.interior_vertices)

    def boundary_components(self) -> int:
        """Number of connected components of the boundary edge graph."""
        parent = {}

        def find(a):
            while parent.setdefault(a, a) != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            if not e.interior:
                a, b = e.vertices
                parent[find(a)] = find(b)
        return len({find(v) for v in parent})

    def without_faces(self, removed: Iterable[int]) -> tuple["Mesh", dict, dict]:
        """Copy of the mesh without ``removed`` faces.

        Returns ``(mesh, vertex_map, face_map)`` mapping old indices to new
        ones; vertices no longer used by any face are dropped.
        """
        removed = set(removed)
        keep = [f for f in range(len(self.faces)) if f not in removed]
        used = sorted({v for f in keep for v in self.faces[f]})
        vmap = {old: new for new, old in enumerate(used)}
        fmap = {old: new for new, old in enumerate(keep)}
        mesh = Mesh([self.vertices[v] for v in used], [[vmap[v] for v in self.faces[f]] for f in keep])
        return mesh, vmap, fmap

    def __repr__(self):
        return (
            f"Mesh({len(self.vertices)} vertices, {len(self.edges)} edges, {len(self.faces)} faces)"
        )


def _point_in_polygon(p, poly) -> bool:
    """Strict interior test by winding number (points on the boundary return False)."""
    n = len(poly)
    wn = 0
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        c = _cross(a, b, p)
        if c == 0 and _on_segment(p, a, b):
            return False
        if a[1] <= p[1]:
            if b[1] > p[1] and c > 0:
                wn += 1
        elif b[1] <= p[1] and c < 0:
            wn -= 1
    return wn != 0


def validate(mesh: Mesh) -> list[Violation]:
    """Check the mesh axioms; returns every violation found (empty list means ok)."""
    out: list[Violation] = []
    V = mesh.vertices

    for f, loop in enumerate(mesh.faces):
        if len(loop) < 3 or len(set(loop)) != len(loop):
            out.append(Violation("face", f"face {f} must be a loop of at least 3 distinct vertices", (f,)))
            continue
        area = signed_area([V[v] for v in loop])
        if area == 0:
            out.append(Violation("face", f"face {f} has zero area", (f,)))
        elif area < 0:
            out.append(Violation("orientation", f"face {f} is not counterclockwise", (f,)))

    for e in mesh.edges:
        if e.line is None:
            out.append(Violation("degenerate-edge", f"edge {e.vertices} has coincident endpoints", e.vertices))
        if len(e.faces) > 2:
            out.append(Violation("edge-faces", f"edge {e.vertices} borders {len(e.faces)} faces", e.vertices))
        elif len(e.faces) == 2:
            a, b = e.vertices
            dirs = []
            for f in e.faces:
                loop = mesh.faces[f]
                k = loop.index(a)
                dirs.append(loop[(k + 1) % len(loop)] == b)
            if dirs[0] == dirs[1]:
                out.append(
                    Violation("overlap", f"faces {e.faces} lie on the same side of edge {e.vertices}", e.faces)
                )

    # bullet 3: distinct edges meet only in a common vertex
    edges = [e for e in mesh.edges if e.line is not None]
    for i, e in enumerate(edges):
        p1, p2 = V[e.vertices[0]], V[e.vertices[1]]
        for w in range(len(V)):
            if w in e.vertices or not mesh.vertex_edges[w] and not mesh.vertex_faces[w]:
                continue
            if _cross(p1, p2, V[w]) == 0 and _on_segment(V[w], p1, p2):
                out.append(
                    Violation("edge-intersection", f"vertex {w} lies inside edge {e.vertices}", (w,) + e.vertices)
                )
        for g in edges[i + 1:]:
            shared = set(e.vertices) & set(g.vertices)
            q1, q2 = V[g.vertices[0]], V[g.vertices[1]]
            d1, d2 = _cross(p1, p2, q1), _cross(p1, p2, q2)
            d3, d4 = _cross(q1, q2, p1), _cross(q1, q2, p2)
            if d1 == 0 and d2 == 0:
                # collinear: overlap beyond a shared endpoint?
                overlap = (_on_segment(q1, p1, p2) and q1 not in (p1, p2)) or (
                    _on_segment(q2, p1, p2) and q2 not in (p1, p2)) or (
                    _on_segment(p1, q1, q2) and p1 not in (q1, q2))
                if overlap:
                    out.append(Violation("edge-intersection", f"edges {e.vertices} and {g.vertices} overlap",
                                         e.vertices + g.vertices))
                continue
            if shared:
                continue
            if ((d1 > 0) != (d2 > 0) and d1 != 0 and d2 != 0) and ((d3 > 0) != (d4 > 0) and d3 != 0 and d4 != 0):
                out.append(
                    Violation("edge-intersection", f"edges {e.vertices} and {g.vertices} cross away from a vertex",
                              e.vertices + g.vertices)
                )

    # bullet 2: no vertex strictly inside another face
    for f, loop in enumerate(mesh.faces):
        if len(loop) < 3:
            continue
        pts = [V[v] for v in loop]
        for w in range(len(V)):
            if w in loop or not mesh.vertex_faces[w]:
                continue
            if _point_in_polygon(V[w], pts):
                out.append(Violation("face-overlap", f"vertex {w} lies inside face {f}", (w, f)))

    for w in range(len(V)):
        if not mesh.vertex_faces[w]:
            out.append(Violation("isolated-vertex", f"vertex {w} belongs to no face", (w,)))

    if mesh.faces and not is_connected(mesh):
        out.append(Violation("connectivity", "the domain is not connected", ()))
    return out


def is_connected(mesh: Mesh) -> bool:
    """Faces connected through shared edges."""
    if not mesh.faces:
        return False
    seen = {0}
    stack = [0]
    while stack:
        f = stack.pop()
        for e, _ in mesh.face_edges[f]:
            for g in mesh.edges[e].faces:
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
    return len(seen) == len(mesh.faces)


def classify_interior(mesh: Mesh) -> tuple[list[int], list[int]]:
    """Interior edge ids and interior vertex ids."""
    return mesh.interior_edges, mesh.interior_vertices


def edge_line_form(mesh: Mesh, e: int) -> LinearForm:
    line = mesh.edges[e].line
    if line is None:
        raise MeshError(f"edge {mesh.edges[e].vertices} is degenerate")
    return line


def slopes_at_vertex(mesh: Mesh, v: int) -> int:
    return len({mesh.edges[e].line.direction for e in mesh.vertex_edges[v]})


# ---------------------------------------------------------------------------
# polynomial space assignment


@dataclass(frozen=True)
class DegreeDistribution:
    """Per-face polynomial spaces of one kind (total degree or bidegree)."""

    kind: str
    degrees: tuple

    def __post_init__(self):
        if self.kind not in (TOTAL, BIDEGREE):
            raise ValueError(f"unknown polynomial space kind {self.kind!r}")
        object.__setattr__(self, "degrees", tuple(int(m) for m in self.degrees))
        if any(m < 0 for m in self.degrees):
            raise ValueError("face degrees must be non-negative")

    @classmethod
    def uniform(cls, kind: str, m: int, nfaces: int) -> "DegreeDistribution":
        return cls(kind, (m,) * nfaces)

    def spec(self, f: int) -> PolySpaceSpec:
        return PolySpaceSpec(self.kind, self.degrees[f])

    def restrict(self, faces: Sequence[int]) -> "DegreeDistribution":
        return DegreeDistribution(self.kind, tuple(self.degrees[f] for f in faces))


@dataclass(frozen=True)
class InducedSpaces:
    faces: tuple
    edges: tuple
    vertices: tuple


def induced_spaces(mesh: Mesh, deg: DegreeDistribution) -> InducedSpaces:
    """Spaces on edges and vertices: sums of the spaces of the incident faces."""
    if len(deg.degrees) != len(mesh.faces):
        raise MeshError("degree distribution does not match the number of faces")
    faces = tuple(deg.spec(f) for f in range(len(mesh.faces)))

    def total(fs):
        fs = list(fs)
        if not fs:
            return None
        out = faces[fs[0]]
        for f in fs[1:]:
            out = larger(out, faces[f])
        return out

    edges = tuple(total(e.faces) for e in mesh.edges)
    verts = tuple(total(mesh.vertex_faces[v]) for v in range(len(mesh.vertices)))
    return InducedSpaces(faces, edges, verts)


# ---------------------------------------------------------------------------
# T-mesh segments


@dataclass(frozen=True)
class Segment:
    """Connected run of collinear interior edges sharing the edge degree ``m``."""

    axis: str
    coord: Fraction  # y for horizontal, x for vertical
    edges: tuple
    m: int

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class Transversal:
    edge: int
    a: Fraction  # crossing coordinate along the segment
    m: int
    interior: bool


def _along(mesh: Mesh, axis: str, v: int) -> Fraction:
    x, y = mesh.vertices[v]
    return x if axis == HORIZONTAL else y


def _require_tmesh(mesh: Mesh):
    if not mesh.is_tmesh:
        raise MeshError("segments defined only for T-meshes")


def _ordered_run(mesh: Mesh, edges: Sequence[int]) -> tuple:
    axis = mesh.axis(edges[0])
    return tuple(sorted(edges, key=lambda e: min(_along(mesh, axis, v) for v in mesh.edges[e].vertices)))


def make_segment(mesh: Mesh, deg: DegreeDistribution, edges: Iterable[int]) -> Segment:
    """Validate ``edges`` as a segment; raises :class:`MeshError` otherwise."""
    _require_tmesh(mesh)
    edges = list(dict.fromkeys(edges))
    if not edges:
        raise MeshError("a segment needs at least one edge")
    spaces = induced_spaces(mesh, deg)
    axis = mesh.axis(edges[0])
    line = mesh.edges[edges[0]].line
    for e in edges:
        if not mesh.edges[e].interior:
            raise MeshError(f"edge {mesh.edges[e].vertices} is not interior")
        if mesh.edges[e].line != line:
            raise MeshError("segment edges must be collinear")
    ms = {spaces.edges[e].m for e in edges}
    if len(ms) != 1:
        raise MeshError("segment edges must share the same edge degree")
    run = _ordered_run(mesh, edges)
    for e, g in zip(run, run[1:]):
        if not set(mesh.edges[e].vertices) & set(mesh.edges[g].vertices):
            raise MeshError("segment edges must be connected")
    coord = -line.c
    return Segment(axis, coord, run, ms.pop())


def detect_segments(mesh: Mesh, deg: DegreeDistribution) -> list[Segment]:
    """Maximal segments of both axes, ordered by axis, line and position."""
    _require_tmesh(mesh)
    spaces = induced_spaces(mesh, deg)
    lines: dict = {}
    for e in mesh.interior_edges:
        lines.setdefault((mesh.axis(e), mesh.edges[e].line), []).append(e)
    out = []
    for (axis, line), es in sorted(lines.items(), key=lambda kv: (kv[0][0], -kv[0][1].c)):
        run = _ordered_run(mesh, es)
        cur = [run[0]]
        for e in run[1:]:
            prev = cur[-1]
            joined = set(mesh.edges[prev].vertices) & set(mesh.edges[e].vertices)
            if joined and spaces.edges[e].m == spaces.edges[prev].m:
                cur.append(e)
            else:
                out.append(Segment(axis, -line.c, tuple(cur), spaces.edges[cur[0]].m))
                cur = [e]
        out.append(Segment(axis, -line.c, tuple(cur), spaces.edges[cur[0]].m))
    return out


def segment_vertices(mesh: Mesh, seg: Segment) -> list[int]:
    vs = {v for e in seg.edges for v in mesh.edges[e].vertices}
    return sorted(vs, key=lambda v: _along(mesh, seg.axis, v))


def transversal_edges(mesh: Mesh, deg: DegreeDistribution, seg: Segment) -> list[Transversal]:
    """Edges perpendicular to ``seg`` whose closure meets it, interior and boundary alike."""
    spaces = induced_spaces(mesh, deg)
    on_line = set(segment_vertices(mesh, seg))
    other = VERTICAL if seg.axis == HORIZONTAL else HORIZONTAL
    out = []
    for e in mesh.edges:
        if mesh.axis(e.id) != other:
            continue
        hit = on_line & set(e.vertices)
        if hit:
            v = hit.pop()
            out.append(Transversal(e.id, _along(mesh, seg.axis, v), spaces.edges[e.id].m, e.interior))
    out.sort(key=lambda t: (t.a, t.edge))
    return out
