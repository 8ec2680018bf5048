"""Chain complexes of a mesh with a smoothness distribution.

Three complexes are built on the interior cells (faces, interior edges,
interior vertices):

* ``C``: the polynomial spaces themselves with cellular boundary maps,
* ``I``: the edge and vertex ideals (zero in the face position),
* ``Q``: the quotients ``P/J``; the kernel of its top map is the spline space.

Boundary matrices act on column vectors: ``d2`` has shape
``(dim1, dim2)`` and ``d1`` has shape ``(dim0, dim1)``.  Faces are oriented
counterclockwise, edges from the lower to the higher vertex index, so
``d1 @ d2 == 0``.  All matrices use one global monomial basis per space, so
the maps between cells need no change of coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple

from .exactla import RationalMatrix, kernel_dim, rank
from .mesh import DegreeDistribution, InducedSpaces, Mesh, MeshError, induced_spaces
from .polyspace import LinearForm, PolySpaceSpec, ideal_sum_space, principal_ideal_dim

I_ROW = "I"
C_ROW = "C"
Q_ROW = "Q"


@dataclass(frozen=True)
class SmoothnessDistribution:
    """Order of smoothness per edge id; boundary edges always carry -1."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(r) for r in self.values))
        if any(r < -1 for r in self.values):
            raise ValueError("smoothness orders must be >= -1")

    @classmethod
    def uniform(cls, mesh: Mesh, r: int) -> "SmoothnessDistribution":
        return cls(tuple(r if e.interior else -1 for e in mesh.edges))

    @classmethod
    def from_pairs(cls, mesh: Mesh, default: int, overrides: Mapping | None = None) -> "SmoothnessDistribution":
        """Uniform ``default`` on interior edges, then per-edge overrides keyed by vertex pairs."""
        values = [default if e.interior else -1 for e in mesh.edges]
        for (i, j), r in (overrides or {}).items():
            e = mesh.edge_id(i, j)
            if not mesh.edges[e].interior and r != -1:
                raise ValueError(f"boundary edge ({i}, {j}) must have smoothness -1, got {r}")
            values[e] = r
        return cls(tuple(values))

    def check(self, mesh: Mesh):
        if len(self.values) != len(mesh.edges):
            raise MeshError("smoothness distribution does not match the number of edges")
        for e in mesh.edges:
            if not e.interior and self.values[e.id] != -1:
                raise MeshError(f"boundary edge {e.vertices} must have smoothness -1")

    def __getitem__(self, e: int) -> int:
        return self.values[e]

    def __len__(self):
        return len(self.values)

    def replace(self, updates: Mapping[int, int]) -> "SmoothnessDistribution":
        values = list(self.values)
        for e, r in updates.items():
            values[e] = r
        return SmoothnessDistribution(tuple(values))

    def as_pairs(self, mesh: Mesh) -> dict:
        return {mesh.edges[e].vertices: r for e, r in enumerate(self.values)}


def _as_smoothness(mesh: Mesh, r) -> SmoothnessDistribution:
    if isinstance(r, int):
        return SmoothnessDistribution.uniform(mesh, r)
    r.check(mesh)
    return r


# ---------------------------------------------------------------------------
# ideals


def _edge_generators(space: PolySpaceSpec, form: LinearForm, r: int):
    # r = -1: the whole space (form**0 times everything)
    return (space, form, r + 1)


def _translated(form: LinearForm, point) -> LinearForm:
    """The same line written in coordinates centred at ``point``."""
    return LinearForm(form.a, form.b, form(*point))


def edge_ideal_dim(mesh: Mesh, deg: DegreeDistribution, r, e: int) -> int:
    r = _as_smoothness(mesh, r)
    edge = mesh.edges[e]
    if not edge.interior:
        raise MeshError(f"edge {edge.vertices} is not interior")
    space = induced_spaces(mesh, deg).edges[e]
    if r[e] == -1:
        return space.dim
    return principal_ideal_dim(space, edge.line, r[e] + 1)


def vertex_ideal_dim(mesh: Mesh, deg: DegreeDistribution, r, v: int) -> int:
    """Dimension of the sum of the incident edge ideals inside ``P_v``.

    Computed in coordinates centred at the vertex, where every incident line
    is a homogeneous linear form.
    """
    r = _as_smoothness(mesh, r)
    if not mesh.is_interior_vertex(v):
        raise MeshError(f"vertex {v} is not interior")
    spaces = induced_spaces(mesh, deg)
    centre = mesh.vertices[v]
    gens = [
        _edge_generators(spaces.edges[e], _translated(mesh.edges[e].line, centre), r[e])
        for e in mesh.vertex_edges[v]
    ]
    return ideal_sum_space(spaces.vertices[v], gens).rank


@dataclass(frozen=True)
class IdealDims:
    edges: dict  # interior edge id -> dim J
    vertices: dict  # interior vertex id -> dim J
    edge_quotients: dict
    vertex_quotients: dict


def ideal_dims(mesh: Mesh, deg: DegreeDistribution, r) -> IdealDims:
    cells = _Cells(mesh, deg, _as_smoothness(mesh, r))
    return IdealDims(
        {e: cells.edge_ideal[e].rank for e in cells.edges},
        {v: cells.vertex_ideal[v].rank for v in cells.verts},
        {e: len(cells.edge_quot[e]) for e in cells.edges},
        {v: len(cells.vertex_quot[v]) for v in cells.verts},
    )


class _Cells:
    """Interior cells with their spaces, ideals (RREF) and quotient bases."""

    def __init__(self, mesh: Mesh, deg: DegreeDistribution, r: SmoothnessDistribution):
        self.mesh = mesh
        self.r = r
        self.spaces: InducedSpaces = induced_spaces(mesh, deg)
        self.faces = list(range(len(mesh.faces)))
        self.edges = mesh.interior_edges
        self.verts = mesh.interior_vertices
        sp = self.spaces
        self.edge_ideal = {
            e: ideal_sum_space(sp.edges[e], [_edge_generators(sp.edges[e], mesh.edges[e].line, r[e])])
            for e in self.edges
        }
        self.vertex_ideal = {
            v: ideal_sum_space(
                sp.vertices[v],
                [_edge_generators(sp.edges[e], mesh.edges[e].line, r[e]) for e in mesh.vertex_edges[v]],
            )
            for v in self.verts
        }
        self.edge_quot = {e: self.edge_ideal[e].complement() for e in self.edges}
        self.vertex_quot = {v: self.vertex_ideal[v].complement() for v in self.verts}

    @staticmethod
    def offsets(sizes):
        out, acc = [], 0
        for s in sizes:
            out.append(acc)
            acc += s
        return out, acc


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True, eq=False)
class GradedComplex:
    """Three-term complex ``X2 -> X1 -> X0`` with exact boundary matrices."""

    tag: str
    dims: tuple
    d2: RationalMatrix
    d1: RationalMatrix

    @cached_property
    def rank2(self) -> int:
        return rank(self.d2)

    @cached_property
    def rank1(self) -> int:
        return rank(self.d1)

    def boundary_squared_is_zero(self) -> bool:
        return (self.d1 @ self.d2).is_zero()

    def euler_characteristic(self) -> int:
        return self.dims[0] - self.dims[1] + self.dims[2]

    def homology(self) -> tuple[int, int, int]:
        """``(h2, h1, h0)``."""
        d2, d1, d0 = self.dims
        return (d2 - self.rank2, d1 - self.rank1 - self.rank2, d0 - self.rank1)


class Complexes(NamedTuple):
    I: GradedComplex
    C: GradedComplex
    Q: GradedComplex


def _build(mesh: Mesh, deg: DegreeDistribution, r: SmoothnessDistribution, rows=(I_ROW, C_ROW, Q_ROW)) -> dict:
    cells = _Cells(mesh, deg, r)
    sp = cells.spaces
    edge_pos = {e: k for k, e in enumerate(cells.edges)}
    vert_pos = {v: k for k, v in enumerate(cells.verts)}

    face_off, n2 = cells.offsets([sp.faces[f].dim for f in cells.faces])
    out = {}

    if C_ROW in rows:
        e_off, n1 = cells.offsets([sp.edges[e].dim for e in cells.edges])
        v_off, n0 = cells.offsets([sp.vertices[v].dim for v in cells.verts])
        d2 = [dict() for _ in range(n1)]
        for f in cells.faces:
            fsp = sp.faces[f]
            for e, sign in mesh.face_edges[f]:
                if e not in edge_pos:
                    continue
                idx = sp.edges[e].index
                base = e_off[edge_pos[e]]
                for k, mono in enumerate(fsp.monomials):
                    d2[base + idx[mono]][face_off[f] + k] = sign
        d1 = [dict() for _ in range(n0)]
        for e in cells.edges:
            esp = sp.edges[e]
            for v, sign in zip(mesh.edges[e].vertices, (-1, 1)):
                if v not in vert_pos:
                    continue
                idx = sp.vertices[v].index
                base = v_off[vert_pos[v]]
                for k, mono in enumerate(esp.monomials):
                    d1[base + idx[mono]][e_off[edge_pos[e]] + k] = sign
        out[C_ROW] = GradedComplex(C_ROW, (n2, n1, n0), RationalMatrix(n1, n2, d2), RationalMatrix(n0, n1, d1))

    if Q_ROW in rows:
        e_off, n1 = cells.offsets([len(cells.edge_quot[e]) for e in cells.edges])
        v_off, n0 = cells.offsets([len(cells.vertex_quot[v]) for v in cells.verts])
        e_col = {e: {c: k for k, c in enumerate(cells.edge_quot[e])} for e in cells.edges}
        v_col = {v: {c: k for k, c in enumerate(cells.vertex_quot[v])} for v in cells.verts}
        d2 = [dict() for _ in range(n1)]
        for f in cells.faces:
            fsp = sp.faces[f]
            for e, sign in mesh.face_edges[f]:
                if e not in edge_pos or not e_col[e]:
                    continue
                idx = sp.edges[e].index
                base = e_off[edge_pos[e]]
                J = cells.edge_ideal[e]
                for k, mono in enumerate(fsp.monomials):
                    for c, val in J.reduce({idx[mono]: sign}).items():
                        d2[base + e_col[e][c]][face_off[f] + k] = val
        d1 = [dict() for _ in range(n0)]
        for e in cells.edges:
            esp = sp.edges[e]
            for v, sign in zip(mesh.edges[e].vertices, (-1, 1)):
                if v not in vert_pos or not v_col[v]:
                    continue
                vsp = sp.vertices[v]
                base = v_off[vert_pos[v]]
                J = cells.vertex_ideal[v]
                for k, c_e in enumerate(cells.edge_quot[e]):
                    mono = esp.monomials[c_e]
                    for c, val in J.reduce({vsp.index[mono]: sign}).items():
                        d1[base + v_col[v][c]][e_off[edge_pos[e]] + k] = val
        out[Q_ROW] = GradedComplex(Q_ROW, (n2, n1, n0), RationalMatrix(n1, n2, d2), RationalMatrix(n0, n1, d1))

    if I_ROW in rows:
        e_basis = {e: cells.edge_ideal[e].basis() for e in cells.edges}
        e_off, n1 = cells.offsets([len(e_basis[e]) for e in cells.edges])
        v_off, n0 = cells.offsets([cells.vertex_ideal[v].rank for v in cells.verts])
        v_piv = {v: {c: k for k, c in enumerate(cells.vertex_ideal[v].pivots)} for v in cells.verts}
        d1 = [dict() for _ in range(n0)]
        for e in cells.edges:
            esp = sp.edges[e]
            for v, sign in zip(mesh.edges[e].vertices, (-1, 1)):
                if v not in vert_pos:
                    continue
                vidx = sp.vertices[v].index
                base = v_off[vert_pos[v]]
                for k, row in enumerate(e_basis[e]):
                    # coordinates in the RREF basis of J_v are the entries at its pivots
                    for c, val in row.items():
                        p = v_piv[v].get(vidx[esp.monomials[c]])
                        if p is not None:
                            d1[base + p][e_off[edge_pos[e]] + k] = sign * val
        out[I_ROW] = GradedComplex(I_ROW, (0, n1, n0), RationalMatrix(n1, 0), RationalMatrix(n0, n1, d1))
    return out


def build_complexes(mesh: Mesh, deg: DegreeDistribution, r) -> Complexes:
    """The rows ``I -> C -> Q`` of the short exact sequence of complexes."""
    out = _build(mesh, deg, _as_smoothness(mesh, r))
    return Complexes(out[I_ROW], out[C_ROW], out[Q_ROW])


def quotient_complex(mesh: Mesh, deg: DegreeDistribution, r) -> GradedComplex:
    return _build(mesh, deg, _as_smoothness(mesh, r), rows=(Q_ROW,))[Q_ROW]


def euler_characteristic(X: GradedComplex) -> int:
    return X.euler_characteristic()


def homology_dim(X: GradedComplex, i: int) -> int:
    if i not in (0, 1, 2):
        raise ValueError("homology position must be 0, 1 or 2")
    h2, h1, h0 = X.homology()
    return {2: h2, 1: h1, 0: h0}[i]


def is_lower_acyclic(mesh: Mesh, deg: DegreeDistribution, r) -> bool:
    _, h1, h0 = quotient_complex(mesh, deg, r).homology()
    return h1 == 0 and h0 == 0


def spline_dim_kernel(mesh: Mesh, deg: DegreeDistribution, r) -> int:
    """Dimension of the spline space as the kernel of the top quotient map."""
    return kernel_dim(quotient_complex(mesh, deg, r).d2)
