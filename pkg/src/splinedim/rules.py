"""Certified smoothness reductions, face pruning and the pruned-mesh dimension.

Each rule inspects a mesh, a degree distribution and the current smoothness
distribution ``r`` and returns a :class:`Certificate`.  A certified step
guarantees that if the quotient complex for ``r`` has no homology below the
top, neither does the complex for the reduced distribution ``s``.  Rules are
sufficient conditions only: a step that is not certified may still preserve
the property, which the direct homology computation will reveal.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import ceil
from typing import Iterable, Sequence

from .complexes import SmoothnessDistribution, _as_smoothness, quotient_complex
from .mesh import (
    DegreeDistribution,
    Mesh,
    MeshError,
    Segment,
    _along,
    detect_segments,
    induced_spaces,
    is_connected,
    make_segment,
    slopes_at_vertex,
    transversal_edges,
    validate,
)
from .polyspace import TOTAL, LinearForm, PolySpaceSpec, ShiftedPoint, ideal_sum_space, univ_sum_dim

log = logging.getLogger(__name__)

CERTIFIED = "certified"
NOT_APPLICABLE = "not-applicable"


@dataclass
class Certificate:
    rule: str
    cells: list
    verdict: str
    evidence: dict = field(default_factory=dict)
    reason: str = ""
    warnings: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "cells": self.cells,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "reason": self.reason,
            "warnings": self.warnings,
        }


def _na(rule, cells, reason, **evidence) -> Certificate:
    return Certificate(rule, cells, NOT_APPLICABLE, evidence, reason)


# ---------------------------------------------------------------------------
# vertex regularity


def omega_bound(r: int, n: int) -> int:
    """Degree from which every polynomial vanishing to order ``r+1`` along
    ``n`` distinct lines through a point lies in the vertex ideal."""
    if n < 2:
        raise ValueError("an interior vertex needs at least two slopes")
    if r == -1:
        return 0
    t = min(r + 2, n)
    return r + ceil((r + 1) / (t - 1))


def saturation_degree(forms: Sequence[LinearForm], r: int, max_degree: int | None = None) -> int:
    """Smallest ``d`` whose degree-``d`` slice of the ideal generated by
    ``form**(r+1)`` (homogeneous forms) contains every monomial of degree ``d``.

    Found by rank computations; once a slice is full all higher slices are.
    """
    forms = [LinearForm(f.a, f.b, 0) for f in forms]
    if max_degree is None:
        max_degree = 2 * r + 2
    prev = 0
    for d in range(max_degree + 1):
        space = PolySpaceSpec(TOTAL, d)
        cur = ideal_sum_space(space, [(space, f, r + 1) for f in forms]).rank
        if cur - prev == d + 1:
            return d
        prev = cur
    raise ValueError(f"ideal not saturated up to degree {max_degree}")


def omega(mesh: Mesh, deg: DegreeDistribution, r_value: int, v: int) -> int:
    if not mesh.is_interior_vertex(v):
        raise MeshError(f"vertex {v} is not interior")
    if deg.kind != TOTAL:
        raise MeshError("vertex regularity bounds need total-degree spaces")
    return omega_bound(r_value, slopes_at_vertex(mesh, v))


# ---------------------------------------------------------------------------
# edge rules


def _neighbour_rule(name: str, mesh: Mesh, deg, r, e: int) -> Certificate:
    # a fully relaxed interior edge of at least the same degree at an endpoint
    # absorbs every new ideal element there
    r = _as_smoothness(mesh, r)
    edge = mesh.edges[e]
    cells = [list(edge.vertices)]
    if not edge.interior:
        return _na(name, cells, "edge is not interior")
    spaces = induced_spaces(mesh, deg)
    m = spaces.edges[e].m
    for v in edge.vertices:
        for other in mesh.vertex_edges[v]:
            o = mesh.edges[other]
            if other == e or not o.interior or r[other] != -1:
                continue
            if spaces.edges[other].contains(spaces.edges[e]):
                return Certificate(
                    name, cells, CERTIFIED,
                    {"vertex": v, "relaxed_edge": list(o.vertices), "m_edge": m, "m_relaxed": spaces.edges[other].m},
                )
    return _na(name, cells, "no relaxed interior edge of sufficient degree at either endpoint", m_edge=m)


def tri_edge_rule(mesh: Mesh, deg: DegreeDistribution, r, e: int) -> Certificate:
    if not mesh.is_triangulation:
        return _na("tri_edge", [list(mesh.edges[e].vertices)], "mesh is not a triangulation")
    return _neighbour_rule("tri_edge", mesh, deg, r, e)


def tmesh_edge_rule(mesh: Mesh, deg: DegreeDistribution, r, e: int) -> Certificate:
    if not mesh.is_tmesh:
        return _na("tmesh_edge", [list(mesh.edges[e].vertices)], "mesh is not a T-mesh")
    return _neighbour_rule("tmesh_edge", mesh, deg, r, e)


def _regular_vertices(mesh: Mesh, deg: DegreeDistribution, r: SmoothnessDistribution, verts: Iterable[int]):
    """Common ``(m, r)`` at ``verts`` or a reason why the bounds do not apply."""
    if deg.kind != TOTAL:
        return None, "vertex bounds need total-degree spaces"
    ms, rs = set(), set()
    for v in verts:
        if not mesh.is_interior_vertex(v):
            return None, f"vertex {v} is not interior"
        ms.update(deg.degrees[f] for f in mesh.vertex_faces[v])
        rs.update(r[e] for e in mesh.vertex_edges[v])
    if len(ms) != 1:
        return None, "faces around the vertices have different degrees"
    if len(rs) != 1:
        return None, "edges around the vertices have different smoothness"
    rv = rs.pop()
    if rv < 0:
        return None, "edges around the vertices are already relaxed"
    return (ms.pop(), rv), ""


def polygonal_edge_rule(mesh: Mesh, deg: DegreeDistribution, r, e: int) -> Certificate:
    r = _as_smoothness(mesh, r)
    edge = mesh.edges[e]
    cells = [list(edge.vertices)]
    if not edge.interior:
        return _na("polygonal_edge", cells, "edge is not interior")
    got, why = _regular_vertices(mesh, deg, r, edge.vertices)
    if got is None:
        return _na("polygonal_edge", cells, why)
    m, rv = got
    om = [omega_bound(rv, slopes_at_vertex(mesh, v)) for v in edge.vertices]
    evidence = {"m": m, "r": rv, "omega": om, "bound": om[0] + om[1] - 2}
    if m > om[0] + om[1] - 2:
        return Certificate("polygonal_edge", cells, CERTIFIED, evidence)
    return _na("polygonal_edge", cells, "m <= omega_1 + omega_2 - 2", **evidence)


# ---------------------------------------------------------------------------
# face rules


def face_removal_cokernel_dim(mesh: Mesh, deg: DegreeDistribution, r, f: int) -> int:
    """Codimension in ``P_m`` of the sum of the vertex ideals of face ``f``."""
    r = _as_smoothness(mesh, r)
    if deg.kind != TOTAL:
        raise MeshError("face removal needs total-degree spaces")
    verts = mesh.faces[f]
    for v in verts:
        if not mesh.is_interior_vertex(v):
            raise MeshError(f"vertex {v} of face {f} is not interior")
    spaces = induced_spaces(mesh, deg)
    target = spaces.faces[f]
    for v in verts:
        target = target if target.contains(spaces.vertices[v]) else spaces.vertices[v]
    gens = [
        (spaces.edges[e], mesh.edges[e].line, r[e] + 1)
        for v in verts for e in mesh.vertex_edges[v]
    ]
    return target.dim - ideal_sum_space(target, gens).rank


def _face_preconditions(name, mesh, deg, r, f):
    cells = [f]
    got, why = _regular_vertices(mesh, deg, r, mesh.faces[f])
    if got is None:
        return None, _na(name, cells, why)
    return got, None


def _exact_route(cert: Certificate, mesh, deg, r, f):
    coker = face_removal_cokernel_dim(mesh, deg, r, f)
    cert.evidence["cokernel_dim"] = coker
    if coker == 0:
        cert.verdict = CERTIFIED
        cert.evidence["route"] = "cokernel"
        cert.reason = ""
    return cert


def triangle_removal_rule(mesh: Mesh, deg: DegreeDistribution, r, f: int) -> Certificate:
    r = _as_smoothness(mesh, r)
    if not mesh.is_triangulation:
        return _na("triangle_removal", [f], "mesh is not a triangulation")
    got, cert = _face_preconditions("triangle_removal", mesh, deg, r, f)
    if got is None:
        return cert
    m, rv = got
    om = [omega_bound(rv, slopes_at_vertex(mesh, v)) for v in mesh.faces[f]]
    evidence = {"m": m, "r": rv, "omega": om, "bound": f"{sum(om) - 3}/2"}
    if 2 * m > sum(om) - 3:
        evidence["route"] = "omega"
        return Certificate("triangle_removal", [f], CERTIFIED, evidence)
    cert = _na("triangle_removal", [f], "m <= (omega_1 + omega_2 + omega_3 - 3)/2", **evidence)
    return _exact_route(cert, mesh, deg, r, f)


def polygonal_face_rule(mesh: Mesh, deg: DegreeDistribution, r, f: int) -> Certificate:
    r = _as_smoothness(mesh, r)
    if not mesh.is_convex_face(f):
        log.warning("face %d is not convex; the polygonal face rule assumes convex faces", f)
        cert = _na("polygonal_face", [f], "face is not convex")
        cert.warnings.append("non-convex face")
        return cert
    got, cert = _face_preconditions("polygonal_face", mesh, deg, r, f)
    if got is None:
        return cert
    m, rv = got
    loop = mesh.faces[f]
    om = [omega_bound(rv, slopes_at_vertex(mesh, v)) for v in loop]
    evidence = {"m": m, "r": rv, "omega": om}
    if m > 3 * rv:
        evidence["route"] = "m>3r"
        return Certificate("polygonal_face", [f], CERTIFIED, evidence)
    for k in range(len(loop)):
        a, b = om[k], om[(k + 1) % len(loop)]
        if m > a + b - 2:
            evidence["route"] = "consecutive-pair"
            evidence["pair"] = [loop[k], loop[(k + 1) % len(loop)]]
            return Certificate("polygonal_face", [f], CERTIFIED, evidence)
    cert = _na("polygonal_face", [f], "m <= 3r and no consecutive vertex pair satisfies the bound", **evidence)
    return _exact_route(cert, mesh, deg, r, f)


# ---------------------------------------------------------------------------
# T-mesh segments


def segment_weight(mesh: Mesh, deg: DegreeDistribution, s, seg: Segment) -> int:
    s = _as_smoothness(mesh, s)
    points = [
        ShiftedPoint(t.a, s[t.edge] + 1, max(0, seg.m - t.m))
        for t in transversal_edges(mesh, deg, seg)
    ]
    return univ_sum_dim(seg.m, points)


def _extensions(mesh: Mesh, deg: DegreeDistribution, seg: Segment) -> list[int]:
    """Interior edges extending ``seg`` by one collinear edge of the same degree."""
    spaces = induced_spaces(mesh, deg)
    first, last = mesh.edges[seg.edges[0]], mesh.edges[seg.edges[-1]]
    lo = min(first.vertices, key=lambda v: _along(mesh, seg.axis, v))
    hi = max(last.vertices, key=lambda v: _along(mesh, seg.axis, v))
    line = first.line
    out = []
    for v in (lo, hi):
        for e in mesh.vertex_edges[v]:
            edge = mesh.edges[e]
            if e in seg.edges or not edge.interior or edge.line != line:
                continue
            if spaces.edges[e].m == seg.m:
                out.append(e)
    return out


def tmesh_segment_rule(mesh: Mesh, deg: DegreeDistribution, r, seg: Segment, new_r: int) -> Certificate:
    r = _as_smoothness(mesh, r)
    cells = [list(mesh.edges[e].vertices) for e in seg.edges]
    if not mesh.is_tmesh:
        return _na("tmesh_segment", cells, "mesh is not a T-mesh")
    for e in seg.edges:
        if new_r > r[e]:
            raise ValueError(f"cannot raise smoothness on edge {mesh.edges[e].vertices} from {r[e]} to {new_r}")
    for e in _extensions(mesh, deg, seg):
        if r[e] <= new_r:
            return Certificate(
                "tmesh_segment", cells, CERTIFIED,
                {"route": "enclosing-segment", "extension": list(mesh.edges[e].vertices), "new_r": new_r},
            )
    s = r.replace({e: new_r for e in seg.edges})
    w = segment_weight(mesh, deg, s, seg)
    evidence = {"route": "weight", "weight": w, "m": seg.m, "new_r": new_r}
    if w == seg.m + 1:
        return Certificate("tmesh_segment", cells, CERTIFIED, evidence)
    return _na("tmesh_segment", cells, "segment weight below m + 1", **evidence)


# ---------------------------------------------------------------------------
# reduction pipeline


@dataclass(frozen=True)
class ReductionStep:
    """One requested reduction.

    ``kind`` is ``"edge"`` (target: vertex pair), ``"segment"`` (target:
    ``(axis, coord)`` for every maximal segment on that line, or a tuple of
    edge ids) or ``"face"`` (target: face index; all its edges go to -1).
    """

    kind: str
    target: object
    s: int = -1
    rule: str | None = None


@dataclass
class ReductionResult:
    s: SmoothnessDistribution
    certificates: list

    @property
    def certified(self) -> bool:
        return all(c.certified for c in self.certificates)

    @property
    def verdict(self) -> str:
        return CERTIFIED if self.certified else "uncertified"


EDGE_RULES = {
    "tri_edge": tri_edge_rule,
    "tmesh_edge": tmesh_edge_rule,
    "polygonal_edge": polygonal_edge_rule,
}
FACE_RULES = {
    "triangle_removal": triangle_removal_rule,
    "polygonal_face": polygonal_face_rule,
}


def _first_certified(certs: list[Certificate]) -> Certificate:
    for c in certs:
        if c.certified:
            return c
    return certs[0]


def _edge_certificate(mesh, deg, r, e, rule):
    if rule is not None:
        try:
            return EDGE_RULES[rule](mesh, deg, r, e)
        except KeyError:
            raise ValueError(f"unknown edge rule {rule!r}") from None
    if mesh.is_tmesh:
        return tmesh_edge_rule(mesh, deg, r, e)
    if mesh.is_triangulation:
        return _first_certified([tri_edge_rule(mesh, deg, r, e), polygonal_edge_rule(mesh, deg, r, e)])
    return polygonal_edge_rule(mesh, deg, r, e)


def _face_certificate(mesh, deg, r, f, rule):
    if rule is not None:
        try:
            return FACE_RULES[rule](mesh, deg, r, f)
        except KeyError:
            raise ValueError(f"unknown face rule {rule!r}") from None
    if mesh.is_triangulation:
        return triangle_removal_rule(mesh, deg, r, f)
    return polygonal_face_rule(mesh, deg, r, f)


def _segments_for(mesh, deg, target) -> list[Segment]:
    if isinstance(target, Segment):
        return [target]
    if len(target) == 2 and isinstance(target[0], str):
        axis, coord = target
        found = [seg for seg in detect_segments(mesh, deg) if seg.axis == axis and seg.coord == coord]
        if not found:
            raise ValueError(f"no segment on the {axis} line at {coord}")
        return found
    return [make_segment(mesh, deg, target)]


def _lower(mesh: Mesh, current: SmoothnessDistribution, edges, s: int) -> SmoothnessDistribution:
    for e in edges:
        if s > current[e]:
            raise ValueError(
                f"cannot raise smoothness on edge {mesh.edges[e].vertices} from {current[e]} to {s}"
            )
        if not mesh.edges[e].interior:
            raise ValueError(f"edge {mesh.edges[e].vertices} is on the boundary")
    return current.replace({e: s for e in edges})


def reduce(mesh: Mesh, deg: DegreeDistribution, r, steps: Sequence[ReductionStep]) -> ReductionResult:
    """Apply ``steps`` in order, certifying each against the state before it.

    Uncertified steps are still applied; the result is then flagged.
    """
    current = _as_smoothness(mesh, r)
    certs = []
    for step in steps:
        if step.kind == "edge":
            e = mesh.edge_id(*step.target)
            _lower(mesh, current, [e], step.s)
            certs.append(_edge_certificate(mesh, deg, current, e, step.rule))
            current = _lower(mesh, current, [e], step.s)
        elif step.kind == "segment":
            for seg in _segments_for(mesh, deg, step.target):
                _lower(mesh, current, seg.edges, step.s)
                certs.append(tmesh_segment_rule(mesh, deg, current, seg, step.s))
                current = _lower(mesh, current, seg.edges, step.s)
        elif step.kind == "face":
            f = int(step.target)
            if step.s != -1:
                raise ValueError("face steps relax every edge of the face to -1")
            edges = [e for e, _ in mesh.face_edges[f] if mesh.edges[e].interior]
            _lower(mesh, current, edges, -1)
            certs.append(_face_certificate(mesh, deg, current, f, step.rule))
            current = _lower(mesh, current, edges, -1)
        else:
            raise ValueError(f"unknown reduction kind {step.kind!r}")
    return ReductionResult(current, certs)


# ---------------------------------------------------------------------------
# pruning


@dataclass(frozen=True)
class PruneResult:
    mesh: Mesh
    deg: DegreeDistribution
    r: SmoothnessDistribution
    removed: tuple
    vertex_map: dict


def relaxed_faces(mesh: Mesh, r) -> list[int]:
    """Faces all of whose edges carry smoothness -1."""
    r = _as_smoothness(mesh, r)
    return [f for f in range(len(mesh.faces)) if all(r[e] == -1 for e, _ in mesh.face_edges[f])]


def prune(mesh: Mesh, deg: DegreeDistribution, r, faces: Iterable[int] | None = None) -> PruneResult:
    """Delete relaxed faces and restrict the distributions to what remains."""
    r = _as_smoothness(mesh, r)
    eligible = set(relaxed_faces(mesh, r))
    removed = tuple(sorted(eligible if faces is None else set(faces)))
    bad = [f for f in removed if f not in eligible]
    if bad:
        raise ValueError(f"faces {bad} have edges with smoothness other than -1")
    if len(removed) == len(mesh.faces):
        raise MeshError("pruning would remove every face")
    pruned, vmap, fmap = mesh.without_faces(removed)
    if not is_connected(pruned):
        raise MeshError("pruning disconnects the domain")
    problems = validate(pruned)
    if problems:
        raise MeshError("pruned mesh is invalid: " + "; ".join(p.message for p in problems))
    new_deg = deg.restrict([f for f in range(len(mesh.faces)) if f in fmap])
    inv = {new: old for old, new in vmap.items()}
    values = []
    for e in pruned.edges:
        if not e.interior:
            values.append(-1)
        else:
            a, b = e.vertices
            values.append(r[mesh.edge_id(inv[a], inv[b])])
    return PruneResult(pruned, new_deg, SmoothnessDistribution(tuple(values)), removed, vmap)


def pruned_dimension(mesh: Mesh, deg: DegreeDistribution, r, faces: Iterable[int] | None = None) -> int:
    """Spline dimension on the mesh with relaxed ``faces`` removed.

    Equals the Euler characteristic of the full quotient complex minus the
    dimensions of the removed face spaces, provided that complex has no
    homology below the top.  Removed faces carry no smoothness conditions,
    so the full spline space is the pruned one plus their polynomial spaces.
    """
    r = _as_smoothness(mesh, r)
    result = prune(mesh, deg, r, faces)
    Q = quotient_complex(mesh, deg, r)
    _, h1, h0 = Q.homology()
    if h1 or h0:
        raise ValueError("formula inapplicable; use kernel oracle")
    spaces = induced_spaces(mesh, deg)
    return Q.euler_characteristic() - sum(spaces.faces[f].dim for f in result.removed)
