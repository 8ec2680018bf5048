"""Fixture meshes and random mesh generators shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
from scipy.spatial import Delaunay

from splinedim.complexes import SmoothnessDistribution
from splinedim.mesh import DegreeDistribution, Mesh, signed_area, validate


def grid(n: int) -> Mesh:
    """``n x n`` unit squares on ``[0, n]^2``; vertex ``(i, j)`` has index ``j*(n+1)+i``."""
    V = [(i, j) for j in range(n + 1) for i in range(n + 1)]
    F = [
        [j * (n + 1) + i, j * (n + 1) + i + 1, (j + 1) * (n + 1) + i + 1, (j + 1) * (n + 1) + i]
        for j in range(n) for i in range(n)
    ]
    return Mesh(V, F)


def fix_a() -> Mesh:
    """Unit square split by the diagonal (1,0)-(0,1)."""
    return Mesh([(0, 0), (1, 0), (1, 1), (0, 1)], [[0, 1, 3], [1, 2, 3]])


def fix_b() -> Mesh:
    return grid(2)


def fix_c() -> Mesh:
    return grid(3)


def fix_d() -> Mesh:
    """[0,2]^2 cut by both diagonals through (1,1) (vertex 4)."""
    return Mesh([(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)], [[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]])


FIX_E_INNER_FACE = 6


def fix_e(inner=((3, 2), (5, 2), (4, 4))) -> Mesh:
    """Triangle (0,0),(8,0),(4,7) around an inner triangle joined corner to corner."""
    return Mesh(
        [(0, 0), (8, 0), (4, 7), *inner],
        [[0, 1, 4], [0, 4, 3], [1, 2, 5], [1, 5, 4], [2, 0, 3], [2, 3, 5], [3, 4, 5]],
    )


def annulus() -> Mesh:
    """3x3 grid with the centre square removed."""
    mesh, _, _ = grid(3).without_faces([4])
    return mesh


def total(mesh: Mesh, m: int) -> DegreeDistribution:
    return DegreeDistribution.uniform("total", m, len(mesh.faces))


def bideg(mesh: Mesh, m: int) -> DegreeDistribution:
    return DegreeDistribution.uniform("bidegree", m, len(mesh.faces))


# ---------------------------------------------------------------------------
# random meshes


def random_triangulation(rng: random.Random, npoints: int = 7, box: int = 6, max_faces: int = 12) -> Mesh:
    """Delaunay triangulation of random integer points; retried until valid."""
    while True:
        pts = set()
        while len(pts) < npoints:
            pts.add((rng.randint(0, box), rng.randint(0, box)))
        pts = sorted(pts)
        try:
            tri = Delaunay(np.array(pts, dtype=float))
        except Exception:
            continue
        faces = []
        for simplex in tri.simplices:
            loop = [int(v) for v in simplex]
            area = signed_area([tuple(map(Fraction, pts[v])) for v in loop])
            if area == 0:
                break
            faces.append(loop if area > 0 else loop[::-1])
        else:
            used = sorted({v for f in faces for v in f})
            remap = {v: k for k, v in enumerate(used)}
            mesh = Mesh([pts[v] for v in used], [[remap[v] for v in f] for f in faces])
            if len(mesh.faces) <= max_faces and not validate(mesh):
                return mesh


def random_boxes(rng: random.Random, splits: int, size: int = 6) -> list:
    """Axis-aligned boxes from repeated random splits of ``[0, size]^2``."""
    boxes = [(0, 0, size, size)]
    for _ in range(splits):
        rng.shuffle(boxes)
        for k, (x0, y0, x1, y1) in enumerate(boxes):
            options = [("x", c) for c in range(x0 + 1, x1)] + [("y", c) for c in range(y0 + 1, y1)]
            if not options:
                continue
            axis, c = rng.choice(options)
            if axis == "x":
                new = [(x0, y0, c, y1), (c, y0, x1, y1)]
            else:
                new = [(x0, y0, x1, c), (x0, c, x1, y1)]
            boxes[k:k + 1] = new
            break
    return boxes


def mesh_from_boxes(boxes) -> Mesh:
    """T-mesh whose face loops include every box corner lying on their boundary."""
    corners = sorted({(x, y) for x0, y0, x1, y1 in boxes for x in (x0, x1) for y in (y0, y1)})
    index = {p: k for k, p in enumerate(corners)}
    faces = []
    for x0, y0, x1, y1 in boxes:
        bottom = sorted((p for p in corners if p[1] == y0 and x0 <= p[0] <= x1), key=lambda p: p[0])
        right = sorted((p for p in corners if p[0] == x1 and y0 < p[1] <= y1), key=lambda p: p[1])
        top = sorted((p for p in corners if p[1] == y1 and x0 <= p[0] < x1), key=lambda p: -p[0])
        left = sorted((p for p in corners if p[0] == x0 and y0 < p[1] < y1), key=lambda p: -p[1])
        faces.append([index[p] for p in bottom + right + top + left])
    return Mesh(corners, faces)


def random_tmesh(rng: random.Random, max_faces: int = 12) -> Mesh:
    return mesh_from_boxes(random_boxes(rng, rng.randint(2, max_faces - 1)))


def random_smoothness(rng: random.Random, mesh: Mesh, choices=(-1, 0, 1, 2)) -> SmoothnessDistribution:
    return SmoothnessDistribution(tuple(rng.choice(choices) if e.interior else -1 for e in mesh.edges))


def random_degrees(rng: random.Random, mesh: Mesh, kind: str, lo: int, hi: int) -> DegreeDistribution:
    return DegreeDistribution(kind, tuple(rng.randint(lo, hi) for _ in mesh.faces))


def direct_spline_dim(mesh: Mesh, deg: DegreeDistribution, r) -> int:
    """Spline dimension from the smoothness conditions themselves.

    Each face carries a polynomial with symbolic coefficients; across an
    interior edge with order ``k`` the difference and its normal derivatives
    up to order ``k`` must vanish identically along the edge's line.
    """
    import sympy

    x, y, t = sympy.symbols("x y t")
    unknowns, polys = [], []
    for f in range(len(mesh.faces)):
        spec = deg.spec(f)
        cs = sympy.symbols(f"c{f}_0:{spec.dim}")
        unknowns.extend(cs)
        polys.append(sum(c * x**i * y**j for c, (i, j) in zip(cs, spec.monomials)))
    equations = []
    for e in mesh.edges:
        if not e.interior or r[e.id] < 0:
            continue
        f, g = e.faces
        diff = polys[f] - polys[g]
        (x0, y0), (x1, y1) = (mesh.vertices[v] for v in e.vertices)
        a, b = e.line.a, e.line.b
        x0, y0, x1, y1, a, b = (sympy.Rational(v.numerator, v.denominator) for v in (x0, y0, x1, y1, a, b))
        along = {x: x0 + t * (x1 - x0), y: y0 + t * (y1 - y0)}
        for _ in range(r[e.id] + 1):
            expr = sympy.expand(diff.subs(along, simultaneous=True))
            equations.extend(sympy.Poly(expr, t).coeffs() if expr != 0 else [])
            diff = a * sympy.diff(diff, x) + b * sympy.diff(diff, y)
    if not equations:
        return len(unknowns)
    A, _ = sympy.linear_eq_to_matrix(equations, unknowns)
    return len(unknowns) - A.rank()
