"""JSON mesh files.

Example::

    {
      "version": 1,
      "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
      "faces": [[0, 1, 3], [1, 2, 3]],
      "degree": {"kind": "total", "default": 2, "overrides": {}},
      "smoothness": {"default": 1, "overrides": {"1,3": 0}}
    }

Coordinates are integers or ``"p/q"`` strings.  Edges are implicit in the
face loops; smoothness overrides are keyed by the sorted vertex pair
``"i,j"``.  Boundary edges always have smoothness -1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .complexes import SmoothnessDistribution
from .exactla import as_fraction
from .mesh import DegreeDistribution, Mesh, MeshError, Violation, validate
from .polyspace import BIDEGREE, TOTAL

FORMAT_VERSION = 1


class MeshFileError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


@dataclass(frozen=True)
class MeshFile:
    mesh: Mesh
    deg: DegreeDistribution
    r: SmoothnessDistribution


def _err(code, message, *cells):
    return MeshFileError([Violation(code, message, cells)])


def _int(value, what) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _err("format", f"{what} must be an integer, got {value!r}")
    return value


def parse(data: dict, check: bool = True) -> MeshFile:
    """Build a :class:`MeshFile` from decoded JSON.

    Raises :class:`MeshFileError` carrying every violation found.
    """
    if not isinstance(data, dict):
        raise _err("format", "mesh file must be a JSON object")
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise _err("format", f"unsupported version {version!r}")
    try:
        vertices = [(as_fraction(x), as_fraction(y)) for x, y in data["vertices"]]
        faces = [[_int(v, "vertex index") for v in loop] for loop in data["faces"]]
    except KeyError as exc:
        raise _err("format", f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, MeshFileError):
            raise
        raise _err("format", f"malformed vertices or faces: {exc}") from None
    try:
        mesh = Mesh(vertices, faces)
    except (MeshError, ValueError) as exc:
        raise _err("format", str(exc)) from None
    if check:
        problems = validate(mesh)
        if problems:
            raise MeshFileError(problems)

    degree = data.get("degree", {})
    kind = degree.get("kind", TOTAL)
    if kind not in (TOTAL, BIDEGREE):
        raise _err("format", f"degree kind must be {TOTAL!r} or {BIDEGREE!r}")
    default_m = _int(degree.get("default", 0), "default degree")
    ms = [default_m] * len(faces)
    for key, m in degree.get("overrides", {}).items():
        f = int(key)
        if not 0 <= f < len(faces):
            raise _err("format", f"degree override for unknown face {key}")
        ms[f] = _int(m, "face degree")
    try:
        deg = DegreeDistribution(kind, tuple(ms))
    except ValueError as exc:
        raise _err("format", str(exc)) from None

    smooth = data.get("smoothness", {})
    default_r = _int(smooth.get("default", -1), "default smoothness")
    overrides = {}
    for key, r in smooth.get("overrides", {}).items():
        try:
            i, j = (int(t) for t in key.split(","))
        except ValueError:
            raise _err("format", f"smoothness key {key!r} must look like 'i,j'") from None
        if not mesh.has_edge(i, j):
            raise _err("format", f"smoothness override for unknown edge {key}", i, j)
        overrides[(i, j)] = _int(r, "edge smoothness")
    try:
        r = SmoothnessDistribution.from_pairs(mesh, default_r, overrides)
    except ValueError as exc:
        raise _err("boundary-smoothness", str(exc)) from None
    return MeshFile(mesh, deg, r)


def loads(text: str, check: bool = True) -> MeshFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _err("format", f"invalid JSON: {exc}") from None
    return parse(data, check)


def load(path, check: bool = True) -> MeshFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), check)


def _coord(v: Fraction):
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _most_common(values, fallback):
    if not values:
        return fallback
    counts = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return max(sorted(counts), key=lambda v: counts[v])


def to_dict(mesh: Mesh, deg: DegreeDistribution, r: SmoothnessDistribution) -> dict:
    """Canonical JSON form; vertex and face order are kept as given."""
    default_m = _most_common(deg.degrees, 0)
    interior = [e for e in mesh.edges if e.interior]
    default_r = _most_common([r[e.id] for e in interior], -1)
    return {
        "version": FORMAT_VERSION,
        "vertices": [[_coord(x), _coord(y)] for x, y in mesh.vertices],
        "faces": [list(loop) for loop in mesh.faces],
        "degree": {
            "kind": deg.kind,
            "default": default_m,
            "overrides": {str(f): m for f, m in enumerate(deg.degrees) if m != default_m},
        },
        "smoothness": {
            "default": default_r,
            "overrides": {f"{e.vertices[0]},{e.vertices[1]}": r[e.id] for e in interior if r[e.id] != default_r},
        },
    }


def dumps(mesh: Mesh, deg: DegreeDistribution, r: SmoothnessDistribution) -> str:
    return json.dumps(to_dict(mesh, deg, r), indent=2, sort_keys=True)
