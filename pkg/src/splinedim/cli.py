"""Command-line interface: ``splinedim SUBCOMMAND FILE``.

Every subcommand prints one JSON document on standard output.  Exit status
is 0 on success, 1 when the mesh file is malformed or invalid (or a
requested computation does not apply), and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .complexes import build_complexes, quotient_complex
from .exactla import as_fraction, kernel_dim
from .mesh import HORIZONTAL, VERTICAL, MeshError
from .meshfile import MeshFileError, load, to_dict
from .rules import ReductionStep, prune, pruned_dimension, reduce, relaxed_faces

AXES = {"h": HORIZONTAL, "horizontal": HORIZONTAL, "v": VERTICAL, "vertical": VERTICAL}


class _Ordered(argparse.Action):
    """Collect reduction steps from several options in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        steps = getattr(namespace, "steps", None) or []
        try:
            steps.append(self.parse(values))
        except ValueError as exc:
            parser.error(f"{option_string} {values}: {exc}")
        namespace.steps = steps

    def parse(self, text):
        target, _, s = text.partition("=")
        s = int(s) if s else -1
        if self.dest == "edge":
            i, j = (int(t) for t in target.split(","))
            return ReductionStep("edge", (i, j), s)
        if self.dest == "segment":
            axis, _, coord = target.partition(":")
            if axis.lower() not in AXES:
                raise ValueError("axis must be horizontal or vertical")
            return ReductionStep("segment", (AXES[axis.lower()], as_fraction(coord)), s)
        return ReductionStep("face", int(target), s)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(doc: dict, out=None):
    out = out or sys.stdout
    out.write(json.dumps(doc, indent=2, sort_keys=True, default=_json_default))
    out.write("\n")


def report(mf) -> dict:
    """Dimensions, homology and kernel dimension of the quotient complex."""
    Q = quotient_complex(mf.mesh, mf.deg, mf.r)
    h2, h1, h0 = Q.homology()
    kernel = kernel_dim(Q.d2)
    chi = Q.euler_characteristic()
    if kernel != chi + h1 - h0:
        raise RuntimeError("kernel dimension disagrees with chi + h1 - h0")
    faces = relaxed_faces(mf.mesh, mf.r)
    pruned = None
    if faces:
        try:
            pruned = pruned_dimension(mf.mesh, mf.deg, mf.r, faces)
        except (ValueError, MeshError):
            pruned = None
    return {
        "dims": {"2": Q.dims[0], "1": Q.dims[1], "0": Q.dims[2]},
        "euler_characteristic": chi,
        "homology": {"h2": h2, "h1": h1, "h0": h0},
        "kernel_dimension": kernel,
        "lower_acyclic": h1 == 0 and h0 == 0,
        "certificates": [],
        "pruned_faces": faces,
        "pruned_dimension": pruned,
    }


def cmd_validate(args, mf):
    return {"ok": True, "violations": []}


def cmd_dim(args, mf):
    return report(mf)


def cmd_homology(args, mf):
    out = {}
    for X in build_complexes(mf.mesh, mf.deg, mf.r):
        h2, h1, h0 = X.homology()
        out[X.tag] = {
            "dims": {"2": X.dims[0], "1": X.dims[1], "0": X.dims[2]},
            "homology": {"h2": h2, "h1": h1, "h0": h0},
            "euler_characteristic": X.euler_characteristic(),
        }
    return out


def cmd_oracle(args, mf):
    return {"kernel_dimension": kernel_dim(quotient_complex(mf.mesh, mf.deg, mf.r).d2)}


def cmd_reduce(args, mf):
    result = reduce(mf.mesh, mf.deg, mf.r, args.steps or [])
    mesh_doc = to_dict(mf.mesh, mf.deg, result.s)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            emit(mesh_doc, fh)
    return {
        "verdict": result.verdict,
        "certificates": [c.as_dict() for c in result.certificates],
        "mesh": mesh_doc,
    }


def cmd_prune(args, mf):
    faces = args.faces if args.faces else None
    result = prune(mf.mesh, mf.deg, mf.r, faces)
    dim = pruned_dimension(mf.mesh, mf.deg, mf.r, result.removed)
    mesh_doc = to_dict(result.mesh, result.deg, result.r)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            emit(mesh_doc, fh)
    return {"pruned_faces": list(result.removed), "pruned_dimension": dim, "mesh": mesh_doc}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="splinedim", description="Exact dimensions of mixed-smoothness spline spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", help="mesh file (JSON)")
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check the mesh axioms")
    add("dim", cmd_dim, "full dimension report")
    add("homology", cmd_homology, "homology of the three complexes")
    add("oracle", cmd_oracle, "spline dimension from the kernel of the top map")
    sp = add("reduce", cmd_reduce, "certify and apply smoothness reductions in order")
    sp.add_argument("--edge", action=_Ordered, metavar="I,J=S", help="lower edge (i, j) to S (default -1)")
    sp.add_argument("--segment", action=_Ordered, metavar="AXIS:COORD=S",
                    help="lower every maximal segment on a horizontal or vertical line")
    sp.add_argument("--face", action=_Ordered, metavar="F", help="relax every edge of face F to -1")
    sp.add_argument("-o", "--output", help="also write the reduced mesh file here")
    sp = add("prune", cmd_prune, "remove relaxed faces and report the pruned dimension")
    sp.add_argument("--faces", type=int, nargs="+", help="faces to remove (default: every relaxed face)")
    sp.add_argument("-o", "--output", help="also write the pruned mesh file here")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        mf = load(args.file)
    except OSError as exc:
        emit({"ok": False, "violations": [{"code": "io", "message": str(exc), "cells": []}]})
        return 1
    except MeshFileError as exc:
        emit({"ok": False, "violations": [v.as_dict() for v in exc.violations]})
        return 1
    try:
        emit(args.func(args, mf))
    except (ValueError, MeshError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        emit({"ok": False, "error": msg})
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
