"""Command line interface: ``nonsep <command> ...``.

Exit codes: 0 success, 1 a check failed (the failing certificate is printed),
2 unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import math
import sys

from .. import geom2d, geom3d
from ..critical2d import critical_lattice, d21_details
from ..errors import GeometryError
from ..lattice import is_nonseparable
from ..nonsep3d import BALL_TRUE_VALUE, THEOREM_BOUND, d32_upper_bound
from .figure import emit_figure
from .io import InputError, dumps, lattice_from_json, load_body, read_json
from .suites import D21_BOUND, SUITES

MAX_3D_POLYTOPES = 20
_2D = (geom2d.Polygon2D, geom2d.SupportSampled2D, geom2d.Ellipse2D)


def _is_2d(body):
    return isinstance(body, _2D)


def _need_2d(body):
    if not _is_2d(body):
        raise InputError("this command needs a planar body")
    return body


def _need_3d(body):
    if _is_2d(body):
        raise InputError("this command needs a body in ℝ³")
    return body


def _load_lattice(path):
    data = read_json(path)
    if isinstance(data, dict) and "lattice" in data and "basis" not in data:
        data = data["lattice"]
    return lattice_from_json(data)


def cmd_info(args):
    body = load_body(args.body)
    if _is_2d(body):
        area = geom2d.area(body)
        # the polar is taken about the origin, which must be interior
        inside = getattr(body, "origin_interior", True)
        polar = geom2d.area(geom2d.polar(body)) if inside else None
        out = {"dimension": 2, "area": area, "polarArea": polar,
               "santalo": area * polar if inside else None,
               "santaloBound": math.pi ** 2, "symmetric": body.symmetric}
    else:
        vol = body.volume()
        inside = getattr(body, "origin_interior", True)
        pvol = body.polar().volume() if inside else None
        out = {"dimension": 3, "volume": vol, "polarVolume": pvol,
               "santalo": vol * pvol if inside else None,
               "santaloBound": (4 * math.pi / 3) ** 2, "symmetric": body.symmetric}
    print(dumps(out))
    return 0


def cmd_d21(args):
    body = _need_2d(load_body(args.body))
    res = d21_details(body)
    print(f"{res.value:.15g}")
    gap = D21_BOUND - res.value
    if abs(gap) <= args.tolerance:
        print("bound π√3/8 attained (ellipse)")
    else:
        print(f"below the bound π√3/8 by {gap:.6g}")
    if args.certificate:
        lat = res.star_critical
        print(dumps({"d21": res.value, "area": res.area, "lattice": lat.to_dict(),
                     "polarCritical": res.polar_certificate.to_dict()}))
    if args.svg:
        emit_figure(body, res.star_critical, args.svg, caption=f"d21 = {res.value:.10g}")
    return 0 if res.value <= D21_BOUND + args.tolerance else 1


def cmd_critical(args):
    body = _need_2d(load_body(args.body))
    cert = critical_lattice(body, resolution=args.resolution)
    print(dumps({"lattice": cert.lattice.to_dict(), **cert.to_dict()}))
    return 0


def cmd_nonsep_check(args):
    body = load_body(args.body)
    lat = _load_lattice(args.lattice)
    dim = 2 if _is_2d(body) else 3
    if lat.dim != dim:
        raise InputError(f"lattice dimension {lat.dim} does not match the body")
    cert = is_nonseparable(body, lat)
    print(dumps(cert.to_dict()))
    return 0 if cert.verdict else 1


def cmd_d32_bound(args):
    body = _need_3d(load_body(args.body))
    res = d32_upper_bound(body, grid=geom3d.SphereGrid.hemisphere(args.nodes))
    out = res.to_dict()
    out["ballValue"] = BALL_TRUE_VALUE
    print(dumps(out))
    return 0 if res.bound <= THEOREM_BOUND * (1 + args.tolerance) and res.certificate.admissible_2k else 1


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = []
    for name in names:
        count = min(args.count, MAX_3D_POLYTOPES) if name == "3d" else args.count
        cases = SUITES[name](args.seed, count)
        bad = [c for c in cases if not c.passed]
        failed += bad
        print(f"{name}: {len(cases) - len(bad)}/{len(cases)} passed")
    for c in failed:
        print(dumps(c.to_dict()))
    return 1 if failed else 0


def cmd_figure(args):
    body = _need_2d(load_body(args.body))
    lat = _load_lattice(args.lattice)
    if lat.dim != 2:
        raise InputError("figures need a planar lattice")
    emit_figure(body, lat, args.svg)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="nonsep", description="Non-separable lattice arrangements of convex bodies.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", help="area/volume, polar size and Santaló product")
    s.add_argument("body")
    s.set_defaults(fn=cmd_info)

    s = sub.add_parser("d21", help="minimal density of a non-separable lattice arrangement")
    s.add_argument("body")
    s.add_argument("--certificate", action="store_true", help="print the optimal lattice and critical data")
    s.add_argument("--svg", help="write a picture of the optimal arrangement")
    s.add_argument("--tolerance", type=float, default=1e-6, help="slack for the π√3/8 comparison")
    s.set_defaults(fn=cmd_d21)

    s = sub.add_parser("critical", help="critical lattice of a symmetric planar body")
    s.add_argument("body")
    s.add_argument("--resolution", type=int, default=2048)
    s.set_defaults(fn=cmd_critical)

    s = sub.add_parser("nonsep-check", help="decide non-separability of body + lattice")
    s.add_argument("body")
    s.add_argument("lattice")
    s.set_defaults(fn=cmd_nonsep_check)

    s = sub.add_parser("d32-bound", help="layered-packing upper bound on d32")
    s.add_argument("body")
    s.add_argument("--nodes", type=int, default=1281, help="hemisphere directions")
    s.add_argument("--tolerance", type=float, default=1e-3, help="relative slack for π/(4√3)")
    s.set_defaults(fn=cmd_d32_bound)

    s = sub.add_parser("verify", help="run a seeded verification suite")
    s.add_argument("--suite", choices=["2d", "3d", "calculus", "all"], default="all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=50,
                   help=f"random bodies per family (3d suite: at most {MAX_3D_POLYTOPES} polytopes)")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("figure", help="SVG of the translates of a body over a lattice")
    s.add_argument("body")
    s.add_argument("--lattice", required=True)
    s.add_argument("--svg", required=True)
    s.set_defaults(fn=cmd_figure)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
