"""Command line entry point: ``cliffsym <command> [options]``.

Rotation specs accepted by ``--rotation``:

* ``identity`` (dimension from ``--dim``, default 4)
* ``<plane>:<angle>`` for a coordinate plane such as ``xw:0.3927`` or ``xy:deg:30``
* ``so4:psi,phi,theta,a,b,c``: ``R0 Rxw(psi) Rzw(phi) Rxy(theta)`` where
  ``R0`` extends the 3-d rotation ``Rz(c) Ry(b) Rz(a)``
* 4, 9 or 16 comma or space separated matrix entries, row-major

Angles are radians unless prefixed with ``deg:``. Multiples of pi may be
written ``pi/8`` or ``3*pi/8``.
"""

from __future__ import annotations

import argparse
import re
import sys

import numpy as np

from . import __version__
from .clifford import project_torus, symmetry_lines, verify_symmetry
from .errors import DeterminantMinusOne, GeometryError
from .export import certificate_document, families_csv, mesh_obj, steiner_svg, to_json, write_text
from .inversive import SteinerPair, SymmetryLine, apollonius_circles, steiner_circles
from .linalg import RotationMatrix, elementary_rotation, identity, trivial_extension, validate_rotation
from .rotations import (
    EulerZYZ,
    decompose_so3,
    decompose_so4,
    elementary_factorization,
    plane_block_form,
    rot_xw,
    rot_xy,
    rot_zw,
)
from .stereographic import Line2

INPUT_TOL = 1e-6
AXES = {"x": 1, "y": 2, "z": 3, "w": 4}


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    t = text.strip().replace(" ", "")
    degrees = t.startswith("deg:")
    if degrees:
        t = t[4:]
    try:
        if "pi" in t:
            head, _, tail = t.partition("pi")
            head = head.rstrip("*")
            coef = {"": 1.0, "+": 1.0, "-": -1.0}.get(head)
            val = np.pi * (float(head) if coef is None else coef)
            if tail:
                if not tail.startswith("/"):
                    raise ValueError(tail)
                val /= float(tail[1:])
        else:
            val = float(t)
    except ValueError as exc:
        raise UsageError(f"cannot parse angle {text!r}") from exc
    return float(np.deg2rad(val)) if degrees else val


def parse_rotation(spec: str, dim: int = 4) -> RotationMatrix:
    s = spec.strip()
    if s == "identity":
        return identity(dim)
    if s.startswith("so4:"):
        parts = s[4:].split(",")
        if len(parts) != 6:
            raise UsageError("so4: needs six angles psi,phi,theta,a,b,c")
        psi, phi, theta, a, b, c = (parse_angle(p) for p in parts)
        r0 = trivial_extension(EulerZYZ(a, b, c).matrix(), 4, [1, 2, 3]).mat
        return validate_rotation(r0 @ rot_xw(psi) @ rot_zw(phi) @ rot_xy(theta))
    m = re.match(r"^([xyzw])([xyzw]):(.+)$", s)
    if m:
        k, j = AXES[m.group(1)], AXES[m.group(2)]
        n = max(dim, k, j)
        angle = parse_angle(m.group(3))
        if k > j:
            k, j, angle = j, k, -angle
        if k == j:
            raise UsageError(f"degenerate plane in {spec!r}")
        return elementary_rotation(n, k, j, angle)
    try:
        vals = [float(v) for v in re.split(r"[,\s]+", s) if v]
    except ValueError as exc:
        raise UsageError(f"unrecognized rotation spec {spec!r}") from exc
    n = {4: 2, 9: 3, 16: 4}.get(len(vals))
    if n is None:
        raise UsageError(f"explicit matrices need 4, 9 or 16 entries, got {len(vals)}")
    return validate_rotation(np.reshape(vals, (n, n)), tol=INPUT_TOL)


def parse_point(text: str) -> np.ndarray:
    try:
        vals = [float(v) for v in re.split(r"[,\s]+", text.strip()) if v]
    except ValueError as exc:
        raise UsageError(f"cannot parse point {text!r}") from exc
    if len(vals) != 2:
        raise UsageError(f"expected two coordinates, got {text!r}")
    return np.array(vals)


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment; dashes and underscores are equivalent."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (p.strip() for p in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


# ----------------------------------------------------------------------- commands


def _emit(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def cmd_decompose(args) -> int:
    rot = parse_rotation(args.rotation, args.dim)
    m = rot.mat
    report: dict = {"schema": 1, "dim": rot.dim, "matrix": m}
    if rot.dim == 3:
        e = decompose_so3(rot)
        report["euler_zyz"] = {"theta": e.theta, "phi": e.phi, "psi": e.psi}
        report["euler_residual"] = rot.max_abs_diff(e.matrix())
    elif rot.dim == 4:
        d = decompose_so4(rot)
        report["so4"] = {
            "psi": d.psi,
            "phi": d.phi,
            "theta": d.theta,
            "r0": d.r0.mat,
            "r0_block_deviation": d.block_deviation,
        }
        report["so4_residual"] = rot.max_abs_diff(d.matrix())
    f = elementary_factorization(rot)
    report["elementary_factors"] = [{"plane": [k, j], "angle": a} for k, j, a in f]
    report["elementary_residual"] = rot.max_abs_diff(f.matrix())
    b = plane_block_form(rot)
    report["block_form"] = {"basis": b.basis.mat, "fixed_dim": b.fixed_dim, "angles": list(b.angles)}
    report["block_form_residual"] = rot.max_abs_diff(b.reconstruct())
    _emit(to_json(report), args.out)
    return 0


def _four(args) -> RotationMatrix:
    rot = parse_rotation(args.rotation, 4)
    if rot.dim != 4:
        raise UsageError("this command needs a rotation of R^4")
    return rot


def cmd_torus_mesh(args) -> int:
    rot = _four(args)
    if not args.out:
        raise UsageError("torus-mesh needs --out")
    proj = project_torus(rot, args.n_alpha, args.n_beta)
    lines = symmetry_lines(rot) if args.with_lines else ()
    write_text(args.out, mesh_obj(proj, lines, args.center_span))
    return 0


def cmd_symmetry_report(args) -> int:
    rot = _four(args)
    lines = symmetry_lines(rot)
    if args.debug_rho0_offset:
        lines = [SymmetryLine(l.base, l.direction, l.rho0 + args.debug_rho0_offset) for l in lines]
    cert = verify_symmetry(rot, args.n_alpha, args.n_beta, args.n_centers, args.center_span, args.tol, lines)
    config = {
        "rotation": args.rotation,
        "n_alpha": args.n_alpha,
        "n_beta": args.n_beta,
        "n_centers": args.n_centers,
        "center_span": args.center_span,
        "tol": args.tol,
        "debug_rho0_offset": args.debug_rho0_offset,
    }
    _emit(to_json(certificate_document(cert, config, __version__)), args.out)
    print(f"{cert.verdict}: max residual {cert.max_residual:.3e} over {len(cert.rows)} spheres", file=sys.stderr)
    return 0 if cert.passed else 1


def cmd_steiner_figure(args) -> int:
    if not args.out:
        raise UsageError("steiner-figure needs --out")
    try:
        pair = SteinerPair(parse_point(args.a1), parse_point(args.a2))
    except GeometryError as exc:
        raise UsageError(str(exc)) from exc
    steiner = steiner_circles(pair, args.n_steiner)
    apollonius = apollonius_circles(pair, args.n_apollonius)
    centers = Line2(pair.midpoint, pair.perpendicular)
    write_text(args.out, steiner_svg(steiner, apollonius, centers))
    if args.csv:
        write_text(args.csv, families_csv(steiner, apollonius, pair.midpoint))
    return 0


# ------------------------------------------------------------------------ parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cliffsym", description="Rotations, inversions and the projected Clifford torus.")
    p.add_argument("--version", action="version", version=f"cliffsym {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, rotation=True):
        sp.add_argument("--config", help="flat key = value file; command-line flags win")
        if rotation:
            sp.add_argument("--rotation", default="identity", help="rotation spec (see module help)")

    def grid(sp):
        sp.add_argument("--n-alpha", type=int, default=64)
        sp.add_argument("--n-beta", type=int, default=64)
        sp.add_argument("--center-span", type=float, default=3.0)

    d = sub.add_parser("decompose", help="decompose a rotation and report residuals")
    common(d)
    d.add_argument("--dim", type=int, default=4, choices=(2, 3, 4))
    d.add_argument("--out", help="write JSON here instead of stdout")
    d.set_defaults(func=cmd_decompose)

    m = sub.add_parser("torus-mesh", help="OBJ mesh of the projected, rotated Clifford torus")
    common(m)
    grid(m)
    m.add_argument("--with-lines", action="store_true", help="append the lines of sphere centers")
    m.add_argument("--out", help="OBJ path")
    m.set_defaults(func=cmd_torus_mesh)

    s = sub.add_parser("symmetry-report", help="certify the inversion symmetries as JSON")
    common(s)
    grid(s)
    s.add_argument("--n-centers", type=int, default=11)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--debug-rho0-offset", type=float, default=0.0, help="perturb rho0 (negative control)")
    s.add_argument("--out", help="write JSON here instead of stdout")
    s.set_defaults(func=cmd_symmetry_report)

    f = sub.add_parser("steiner-figure", help="SVG and CSV of Steiner and Apollonius circles")
    common(f, rotation=False)
    f.add_argument("--a1", default="-1,0")
    f.add_argument("--a2", default="1,0")
    f.add_argument("--n-steiner", type=int, default=7)
    f.add_argument("--n-apollonius", type=int, default=8)
    f.add_argument("--out", help="SVG path")
    f.add_argument("--csv", help="CSV path")
    f.set_defaults(func=cmd_steiner_figure)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    config = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]  # the chosen subparser
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in config.items():
        action = known.get(key)
        if action is None or key in ("config", "func", "help"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if action.nargs == 0:
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = action.type(value) if action.type else value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except DeterminantMinusOne as exc:
        print(f"error: DeterminantMinusOne: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
