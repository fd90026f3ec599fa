"""File writers: JSON reports, OBJ meshes, SVG figures and CSV tables.

Every writer is deterministic. Floats go out with 17 significant digits and
field order is fixed, so the same input gives byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable

import numpy as np

from .clifford import ProjectedTorus, SymmetryCertificate
from .inversive import SymmetryLine
from .stereographic import Circle2, Line2

SCHEMA_VERSION = 1
VIEW = 5.0


def fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


# --------------------------------------------------------------------------- JSON


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, dict)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (pad + json.dumps(k) + ": " + _encode(v, indent, level + 1) for k, v in obj.items())
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj: Any, indent: int = 2) -> str:
    """JSON text with 17-digit floats; NaN and infinities become null."""
    return _encode(_plain(obj), indent, 0) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def line_record(line: SymmetryLine) -> dict:
    return {"base": line.base, "direction": line.direction, "rho0": line.rho0}


def certificate_document(cert: SymmetryCertificate, config: dict, version: str) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "software": {"name": "cliffsym", "version": version},
        "config": dict(sorted(config.items())),
        "samples": {
            "grid": list(cert.grid),
            "used": cert.n_samples,
            "excluded_near_pole": cert.excluded,
        },
        "tolerance": cert.tolerance,
        "lines": [line_record(l) for l in cert.lines],
        "rows": [
            {
                "line": row.line,
                "t": row.t,
                "center": list(row.center),
                "radius": row.radius,
                "max_residual": row.max_residual,
                "skipped_near_center": row.skipped,
            }
            for row in cert.rows
        ],
        "max_residual": cert.max_residual,
        "verdict": cert.verdict,
    }


# ---------------------------------------------------------------------------- OBJ


def mesh_obj(proj: ProjectedTorus, lines: Iterable[SymmetryLine] = (), line_span: float = 3.0) -> str:
    """Quad mesh on the (alpha, beta) grid, wrapping in both directions.

    Faces touching a vertex removed by the pole guard are dropped. Each line
    is appended as two extra vertices joined by an ``l`` record.
    """
    na, nb = proj.shape
    index = np.full(na * nb, -1, dtype=int)
    index[proj.mask] = np.arange(1, proj.mask.sum() + 1)
    out = io.StringIO()
    out.write(f"# cliffsym torus mesh {na}x{nb}, {proj.excluded} vertices excluded\n")
    for p in proj.kept:
        out.write(f"v {fmt(p[0])} {fmt(p[1])} {fmt(p[2])}\n")
    for i in range(na):
        for j in range(nb):
            quad = [
                i * nb + j,
                ((i + 1) % na) * nb + j,
                ((i + 1) % na) * nb + (j + 1) % nb,
                i * nb + (j + 1) % nb,
            ]
            ids = index[quad]
            if np.all(ids > 0):
                out.write("f " + " ".join(str(k) for k in ids) + "\n")
    nv = int(proj.mask.sum())
    for line in lines:
        for s in (-line_span, line_span):
            p = line.point_at(s)
            out.write(f"v {fmt(p[0])} {fmt(p[1])} {fmt(p[2])}\n")
        out.write(f"l {nv + 1} {nv + 2}\n")
        nv += 2
    return out.getvalue()


# ---------------------------------------------------------------------------- SVG


def _svg_num(x: float) -> str:
    return format(float(x), ".10g")


def _svg_line(point, direction, style: str) -> str:
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    a = p - 4 * VIEW * d
    b = p + 4 * VIEW * d
    return (
        f'    <line x1="{_svg_num(a[0])}" y1="{_svg_num(a[1])}" '
        f'x2="{_svg_num(b[0])}" y2="{_svg_num(b[1])}" {style}/>\n'
    )


def steiner_svg(steiner: list, apollonius: list[Circle2], centers_line: Line2) -> str:
    """Both families plus the line of Steiner centers, clipped to [-5, 5]^2."""
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="600" height="600" '
        f'viewBox="{-VIEW:g} {-VIEW:g} {2 * VIEW:g} {2 * VIEW:g}">\n'
    )
    out.write(
        f'  <defs><clipPath id="view"><rect x="{-VIEW:g}" y="{-VIEW:g}" '
        f'width="{2 * VIEW:g}" height="{2 * VIEW:g}"/></clipPath></defs>\n'
    )
    out.write('  <g clip-path="url(#view)" transform="scale(1,-1)" fill="none" stroke-width="0.02">\n')
    for c in steiner:
        if isinstance(c, Line2):
            out.write(_svg_line(c.point, c.direction, 'stroke="#1f4e9c" class="steiner-line"'))
        else:
            out.write(
                f'    <circle cx="{_svg_num(c.center[0])}" cy="{_svg_num(c.center[1])}" '
                f'r="{_svg_num(c.radius)}" stroke="#1f4e9c" class="steiner"/>\n'
            )
    for c in apollonius:
        out.write(
            f'    <circle cx="{_svg_num(c.center[0])}" cy="{_svg_num(c.center[1])}" '
            f'r="{_svg_num(c.radius)}" stroke="#b03a2e" class="apollonius"/>\n'
        )
    out.write(
        _svg_line(centers_line.point, centers_line.direction, 'stroke="#444" stroke-dasharray="0.1,0.1" class="centers"')
    )
    out.write("  </g>\n</svg>\n")
    return out.getvalue()


# ---------------------------------------------------------------------------- CSV

CSV_HEADER = ("family", "center_x", "center_y", "radius")


def families_csv(steiner: list, apollonius: list[Circle2], midpoint) -> str:
    """One row per circle; the Steiner line is tagged ``line`` at the midpoint with radius inf."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in steiner:
        if isinstance(c, Line2):
            w.writerow(("line", fmt(midpoint[0]), fmt(midpoint[1]), "inf"))
        else:
            w.writerow(("steiner", fmt(c.center[0]), fmt(c.center[1]), fmt(c.radius)))
    for c in apollonius:
        w.writerow(("apollonius", fmt(c.center[0]), fmt(c.center[1]), fmt(c.radius)))
    return buf.getvalue()
