"""The Clifford torus {x^2 + y^2 = 1/2 = z^2 + w^2} and its stereographic images.

For a rotation R of R^4 the surface Q = pi(R(C)) is symmetric under
inversion in a one-parameter family of spheres centered on one or two lines.
The lines come from writing R = R0 Rxw(psi) Rzw(phi) Rxy(theta): the last two
factors preserve the torus and R0 fixes the projection pole, so only psi
matters up to a rotation of R^3. :func:`verify_symmetry` checks the claim
numerically by inverting samples and measuring how far they land from Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError, NotBlockForm
from .inversive import SymmetryLine, invert, symmetry_sphere_at
from .linalg import RotationMatrix, validate_rotation
from .rotations import block_form_deviation, decompose_so4, rot_xw
from .stereographic import inverse_s3

POLE_GUARD = 1e-6
CENTER_GUARD = 1e-6
LINE_EPS = 1e-12
SQRT2 = float(np.sqrt(2.0))


def _rotation(r) -> RotationMatrix:
    return r if isinstance(r, RotationMatrix) else validate_rotation(r)


# ---------------------------------------------------------------------- sampling


@dataclass(frozen=True, eq=False)
class TorusSamples:
    """Grid samples; row ``i * n_beta + j`` has parameters ``(alpha[i], beta[j])``."""

    points: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.alpha), len(self.beta)


def sample_torus(n_alpha: int, n_beta: int) -> TorusSamples:
    """``(cos a, sin a, cos b, sin b) / sqrt(2)`` on a uniform grid."""
    if n_alpha < 3 or n_beta < 3:
        raise GeometryError(f"torus grid must be at least 3x3, got {n_alpha}x{n_beta}")
    a = 2.0 * np.pi * np.arange(n_alpha) / n_alpha
    b = 2.0 * np.pi * np.arange(n_beta) / n_beta
    aa, bb = np.meshgrid(a, b, indexing="ij")
    pts = np.stack([np.cos(aa), np.sin(aa), np.cos(bb), np.sin(bb)], axis=-1).reshape(-1, 4) / SQRT2
    return TorusSamples(pts, a, b)


def torus_residual(x) -> np.ndarray:
    """``max(|x1^2 + x2^2 - 1/2|, |x3^2 + x4^2 - 1/2|)`` per point."""
    x = np.asarray(x, dtype=float)
    r1 = np.abs(x[..., 0] ** 2 + x[..., 1] ** 2 - 0.5)
    r2 = np.abs(x[..., 2] ** 2 + x[..., 3] ** 2 - 0.5)
    return np.maximum(r1, r2)


@dataclass(frozen=True, eq=False)
class ProjectedTorus:
    """``pi(R(samples))``; rows cut by the pole guard are NaN and ``mask`` is False there."""

    rotation: RotationMatrix
    points: np.ndarray
    mask: np.ndarray
    shape: tuple[int, int]

    @property
    def excluded(self) -> int:
        return int(np.count_nonzero(~self.mask))

    @property
    def kept(self) -> np.ndarray:
        return self.points[self.mask]


def project_torus(r, n_alpha: int, n_beta: int) -> ProjectedTorus:
    rot = _rotation(r)
    s = sample_torus(n_alpha, n_beta)
    x = rot.apply(s.points)
    gap = 1.0 - x[:, 3]
    mask = gap >= POLE_GUARD
    out = np.full((len(x), 3), np.nan)
    out[mask] = x[mask, :3] / gap[mask, None]
    return ProjectedTorus(rot, out, mask, s.shape)


def projected_residual(p, r) -> np.ndarray:
    """Torus residual of ``R^-1(pi^-1(p))``; zero exactly on ``pi(R(C))``."""
    rot = _rotation(r)
    q = inverse_s3(p) @ rot.mat
    return torus_residual(q)


def canonical_projection_implicit(p) -> np.ndarray:
    """``(sqrt(x^2 + y^2) - sqrt 2)^2 + z^2 - 1``, whose zero set is ``pi(C)``."""
    p = np.asarray(p, dtype=float)
    rad = np.hypot(p[..., 0], p[..., 1])
    if np.any(rad <= 1e-12):
        raise GeometryError("implicit form is not defined on the z-axis")
    return (rad - SQRT2) ** 2 + p[..., 2] ** 2 - 1.0


# ---------------------------------------------------------------- symmetry lines


def _reduce_psi(psi: float) -> float:
    """Bring ``psi`` into (-pi/2, pi/2]; the surface has period pi in psi."""
    red = psi - np.pi * np.ceil((psi - np.pi / 2) / np.pi)
    return float(red)


def canonical_lines(psi: float) -> list[SymmetryLine]:
    """Lines of sphere centers for ``pi(Rxw(psi)(C))``."""
    psi = _reduce_psi(psi)
    s, c = np.sin(psi), np.cos(psi)
    e1, e2, e3 = np.eye(3)
    if abs(s) <= LINE_EPS:
        return [SymmetryLine(np.zeros(3), e3, 1.0)]
    horizontal = SymmetryLine(-(c / s) * e1, e2, 1.0 / abs(s))
    if abs(c) <= LINE_EPS:
        return [horizontal]
    return [SymmetryLine((s / c) * e1, e3, 1.0 / abs(c)), horizontal]


def symmetry_lines(r) -> list[SymmetryLine]:
    """Lines of symmetry of ``pi(R(C))``: the canonical ones moved by R0."""
    d = decompose_so4(_rotation(r))
    block = d.r0_block
    return [line.transformed(block) for line in canonical_lines(d.psi)]


def symmetry_sphere_family(line: SymmetryLine, ts) -> list:
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if ts.size == 0:
        raise ValueError("need at least one parameter")
    return [symmetry_sphere_at(line, line.point_at(t)) for t in ts]


# ------------------------------------------------------------------ certificates


@dataclass(frozen=True)
class ResidualRow:
    line: int
    t: float
    center: tuple[float, float, float]
    radius: float
    max_residual: float
    skipped: int


@dataclass(frozen=True, eq=False)
class SymmetryCertificate:
    lines: list[SymmetryLine]
    rows: list[ResidualRow]
    tolerance: float
    n_samples: int
    excluded: int
    grid: tuple[int, int] = field(default=(0, 0))

    @property
    def max_residual(self) -> float:
        return max((row.max_residual for row in self.rows), default=0.0)

    @property
    def passed(self) -> bool:
        return all(row.max_residual <= self.tolerance for row in self.rows)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def verify_symmetry(
    r,
    n_alpha: int = 64,
    n_beta: int = 64,
    n_centers: int = 11,
    center_span: float = 3.0,
    tol: float = 1e-9,
    lines: list[SymmetryLine] | None = None,
) -> SymmetryCertificate:
    """Invert projected torus samples in spheres along each symmetry line.

    Samples near the pole and samples within ``CENTER_GUARD`` of a sphere's
    center are skipped and counted. Pass ``lines`` to test candidate lines
    other than the computed ones (e.g. as a negative control).
    """
    if n_alpha < 8 or n_beta < 8:
        raise GeometryError("verification grid must be at least 8x8")
    if n_centers < 1 or not tol > 0:
        raise ValueError("need n_centers >= 1 and tol > 0")
    rot = _rotation(r)
    proj = project_torus(rot, n_alpha, n_beta)
    pts = proj.kept
    if lines is None:
        lines = symmetry_lines(rot)
    ts = np.linspace(-center_span, center_span, n_centers)
    rows = []
    for k, line in enumerate(lines):
        for t, sphere in zip(ts, symmetry_sphere_family(line, ts)):
            near = np.linalg.norm(pts - sphere.center, axis=1) < CENTER_GUARD
            images = invert(pts[~near], sphere)
            res = float(np.max(projected_residual(images, rot))) if len(images) else 0.0
            rows.append(
                ResidualRow(k, float(t), tuple(float(v) for v in sphere.center), float(sphere.radius), res, int(near.sum()))
            )
    return SymmetryCertificate(list(lines), rows, tol, len(pts), proj.excluded, (n_alpha, n_beta))


# ------------------------------------------------------------------ side checks


def torus_invariance_check(r, n: int = 32, tol: float = 1e-10) -> bool:
    """Does ``r`` map sampled torus points back onto the torus?"""
    rot = _rotation(r)
    return bool(np.max(torus_residual(rot.apply(sample_torus(n, n).points))) <= tol)


def commute_projection_check(r0, points) -> float:
    """Max of ``|pi(R0 x) - R0 pi(x)|`` for a rotation fixing e4."""
    m = np.asarray(r0.mat if isinstance(r0, RotationMatrix) else r0, dtype=float)
    dev = block_form_deviation(m)
    if dev > 1e-9:
        raise NotBlockForm(f"rotation does not fix e4 (deviation {dev:.3e})")
    x = np.atleast_2d(np.asarray(points, dtype=float))
    x = x[1.0 - x[:, 3] >= POLE_GUARD]
    if len(x) == 0:
        return 0.0
    y = x @ m.T
    lhs = y[:, :3] / (1.0 - y[:, 3:])
    rhs = (x[:, :3] / (1.0 - x[:, 3:])) @ m[:3, :3].T
    return float(np.max(np.abs(lhs - rhs)))


QUARTER_TURN_X = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])


def quarter_period_check(psi: float, n: int = 48) -> tuple[float, float]:
    """Residuals for ``Q(psi + pi/2) = Rx(pi/2) Q(psi)`` and ``Q(psi + pi) = Q(psi)``."""
    q = project_torus(rot_xw(psi), n, n).kept
    quarter = float(np.max(projected_residual(q @ QUARTER_TURN_X.T, rot_xw(psi + np.pi / 2))))
    half = float(np.max(projected_residual(q, rot_xw(psi + np.pi))))
    return quarter, half
