"""Reflection in circles and spheres, and the families built from it.

``invert`` is the classical inversion ``p -> rho^2 (p - a) / |p - a|^2 + a``.
The same map arises on S^3 as a Euclidean reflection of R^4 conjugated by
stereographic projection (:func:`conjugate_reflection`), which is how the
symmetry of projected tori is proved and how it is cross-checked here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CenterInForbiddenSegment, CenterInversion, GeometryError, NotGreatSphere, NotOnLine, PoleProjection
from .stereographic import (
    Circle2,
    Line2,
    Plane3,
    Sphere3,
    SphereOrPlane,
    inverse_s3,
    project_s3,
    to_plane4,
)

CENTER_TOL = 1e-12
ON_LINE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class InversionSphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.array(self.center, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        if not self.radius > 0:
            raise GeometryError(f"inversion radius must be positive, got {self.radius}")

    @classmethod
    def from_sphere(cls, s: Sphere3 | Circle2) -> "InversionSphere":
        return cls(s.center, s.radius)


def invert(p, s: InversionSphere, exclude: float = CENTER_TOL) -> np.ndarray:
    """Reflect ``p`` (one point or an ``(m, d)`` stack) in the sphere ``s``."""
    p = np.asarray(p, dtype=float)
    rel = p - s.center
    sq = np.sum(rel * rel, axis=-1, keepdims=True)
    if np.any(sq <= exclude * exclude):
        raise CenterInversion("point at the inversion center maps to infinity")
    return s.radius**2 * rel / sq + s.center


def reflect_hyperplane(x, n) -> np.ndarray:
    """``x - 2 (x . n) / |n|^2 n``: mirror reflection of R^4 in ``{x . n = 0}``."""
    x = np.asarray(x, dtype=float)
    n = np.asarray(n, dtype=float)
    nn = float(n @ n)
    if nn == 0:
        raise GeometryError("zero normal")
    return x - (2.0 * (x @ n) / nn)[..., None] * n


def mirror(p, plane: Plane3) -> np.ndarray:
    """Euclidean reflection of R^3 in a plane."""
    p = np.asarray(p, dtype=float)
    n = np.asarray(plane.normal, dtype=float)
    return p - (2.0 * (p @ n - plane.offset) / float(n @ n))[..., None] * n


def conjugate_reflection(s: SphereOrPlane, p, tol: float = 1e-9) -> np.ndarray:
    """Reflection in ``s`` computed on S^3: project back, mirror in R^4, project.

    Only defined when the hyperplane over ``s`` passes through the origin of
    R^4 (a great sphere), i.e. spheres with ``radius^2 = 1 + |center|^2`` and
    planes through the origin.
    """
    h = to_plane4(s)
    scale = np.linalg.norm(np.append(h.normal, h.offset))
    if abs(h.offset) > tol * scale:
        raise NotGreatSphere(f"hyperplane offset {h.offset:.3e} is not zero; not a great sphere")
    x = inverse_s3(p)
    try:
        return project_s3(reflect_hyperplane(x, h.normal))
    except PoleProjection as exc:
        raise CenterInversion("point maps to infinity") from exc


# ------------------------------------------------------------------ symmetry lines


@dataclass(frozen=True, eq=False)
class SymmetryLine:
    """Base point, unit direction and reference distance of a line of symmetry.

    The sphere attached to the point ``a`` on the line has radius
    ``sqrt(|a - base|^2 + rho0^2)``.
    """

    base: np.ndarray
    direction: np.ndarray
    rho0: float

    def __post_init__(self):
        b = np.array(self.base, dtype=float)
        d = np.array(self.direction, dtype=float)
        if b.shape != (3,) or d.shape != (3,):
            raise GeometryError("symmetry lines live in R^3")
        n = np.linalg.norm(d)
        if abs(n - 1.0) > 1e-9:
            raise GeometryError(f"direction must be a unit vector, |d| = {n}")
        if not self.rho0 > 0:
            raise GeometryError(f"rho0 must be positive, got {self.rho0}")
        b.setflags(write=False)
        d = d / n
        d.setflags(write=False)
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "direction", d)

    @classmethod
    def through(cls, base, direction, rho0: float) -> "SymmetryLine":
        d = np.asarray(direction, dtype=float)
        return cls(base, d / np.linalg.norm(d), rho0)

    @classmethod
    def from_steiner_pair(cls, a1, a2) -> "SymmetryLine":
        """Line of centers of the circles through two points of the plane z = 0."""
        pair = SteinerPair(a1, a2)
        perp = np.array([-pair.axis[1], pair.axis[0], 0.0])
        return cls(np.append(pair.midpoint, 0.0), perp, pair.rho0)

    def point_at(self, t: float) -> np.ndarray:
        return self.base + t * self.direction

    def distance(self, a) -> float:
        rel = np.asarray(a, dtype=float) - self.base
        return float(np.linalg.norm(rel - (rel @ self.direction) * self.direction))

    def transformed(self, rot3: np.ndarray) -> "SymmetryLine":
        """Image under a rotation of R^3 about the origin."""
        m = np.asarray(rot3, dtype=float)
        return SymmetryLine(m @ self.base, m @ self.direction, self.rho0)


def symmetry_sphere_at(line: SymmetryLine, a) -> InversionSphere:
    a = np.asarray(a, dtype=float)
    off = line.distance(a)
    if off > ON_LINE_TOL * max(1.0, float(np.linalg.norm(a))):
        raise NotOnLine(f"point is {off:.3e} away from the line")
    d = float(np.linalg.norm(a - line.base))
    return InversionSphere(a, float(np.hypot(d, line.rho0)))


# ------------------------------------------------------- Steiner and Apollonius


@dataclass(frozen=True, eq=False)
class SteinerPair:
    a1: np.ndarray
    a2: np.ndarray

    def __post_init__(self):
        a1 = np.array(self.a1, dtype=float)
        a2 = np.array(self.a2, dtype=float)
        if a1.shape != a2.shape or a1.shape[-1] not in (2, 3):
            raise GeometryError("Steiner pair needs two points of the same dimension")
        if np.linalg.norm(a1 - a2) <= CENTER_TOL:
            raise GeometryError("Steiner pair points coincide")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.a1 + self.a2)

    @property
    def rho0(self) -> float:
        return 0.5 * float(np.linalg.norm(self.a1 - self.a2))

    @property
    def axis(self) -> np.ndarray:
        """Unit vector from a1 towards a2."""
        d = self.a2 - self.a1
        return d / np.linalg.norm(d)

    @property
    def perpendicular(self) -> np.ndarray:
        u = self.axis
        return np.array([-u[1], u[0]])


def _geometric_grid(count: int, unit: float) -> np.ndarray:
    half = count // 2
    mags = unit * 2.0 ** (np.arange(half) - (half - 1) / 2.0)
    vals = np.concatenate([-mags[::-1], [0.0] if count % 2 else [], mags])
    return vals


def steiner_circles(pair: SteinerPair, count: int) -> list[Circle2 | Line2]:
    """``count`` circles through both points, then the line through them.

    Centers sit on the perpendicular bisector at signed offsets from the
    midpoint forming a symmetric geometric grid.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    m0, perp, rho0 = pair.midpoint, pair.perpendicular, pair.rho0
    out: list[Circle2 | Line2] = [
        Circle2(m0 + s * perp, float(np.hypot(s, rho0))) for s in _geometric_grid(count, rho0)
    ]
    out.append(Line2(pair.a1, pair.axis))
    return out


def apollonius_circle(pair: SteinerPair, center) -> Circle2:
    """Circle of Apollonius centered at ``center`` on the line through the pair."""
    c = np.asarray(center, dtype=float)
    rel = c - pair.midpoint
    along = float(rel @ pair.axis)
    off = float(np.linalg.norm(rel - along * pair.axis))
    if off > ON_LINE_TOL * max(1.0, float(np.linalg.norm(c))):
        raise NotOnLine(f"center is {off:.3e} away from the line through the pair")
    d = abs(along)
    if d <= pair.rho0:
        raise CenterInForbiddenSegment("center lies on the segment between the two points")
    return Circle2(c, float(np.sqrt((d - pair.rho0) * (d + pair.rho0))))


def apollonius_circles(pair: SteinerPair, count: int, spread: float = 2.0) -> list[Circle2]:
    """``count`` circles with ``d = rho0 cosh(u)``, ``u`` spread symmetrically over both sides."""
    if count < 1:
        raise ValueError("count must be at least 1")
    left = count // 2
    right = count - left
    out = []
    for side, k in ((-1.0, left), (1.0, right)):
        for u in np.linspace(spread / k, spread, k) if k else []:
            d = pair.rho0 * np.cosh(u)
            out.append(apollonius_circle(pair, pair.midpoint + side * d * pair.axis))
    return out


def circle_intersections(c1: Circle2, c2: Circle2) -> np.ndarray:
    """Intersection points of two circles, shape (0, 2), (1, 2) or (2, 2)."""
    d_vec = c2.center - c1.center
    d = float(np.linalg.norm(d_vec))
    if d == 0 or d > c1.radius + c2.radius or d < abs(c1.radius - c2.radius):
        return np.zeros((0, 2))
    along = (c1.radius**2 - c2.radius**2 + d * d) / (2.0 * d)
    h = np.sqrt(max(c1.radius**2 - along * along, 0.0))
    u = d_vec / d
    base = c1.center + along * u
    perp = np.array([-u[1], u[0]])
    if h == 0:
        return base[None, :]
    return np.array([base + h * perp, base - h * perp])


def intersection_angle(c1: Circle2, c2: Circle2, p) -> float:
    """Angle in [0, pi/2] between the tangent lines of two circles at a common point."""
    p = np.asarray(p, dtype=float)
    r1 = p - c1.center
    r2 = p - c2.center
    t1 = np.array([-r1[1], r1[0]])
    t2 = np.array([-r2[1], r2[0]])
    cos = abs(t1 @ t2) / (np.linalg.norm(t1) * np.linalg.norm(t2))
    return float(np.arccos(np.clip(cos, 0.0, 1.0)))


# ------------------------------------------------------------ Euclidean symmetry


def reflect_in_line(points, center, angle: float) -> np.ndarray:
    """Reflect 2-d points in the line through ``center`` at ``angle``."""
    p = np.asarray(points, dtype=float) - center
    c, s = np.cos(2 * angle), np.sin(2 * angle)
    m = np.array([[c, s], [s, -c]])
    return p @ m.T + center


def hausdorff(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def euclidean_symmetry_check(points, center, n_lines: int, tol: float) -> bool:
    """True if reflecting the point set in ``n_lines`` evenly spaced lines through
    ``center`` reproduces it within Hausdorff distance ``tol``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    ctr = np.asarray(center, dtype=float)
    for k in range(n_lines):
        if hausdorff(reflect_in_line(pts, ctr, np.pi * k / n_lines), pts) > tol:
            return False
    return True
