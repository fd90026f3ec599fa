"""Stereographic projection from the north pole of S^2 and S^3.

The projections accept a single point or an ``(m, n)`` stack of points and
raise on the first invalid one; callers that need to skip pole-adjacent
points should mask them first (see :func:`pole_mask`).

Spheres, planes and hyperplanes are stored as given: a hyperplane produced
from a sphere keeps the unnormalized normal of the substitution formula, and
hyperplane equality is tested up to a positive scale factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateIntersection, GeometryError, GreatCircle, NotOnSphere, PoleProjection

POLE_TOL = 1e-12
SPHERE_TOL = 1e-9
PLANE_CLASSIFY_TOL = 1e-12


def _arr(p, dim: int) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape[-1] != dim:
        raise GeometryError(f"expected points of dimension {dim}, got shape {a.shape}")
    return a


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Circle2:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center))
        if not self.radius > 0:
            raise GeometryError(f"circle radius must be positive, got {self.radius}")

    def points(self, count: int) -> np.ndarray:
        t = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
        return self.center + self.radius * np.column_stack([np.cos(t), np.sin(t)])


@dataclass(frozen=True, eq=False)
class Line2:
    """The line ``point + s * direction``; ``direction`` is normalized."""

    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        n = np.linalg.norm(d)
        if n == 0:
            raise GeometryError("line direction must be nonzero")
        object.__setattr__(self, "point", _frozen(self.point))
        object.__setattr__(self, "direction", _frozen(d / n))

    def distance(self, p) -> np.ndarray:
        rel = np.asarray(p, dtype=float) - self.point
        d = self.direction
        return np.abs(rel[..., 0] * d[1] - rel[..., 1] * d[0])


@dataclass(frozen=True, eq=False)
class Sphere3:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center))
        if not self.radius > 0:
            raise GeometryError(f"sphere radius must be positive, got {self.radius}")


@dataclass(frozen=True, eq=False)
class Plane3:
    """``{a : normal . a = offset}``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _frozen(self.normal))
        if not np.linalg.norm(self.normal) > 0:
            raise GeometryError("plane normal must be nonzero")


@dataclass(frozen=True, eq=False)
class Hyperplane4:
    """``{x in R^4 : normal . x = offset}``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _frozen(self.normal))
        if self.normal.shape != (4,) or not np.linalg.norm(self.normal) > 0:
            raise GeometryError("hyperplane normal must be a nonzero 4-vector")

    def residual(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.normal - self.offset

    def same_as(self, other: "Hyperplane4", tol: float = 1e-9) -> bool:
        """Equality up to a positive scale factor."""
        a = np.append(self.normal, self.offset)
        b = np.append(other.normal, other.offset)
        a = a / np.linalg.norm(a)
        b = b / np.linalg.norm(b)
        return bool(np.max(np.abs(a - b)) <= tol)

    def same_set(self, other: "Hyperplane4", tol: float = 1e-9) -> bool:
        """Equality as point sets, i.e. up to any nonzero scale."""
        flipped = Hyperplane4(-np.asarray(other.normal), -other.offset)
        return self.same_as(other, tol) or self.same_as(flipped, tol)


SphereOrPlane = Union[Sphere3, Plane3]
CircleOrLine = Union[Circle2, Line2]


# ------------------------------------------------------------------ projections


def pole_mask(points, tol: float = POLE_TOL) -> np.ndarray:
    """True where the last coordinate is at least ``tol`` below 1."""
    p = np.asarray(points, dtype=float)
    return 1.0 - p[..., -1] >= tol


def _check_on_sphere(p: np.ndarray):
    dev = np.abs(np.linalg.norm(p, axis=-1) - 1.0)
    if np.any(dev > SPHERE_TOL):
        raise NotOnSphere(f"point off the unit sphere by {float(np.max(dev)):.3e}")


def _project(p: np.ndarray) -> np.ndarray:
    if np.any(~pole_mask(p)):
        raise PoleProjection("cannot project the pole (last coordinate = 1)")
    return p[..., :-1] / (1.0 - p[..., -1:])


def project_s2(p) -> np.ndarray:
    """``(x, y, z) -> (x, y) / (1 - z)`` on S^2 minus the north pole."""
    p = _arr(p, 3)
    _check_on_sphere(p)
    return _project(p)


def project_s3(p) -> np.ndarray:
    """``(x, y, z, w) -> (x, y, z) / (1 - w)`` on S^3 minus the north pole."""
    p = _arr(p, 4)
    _check_on_sphere(p)
    return _project(p)


def extended_project(p) -> np.ndarray:
    """Projection through (0, 0, 1) of any point of R^3 off the plane z = 1."""
    p = _arr(p, 3)
    gap = 1.0 - p[..., -1:]
    if np.any(np.abs(gap) < POLE_TOL):
        raise PoleProjection("point lies on the plane z = 1 through the pole")
    return p[..., :-1] / gap


def _inverse(a: np.ndarray) -> np.ndarray:
    sq = np.sum(a * a, axis=-1, keepdims=True)
    return np.concatenate([2.0 * a, sq - 1.0], axis=-1) / (sq + 1.0)


def inverse_s2(a) -> np.ndarray:
    """``a -> (2a, |a|^2 - 1) / (|a|^2 + 1)``."""
    return _inverse(_arr(a, 2))


def inverse_s3(a) -> np.ndarray:
    return _inverse(_arr(a, 3))


def pushforward(project, p, tangent, h: float = 1e-6) -> np.ndarray:
    """Central-difference image of a tangent vector, moving along the sphere."""
    p = np.asarray(p, dtype=float)
    t = np.asarray(tangent, dtype=float)
    fwd = p + h * t
    bwd = p - h * t
    fwd /= np.linalg.norm(fwd)
    bwd /= np.linalg.norm(bwd)
    return (project(fwd) - project(bwd)) / (2.0 * h)


def angle_between_curves_at(p, t1, t2) -> float:
    """Angle in [0, pi] between two tangent vectors at ``p``."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    n1, n2 = np.linalg.norm(t1), np.linalg.norm(t2)
    if n1 == 0 or n2 == 0:
        raise GeometryError("tangent vectors must be nonzero")
    return float(np.arccos(np.clip(np.dot(t1, t2) / (n1 * n2), -1.0, 1.0)))


# ------------------------------------------------------ images of circles/spheres


def rotated_equator_image(phi: float, psi: float) -> CircleOrLine:
    """Projection of the equator after ``Rz(psi) Ry(phi)``.

    A circle with center ``tan(phi) (cos psi, sin psi)`` and radius
    ``|sec phi|``, or the line through the origin with direction
    ``(-sin psi, cos psi)`` when the rotated equator passes through the pole.
    """
    c = np.cos(phi)
    if abs(c) <= PLANE_CLASSIFY_TOL:
        return Line2(np.zeros(2), np.array([-np.sin(psi), np.cos(psi)]))
    t = np.tan(phi)
    return Circle2(np.array([np.cos(psi) * t, np.sin(psi) * t]), abs(1.0 / c))


def plane4_to_image(pi: Hyperplane4) -> SphereOrPlane:
    """Projection of ``pi`` intersected with S^3: a sphere, or a plane when the pole lies on ``pi``."""
    n = np.asarray(pi.normal, dtype=float)
    e = float(pi.offset)
    nbar, n4 = n[:3], n[3]
    d = n4 - e
    if abs(d) <= PLANE_CLASSIFY_TOL * np.linalg.norm(n):
        return Plane3(nbar, n4)
    center = -nbar / d
    r2 = (n4 + e) / d + float(nbar @ nbar) / (d * d)
    if r2 <= 1e-12 * max(1.0, float(center @ center)):
        raise DegenerateIntersection(f"hyperplane meets S^3 in at most a point (radius^2 = {r2:.3e})")
    return Sphere3(center, float(np.sqrt(r2)))


def sphere_to_plane4(s: Sphere3) -> Hyperplane4:
    """Hyperplane whose intersection with S^3 projects onto ``s``."""
    a0 = np.asarray(s.center, dtype=float)
    k = s.radius**2 - float(a0 @ a0)
    return Hyperplane4(np.append(-2.0 * a0, k + 1.0), k - 1.0)


def plane3_to_plane4(p: Plane3) -> Hyperplane4:
    """Hyperplane through the pole whose intersection with S^3 projects onto ``p``."""
    return Hyperplane4(np.append(np.asarray(p.normal, dtype=float), p.offset), float(p.offset))


def to_plane4(s: SphereOrPlane) -> Hyperplane4:
    if isinstance(s, Sphere3):
        return sphere_to_plane4(s)
    return plane3_to_plane4(s)


def cone_point(plane: Plane3) -> np.ndarray:
    """Apex of the cone tangent to S^2 along ``plane`` intersected with S^2."""
    n = np.asarray(plane.normal, dtype=float)
    scale = np.linalg.norm(n)
    unit = n / scale
    e = plane.offset / scale
    if abs(e) <= POLE_TOL:
        raise GreatCircle("great circle: no cone point")
    if abs(e) >= 1.0:
        raise DegenerateIntersection(f"plane at distance {abs(e):.6g} does not cut S^2 in a circle")
    return unit / e


def circle_of(plane: Plane3) -> tuple[np.ndarray, float, np.ndarray]:
    """Center, radius and unit normal of the circle ``plane`` cuts from S^2."""
    n = np.asarray(plane.normal, dtype=float)
    scale = np.linalg.norm(n)
    unit = n / scale
    e = plane.offset / scale
    if abs(e) >= 1.0:
        raise DegenerateIntersection("plane does not cut S^2 in a circle")
    return unit * e, float(np.sqrt(1.0 - e * e)), unit


def fit_circle(points) -> tuple[np.ndarray, float]:
    """Least-squares (algebraic) circle or sphere fit; returns center and radius."""
    p = np.asarray(points, dtype=float)
    a = np.column_stack([2.0 * p, np.ones(len(p))])
    b = np.sum(p * p, axis=1)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    center = sol[:-1]
    return center, float(np.sqrt(sol[-1] + center @ center))
