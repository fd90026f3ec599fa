"""Constructive decompositions of rotations in dimensions 2, 3 and 4.

* :func:`decompose_so3` -- ``R = Rz(psi) Ry(phi) Rz(theta)``
* :func:`decompose_so4` -- ``R = R0 Rxw(psi) Rzw(phi) Rxy(theta)`` with ``R0`` fixing e4
* :func:`reduce_to_axis` / :func:`elementary_factorization` -- products of
  single-plane rotations
* :func:`plane_block_form` / :func:`rotation_path` -- invariant planes and the
  one-parameter subgroup through a rotation

Conventions: ``Rz(a) = elementary_rotation(3, 1, 2, a)`` and
``Ry(a) = elementary_rotation(3, 1, 3, a)``, so ``Ry`` sends e1 to
``(cos a, 0, sin a)``. In four dimensions ``Rxy``, ``Rzw`` and ``Rxw`` are the
elementary rotations of the planes (1,2), (3,4) and (1,4).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DecompositionError, DimensionError, GeometryError
from .linalg import (
    RotationMatrix,
    elementary_rotation,
    gram_schmidt,
    rotation2,
    validate_rotation,
)

# Below this magnitude a sine is rounding noise and the free angle is gauged to 0.
GAUGE_EPS = 1e-14
BLOCK_FORM_TOL = 1e-9
# Eigen-angle clusters closer than this (in units of 2 cos(theta)) are merged.
CLUSTER_TOL = 1e-6


def _checked(r, dim: int | None = None) -> RotationMatrix:
    rot = r if isinstance(r, RotationMatrix) else validate_rotation(r)
    if dim is not None and rot.dim != dim:
        raise DimensionError(f"expected a rotation of dimension {dim}, got {rot.dim}")
    return rot


def rot_z(a: float) -> np.ndarray:
    return elementary_rotation(3, 1, 2, a).mat


def rot_y(a: float) -> np.ndarray:
    return elementary_rotation(3, 1, 3, a).mat


def rot_xy(a: float) -> np.ndarray:
    return elementary_rotation(4, 1, 2, a).mat


def rot_zw(a: float) -> np.ndarray:
    return elementary_rotation(4, 3, 4, a).mat


def rot_xw(a: float) -> np.ndarray:
    return elementary_rotation(4, 1, 4, a).mat


# --------------------------------------------------------------------------- SO(3)


@dataclass(frozen=True)
class EulerZYZ:
    theta: float
    phi: float
    psi: float

    def matrix(self) -> RotationMatrix:
        return RotationMatrix(rot_z(self.psi) @ rot_y(self.phi) @ rot_z(self.theta))


def decompose_so3(r) -> EulerZYZ:
    """Angles with ``r = Rz(psi) Ry(phi) Rz(theta)``, ``phi`` in [0, pi].

    ``phi`` and ``psi`` are read off the image of e3, which must equal
    ``(-cos psi sin phi, -sin psi sin phi, cos phi)``; ``theta`` is the planar
    rotation left over once ``Rz(psi) Ry(phi)`` is undone. When ``sin phi``
    vanishes ``psi`` is set to 0 and ``theta`` absorbs the whole rotation.
    """
    m = _checked(r, 3).mat
    u1, u2, u3 = m[:, 2]
    sin_phi = np.hypot(u1, u2)
    phi = float(np.arctan2(sin_phi, u3))
    psi = float(np.arctan2(-u2, -u1)) if sin_phi > GAUGE_EPS else 0.0
    rest = (rot_z(psi) @ rot_y(phi)).T @ m
    theta = float(np.arctan2(rest[1, 0], rest[0, 0]))
    return EulerZYZ(theta=theta, phi=phi, psi=psi)


# --------------------------------------------------------------------------- SO(4)


@dataclass(frozen=True)
class So4Decomposition:
    """``R = r0 @ Rxw(psi) @ Rzw(phi) @ Rxy(theta)``.

    ``r0`` fixes e4; ``block_deviation`` records how far the computed ``r0``
    is from that block form (it is never snapped).
    """

    r0: RotationMatrix
    psi: float
    phi: float
    theta: float
    block_deviation: float = 0.0

    @property
    def r0_block(self) -> np.ndarray:
        """The 3x3 rotation of R^3 = {w = 0} that ``r0`` extends."""
        return self.r0.mat[:3, :3]

    def standard_part(self) -> np.ndarray:
        return rot_xw(self.psi) @ rot_zw(self.phi) @ rot_xy(self.theta)

    def matrix(self) -> RotationMatrix:
        return RotationMatrix(self.r0.mat @ self.standard_part())


def block_form_deviation(m) -> float:
    """Max deviation of the 4th row and column of ``m`` from e4."""
    a = np.asarray(m, dtype=float)
    e4 = np.array([0.0, 0.0, 0.0, 1.0])
    return float(max(np.max(np.abs(a[3, :] - e4)), np.max(np.abs(a[:, 3] - e4))))


def last_row(psi: float, phi: float, theta: float) -> np.ndarray:
    """``N^T e4`` for ``N = Rxw(psi) Rzw(phi) Rxy(theta)``."""
    return np.array(
        [
            np.sin(psi) * np.cos(theta),
            -np.sin(psi) * np.sin(theta),
            np.cos(psi) * np.sin(phi),
            np.cos(psi) * np.cos(phi),
        ]
    )


def decompose_so4(r) -> So4Decomposition:
    """Factor ``r`` as ``r0 Rxw(psi) Rzw(phi) Rxy(theta)`` with ``psi`` in [0, pi/2].

    The three angles are chosen so that the last row of ``Rxw Rzw Rxy`` matches
    the last row of ``r``; then ``r0 = r N^T`` automatically fixes e4.
    """
    m = _checked(r, 4).mat
    m41, m42, m43, m44 = m[3]
    s = np.hypot(m41, m42)
    c = np.hypot(m43, m44)
    psi = float(np.arctan2(s, c))
    theta = float(np.arctan2(-m42, m41)) if s > GAUGE_EPS else 0.0
    phi = float(np.arctan2(m43, m44)) if c > GAUGE_EPS else 0.0
    n = rot_xw(psi) @ rot_zw(phi) @ rot_xy(theta)
    r0 = m @ n.T
    dev = block_form_deviation(r0)
    if dev > BLOCK_FORM_TOL:
        raise DecompositionError(f"r0 deviates from block form by {dev:.3e}")
    return So4Decomposition(RotationMatrix(r0), psi, phi, theta, dev)


# ------------------------------------------------------------ elementary factors

Factor = tuple[int, int, float]


@dataclass(frozen=True)
class ElementaryFactorization:
    """Ordered single-plane rotations; the product is ``F_1 @ F_2 @ ... @ F_k``."""

    dim: int
    factors: tuple[Factor, ...]

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def matrix(self) -> RotationMatrix:
        return RotationMatrix(_compose(self.dim, self.factors))

    def inverse(self) -> "ElementaryFactorization":
        return ElementaryFactorization(self.dim, _invert(self.factors))


def _compose(n: int, factors: Sequence[Factor]) -> np.ndarray:
    m = np.eye(n)
    for k, j, a in factors:
        m = m @ elementary_rotation(n, k, j, a).mat
    return m


def _invert(factors: Sequence[Factor]) -> tuple[Factor, ...]:
    return tuple((k, j, -a) for k, j, a in reversed(factors))


def _prune(factors: Sequence[Factor]) -> tuple[Factor, ...]:
    return tuple((k, j, float(a)) for k, j, a in factors if abs(a) > 1e-15)


def _e1_to(w: np.ndarray) -> list[Factor]:
    # |w| e1 -> w using planes (1, m), (1, m-1), ..., (1, 2).
    m = len(w)
    if m == 2:
        return [(1, 2, float(np.arctan2(w[1], w[0])))]
    head = w[:-1]
    alpha = float(np.arctan2(w[-1], np.linalg.norm(head)))
    return _e1_to(head) + [(1, m, alpha)]


def _en_to(u: np.ndarray) -> list[Factor]:
    # e_n -> u (unit): first R^{1n}_phi with cos(phi) = u_n, then recurse on the
    # leading n-1 coordinates.
    n = len(u)
    if n == 2:
        return [(1, 2, float(np.arctan2(-u[0], u[1])))]
    head = u[:-1]
    phi = float(np.arctan2(-np.linalg.norm(head), u[-1]))
    return _e1_to(head) + [(1, n, phi)]


def reduce_to_axis(v, w) -> ElementaryFactorization:
    """Elementary rotations whose product ``Q`` satisfies ``Q v = w``.

    ``v`` and ``w`` must have the same (nonzero) length. Both are first
    reached from e_n; ``Q`` is the second path composed with the inverse of
    the first.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape or v.ndim != 1 or v.shape[0] not in (2, 3, 4):
        raise DimensionError(f"incompatible vectors of shape {v.shape} and {w.shape}")
    nv, nw = np.linalg.norm(v), np.linalg.norm(w)
    if nv <= 1e-12 or nw <= 1e-12:
        raise GeometryError("zero vector")
    if abs(nv - nw) > 1e-9 * max(1.0, nv):
        raise GeometryError(f"norm mismatch: |v| = {nv:.12g}, |w| = {nw:.12g}")
    n = v.shape[0]
    if np.linalg.norm(v - w) <= 1e-15 * nv:
        return ElementaryFactorization(n, ())
    to_v = _en_to(v / nv)
    to_w = _en_to(w / nw)
    return ElementaryFactorization(n, _prune(to_w + list(_invert(to_v))))


def elementary_factorization(r) -> ElementaryFactorization:
    """Write ``r`` as a product of at most n(n-1)/2 elementary rotations.

    Recursive: a product ``P`` of n-1 factors carries e_n to ``r e_n``, so
    ``P^T r`` fixes e_n and its leading (n-1)-block is handled the same way.
    """
    m = _checked(r).mat
    n = m.shape[0]
    return ElementaryFactorization(n, _prune(_factor(m)))


def _factor(m: np.ndarray) -> list[Factor]:
    n = m.shape[0]
    if n == 2:
        return [(1, 2, float(np.arctan2(m[1, 0], m[0, 0])))]
    col = m[:, -1]
    p = _en_to(col / np.linalg.norm(col))
    rest = _compose(n, p).T @ m
    return p + _factor(rest[:-1, :-1])


# ------------------------------------------------------------ invariant planes


@dataclass(frozen=True)
class PlaneBlockForm:
    """``basis^T M basis = blockdiag(I_k, R(angles[0]), R(angles[1]), ...)``.

    ``basis`` has determinant +1. Angles lie in (0, pi], except that when there
    is no fixed direction to absorb orientation the last one may be negative.
    """

    basis: RotationMatrix
    fixed_dim: int
    angles: tuple[float, ...]

    def block_matrix(self, t: float = 1.0) -> np.ndarray:
        n = self.basis.dim
        d = np.eye(n)
        for i, a in enumerate(self.angles):
            s = self.fixed_dim + 2 * i
            d[s : s + 2, s : s + 2] = rotation2(t * a)
        return d

    def reconstruct(self, t: float = 1.0) -> np.ndarray:
        b = self.basis.mat
        return b @ self.block_matrix(t) @ b.T

    @property
    def axis(self) -> np.ndarray | None:
        """The rotation axis when the rotation is of R^3 and non-trivial."""
        if self.basis.dim == 3 and self.fixed_dim == 1:
            return self.basis.mat[:, 0].copy()
        return None


def _angle_cosines(m: np.ndarray) -> list[float]:
    """2 cos(theta_i) per rotation plane, from the characteristic polynomial."""
    n = m.shape[0]
    t = float(np.trace(m))
    if n == 2:
        xs = [t]
    elif n == 3:
        xs = [t - 1.0]
    else:
        s2 = 0.5 * (t * t - float(np.trace(m @ m)))
        # lambda^4 - t lambda^3 + s2 lambda^2 - t lambda + 1, with x = lambda + 1/lambda
        disc = max(t * t - 4.0 * (s2 - 2.0), 0.0)
        root = np.sqrt(disc)
        xs = [0.5 * (t - root), 0.5 * (t + root)]
    return [float(np.clip(x, -2.0, 2.0)) for x in xs]


def _eigen_clusters(m: np.ndarray) -> list[tuple[float, int]]:
    """Distinct eigenvalues of M + M^T with multiplicities, closed form."""
    n = m.shape[0]
    values = []
    for x in _angle_cosines(m):
        values += [x, x]
    if n == 3:
        values.append(2.0)
    values.sort()
    clusters: list[list[float]] = []
    for x in values:
        if clusters and abs(x - clusters[-1][-1]) <= CLUSTER_TOL:
            clusters[-1].append(x)
        else:
            clusters.append([x])
    return [(float(np.mean(c)), len(c)) for c in clusters]


def _pfaffian4(k: np.ndarray) -> float:
    return k[0, 1] * k[2, 3] - k[0, 2] * k[1, 3] + k[0, 3] * k[1, 2]


def _best_column(p: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.linalg.norm(p, axis=0)))
    c = p[:, j]
    return c / np.linalg.norm(c)


def _pivoted_span(p: np.ndarray, rank: int) -> np.ndarray:
    """Orthonormal basis of the column space of ``p``, largest residual first."""
    cols = p.copy()
    out = []
    for _ in range(rank):
        j = int(np.argmax(np.linalg.norm(cols, axis=0)))
        v = cols[:, j] / np.linalg.norm(cols[:, j])
        out.append(v)
        cols = cols - np.outer(v, v @ cols)
    return np.column_stack(gram_schmidt(out, tol=0.0))


def _complement(vectors: list[np.ndarray], dim: int) -> list[np.ndarray]:
    full = gram_schmidt(list(vectors) + list(np.eye(dim)))
    return full[len(vectors) :]


def _split(b: np.ndarray) -> tuple[list[np.ndarray], list[tuple[np.ndarray, np.ndarray]]]:
    """Split an orthogonal k x k matrix (all eigen-angles nearly equal in cosine)
    into fixed directions and oriented invariant planes, in local coordinates.

    Works from the skew part, whose size is |sin theta| and so stays
    well-conditioned near theta = 0 where cosines cannot separate a small
    rotation from the identity.
    """
    k = b.shape[0]
    skew = 0.5 * (b - b.T)
    fixed: list[np.ndarray] = []
    planes: list[tuple[np.ndarray, np.ndarray]] = []
    if k == 1:
        return [np.ones(1)], []
    if k == 2:
        theta = np.arctan2(b[1, 0], b[0, 0])
        e1, e2 = np.eye(2)
        if abs(theta) <= 1e-15:
            return [e1, e2], []
        return [], [(e1, e2 if theta > 0 else -e2)]
    if k == 3:
        axis = np.array([skew[2, 1], skew[0, 2], skew[1, 0]])
        s = np.linalg.norm(axis)
        if s <= 1e-15:
            if np.trace(b) > 1.0:
                return list(np.eye(3)), []
            axis = _best_column(b + np.eye(3))  # half-turn: axis spans ker(B - I)
        else:
            axis = axis / s
        v1 = _complement([axis], 3)[0]
        v2 = np.cross(axis, v1)
        if np.dot(v2, b @ v1) < 0:
            v2 = -v2
        return [axis], [(v1, v2)]
    # k == 4
    ksq = -(skew @ skew)
    p = 0.5 * float(np.trace(ksq))  # sigma1^2 + sigma2^2
    q = _pfaffian4(skew)  # +/- sigma1 sigma2
    disc = max(p * p - 4.0 * q * q, 0.0)
    y1 = 0.5 * (p + np.sqrt(disc))
    if y1 <= 1e-30:
        if np.trace(b) > 0:
            return list(np.eye(4)), []
        e = np.eye(4)
        return [], [(e[0], e[1]), (e[2], e[3])]
    y2 = q * q / y1
    if y1 - y2 > 1e-8 * y1:
        v1 = _best_column(ksq - y2 * np.eye(4))
    else:
        v1 = np.eye(4)[0]
    v2 = skew @ v1
    v2 = v2 / np.linalg.norm(v2)
    rest = _complement([v1, v2], 4)
    sub = np.column_stack(rest)
    sub_fixed, sub_planes = _split(sub.T @ b @ sub)
    fixed += [sub @ f for f in sub_fixed]
    planes.append((v1, v2))
    planes += [(sub @ a, sub @ c) for a, c in sub_planes]
    return fixed, planes


def plane_block_form(r) -> PlaneBlockForm:
    """Orthonormal basis in which ``r`` is ``blockdiag(I_k, R_theta1, ...)``.

    Eigen-angle cosines come from the characteristic polynomial; each
    eigenspace of ``r + r^T`` is isolated with a Sylvester projector and then
    split into invariant planes from the skew part of ``r`` restricted there.
    """
    rot = _checked(r)
    m = rot.mat
    n = m.shape[0]
    sym = m + m.T
    clusters = _eigen_clusters(m)
    fixed: list[np.ndarray] = []
    planes: list[tuple[np.ndarray, np.ndarray]] = []
    for i, (x, mult) in enumerate(clusters):
        proj = np.eye(n)
        for j, (y, _) in enumerate(clusters):
            if j != i:
                proj = proj @ (sym - y * np.eye(n)) / (x - y)
        f = _pivoted_span(proj, mult)
        loc_fixed, loc_planes = _split(f.T @ m @ f)
        fixed += [f @ v for v in loc_fixed]
        planes += [(f @ a, f @ b) for a, b in loc_planes]

    vectors = fixed + [v for pl in planes for v in pl]
    basis = np.column_stack(gram_schmidt(vectors, tol=0.0))
    if np.linalg.det(basis) < 0:
        col = 0 if fixed else n - 1
        basis[:, col] = -basis[:, col]
    k = len(fixed)
    angles = []
    for i in range(len(planes)):
        s = k + 2 * i
        v1, v2 = basis[:, s], basis[:, s + 1]
        angles.append(float(np.arctan2(v2 @ m @ v1, v1 @ m @ v1)))
    return PlaneBlockForm(RotationMatrix(basis), k, tuple(angles))


def rotation_path(r, t: float) -> RotationMatrix:
    """``R0(t)``: the one-parameter subgroup with ``R0(0) = I`` and ``R0(1) = r``."""
    form = plane_block_form(r)
    return RotationMatrix(form.reconstruct(t))


# ------------------------------------------------------------ random rotations


def random_rotation(n: int, rng: np.random.Generator, n_factors: int = 10) -> RotationMatrix:
    """Product of ``n_factors`` elementary rotations with random planes and angles."""
    planes = list(itertools.combinations(range(1, n + 1), 2))
    m = np.eye(n)
    for _ in range(n_factors):
        k, j = planes[rng.integers(len(planes))]
        m = m @ elementary_rotation(n, k, j, rng.uniform(0.0, 2.0 * np.pi)).mat
    return RotationMatrix(m)
