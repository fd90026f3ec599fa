"""Small fixed-dimension linear algebra on numpy arrays.

Vectors are plain 1-d float arrays of length 2, 3 or 4. Matrices act on column
vectors from the left. Coordinate indices in the public API are 1-based, as in
the usual ``R^{kj}`` notation for elementary rotations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DeterminantMinusOne, DimensionError, NotOrthogonal

DIMENSIONS = (2, 3, 4)
DEFAULT_TOL = 1e-9


def vec(components: Iterable[float], dim: int | None = None) -> np.ndarray:
    v = np.array(list(components) if not isinstance(components, np.ndarray) else components, dtype=float)
    if v.ndim != 1 or v.shape[0] not in DIMENSIONS:
        raise DimensionError(f"expected a vector of dimension 2, 3 or 4, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {v.shape[0]}")
    return v


def basis_vector(n: int, k: int) -> np.ndarray:
    """The 1-based standard basis vector e_k of R^n."""
    e = np.zeros(n)
    e[k - 1] = 1.0
    return e


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] not in DIMENSIONS:
        raise DimensionError(f"matrix dimension must be 2, 3 or 4, got {a.shape[0]}")
    return a


def orthogonality_defect(m: np.ndarray) -> float:
    """Max-norm of M^T M - I."""
    return float(np.max(np.abs(m.T @ m - np.eye(m.shape[0]))))


@dataclass(frozen=True, eq=False)
class RotationMatrix:
    """An element of SO(n), n in {2, 3, 4}.

    Construct through :func:`validate_rotation` (or the helpers in this
    module); the constructor itself does not check anything.
    """

    mat: np.ndarray
    tol: float = field(default=DEFAULT_TOL)

    def __post_init__(self):
        m = np.array(self.mat, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def T(self) -> "RotationMatrix":
        return RotationMatrix(self.mat.T, self.tol)

    inverse = T

    def apply(self, points) -> np.ndarray:
        """Apply to one vector (shape (n,)) or a stack of row vectors (shape (m, n))."""
        p = np.asarray(points, dtype=float)
        if p.shape[-1] != self.dim:
            raise DimensionError(f"cannot apply a {self.dim}x{self.dim} rotation to shape {p.shape}")
        return p @ self.mat.T

    def __matmul__(self, other):
        if isinstance(other, RotationMatrix):
            if other.dim != self.dim:
                raise DimensionError("cannot compose rotations of different dimension")
            return RotationMatrix(self.mat @ other.mat, max(self.tol, other.tol))
        return self.apply(other)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.mat, dtype=dtype)

    def __repr__(self):
        rows = ", ".join(np.array2string(r, precision=6, separator=", ") for r in self.mat)
        return f"RotationMatrix([{rows}])"

    def max_abs_diff(self, other) -> float:
        return float(np.max(np.abs(self.mat - np.asarray(other, dtype=float))))


def identity(n: int) -> RotationMatrix:
    if n not in DIMENSIONS:
        raise DimensionError(f"dimension must be 2, 3 or 4, got {n}")
    return RotationMatrix(np.eye(n))


def validate_rotation(m, tol: float = DEFAULT_TOL) -> RotationMatrix:
    """Wrap ``m`` as a rotation if it is orthogonal with determinant +1.

    Raises :class:`NotOrthogonal` when ``||M^T M - I||_inf > tol`` and
    :class:`DeterminantMinusOne` when the matrix is orthogonal but reverses
    orientation.
    """
    a = as_matrix(m)
    defect = orthogonality_defect(a)
    if defect > tol:
        raise NotOrthogonal(f"||M^T M - I||_inf = {defect:.3e} exceeds tolerance {tol:.1e}")
    det = float(np.linalg.det(a))
    if abs(det - 1.0) > tol:
        if abs(det + 1.0) <= tol:
            raise DeterminantMinusOne(f"det M = {det:.12g}; matrix is a reflection, not a rotation")
        raise NotOrthogonal(f"det M = {det:.12g}")
    return RotationMatrix(a, tol)


def elementary_rotation(n: int, k: int, j: int, psi: float) -> RotationMatrix:
    """Rotation by ``psi`` of the (e_k, e_j) coordinate plane of R^n.

    The matrix has cos(psi) at (k,k) and (j,j), -sin(psi) at (k,j) and
    sin(psi) at (j,k). Indices are 1-based with ``k < j``.
    """
    if n not in DIMENSIONS:
        raise DimensionError(f"dimension must be 2, 3 or 4, got {n}")
    if not (1 <= k < j <= n):
        raise ValueError(f"need 1 <= k < j <= n, got k={k}, j={j}, n={n}")
    m = np.eye(n)
    c, s = np.cos(psi), np.sin(psi)
    m[k - 1, k - 1] = c
    m[j - 1, j - 1] = c
    m[k - 1, j - 1] = -s
    m[j - 1, k - 1] = s
    return RotationMatrix(m)


def rotation2(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def trivial_extension(r: RotationMatrix, target_dim: int, indices: Sequence[int]) -> RotationMatrix:
    """Embed a k-dimensional rotation into R^n acting on the coordinates ``indices``.

    ``indices`` are 1-based and strictly increasing; ``e_{indices[l]}`` plays
    the role of ``e_{l+1}`` and every other basis vector is fixed.
    """
    src = r.mat if isinstance(r, RotationMatrix) else as_matrix(r)
    k = src.shape[0]
    idx = list(indices)
    if len(idx) != k:
        raise ValueError(f"need {k} indices for a {k}-dimensional rotation, got {len(idx)}")
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate indices in {idx}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"indices must be strictly increasing, got {idx}")
    if target_dim not in DIMENSIONS or k > target_dim:
        raise DimensionError(f"cannot extend dimension {k} to {target_dim}")
    if idx[0] < 1 or idx[-1] > target_dim:
        raise ValueError(f"indices {idx} out of range for dimension {target_dim}")
    out = np.eye(target_dim)
    pos = np.array(idx) - 1
    out[np.ix_(pos, pos)] = src
    return RotationMatrix(out)


def is_rigid_motion_sample_test(
    f: Callable[[np.ndarray], np.ndarray],
    samples: Sequence[tuple[Sequence[float], Sequence[float]]],
    tol: float = 1e-12,
) -> bool:
    """Check ``|f(x) - f(y)| == |x - y|`` on every sampled pair within ``tol``."""
    if len(samples) < 2:
        raise ValueError("need at least two sample pairs")
    for x, y in samples:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        d0 = np.linalg.norm(x - y)
        d1 = np.linalg.norm(np.asarray(f(x)) - np.asarray(f(y)))
        if abs(d1 - d0) > tol * max(1.0, d0):
            return False
    return True


def gram_schmidt(vectors: Sequence[np.ndarray], tol: float = 1e-10) -> list[np.ndarray]:
    """Orthonormalize in order, dropping vectors that are (numerically) dependent."""
    out: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for _ in range(2):
            for u in out:
                w = w - np.dot(u, w) * u
        n = np.linalg.norm(w)
        if n > tol:
            out.append(w / n)
    return out
