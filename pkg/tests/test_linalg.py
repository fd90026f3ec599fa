import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffsym.errors import DeterminantMinusOne, DimensionError, NotOrthogonal
from cliffsym.linalg import (
    RotationMatrix,
    basis_vector,
    elementary_rotation,
    gram_schmidt,
    identity,
    is_rigid_motion_sample_test,
    rotation2,
    trivial_extension,
    validate_rotation,
    vec,
)
from cliffsym.rotations import random_rotation

angles = st.floats(-10, 10, allow_nan=False)
planes = st.sampled_from([(n, k, j) for n in (2, 3, 4) for k in range(1, n + 1) for j in range(k + 1, n + 1)])


def test_elementary_identity_at_zero():
    assert np.array_equal(elementary_rotation(3, 1, 2, 0.0).mat, np.eye(3))


def test_elementary_third_component_is_cos():
    psi = 0.7
    v = elementary_rotation(3, 1, 3, psi).apply(basis_vector(3, 3))
    assert v[2] == pytest.approx(np.cos(psi), abs=1e-15)


def test_xw_quarter_turn():
    r = elementary_rotation(4, 1, 4, np.pi / 2)
    assert np.allclose(r.apply(basis_vector(4, 1)), basis_vector(4, 4), atol=1e-15)
    assert np.allclose(r.apply(basis_vector(4, 4)), -basis_vector(4, 1), atol=1e-15)


@pytest.mark.parametrize("k,j", [(0, 1), (2, 2), (3, 1), (1, 5)])
def test_elementary_bad_indices(k, j):
    with pytest.raises(ValueError):
        elementary_rotation(4, k, j, 0.1)


def test_elementary_bad_dimension():
    with pytest.raises(DimensionError):
        elementary_rotation(5, 1, 2, 0.1)


def test_elementary_outputs_validate_over_grid():
    for n in (2, 3, 4):
        for k in range(1, n + 1):
            for j in range(k + 1, n + 1):
                for psi in np.linspace(0, 2 * np.pi, 32):
                    validate_rotation(elementary_rotation(n, k, j, psi).mat, tol=1e-12)


@given(planes, angles, angles)
def test_elementary_angles_add(plane, a, b):
    n, k, j = plane
    lhs = elementary_rotation(n, k, j, a).mat @ elementary_rotation(n, k, j, b).mat
    assert np.max(np.abs(lhs - elementary_rotation(n, k, j, a + b).mat)) < 1e-12


def test_trivial_extension_matches_xy_block():
    theta = 0.3
    r = trivial_extension(RotationMatrix(rotation2(theta)), 4, [1, 2])
    assert np.allclose(r.mat, elementary_rotation(4, 1, 2, theta).mat, atol=1e-15)


def test_trivial_extension_identity():
    assert np.array_equal(trivial_extension(identity(3), 4, [1, 2, 3]).mat, np.eye(4))


def test_trivial_extension_skips_index():
    # explicit product: rows 1 and 3 of the embedded matrix carry the 2x2 block
    r = trivial_extension(RotationMatrix(rotation2(np.pi / 2)), 3, [1, 3])
    expected = np.array([[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
    assert np.allclose(r.mat, expected, atol=1e-15)
    assert np.allclose(r.apply([1.0, 0.0, 0.0]), [0.0, 0.0, 1.0], atol=1e-15)


@pytest.mark.parametrize("idx", [[1], [1, 1], [2, 1], [0, 1], [3, 5]])
def test_trivial_extension_bad_indices(idx):
    with pytest.raises(ValueError):
        trivial_extension(RotationMatrix(rotation2(0.2)), 4, idx)


def test_trivial_extension_validates(rng):
    for _ in range(50):
        r = random_rotation(3, rng)
        validate_rotation(trivial_extension(r, 4, [1, 2, 4]).mat, tol=1e-12)


def test_validate_identity_and_reflection():
    assert isinstance(validate_rotation(np.eye(3)), RotationMatrix)
    with pytest.raises(DeterminantMinusOne):
        validate_rotation(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(NotOrthogonal):
        validate_rotation(2 * np.eye(2))
    with pytest.raises(DimensionError):
        validate_rotation(np.eye(5))


def test_rigid_motion_sampler(rng):
    pairs = [(rng.normal(size=2), rng.normal(size=2)) for _ in range(20)]
    assert is_rigid_motion_sample_test(lambda x: x + np.array([1.0, 2.0]), pairs)
    assert not is_rigid_motion_sample_test(lambda x: 2 * x, pairs)
    r = random_rotation(4, rng)
    pairs4 = [(rng.normal(size=4), rng.normal(size=4)) for _ in range(100)]
    assert is_rigid_motion_sample_test(r.apply, pairs4, tol=1e-12)
    with pytest.raises(ValueError):
        is_rigid_motion_sample_test(r.apply, pairs4[:1])


def test_polarization_identity(rng):
    for _ in range(200):
        x, y = rng.normal(size=(2, 4))
        pol = 0.5 * (np.dot(x + y, x + y) - np.dot(x, x) - np.dot(y, y))
        assert abs(pol - np.dot(x, y)) < 1e-12


def test_rotations_preserve_orthonormal_bases(rng):
    for n in (2, 3, 4):
        r = random_rotation(n, rng)
        basis = np.array(gram_schmidt(list(rng.normal(size=(n, n)))))
        img = r.apply(basis)
        assert np.max(np.abs(img @ img.T - np.eye(n))) < 1e-12


def test_vec_checks_dimension():
    assert vec([1, 2, 3]).shape == (3,)
    with pytest.raises(DimensionError):
        vec([1.0])
    with pytest.raises(DimensionError):
        vec([1, 2], dim=3)


def test_rotation_matrix_is_read_only_and_composes():
    r = elementary_rotation(3, 1, 2, 0.4)
    with pytest.raises(ValueError):
        r.mat[0, 0] = 2.0
    assert np.allclose((r @ r.T).mat, np.eye(3), atol=1e-15)
    with pytest.raises(DimensionError):
        r.apply(np.zeros(4))
