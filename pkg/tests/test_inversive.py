import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffsym.errors import CenterInForbiddenSegment, CenterInversion, GeometryError, NotGreatSphere, NotOnLine
from cliffsym.inversive import (
    InversionSphere,
    SteinerPair,
    SymmetryLine,
    apollonius_circle,
    apollonius_circles,
    circle_intersections,
    conjugate_reflection,
    euclidean_symmetry_check,
    intersection_angle,
    invert,
    reflect_hyperplane,
    steiner_circles,
    symmetry_sphere_at,
)
from cliffsym.stereographic import Circle2, Line2, Plane3, Sphere3, fit_circle

from conftest import random_unit

coord = st.floats(-20, 20, allow_nan=False)


def random_great_sphere(rng):
    a = rng.normal(scale=2.0, size=3)
    return Sphere3(a, float(np.sqrt(1 + a @ a)))


# --------------------------------------------------------------- inversion


def test_invert_examples():
    unit = InversionSphere([0.0, 0.0], 1.0)
    assert np.allclose(invert([2.0, 0.0], unit), [0.5, 0.0])
    s = InversionSphere([1.0, -2.0, 0.5], 1.5)
    p = s.center + 1.5 * np.array([0.6, 0.0, 0.8])
    assert np.allclose(invert(p, s), p, atol=1e-15)


def test_invert_product_of_distances(rng):
    s = InversionSphere(rng.normal(size=3), 2.3)
    p = rng.normal(scale=3, size=(1000, 3))
    q = invert(p, s)
    prod = np.linalg.norm(p - s.center, axis=1) * np.linalg.norm(q - s.center, axis=1)
    assert np.max(np.abs(prod - 2.3**2)) < 1e-10


@given(st.tuples(coord, coord, coord))
def test_invert_involution(p):
    s = InversionSphere([0.3, -0.2, 1.0], 1.7)
    p = np.array(p)
    if np.linalg.norm(p - s.center) < 1e-3:
        return
    assert np.linalg.norm(invert(invert(p, s), s) - p) < 1e-10 * (1 + np.linalg.norm(p))


def test_invert_center_raises():
    with pytest.raises(CenterInversion):
        invert([1.0, 1.0], InversionSphere([1.0, 1.0], 2.0))
    with pytest.raises(GeometryError):
        InversionSphere([0.0, 0.0], 0.0)


def test_invert_maps_spheres_to_spheres(rng):
    s = InversionSphere([0.0, 0.0, 0.0], 1.3)
    for _ in range(20):
        center = rng.normal(scale=2, size=3)
        radius = float(rng.uniform(0.1, 1.0))
        if abs(np.linalg.norm(center) - radius) < 0.05:
            continue
        img = invert(center + radius * random_unit(rng, 3, 64), s)
        c, _ = fit_circle(img)
        d = np.linalg.norm(img - c, axis=1)
        assert np.ptp(d) < 1e-8


# ------------------------------------------------------ hyperplane reflection


def test_reflect_hyperplane_examples(rng):
    n = np.array([1.0, 2.0, -1.0, 0.5])
    x = np.array([2.0, -1.0, 0.0, 0.0])
    assert np.allclose(reflect_hyperplane(x, n), x)
    assert np.allclose(reflect_hyperplane(n, n), -n)
    xs = rng.normal(size=(200, 4))
    assert np.max(np.abs(np.linalg.norm(reflect_hyperplane(xs, n), axis=1) - np.linalg.norm(xs, axis=1))) < 1e-12
    assert np.max(np.abs(reflect_hyperplane(reflect_hyperplane(xs, n), n) - xs)) < 1e-12
    with pytest.raises(GeometryError):
        reflect_hyperplane(x, np.zeros(4))


def test_reflect_hyperplane_keeps_s3(rng):
    x = random_unit(rng, 4, 500)
    n = rng.normal(size=4)
    assert np.max(np.abs(np.linalg.norm(reflect_hyperplane(x, n), axis=1) - 1)) < 1e-12


# ------------------------------------------------------ conjugated reflection


def test_conjugate_matches_invert_on_axis_family(rng):
    for c in (-2.0, 0.0, 0.5, 3.0):
        s = Sphere3([0, 0, c], np.sqrt(1 + c * c))
        p = rng.normal(scale=2, size=(50, 3))
        assert np.max(np.abs(conjugate_reflection(s, p) - invert(p, InversionSphere.from_sphere(s)))) < 1e-10


def test_conjugate_plane_and_unit_sphere():
    assert np.allclose(conjugate_reflection(Plane3([0, 0, 1], 0.0), [1, 2, 3]), [1, 2, -3], atol=1e-14)
    assert np.allclose(conjugate_reflection(Sphere3([0, 0, 0], 1.0), [2, 0, 0]), [0.5, 0, 0], atol=1e-14)


def test_conjugate_random(rng):
    worst = 0.0
    for _ in range(500):
        s = random_great_sphere(rng)
        p = rng.normal(scale=3, size=3)
        worst = max(worst, np.max(np.abs(conjugate_reflection(s, p) - invert(p, InversionSphere.from_sphere(s)))))
    assert worst < 1e-10


def test_conjugate_rejects_small_spheres():
    with pytest.raises(NotGreatSphere):
        conjugate_reflection(Sphere3([0, 0, 0], 2.0), [1, 1, 1])
    with pytest.raises(NotGreatSphere):
        conjugate_reflection(Plane3([0, 0, 1], 1.0), [1, 1, 1])


def test_conjugate_center_raises():
    s = Sphere3([0, 0, 1], np.sqrt(2))
    with pytest.raises(CenterInversion):
        conjugate_reflection(s, [0, 0, 1])


def test_orthogonal_spheres_are_preserved(rng):
    for _ in range(20):
        s = random_great_sphere(rng)
        # a sphere orthogonal to s: |c2 - c|^2 = r^2 + r2^2
        c2 = s.center + rng.normal(scale=3, size=3)
        d2 = float((c2 - s.center) @ (c2 - s.center))
        if d2 <= s.radius**2 + 0.01:
            continue
        r2 = np.sqrt(d2 - s.radius**2)
        pts = c2 + r2 * random_unit(rng, 3, 64)
        img = conjugate_reflection(s, pts)
        assert np.max(np.abs(np.linalg.norm(img - c2, axis=1) - r2)) < 1e-9 * max(1.0, r2)


# ---------------------------------------------------------- symmetry spheres


def test_symmetry_sphere_examples():
    line = SymmetryLine([1.0, 2.0, 0.0], [0.0, 0.0, 1.0], 0.7)
    assert symmetry_sphere_at(line, [1.0, 2.0, 0.0]).radius == pytest.approx(0.7)
    z = SymmetryLine([0, 0, 0], [0, 0, 1], 1.0)
    assert symmetry_sphere_at(z, [0, 0, 1]).radius == pytest.approx(np.sqrt(2))
    for c in (-3.0, 0.25, 2.0):
        s = symmetry_sphere_at(z, [0, 0, c])
        assert np.allclose(s.center, [0, 0, c]) and s.radius == pytest.approx(np.sqrt(1 + c * c))
    with pytest.raises(NotOnLine):
        symmetry_sphere_at(z, [0.1, 0, 0])


def test_symmetry_line_validation():
    with pytest.raises(GeometryError):
        SymmetryLine([0, 0, 0], [0, 0, 2], 1.0)
    with pytest.raises(GeometryError):
        SymmetryLine([0, 0, 0], [0, 0, 1], 0.0)
    assert np.allclose(SymmetryLine.through([0, 0, 0], [0, 0, 2], 1.0).direction, [0, 0, 1])


def test_symmetry_line_from_pair():
    line = SymmetryLine.from_steiner_pair([-1.0, 0.0], [1.0, 0.0])
    assert np.allclose(line.base, 0) and line.rho0 == pytest.approx(1.0)
    assert abs(line.direction @ [1, 0, 0]) < 1e-15
    # every sphere of the family passes through both points
    for t in (-2.0, 0.0, 1.5):
        s = symmetry_sphere_at(line, line.point_at(t))
        assert np.linalg.norm(np.array([1.0, 0, 0]) - s.center) == pytest.approx(s.radius)


# ------------------------------------------------------ Steiner / Apollonius


def test_steiner_examples():
    pair = SteinerPair([-1.0, 0.0], [1.0, 0.0])
    fam = steiner_circles(pair, 6)
    assert len(fam) == 7 and isinstance(fam[-1], Line2)
    assert np.max(fam[-1].distance(np.array([[5.0, 0.0], [-3.0, 0.0]]))) < 1e-15
    for c in fam[:-1]:
        for a in (pair.a1, pair.a2):
            assert abs(np.linalg.norm(a - c.center) - c.radius) < 1e-12
    assert Circle2([0, 1], np.hypot(1, 1)).radius == pytest.approx(np.sqrt(2))
    odd = steiner_circles(pair, 5)
    assert any(np.allclose(c.center, pair.midpoint) for c in odd[:-1])


def test_steiner_errors():
    with pytest.raises(GeometryError):
        SteinerPair([1.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        steiner_circles(SteinerPair([0.0, 0.0], [1.0, 0.0]), 0)


def test_apollonius_examples():
    pair = SteinerPair([-1.0, 0.0], [1.0, 0.0])
    assert apollonius_circle(pair, [2.0, 0.0]).radius == pytest.approx(np.sqrt(3))
    assert apollonius_circle(pair, [1.0 + 1e-10, 0.0]).radius < 1e-4
    with pytest.raises(CenterInForbiddenSegment):
        apollonius_circle(pair, [0.5, 0.0])
    with pytest.raises(NotOnLine):
        apollonius_circle(pair, [2.0, 0.5])


def test_apollonius_ratio_property():
    pair = SteinerPair([-1.0, 0.0], [1.0, 0.0])
    c = apollonius_circle(pair, [3.0, 0.0])
    pts = c.points(32)
    ratio = np.linalg.norm(pts - pair.a1, axis=1) / np.linalg.norm(pts - pair.a2, axis=1)
    assert np.ptp(ratio) < 1e-12


def test_families_are_orthogonal(rng):
    for _ in range(20):
        pair = SteinerPair(rng.normal(size=2), rng.normal(size=2))
        steiner = [c for c in steiner_circles(pair, 6) if isinstance(c, Circle2)]
        for a in apollonius_circles(pair, 6):
            for s in steiner:
                for p in circle_intersections(a, s):
                    assert abs(intersection_angle(a, s, p) - np.pi / 2) < 1e-9


def test_circle_intersections_cases():
    a = Circle2([0.0, 0.0], 1.0)
    assert circle_intersections(a, Circle2([5.0, 0.0], 1.0)).shape == (0, 2)
    assert circle_intersections(a, Circle2([2.0, 0.0], 1.0)).shape == (1, 2)
    pts = circle_intersections(a, Circle2([1.0, 0.0], 1.0))
    assert np.allclose(sorted(pts[:, 1]), [-np.sqrt(3) / 2, np.sqrt(3) / 2])


# ------------------------------------------------------- Euclidean symmetry


def test_euclidean_symmetry():
    t = np.linspace(0, 2 * np.pi, 360, endpoint=False)
    ring = np.column_stack([np.cos(t), np.sin(t)])
    rings = np.vstack([ring, 2.5 * ring])
    step = 2 * np.pi / 360
    assert euclidean_symmetry_check(rings, [0, 0], 8, tol=step * 2.5)
    assert not euclidean_symmetry_check(ring + [0.5, 0.0], [0, 0], 8, tol=0.05)
    assert euclidean_symmetry_check([[1.0, 2.0]], [1.0, 2.0], 5, tol=1e-12)
