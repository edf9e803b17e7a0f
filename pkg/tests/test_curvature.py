import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from kaehlersym.curvature import (
    DegeneratePlaneError,
    Plane,
    holomorphic_sectional_curvature,
    loop_curve,
    parallel_transport,
    polynomial_curve,
    sectional_curvature,
    transport_path,
)
from kaehlersym.geometry import DomainError, parse_manifold_id, point_frame

CPN = parse_manifold_id("cpn:n=2,c=4")
BUMP = parse_manifold_id("cpn-bump")


def test_degenerate_plane_raises():
    f = point_frame(CPN, np.zeros(4))
    v = np.array([1.0, 0, 0, 0])
    with pytest.raises(DegeneratePlaneError):
        sectional_curvature(f, Plane(v, 2 * v))
    with pytest.raises(DegeneratePlaneError):
        holomorphic_sectional_curvature(f, np.zeros(4))


def test_cpn_sectional_curvature_range(rng):
    # R = c~ Pi gives K(v, w) = c~ (1 + 3 g(v, Jw)^2) / 4 on orthonormal pairs
    f = point_frame(CPN, np.array([0.3, -0.2, 0.5, 0.1])).orthonormal()
    for _ in range(50):
        v, w = rng.normal(size=(2, 4))
        v /= np.linalg.norm(v)
        w -= (w @ v) * v
        w /= np.linalg.norm(w)
        expected = 4.0 * (1 + 3 * (v @ f.J @ w) ** 2) / 4.0
        assert sectional_curvature(f, Plane(v, w)) == pytest.approx(expected, rel=1e-10)


def test_holomorphic_sectional_curvature_constant_on_cpn(rng):
    for p in CPN.sample_points(3, rng):
        f = point_frame(CPN, p)
        for u in rng.normal(size=(10, 4)):
            assert holomorphic_sectional_curvature(f, u) == pytest.approx(4.0, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4), st.integers(0, 2**32 - 1))
def test_sectional_curvature_independent_of_basis(coeffs, seed):
    a, b, c, d = coeffs
    assume(abs(a * d - b * c) > 1e-2)
    rng = np.random.default_rng(seed)
    f = point_frame(BUMP, BUMP.sample_points(1, rng)[0])
    plane = Plane(*rng.normal(size=(2, 4)))
    assert sectional_curvature(f, plane.rebased(a, b, c, d)) == pytest.approx(
        sectional_curvature(f, plane), rel=1e-8, abs=1e-10)


def test_transport_on_flat_is_identity():
    flat = parse_manifold_id("flat:n=2")
    curve = polynomial_curve(np.zeros(4), [np.ones(4), -np.ones(4)])
    out = parallel_transport(flat, curve, [np.array([1.0, 2, 3, 4])])
    np.testing.assert_allclose(out[0], [1, 2, 3, 4])


def test_transport_preserves_metric_and_commutes_with_J(rng):
    start = np.array([0.2, 0.1, -0.3, 0.2])
    curve = polynomial_curve(start, [np.array([0.3, -0.2, 0.1, 0.4]), np.array([0.0, 0.2, -0.1, 0])])
    f0 = point_frame(BUMP, start)
    u, w = rng.normal(size=(2, 4))
    end, V = transport_path(BUMP, curve, [u, w, f0.J @ u])
    f1 = point_frame(BUMP, end)
    assert V[0] @ f1.g @ V[1] == pytest.approx(u @ f0.g @ w, rel=1e-7)
    assert V[0] @ f1.g @ V[0] == pytest.approx(u @ f0.g @ u, rel=1e-7)
    np.testing.assert_allclose(f1.J @ V[0], V[2], atol=1e-7)


def test_transport_converges_with_steps():
    start = np.array([0.2, 0.1, -0.3, 0.2])
    coeffs = [np.array([0.3, -0.2, 0.1, 0.4])]
    u = np.array([1.0, 0.0, 0.0, 0.0])
    coarse = parallel_transport(BUMP, polynomial_curve(start, coeffs, steps=50), [u])[0]
    fine = parallel_transport(BUMP, polynomial_curve(start, coeffs, steps=200), [u])[0]
    assert np.abs(coarse - fine).max() < 1e-6


def test_curve_leaving_domain_raises():
    chn = parse_manifold_id("chn:n=1,c=-4")
    curve = polynomial_curve(np.zeros(2), [np.array([2.0, 0.0])])
    with pytest.raises(DomainError):
        parallel_transport(chn, curve, [np.array([1.0, 0.0])])


def test_loop_holonomy_on_sphere_rotates_by_enclosed_curvature():
    s2 = parse_manifold_id("cpn:n=1,c=1")  # round sphere of radius 1
    rho = 0.5
    curve = loop_curve(np.array([rho, 0.0]), np.array([1.0, 0]), np.array([0, 1.0]), rho,
                       steps=400)
    end, V = transport_path(s2, curve, [np.array([1.0, 0.0])])
    np.testing.assert_allclose(end, [rho, 0.0], atol=1e-12)
    # area of |z| < rho for g = 4 |dz|^2 / (1 + |z|^2)^2; K = 1
    area = 4 * np.pi * rho**2 / (1 + rho**2)
    angle = np.arctan2(V[0][1], V[0][0])
    assert angle == pytest.approx(area, rel=1e-6)
