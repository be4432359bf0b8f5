import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from annulus_harmonics.cross_product import AnnulusGeometry, u_big
from annulus_harmonics.errors import DomainError, QuadratureError
from annulus_harmonics.green import Pole, ReducedPoint, term_u
from annulus_harmonics.oracles import (
    Bump,
    curve_shape,
    fd_laplacian,
    fd_laplacian_cartesian,
    gauss_legendre,
    green_constant,
    green_identity,
    quad_adaptive,
    unit_sphere_area,
)
from annulus_harmonics.zeros import rho_zeros


def test_quad_known_integrals(geom2):
    assert quad_adaptive(np.sin, 0, math.pi, 1e-13).value == pytest.approx(2, abs=1e-12)
    assert quad_adaptive(lambda t: t * (t - 1 / t), 1, 2, 1e-13).value == pytest.approx(4 / 3, abs=1e-12)
    q = quad_adaptive(lambda t: u_big(0.5, math.pi, t, geom2) ** 2 * t, 1, 2, 1e-13)
    assert q.value == pytest.approx(1 / math.pi**4, rel=1e-11)
    assert q.error_estimate >= 0 and q.panels >= 1


def test_quad_scalar_callable():
    q = quad_adaptive(math.exp, 0, 1, 1e-12, vectorized=False)
    assert q.value == pytest.approx(math.e - 1, rel=1e-12)


def test_quad_handles_kink():
    q = quad_adaptive(lambda t: np.abs(t - 0.3), 0, 1, 1e-10)
    assert q.value == pytest.approx(0.29, rel=1e-9)


def test_quad_panel_cap():
    with pytest.raises(QuadratureError):
        quad_adaptive(lambda t: np.sin(1 / t), 1e-8, 1, 1e-14, max_panels=20)
    with pytest.raises(DomainError):
        quad_adaptive(np.sin, 1, 0)


def test_gauss_legendre_exact_for_polynomials():
    x, w = gauss_legendre(5, -1, 3)
    assert np.dot(w, x**9) == pytest.approx((3**10 - 1) / 10, rel=1e-13)


def test_constants():
    assert unit_sphere_area(2) == pytest.approx(2 * math.pi)
    assert unit_sphere_area(3) == pytest.approx(4 * math.pi)
    assert green_constant(2) == pytest.approx(2 * math.pi)
    assert green_constant(3) == pytest.approx(4 * math.pi)
    assert green_constant(4) == pytest.approx(4 * math.pi**2)


def test_fd_polynomials():
    lap, _ = fd_laplacian_cartesian(lambda p: np.sum(p * p, axis=1), [0.1, 0.2, 0.3], 1e-3)
    assert lap == pytest.approx(6, abs=1e-6)
    lap, _ = fd_laplacian_cartesian(lambda p: p[:, 0] * p[:, 1], [0.1, 0.2, 0.3], 1e-3)
    assert abs(lap) < 1e-9


def test_fd_second_order():
    f = lambda p: np.cos(p[:, 0]) * np.exp(p[:, 1]) + p[:, 2] ** 4
    x0 = [0.4, -0.3, 0.5]
    exact = 12 * 0.25
    e = [abs(fd_laplacian_cartesian(f, x0, h)[0] - exact) for h in (4e-2, 2e-2, 1e-2)]
    assert e[0] / e[1] == pytest.approx(4, rel=0.05)
    assert e[1] / e[2] == pytest.approx(4, rel=0.05)


@pytest.mark.parametrize("dim", [3, 4, 5])
def test_fd_reduced_coordinates(dim):
    # |x|^2 in R^dim written in (r, gamma, z) has Laplacian 2 dim
    u = lambda r, g, z: r * r + z * z
    lap, _ = fd_laplacian(u, ReducedPoint(1.3, 0.4, 0.7), 1e-3, dim)
    assert lap == pytest.approx(2 * dim, rel=1e-6)


def test_fd_reduced_rejects_pole_plane():
    with pytest.raises(DomainError):
        fd_laplacian(lambda r, g, z: r, ReducedPoint(1.3, 0.4, 0.0005), 1e-3, 3, pole_z=0.0)


@pytest.mark.parametrize("n,m", [(0, 1), (1, 1), (3, 2)])
def test_term_is_harmonic(n, m, geom2):
    pole = Pole(1.5, 0.0)
    zero = rho_zeros(float(n), geom2, m)[m - 1]

    def u(r, g, z):
        return np.array([term_u(n, zero, pole, ReducedPoint(ri, gi, zi), geom2) for ri, gi, zi in zip(r, g, z)])

    lap, scale = fd_laplacian(u, ReducedPoint(1.35, 0.6, 0.8), 1e-3, 3, pole_z=0.0)
    assert abs(lap) < 1e-4 * scale


def test_bump_laplacian_matches_fd():
    b = Bump((0.2, -0.1, 0.4), 0.5)
    for p in ([0.3, 0.0, 0.5], [0.2, -0.1, 0.4], [0.0, 0.1, 0.3]):
        fd, _ = fd_laplacian_cartesian(b.value, p, 1e-4)
        assert float(b.laplacian(np.array([p]))[0]) == pytest.approx(fd, rel=1e-5)
    assert float(b.value(np.array([[1.0, 1.0, 1.0]]))[0]) == 0.0


def test_classical_kernels():
    _, err2 = green_identity(lambda p: -np.log(np.linalg.norm(p, axis=1)), np.zeros(2), Bump((0.0, 0.0), 0.5), 96, 64, 2 * math.pi)
    assert err2 < 1e-2
    _, err3 = green_identity(lambda p: 1 / np.linalg.norm(p, axis=1), np.zeros(3), Bump((0.0, 0.0, 0.0), 0.5), 64, 32, 4 * math.pi)
    assert err3 < 1e-2
    assert green_identity(lambda p: 1 / np.linalg.norm(p, axis=1), np.zeros(3), Bump((0.0, 0.0, 0.0), 0.5), 32, 16) > 0


def test_curve_shape_examples():
    xs = np.array([1.5, 2, 3, 4])
    dec, conv, m = curve_shape(np.column_stack([xs, 1 / xs]))
    assert dec and conv and m > 0
    xs = np.linspace(1.2, 5, 20)
    dec, conv, m = curve_shape(np.column_stack([xs, 2 * math.pi / (xs - 1)]))
    assert dec and conv and m > 0
    dec, conv, m = curve_shape(np.column_stack([xs, -xs]))
    assert dec and conv and abs(m) < 1e-10


def test_curve_shape_detects_concavity():
    xs = np.linspace(0, 1, 10)
    dec, conv, _ = curve_shape(np.column_stack([xs, -(xs**2)]))
    assert dec and not conv
    with pytest.raises(DomainError):
        curve_shape([(0, 1), (1, 0)])
    with pytest.raises(DomainError):
        curve_shape([(0, 1), (0, 0), (1, 0)])


@given(st.floats(0.5, 2.0), st.floats(-3, 3))
def test_quad_polynomial_property(a, c):
    q = quad_adaptive(lambda t: c * t**3 + 1, a, a + 1, 1e-12).value
    exact = c * ((a + 1) ** 4 - a**4) / 4 + 1
    assert q == pytest.approx(exact, rel=1e-11, abs=1e-12)
