import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annulus_harmonics.cross_product import (
    AnnulusGeometry,
    de_coefficients,
    modulus_phase,
    ode_residual,
    u_big,
    u_big_drho,
    u_big_dt,
    u_big_eigen,
    u_big_phase,
    u_small,
    u_small_partials,
)
from annulus_harmonics.errors import DomainError
from annulus_harmonics.special_functions import bessel_j, bessel_y, nicholson_n
from annulus_harmonics.zeros import rho_zeros


def test_geometry_validation():
    with pytest.raises(DomainError):
        AnnulusGeometry(1.0)
    g = AnnulusGeometry(3.0, 5)
    assert g.nu_n(2) == 3.0
    assert g.boundary_distance(1.4) == pytest.approx(0.4)


@given(st.floats(0, 12), st.floats(0.1, 40))
def test_u_big_vanishes_at_outer_wall(nu, rho):
    assert u_big(nu, rho, 2.0, AnnulusGeometry(2.0)) == 0.0


def test_u_big_half_order_closed_form(geom2):
    assert abs(u_big(0.5, math.pi, 1.0, geom2)) < 1e-13
    assert u_big(0.5, math.pi / 2, 1.0, geom2) == pytest.approx(4 / (math.pi**2 * math.sqrt(2)), rel=1e-13)
    t = np.linspace(0.3, 2.0, 30)
    rho = 2.7
    closed = 2 / (math.pi * rho * np.sqrt(2 * t)) * np.sin(rho * (2 - t))
    np.testing.assert_allclose(u_big(0.5, rho, t, geom2), closed, rtol=1e-11, atol=1e-15)


def test_u_big_dt_half_order(geom2):
    rho, t = math.pi, 1.0
    c = 2 / (math.pi * rho * math.sqrt(2))
    expected = c * (-0.5 * t**-1.5 * math.sin(rho * (2 - t)) - rho * t**-0.5 * math.cos(rho * (2 - t)))
    assert u_big_dt(0.5, rho, t, geom2) == pytest.approx(expected, rel=1e-12)


def test_u_big_dt_finite_difference(geom2):
    h = 1e-6
    fd = (u_big(2, 5.0, 1.3 + h, geom2) - u_big(2, 5.0, 1.3 - h, geom2)) / (2 * h)
    assert u_big_dt(2, 5.0, 1.3, geom2) == pytest.approx(fd, rel=1e-7)


def test_u_big_drho_finite_difference():
    g = AnnulusGeometry(2.7)
    h = 1e-6
    for nu, rho in ((0.0, 3.1), (1.5, 7.2), (4.0, 2.2)):
        fd = (u_big(nu, rho + h, 1.0, g) - u_big(nu, rho - h, 1.0, g)) / (2 * h)
        assert u_big_drho(nu, rho, 1.0, g) == pytest.approx(fd, rel=1e-6)


def test_squared_derivative_at_zero(geom2):
    rho = rho_zeros(1, geom2, 1)[0].value
    lhs = u_big_dt(1, rho, 1.0, geom2) ** 2
    rhs = 4 / math.pi**2 * nicholson_n(1, 2 * rho) / nicholson_n(1, rho)
    assert lhs == pytest.approx(rhs, rel=1e-10)


@pytest.mark.parametrize("nu", [0.0, 1.0, 3.7])
def test_u_big_against_mpmath(nu):
    g = AnnulusGeometry(1.8)
    rho, t = 4.3, 1.25
    mp = mpmath.besselj(nu, rho * t) * mpmath.bessely(nu, rho * 1.8) - mpmath.besselj(nu, rho * 1.8) * mpmath.bessely(nu, rho * t)
    assert u_big(nu, rho, t, g) == pytest.approx(float(mp), rel=1e-10)


def test_phase_form_matches_direct():
    # cancellation guard: agreement relative to the modulus product when rho (b - 1) > 5
    for nu in (0.0, 1.0, 4.5):
        for b in (1.2, 2.0, 4.0):
            g = AnnulusGeometry(b)
            for rho in np.linspace(5.5 / (b - 1), 200.0, 25):
                t = np.linspace(1.0, b, 9)
                direct = u_big(nu, rho, t, g)
                phase = u_big_phase(nu, rho, t, g)
                mt, _, _ = modulus_phase(nu, rho * t)
                mb, _, _ = modulus_phase(nu, rho * b)
                assert np.all(np.abs(direct - phase) <= 1e-9 * mt * mb)


def test_eigen_form_matches_direct_at_eigenvalues():
    g = AnnulusGeometry(2.0)
    t = np.linspace(1.0, 2.0, 17)
    for nu in (0.0, 2.0, 10.0):
        for z in rho_zeros(nu, g, 8).zeros:
            direct = u_big(nu, z.value, t, g)
            eig = u_big_eigen(nu, z.value, t, g)
            scale = math.sqrt(nicholson_n(nu, z.value) * nicholson_n(nu, 2 * z.value))
            assert np.max(np.abs(direct - eig)) < 1e-10 * scale


def test_eigen_form_is_stable_in_evanescent_zone():
    # rho t < nu: the direct difference of products cancels, the eigen form does not
    g = AnnulusGeometry(2.0)
    nu = 60.0
    rho = rho_zeros(nu, g, 1)[0].value
    t = 0.5

    def cross(r, tt):
        return mpmath.besselj(nu, r * tt) * mpmath.bessely(nu, 2 * r) - mpmath.besselj(nu, 2 * r) * mpmath.bessely(nu, r * tt)

    # the reference needs the eigenvalue itself, not its double rounding:
    # away from an eigenvalue the growing Y(rho t) component dominates
    with mpmath.workdps(40):
        mp_rho = mpmath.findroot(lambda r: cross(r, 1), mpmath.mpf(rho))
        ref = float(cross(mp_rho, t))
    assert u_big_eigen(nu, rho, t, g) == pytest.approx(ref, rel=1e-6)


def test_u_small_examples():
    assert u_small(2.5, 1.0, 3.0) == 0.0
    assert u_small(0.5, 2.0, math.pi / 2) == pytest.approx(4 / math.pi**2, rel=1e-13)


@pytest.mark.parametrize("nu", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("y", [1.0, 5.0])
def test_u_x_at_inner_wall(nu, y):
    assert u_small_partials(nu, 1.0, y)[1] == pytest.approx(2 / math.pi, rel=1e-10)


@settings(max_examples=40)
@given(st.floats(0, 6), st.floats(1.05, 4.0), st.floats(0.5, 15.0))
def test_composed_form(nu, x, y):
    # u = sqrt(x) (a f + b g) with a = J(y), b = Y(y), f = Y(xy), g = -J(xy)
    a, b = bessel_j(nu, y), bessel_y(nu, y)
    f, g = bessel_y(nu, x * y), -bessel_j(nu, x * y)
    composed = math.sqrt(x) * (a * f + b * g)
    scale = math.sqrt(x) * (abs(a * f) + abs(b * g))
    assert abs(u_small(nu, x, y) - composed) <= 1e-12 * scale


@settings(max_examples=40)
@given(st.floats(0, 6), st.floats(1.1, 4.0), st.floats(0.5, 15.0))
def test_partials_against_finite_differences(nu, x, y):
    u, ux, uy, uxy, uyy = u_small_partials(nu, x, y)
    h = 1e-5
    fx = (u_small(nu, x + h, y) - u_small(nu, x - h, y)) / (2 * h)
    fy = (u_small(nu, x, y + h) - u_small(nu, x, y - h)) / (2 * h)
    fyy = (u_small(nu, x, y + h) - 2 * u + u_small(nu, x, y - h)) / h**2
    hx = 1e-4
    fxy = (u_small_partials(nu, x + hx, y)[2] - u_small_partials(nu, x - hx, y)[2]) / (2 * hx)
    scale = max(1.0, abs(u), abs(ux), abs(uy))
    assert abs(ux - fx) < 1e-6 * scale
    assert abs(uy - fy) < 1e-6 * scale
    assert abs(uyy - fyy) < 1e-3 * max(scale, abs(uyy))
    assert abs(uxy - fxy) < 1e-5 * max(scale, abs(uxy))


def test_de_coefficient_signs():
    c = de_coefficients(1, 2.0, 3.0)
    assert c.p_tilde > 0
    assert c.p_tilde_prime < 0
    assert c.p_tilde == pytest.approx(2 / (math.pi * 3.0) * (nicholson_n(1, 3.0) - nicholson_n(1, 6.0)), rel=1e-10)
    assert c.q_potential == pytest.approx((1 - 0.25) / 4 - 9)


def test_ode_residual_example():
    res, scale = ode_residual(2, 1.7, 4.2)
    assert abs(res) < 1e-8 * scale


@settings(max_examples=80)
@given(st.floats(0.5, 8.0), st.floats(1.05, 5.0), st.floats(0.1, 30.0))
def test_ode_residual_and_signs_on_grid(nu, x, y):
    res, scale = ode_residual(nu, x, y)
    assert abs(res) <= 1e-8 * scale
    c = de_coefficients(nu, x, y)
    assert c.p_tilde > 0 and c.p_tilde_prime < 0


def test_domain_errors():
    with pytest.raises(DomainError):
        de_coefficients(1, 1.0, 2.0)
    with pytest.raises(DomainError):
        u_big(1, -1.0, 1.0, AnnulusGeometry(2.0))
