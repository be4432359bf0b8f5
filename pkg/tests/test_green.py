import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annulus_harmonics.cross_product import AnnulusGeometry
from annulus_harmonics.errors import DomainError, PolePlaneError, RegionError, TruncationError
from annulus_harmonics.green import (
    Pole,
    ReducedPoint,
    TruncationSpec,
    annulus_tail_bound,
    extend_green,
    green_annulus,
    green_cylinder,
    green_cylinder_field,
    in_region_l,
    mode_data,
    normalization,
    term_u,
)
from annulus_harmonics.oracles import fd_laplacian, gauss_legendre, green_constant
from annulus_harmonics.special_functions import gegenbauer
from annulus_harmonics.suites import annulus_identity
from annulus_harmonics.zeros import rho_zeros

POLE = Pole(1.5, 0.0)


def test_types_validate():
    with pytest.raises(DomainError):
        ReducedPoint(1.2, 1.5, 0.0)
    with pytest.raises(DomainError):
        Pole(0.9, 0.0)
    with pytest.raises(DomainError):
        TruncationSpec(n_max=0)
    with pytest.raises(DomainError):
        Pole(2.5).check(AnnulusGeometry(2.0))
    assert Pole(1.2).d(AnnulusGeometry(2.0)) == pytest.approx(0.2)


def test_normalization_constants():
    assert normalization(2).a_n == pytest.approx(2 * math.pi)
    assert normalization(3).a_n == pytest.approx(4 * math.pi)
    assert normalization(3).sigma_n == pytest.approx(4 * math.pi)
    assert normalization(5).a_n == pytest.approx(green_constant(5))


# -- annulus ---------------------------------------------------------------


@pytest.mark.parametrize("dim", [3, 4, 5])
def test_annulus_vanishes_on_walls(dim):
    g = AnnulusGeometry(2.0, dim)
    vals = green_annulus(g, (np.array([1.0, 2.0]), np.array([0.3, -0.4])), 1.6, 200)
    np.testing.assert_allclose(vals, 0.0, atol=1e-15)
    near = green_annulus(g, (1.0 + 1e-9, 0.3), 1.6, 200)
    assert abs(near) < 1e-8


@pytest.mark.parametrize("dim", [3, 4, 5])
def test_annulus_symmetry(dim):
    g = AnnulusGeometry(2.0, dim)
    a = green_annulus(g, (1.3, 0.5), 1.6, 200)
    b = green_annulus(g, (1.6, 0.5), 1.3, 200)
    assert abs(a - b) < 1e-10
    assert a > 0


def test_annulus_matches_log_kernel_near_pole():
    # G_A(x', y') + log|x' - y'| is smooth at the pole, so its difference
    # quotients stay bounded as x' approaches y'
    g = AnnulusGeometry(2.0)
    vals = []
    for h in (1e-2, 5e-3, 2.5e-3):
        v = green_annulus(g, (1.5 + h, 1.0), 1.5, 20_000, tail_tol=None)
        vals.append(v + math.log(h))
    assert abs(vals[1] - vals[2]) < 0.6 * abs(vals[0] - vals[1]) + 1e-6


def test_annulus_tail_bound_controls_truncation():
    g = AnnulusGeometry(2.0, 4)
    exact = green_annulus(g, (1.3, 0.8), 1.6, 400)
    for n in (10, 20, 40):
        approx_ = green_annulus(g, (1.3, 0.8), 1.6, n, tail_tol=None)
        assert abs(exact - approx_) <= annulus_tail_bound(g, 1.3, 1.6, n)


def test_annulus_refuses_pole():
    g = AnnulusGeometry(2.0)
    with pytest.raises(TruncationError):
        green_annulus(g, (1.5, 1.0), 1.5, 100)
    with pytest.raises(DomainError):
        green_annulus(g, (2.5, 1.0), 1.5, 100)


def test_annulus_green_identity():
    measured = annulus_identity(n_modes=400)
    assert measured == pytest.approx(normalization(2).a_n, rel=1e-2)


# -- terms -------------------------------------------------------------------


def test_term_vanishes_on_walls(geom2):
    z = rho_zeros(2.0, geom2, 3)[2]
    assert term_u(2, z, POLE, ReducedPoint(1.0, 0.3, 1.0), geom2) == 0.0
    assert abs(term_u(2, z, POLE, ReducedPoint(2.0, 0.3, 1.0), geom2)) < 1e-15


def test_term_axial_decay(geom2):
    z = rho_zeros(0.0, geom2, 1)[0]
    near = term_u(0, z, POLE, ReducedPoint(1.3, 0.2, 1.0), geom2)
    far = term_u(0, z, POLE, ReducedPoint(1.3, 0.2, 5.0), geom2)
    assert far == pytest.approx(near * math.exp(-4 * z.value), rel=1e-12)


def test_term_rejects_wrong_order(geom2):
    z = rho_zeros(1.0, geom2, 1)[0]
    with pytest.raises(DomainError):
        term_u(2, z, POLE, ReducedPoint(1.3, 0.2, 1.0), geom2)


@pytest.mark.parametrize("dim", [3, 4])
def test_term_magnitude_constant_stable(dim):
    # |term| <= C P_n(1) rho^3 d(y') e^{-rho |dz|}: a constant fitted on a
    # small index block bounds the full block, and it levels off as d -> 0
    g = AnnulusGeometry(2.0, dim)
    x_r = np.linspace(1.02, 1.98, 25)
    consts = {}
    for ry in (1.5, 1.2, 1.05):
        pole = Pole(ry, 0.0)
        d = pole.d(g)
        c = np.zeros((11, 10))
        for n in range(11):
            pn1 = gegenbauer(n, (dim - 3) / 2, 1.0) if dim > 3 else 1.0
            for z in rho_zeros(g.nu_n(n), g, 10).zeros:
                t = max(abs(term_u(n, z, pole, ReducedPoint(r, 1.0, 0.0 + 1.0), g)) for r in x_r)
                c[n, z.index - 1] = t / (pn1 * z.value**3 * d * math.exp(-z.value))
        consts[ry] = c
    for c in consts.values():
        assert c.max() <= c[:6, :5].max()
    assert consts[1.05].max() < 1.2 * consts[1.2].max()
    assert consts[1.05].max() < 2 * consts[1.5].max()


# -- cylinder ----------------------------------------------------------------


def test_cylinder_example(geom2):
    res = green_cylinder(geom2, ReducedPoint(1.4, 0.9, 0.8), POLE, TruncationSpec(40, 60))
    assert res.value > 0
    assert res.tail_estimate < 1e-6
    assert res.terms_used == 41 * 60


def test_cylinder_vanishes_on_walls(geom2):
    for r in (1.0, 2.0):
        v = green_cylinder(geom2, ReducedPoint(r, 0.4, 0.7), POLE).value
        assert abs(v) < 1e-15


@settings(max_examples=12, deadline=None)
@given(st.floats(1.1, 1.9), st.floats(1.1, 1.9), st.floats(-1, 1), st.sampled_from([-1.0, 1.0]))
def test_cylinder_symmetry(r1, r2, gamma, dz):
    g = AnnulusGeometry(2.0)
    a = green_cylinder(g, ReducedPoint(r1, gamma, dz), Pole(r2, 0.0)).value
    b = green_cylinder(g, ReducedPoint(r2, gamma, 0.0), Pole(r1, dz)).value
    assert abs(a - b) < 1e-6


def test_cylinder_positive_inside(geom2):
    r = np.linspace(1.05, 1.95, 7)
    for gamma in (1.0, 0.0, -1.0):
        vals = green_cylinder_field(geom2, r, gamma, 0.9, POLE)
        assert np.all(vals > 0)


def test_cylinder_refuses_pole_plane(geom2):
    with pytest.raises(PolePlaneError):
        green_cylinder(geom2, ReducedPoint(1.4, 0.9, 0.005), POLE)
    with pytest.raises(TruncationError):
        green_cylinder(geom2, ReducedPoint(1.4, 0.9, 0.05), POLE)
    with pytest.raises(DomainError):
        green_cylinder(geom2, ReducedPoint(2.4, 0.9, 1.0), POLE)


def test_tail_estimate_bounds_true_error(geom2):
    ref = TruncationSpec(n_max=80, m_max=150, tail_tol=1.0)
    for dz in (0.3, 0.5, 0.8):
        x = ReducedPoint(1.4, 0.9, dz)
        truth = green_cylinder(geom2, x, POLE, ref).value
        res = green_cylinder(geom2, x, POLE, TruncationSpec(tail_tol=1.0))
        assert abs(res.value - truth) <= res.tail_estimate


def test_field_matches_pointwise(geom2):
    r = np.array([1.2, 1.6])
    vals = green_cylinder_field(geom2, r, 0.3, np.array([0.7, -1.2]), POLE)
    for ri, zi, v in zip(r, (0.7, -1.2), vals):
        assert v == green_cylinder(geom2, ReducedPoint(ri, 0.3, zi), POLE).value


@pytest.mark.parametrize("point", [(1.3, 0.9, 0.5), (1.7, -0.4, 1.1), (1.1, 1.0, 0.6)])
def test_cylinder_harmonic(point, geom2):
    field = lambda r, g, z: green_cylinder_field(geom2, r, g, z, POLE, TruncationSpec(tail_tol=1.0))
    lap, scale = fd_laplacian(field, ReducedPoint(*point), 1e-3, 3, pole_z=0.0)
    assert abs(lap) < 1e-4 * scale


@pytest.mark.parametrize("dim", [3, 4, 5])
def test_axial_integral_gives_annulus_green(dim):
    # int G dz = (a_N / a_{N-1}) G_A; the small |dz| < eps piece uses the even
    # quadratic through G(eps), G(2 eps)
    g = AnnulusGeometry(2.0, dim)
    pole = Pole(1.7, 0.0)
    r, gamma, eps = 1.2, -0.5, 0.05
    trunc = TruncationSpec(n_max=40, m_max=150, tail_tol=1.0, min_axial_gap=1e-3)
    edges = [eps, 0.15, 0.4, 1, 2, 4, 8, 14]
    zw = [gauss_legendre(16, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
    zs = np.concatenate([z for z, _ in zw] + [[eps, 2 * eps]])
    ws = np.concatenate([w for _, w in zw])
    vals = green_cylinder_field(g, np.full(zs.size, r), gamma, zs, pole, trunc)
    g1, g2 = vals[-2:]
    c = (g2 - g1) / (3 * eps**2)
    integral = 2 * (np.dot(ws, vals[:-2]) + eps * g1 - 2 / 3 * c * eps**3)
    expected = green_constant(dim) / green_constant(dim - 1) * green_annulus(g, (r, gamma), 1.7, 200)
    assert integral == pytest.approx(expected, rel=1e-3)


def test_mode_data_cached(geom2):
    a = mode_data(3.0, geom2, 20)
    b = mode_data(3.0, geom2, 10)
    np.testing.assert_array_equal(a.rhos[:10], b.rhos)


# -- extension ---------------------------------------------------------------


def test_region_l_examples():
    assert in_region_l(ReducedPoint(1.0, 0.2, 0.01), POLE, 2.5)
    assert in_region_l(ReducedPoint(3.0, 0.2, -0.3), POLE, 2.5)
    assert not in_region_l(ReducedPoint(0.5, 0.2, 2.5 * math.log(2)), POLE, 2.5)
    assert not in_region_l(ReducedPoint(1.5, 0.2, 0.0), POLE, 2.5)
    with pytest.raises(DomainError):
        in_region_l(ReducedPoint(1.5, 0.2, 1.0), POLE, 1.0)


def test_extension_errors(geom2):
    with pytest.raises(RegionError):
        extend_green(geom2, ReducedPoint(0.3, 0.2, 0.5), POLE, b_prime=2.5)
    with pytest.raises(DomainError):
        extend_green(geom2, ReducedPoint(1.3, 0.2, 0.5), POLE, b_prime=1.9)


def test_extension_agrees_inside(geom2):
    trunc = TruncationSpec(tail_tol=1.0)
    for p in ((1.3, 0.9, 0.5), (1.8, -0.2, 1.5)):
        x = ReducedPoint(*p)
        assert abs(extend_green(geom2, x, POLE, trunc).value - green_cylinder(geom2, x, POLE, trunc).value) < 1e-10


def test_extension_continuous_across_walls(geom2):
    for wall, sign in ((1.0, 1), (2.0, -1)):
        a = extend_green(geom2, ReducedPoint(wall + sign * 1e-4, 1.0, 1.0), POLE, b_prime=2.5).value
        b = extend_green(geom2, ReducedPoint(wall - sign * 1e-4, 1.0, 1.0), POLE, b_prime=2.5).value
        scale = np.max(np.abs(green_cylinder_field(geom2, np.linspace(1, 2, 41), 1.0, 1.0, POLE)))
        assert abs(a - b) < 1e-3 * scale
        # values on both sides shrink towards the wall value 0 at first order
        assert abs(a) < 1e-3 * scale and abs(b) < 1e-3 * scale


def test_wall_gap_is_slope_only(geom2):
    # a genuine jump would not shrink with the offset
    def gap(eps):
        a = extend_green(geom2, ReducedPoint(1.0 + eps, 0.3, 1.0), POLE, b_prime=2.5).value
        b = extend_green(geom2, ReducedPoint(1.0 - eps, 0.3, 1.0), POLE, b_prime=2.5).value
        return abs(a - b)

    assert gap(1e-6) / gap(1e-4) == pytest.approx(1e-2, rel=1e-3)


@pytest.mark.parametrize("point", [(0.6, 0.7, 2.0), (0.8, -0.5, 2.0), (2.4, 0.3, 1.0)])
def test_extension_harmonic(point, geom2):
    field = lambda r, g, z: green_cylinder_field(geom2, r, g, z, POLE, TruncationSpec(tail_tol=1.0))
    lap, scale = fd_laplacian(field, ReducedPoint(*point), 1e-3, 3, pole_z=0.0)
    assert abs(lap) < 1e-4 * scale


def test_outside_terms_decay_like_one_over_m(geom2):
    # for r > b the damped terms m |u_{n,m}| e^{rho |dz|} stay bounded
    for n in (0, 2, 5):
        rows = []
        for z in rho_zeros(float(n), geom2, 60).zeros:
            t = abs(term_u(n, z, POLE, ReducedPoint(2.4, 1.0, 1.0), geom2))
            rows.append(z.index * t * math.exp(z.value))
        rows = np.array(rows)
        assert rows[30:].max() <= 2 * rows[:30].max()
        # envelope, not the individual terms, is what decays
        assert rows[30:].max() > 0


def test_extension_bounded_by_distance():
    # |G~| <= C d(y') on probes with |dz| > 0.5 and |x'| > 0.4: the ratio must
    # not blow up as the pole approaches either wall
    g = AnnulusGeometry(2.0)
    trunc = TruncationSpec(m_max=80, tail_tol=1e-5)
    ratios = []
    for ry in (1.5, 1.2, 1.1, 1.05, 1.02, 1.98):
        pole = Pole(ry, 0.0)
        worst = 0.0
        for r in (0.45, 0.6, 0.9, 1.3, 1.7, 2.2, 2.8):
            for dz in (0.6, 1.0, 2.0):
                for gamma in (1.0, 0.0, -1.0):
                    x = ReducedPoint(r, gamma, dz)
                    if in_region_l(x, pole, 2.5):
                        worst = max(worst, abs(extend_green(g, x, pole, trunc, 2.5).value))
        ratios.append(worst / pole.d(g))
    assert max(ratios) < 5 * ratios[0]
    assert ratios[4] < 1.2 * ratios[3]
