"""Verification suites: each returns a list of records
{id, reference, measured, bound, passed} comparing an analytic statement with
an independent numerical measurement.

Oracle self-tests run first; ``run_suites`` refuses to continue if they fail.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .cross_product import (
    AnnulusGeometry,
    de_coefficients,
    ode_residual,
    u_big,
    u_big_dt,
    u_big_eigen,
    u_small,
    u_small_partials,
)
from .errors import DomainError
from .expansions import (
    cs_bound_derivative,
    cs_bound_value,
    decay_bound,
    i_nu_closed,
    i_nu_quadrature,
    norm_integral,
    norm_lower_bound,
    series_kernel_closed,
    series_kernel_partial_sums,
)
from .green import (
    Pole,
    ReducedPoint,
    TruncationSpec,
    annulus_mode,
    extend_green,
    green_cylinder,
    green_cylinder_field,
    mode_data,
    normalization,
)
from .oracles import (
    Bump,
    curve_shape,
    fd_laplacian,
    fd_laplacian_cartesian,
    gauss_legendre,
    green_identity,
    quad_adaptive,
)
from .special_functions import chebyshev_all, cylinder_derivative, bessel_j, bessel_y
from .zeros import least_positive_zero_t, rho_zeros

__all__ = ["Record", "SUITES", "DESCRIPTIONS", "run_suites", "annulus_identity", "cylinder_identity"]


@dataclass
class Record:
    id: str
    reference: str
    measured: float
    bound: float
    passed: bool

    def as_dict(self):
        return asdict(self)


def _rec(id_, ref, measured, bound, passed=None):
    measured = float(measured)
    if passed is None:
        passed = measured < bound
    return Record(id_, ref, measured, float(bound), bool(passed))


# --------------------------------------------------------------------------
# oracle self-tests


def suite_oracle():
    out = []
    q = quad_adaptive(np.sin, 0.0, math.pi, 1e-13)
    out.append(_rec("oracle.quad_sin", "int_0^pi sin = 2", abs(q.value - 2), 1e-12))
    q = quad_adaptive(lambda t: t * t - 1, 1.0, 2.0, 1e-13)
    out.append(_rec("oracle.quad_poly", "int_1^2 (t^2 - 1) = 4/3", abs(q.value - 4 / 3), 1e-12))
    lap, _ = fd_laplacian_cartesian(lambda p: np.sum(p * p, axis=1), [0.3, -0.2, 0.5], 1e-3)
    out.append(_rec("oracle.fd_quadratic", "Laplacian of |x|^2 in R^3 = 6", abs(lap - 6), 1e-6))
    lap, _ = fd_laplacian_cartesian(lambda p: p[:, 0] * p[:, 1], [0.3, -0.2, 0.5], 1e-3)
    out.append(_rec("oracle.fd_harmonic", "Laplacian of x1 x2 = 0", abs(lap), 1e-9))
    # second-order convergence on a smooth non-harmonic field
    f = lambda p: np.exp(p[:, 0]) * np.sin(2 * p[:, 1]) + p[:, 2] ** 4
    x0 = [0.2, 0.4, 0.3]
    exact = math.exp(0.2) * math.sin(0.8) * (1 - 4) + 12 * 0.3**2
    e1 = abs(fd_laplacian_cartesian(f, x0, 2e-2)[0] - exact)
    e2 = abs(fd_laplacian_cartesian(f, x0, 1e-2)[0] - exact)
    out.append(_rec("oracle.fd_order", "halving h divides the FD error by ~4", abs(e1 / e2 - 4), 0.2))
    bump2 = Bump((0.0, 0.0), 0.5)
    m2, err2 = green_identity(lambda p: -np.log(np.linalg.norm(p, axis=1)), np.zeros(2), bump2, 128, 64, 2 * math.pi)
    out.append(_rec("oracle.green_log", "-log|x| kernel recovers 2 pi", err2, 1e-2))
    bump3 = Bump((0.0, 0.0, 0.0), 0.5)
    m3, err3 = green_identity(lambda p: 1 / np.linalg.norm(p, axis=1), np.zeros(3), bump3, 64, 48, 4 * math.pi)
    out.append(_rec("oracle.green_newton", "1/|x| kernel recovers 4 pi", err3, 1e-2))
    return out


# --------------------------------------------------------------------------
# special functions and zeros


def suite_wronskian():
    t0 = time.perf_counter()
    ts = np.logspace(math.log10(0.1), math.log10(50.0), 200)
    worst = 0.0
    for nu in (0.0, 0.5, 1.0, 2.5, 7.0):
        j, y = bessel_j(nu, ts), bessel_y(nu, ts)
        jp, yp = cylinder_derivative("J", nu, ts), cylinder_derivative("Y", nu, ts)
        worst = max(worst, float(np.max(np.abs(math.pi * ts / 2 * (j * yp - y * jp) - 1))))
    dt = time.perf_counter() - t0
    return [
        _rec("wronskian.max_dev", "J Y' - Y J' = 2/(pi t)", worst, 1e-10),
        _rec("wronskian.runtime_s", "runtime", dt, 5.0),
    ]


def suite_half_integer():
    t0 = time.perf_counter()
    table = rho_zeros(0.5, AnnulusGeometry(2.0), 100)
    dt = time.perf_counter() - t0
    m = np.arange(1, 101)
    err = float(np.max(np.abs(table.values / (m * math.pi) - 1)))
    return [
        _rec("half_integer.max_rel_err", "rho_{1/2,m} = m pi at b = 2", err, 1e-10),
        _rec("half_integer.runtime_s", "table build time", dt, 1.0),
    ]


ZERO_GRID = [(nu, b) for nu in (0.5, 1.0, 2.0, 5.5, 10.0) for b in (1.2, 2.0, 5.0)]


def suite_zeros():
    t0 = time.perf_counter()
    gap_fail = lower_fail = 0
    gap_margin = lower_margin = math.inf
    for nu, b in ZERO_GRID:
        v = rho_zeros(nu, AnnulusGeometry(b), 201).values
        m = np.arange(1, 202)
        gaps = np.diff(v)[1:]  # rho_{m+1} - rho_m for m = 2..200
        rel_gap = gaps / (math.pi / (2 * b - 1)) - 1
        gap_fail += int(np.sum(rel_gap <= 0))
        gap_margin = min(gap_margin, float(rel_gap.min()))
        rel_low = v / ((nu + m / 4) / b) - 1
        lower_fail += int(np.sum(rel_low <= 0))
        lower_margin = min(lower_margin, float(rel_low.min()))
    dt = time.perf_counter() - t0
    return [
        _rec("spacing.failures", "rho_{m+1} - rho_m > pi/(2b-1), 2 <= m <= 200", gap_fail, 0.5),
        _rec("spacing.min_rel_margin", "smallest relative gap excess", gap_margin, 0.0, gap_margin > 0),
        _rec("spacing.runtime_s", "runtime", dt, 60.0),
        _rec("lower.failures", "rho_m > (nu + m/4)/b", lower_fail, 0.5),
        _rec("lower.min_rel_margin", "smallest relative excess", lower_margin, 0.0, lower_margin > 0),
    ]


def suite_mcmahon():
    worst = 0.0
    for nu in (0.0, 1.0, 5.5):
        for b in (1.5, 2.0):
            v = rho_zeros(nu, AnnulusGeometry(b), 100).values
            worst = max(worst, abs(v[99] * (b - 1) / (100 * math.pi) - 1))
    return [_rec("mcmahon.max_dev_m100", "rho_m (b-1)/(m pi) -> 1", worst, 0.02)]


# --------------------------------------------------------------------------
# expansions


def suite_normalization():
    worst = 0.0
    for nu in (0.0, 0.5, 1.0, 3.0):
        for b in (1.5, 2.0):
            g = AnnulusGeometry(b)
            for z in rho_zeros(nu, g, 10).zeros:
                closed = norm_integral(nu, z, 1.0, g)
                rho = z.value
                quad = quad_adaptive(lambda t: u_big(nu, rho, t, g) ** 2 * t, 1.0, b, 1e-13).value
                worst = max(worst, abs(closed - quad) / quad)
    anchor = norm_integral(0.5, rho_zeros(0.5, AnnulusGeometry(2.0), 1)[0], 1.0, AnnulusGeometry(2.0))
    return [
        _rec("norm.max_rel_err", "rho^2 int U^2 t = (2/pi^2)(1 - N(rho b)/N(rho))", worst, 1e-8),
        _rec("norm.anchor", "nu = 1/2, b = 2, m = 1 gives 1/pi^4", abs(anchor * math.pi**4 - 1), 1e-12),
    ]


COEFF_CASES = [
    (nu, rho, s, a, b, coeffs)
    for nu in (0.0, 0.5, 1.0, 2.5, 7.0)
    for (rho, s, a, b, coeffs) in (
        (3.0, 1.4, 1.0, 2.0, (1.0, 0.0)),
        (2.5, 1.5, 1.0, 2.0, (0.0, 1.0)),
        (7.3, 2.2, 1.3, 3.1, (0.6, -1.2)),
        (0.8, 1.05, 0.5, 1.6, (-1.0, 0.4)),
    )
]


def suite_coeff():
    worst = 0.0
    for nu, rho, s, a, b, coeffs in COEFF_CASES:
        c = i_nu_closed(nu, rho, s, a, b, coeffs)
        q = i_nu_quadrature(nu, rho, s, a, b, coeffs)
        worst = max(worst, abs(c - q) / abs(q))
    return [_rec("coeff.max_rel_err", "closed form of int f_{nu,s} C(rho t) t dt", worst, 1e-8)]


SERIES_CHECKPOINTS = (100, 200, 300, 400, 500)


def series_errors(nu, s, b=2.0, points=50):
    """Sup errors of the partial sums at SERIES_CHECKPOINTS on a t-grid."""
    g = AnnulusGeometry(b)
    tg = np.linspace(1.0, b, points)
    ps = series_kernel_partial_sums(nu, s, tg, g, SERIES_CHECKPOINTS)
    return np.max(np.abs(ps - series_kernel_closed(nu, s, tg, g)), axis=1)


def suite_series():
    sup500 = 0.0
    monotone = True
    for nu in (0.0, 1.0):
        for s in (1.3, 1.7):
            sup500 = max(sup500, float(series_errors(nu, s)[-1]))
            # monotonicity is judged on a dense grid; a coarse grid aliases with
            # the oscillation of the eigenfunctions
            dense = series_errors(nu, s, points=2001)
            monotone &= bool(np.all(np.diff(dense) < 0))
    return [
        _rec("series.sup_err_500", "partial sums -> psi(t) psi(b/s)/psi(b)", sup500, 1e-3),
        _rec("series.monotone", "sup error decreasing over 100..500 terms", float(monotone), 0.5, monotone),
    ]


def suite_bounds():
    cs_viol = 0
    cs_worst = 0.0
    for nu in (0.0, 0.5, 1.0, 2.5):
        for b in (1.5, 2.0, 3.0):
            g = AnnulusGeometry(b)
            s = np.linspace(1.0, b, 60)
            for z in rho_zeros(nu, g, 30).zeros:
                r1 = np.max(np.abs(u_big(nu, z.value, s, g))) / cs_bound_value(nu, z.value, g)
                r2 = np.max(np.abs(u_big_dt(nu, z.value, s, g))) / cs_bound_derivative(z.value, g)
                cs_viol += int(r1 > 1) + int(r2 > 1)
                cs_worst = max(cs_worst, r1, r2)
    decay_viol = 0
    decay_worst = 0.0
    g = AnnulusGeometry(2.0)
    for nu in (1.0, 2.5):
        table = rho_zeros(nu, g, 3)
        for m in (1, 3):
            rho = table[m - 1].value
            a = least_positive_zero_t(nu, rho, g)
            ts = np.linspace(0.005, 0.999, 400) * a
            ratio = np.abs(u_big(nu, rho, ts, g)) / decay_bound(nu, ts)
            decay_viol += int(np.sum(ratio > 1))
            decay_worst = max(decay_worst, float(ratio.max()))
    norm_viol = 0
    for nu in (0.0, 0.5, 1.0, 3.0):
        for b in (1.5, 2.0, 3.0):
            g = AnnulusGeometry(b)
            table = rho_zeros(nu, g, 20)
            lb = norm_lower_bound(nu, g, table[0].value)
            for z in table.zeros:
                # equality holds at nu = 1/2 and at the first zero for nu = 0
                norm_viol += int(z.value**2 * norm_integral(nu, z, 1.0, g) < lb * (1 - 1e-12))
    return [
        _rec("bounds.cs_violations", "|U| <= rho b/(2 pi nu), |U_t| <= rho b/pi", cs_viol, 0.5),
        _rec("bounds.cs_worst_ratio", "largest value / bound", cs_worst, 1.0),
        _rec("bounds.decay_violations", "|U| <= t^-nu/(pi nu) below the least zero", decay_viol, 0.5),
        _rec("bounds.norm_violations", "norm lower bounds", norm_viol, 0.5),
    ]


# --------------------------------------------------------------------------
# two-variable identities


IDENTITY_NUS = (0.5, 1.0, 2.0, 3.5, 6.0)
IDENTITY_XS = (1.5, 2.0, 3.0, 4.0)


def identity_zeros():
    """100 certified zeros (nu, x0, y0): the first five y-zeros on a (nu, x) grid."""
    out = []
    for nu in IDENTITY_NUS:
        for x in IDENTITY_XS:
            for z in rho_zeros(nu, AnnulusGeometry(x), 5).zeros:
                out.append((nu, x, z.value))
    return out


def probe_points(count=100, seed=20240611):
    rng = np.random.default_rng(seed)
    return [(rng.uniform(0.5, 8.0), rng.uniform(1.05, 5.0), rng.uniform(0.2, 25.0)) for _ in range(count)]


def suite_identities():
    wr = 0.0
    pos_fail = slope_fail = 0
    mixed = 0.0
    energy = 0.0
    ode = 0.0
    for nu, x, y in identity_zeros():
        _, ux, uy, uxy, uyy = u_small_partials(nu, x, y)
        wr = max(wr, abs(ux * (x * ux - y * uy) - 4 / math.pi**2))
        pos_fail += int(not ux * uy > 0)
        slope_fail += int(not ux / uy > y / x)
        scale = abs(2 * x * uxy) + abs(2 * uy) + abs(y * uyy)
        mixed = max(mixed, abs(2 * x * uxy - 2 * uy - y * uyy) / scale)
        q = quad_adaptive(lambda s: u_small(nu, s, np.full_like(s, y)) ** 2, 1.0, x, 1e-13).value
        energy = max(energy, abs(ux * uy - 2 * y * q) / abs(ux * uy))
        res, sc = ode_residual(nu, x, y)
        ode = max(ode, abs(res) / sc)
    sign_fail = 0
    ode_probe = 0.0
    for nu, x, y in probe_points():
        c = de_coefficients(nu, x, y)
        sign_fail += int(not (c.p_tilde > 0 and c.p_tilde_prime < 0))
        res, sc = ode_residual(nu, x, y)
        ode_probe = max(ode_probe, abs(res) / sc)
    return [
        _rec("identity.wronskian", "u_x (x u_x - y u_y) = 4/pi^2 at zeros", wr, 1e-8),
        _rec("identity.positivity_failures", "u_x u_y > 0 at zeros", pos_fail, 0.5),
        _rec("identity.slope_failures", "u_x/u_y > y/x at zeros", slope_fail, 0.5),
        _rec("identity.mixed", "2x u_xy = 2u_y + y u_yy at zeros (relative)", mixed, 1e-8),
        _rec("identity.energy", "u_x u_y = 2y int_1^x u^2 (relative)", energy, 1e-8),
        _rec("identity.ode_at_zeros", "ODE residual / scale at zeros", ode, 1e-8),
        _rec("identity.ode_probes", "ODE residual / scale at probes", ode_probe, 1e-8),
        _rec("identity.sign_failures", "P~ > 0 and P~' < 0 at probes", sign_fail, 0.5),
    ]


def suite_curves():
    xs = np.linspace(1.2, 5.0, 20)
    shape_fail = gap_fail = 0
    worst = math.inf
    for nu in (0.5, 1.0, 3.0):
        for k in (1, 2, 5):
            tables = [rho_zeros(nu, AnnulusGeometry(x), k + 1) for x in xs]
            ys = np.array([t[k - 1].value for t in tables])
            dec, convex, m2 = curve_shape(np.column_stack([xs, ys]), tol=1e-10)
            shape_fail += int(not (dec and convex))
            worst = min(worst, m2)
            if k >= 2:
                gaps = np.array([t[k].value - t[k - 1].value for t in tables])
                gap_fail += int(np.sum(gaps <= math.pi / (2 * xs - 1)))
    return [
        _rec("curves.shape_failures", "y_k(x) decreasing and convex", shape_fail, 0.5),
        _rec("curves.min_second_diff", "smallest second divided difference", worst, -1e-10, worst >= -1e-10),
        _rec("curves.gap_failures", "y_{k+1}(x) - y_k(x) > pi/(2x-1)", gap_fail, 0.5),
    ]


# --------------------------------------------------------------------------
# Green identities


def annulus_identity(b=2.0, ry=1.5, n_modes=400, n_r=48, n_theta=96):
    """-int G_A Laplace(phi) / phi(y') for the planar annulus (N = 3), mode by mode.

    Each angular mode of G is integrated against the matching Chebyshev
    projection of Laplace(phi); the radial grid is split at the kink r = ry.
    """
    g = AnnulusGeometry(b)
    R = 0.2 * g.boundary_distance(ry)
    phi = Bump((ry, 0.0), R)
    r1, w1 = gauss_legendre(n_r, ry - R, ry)
    r2, w2 = gauss_legendre(n_r, ry, ry + R)
    rs, wr = np.concatenate([r1, r2]), np.concatenate([w1, w2])
    tm = math.asin(R / ry)
    th, wt = gauss_legendre(n_theta, -tm, tm)
    rr, tt = np.meshgrid(rs, th, indexing="ij")
    lap = phi.laplacian(np.stack([rr * np.cos(tt), rr * np.sin(tt)], -1).reshape(-1, 2)).reshape(rr.shape)
    proj = (lap * wt[None, :]) @ chebyshev_all(n_modes, np.cos(th)).T
    total = math.fsum(
        float(np.sum(annulus_mode(n, rs, ry, g) * proj[:, n] * rs * wr)) for n in range(n_modes + 1)
    )
    return -total / float(phi.value(np.array([[ry, 0.0]]))[0])


def cylinder_identity(b=2.0, ry=1.5, n_modes=300, m_max=60, n_r=48, n_theta=64, n_z=32):
    """-int G Laplace(phi) / phi(y) for the annular cylinder (N = 3), mode by mode.

    For each (n, m) the integral factors into a Chebyshev projection in the
    angle, a radial projection on U(rho, r) and an axial integral against
    exp(-rho |z - y_N|) split at the kink z = y_N.
    """
    g = AnnulusGeometry(b)
    R = 0.2 * g.boundary_distance(ry)
    phi = Bump((ry, 0.0, 0.0), R)
    rs, wr = gauss_legendre(n_r, ry - R, ry + R)
    z1, v1 = gauss_legendre(n_z, -R, 0.0)
    z2, v2 = gauss_legendre(n_z, 0.0, R)
    zs, wz = np.concatenate([z1, z2]), np.concatenate([v1, v2])
    tm = math.asin(R / ry)
    th, wt = gauss_legendre(n_theta, -tm, tm)
    rr, tt, zz = np.meshgrid(rs, th, zs, indexing="ij")
    pts = np.stack([rr * np.cos(tt), rr * np.sin(tt), zz], -1).reshape(-1, 3)
    lap = phi.laplacian(pts).reshape(rr.shape)
    proj = np.einsum("rtz,t,nt->nrz", lap, wt, chebyshev_all(n_modes, np.cos(th)))
    parts = []
    for n in range(n_modes + 1):
        md = mode_data(float(n), g, m_max)
        ur = u_big_eigen(md.nu, md.rhos[:, None], rs[None, :], g) * (rs * wr)[None, :]
        ez = np.exp(-np.abs(zs)[None, :] * md.rhos[:, None]) * wz[None, :]
        inner = np.einsum("mr,rz,mz->m", ur, proj[n], ez)
        coef = md.kappa * u_big_eigen(md.nu, md.rhos, ry, g)
        parts.append((1.0 if n == 0 else 2.0) * math.fsum(coef * inner))
    return -math.fsum(parts) / float(phi.value(np.array([[ry, 0.0, 0.0]]))[0])


def suite_green_identity():
    t0 = time.perf_counter()
    a2 = normalization(2).a_n
    a3 = normalization(3).a_n
    ann = annulus_identity()
    cyl = cylinder_identity()
    dt = time.perf_counter() - t0
    return [
        _rec("green.annulus_rel_err", "annulus Green identity recovers a_2 = 2 pi", abs(ann / a2 - 1), 1e-2),
        _rec("green.cylinder_rel_err", "cylinder Green identity recovers a_3 = 4 pi", abs(cyl / a3 - 1), 1e-2),
        _rec("green.runtime_s", "runtime", dt, 180.0),
    ]


# --------------------------------------------------------------------------
# harmonicity and extension


HARMONIC_PROBES = [  # (r, gamma, z) with the pole at (1.5, 0)
    (1.3, 0.9, 0.5), (1.7, 0.2, -0.8), (1.45, -0.6, 1.2), (1.9, 0.95, 0.6), (1.1, 0.0, -2.0),
]
EXTENSION_PROBES = [(0.6, 0.7, 2.0), (0.8, -0.3, 2.0), (0.6, 0.95, -2.0), (2.3, 0.5, 1.0), (2.8, -0.9, 1.5)]


def fd_residual(geom, pole, trunc, point, h=1e-3):
    """|FD Laplacian| / curvature scale of the truncated series at ``point``."""
    field = lambda r, g, z: green_cylinder_field(geom, r, g, z, pole, trunc)
    lap, scale = fd_laplacian(field, ReducedPoint(*point), h, geom.dim_n, pole_z=pole.zy)
    return abs(lap) / scale


def suite_harmonicity():
    g = AnnulusGeometry(2.0)
    pole = Pole(1.5, 0.0)
    trunc = TruncationSpec(tail_tol=1.0)
    interior = max(fd_residual(g, pole, trunc, p) for p in HARMONIC_PROBES)
    exterior = max(fd_residual(g, pole, trunc, p) for p in EXTENSION_PROBES)
    overlap = 0.0
    for p in HARMONIC_PROBES:
        x = ReducedPoint(*p)
        overlap = max(overlap, abs(extend_green(g, x, pole, trunc, 2.5).value - green_cylinder(g, x, pole, trunc).value))
    wall = 0.0
    for wall_r, sign in ((1.0, 1), (2.0, -1)):
        for gamma in (1.0, 0.3, -0.8):
            inside = ReducedPoint(wall_r + sign * 1e-6, gamma, 1.0)
            outside = ReducedPoint(wall_r - sign * 1e-6, gamma, 1.0)
            seg = green_cylinder_field(g, np.linspace(1.0, 2.0, 41), gamma, 1.0, pole, trunc)
            scale = float(np.max(np.abs(seg)))
            gap = abs(extend_green(g, inside, pole, trunc, 2.5).value - extend_green(g, outside, pole, trunc, 2.5).value)
            wall = max(wall, gap / scale)
    return [
        _rec("harmonic.interior", "FD Laplacian / scale of truncated G", interior, 1e-4),
        _rec("harmonic.extension", "FD Laplacian / scale of the extension in L", exterior, 1e-4),
        _rec("harmonic.overlap", "extension equals G inside the cylinder", overlap, 1e-10),
        _rec("harmonic.wall_continuity", "jump across the wall / scale", wall, 1e-3),
    ]


SUITES = {
    "oracle": suite_oracle,
    "wronskian": suite_wronskian,
    "half_integer": suite_half_integer,
    "zeros": suite_zeros,
    "mcmahon": suite_mcmahon,
    "normalization": suite_normalization,
    "coeff": suite_coeff,
    "series": suite_series,
    "bounds": suite_bounds,
    "identities": suite_identities,
    "curves": suite_curves,
    "green_identity": suite_green_identity,
    "harmonicity": suite_harmonicity,
}

DESCRIPTIONS = {
    "oracle": "quadrature, FD Laplacian and classical-kernel checks of the oracles themselves",
    "wronskian": "Wronskian of J and Y over orders 0..7 and t in [0.1, 50]",
    "half_integer": "order 1/2 eigenvalues equal m pi/(b-1)",
    "zeros": "eigenvalue spacing pi/(2b-1) and lower bound (nu + m/4)/b",
    "mcmahon": "large-index asymptote m pi/(b-1)",
    "normalization": "closed-form norm of U against quadrature",
    "coeff": "closed-form tent-kernel coefficient integrals against quadrature",
    "series": "Dini series of the tent kernel converges to the psi kernel",
    "bounds": "sup bounds on U and dU/dt, decay below the least zero, norm lower bounds",
    "identities": "two-variable identities at zeros and sign facts of the ODE coefficients",
    "curves": "zero curves y_k(x) are decreasing, convex and spaced by pi/(2x-1)",
    "green_identity": "Green identities recover a_2 (annulus) and a_3 (cylinder)",
    "harmonicity": "FD harmonicity of G and of its extension, overlap and wall continuity",
}


def run_suites(names):
    """Run the oracle self-test, then the named suites; returns (records, all_passed).

    If any oracle self-test fails, no further suite is run.
    """
    unknown = [n for n in names if n not in SUITES and n != "all"]
    if unknown:
        raise DomainError(f"unknown suite(s): {', '.join(unknown)}")
    if "all" in names:
        names = list(SUITES)
    records = suite_oracle()
    if not all(r.passed for r in records):
        return records, False
    for name in names:
        if name != "oracle":
            records.extend(SUITES[name]())
    return records, all(r.passed for r in records)

