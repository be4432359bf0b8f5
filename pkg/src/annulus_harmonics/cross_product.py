"""Cross products of Bessel functions and their derivatives.

Two parametrisations of the same object are provided:

* ``u_big(nu, rho, t, geom)``  = J(rho t) Y(rho b) - J(rho b) Y(rho t), the radial
  Dirichlet eigenfunction of the annulus 1 < t < b when rho is an eigenvalue;
* ``u_small(nu, x, y)`` = sqrt(x) [J(y) Y(xy) - J(xy) Y(y)], the two-variable form
  whose zero curves y_k(x) carry the spacing argument.

They are related by u_small(x, y) = sqrt(x) u_big(nu, y, 1, b=x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import DomainError
from .special_functions import _derivs, _order

__all__ = [
    "AnnulusGeometry",
    "DECoefficients",
    "u_big",
    "u_big_dt",
    "u_big_drho",
    "u_big_phase",
    "u_big_eigen",
    "modulus_phase",
    "u_small",
    "u_small_partials",
    "de_coefficients",
    "ode_residual",
]

TWO_OVER_PI = 2.0 / math.pi


@dataclass(frozen=True)
class AnnulusGeometry:
    """Annulus 1 < |x'| < b in R^(N-1); the cylinder lives in R^N."""

    b: float
    dim_n: int = 3

    def __post_init__(self):
        if not math.isfinite(self.b) or self.b <= 1 + 1e-9:
            raise DomainError(f"outer radius must exceed 1 (+1e-9), got {self.b!r}")
        if int(self.dim_n) != self.dim_n or self.dim_n < 3:
            raise DomainError(f"dimension N must be an integer >= 3, got {self.dim_n!r}")

    def nu_n(self, n: int) -> float:
        return n + (self.dim_n - 3) / 2

    def boundary_distance(self, radius: float) -> float:
        return min(radius - 1.0, self.b - radius)


def _pos(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be finite and > 0")
    return arr


def _ret(val, *likes):
    if all(np.ndim(v) == 0 for v in likes):
        return float(val)
    return val


def u_big(nu, rho, t, geom: AnnulusGeometry):
    """U_nu(rho, t) = J(rho t) Y(rho b) - J(rho b) Y(rho t)."""
    nu = _order(nu)
    r = _pos(rho, "rho")
    tt = _pos(t, "t")
    rt, rb = r * tt, r * geom.b
    val = _sp.jv(nu, rt) * _sp.yv(nu, rb) - _sp.jv(nu, rb) * _sp.yv(nu, rt)
    return _ret(val, rho, t)


def u_big_dt(nu, rho, t, geom: AnnulusGeometry):
    """dU/dt = rho C'(rho t) with C = Y(rho b) J - J(rho b) Y."""
    nu = _order(nu)
    r = _pos(rho, "rho")
    tt = _pos(t, "t")
    rt, rb = r * tt, r * geom.b
    _, jp, _ = _derivs("J", nu, rt)
    _, yp, _ = _derivs("Y", nu, rt)
    val = r * (_sp.yv(nu, rb) * jp - _sp.jv(nu, rb) * yp)
    return _ret(val, rho, t)


def u_big_drho(nu, rho, t, geom: AnnulusGeometry):
    """dU/drho by the product rule over the four Bessel factors."""
    nu = _order(nu)
    r = _pos(rho, "rho")
    tt = _pos(t, "t")
    b = geom.b
    rt, rb = r * tt, r * b
    jt, jtp, _ = _derivs("J", nu, rt)
    yt, ytp, _ = _derivs("Y", nu, rt)
    jb, jbp, _ = _derivs("J", nu, rb)
    yb, ybp, _ = _derivs("Y", nu, rb)
    val = tt * jtp * yb + b * jt * ybp - b * jbp * yt - tt * jb * ytp
    return _ret(val, rho, t)


# Hankel-type asymptotic series for the modulus and phase of J + iY.
def _asymptotic_modulus_phase(nu, x):
    mu = 4.0 * nu * nu
    s = np.ones_like(x)
    term = np.ones_like(x)
    last = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 16):
        nxt = term * (2 * k - 1) / (2 * k) * (mu - (2 * k - 1) ** 2) / (2 * x) ** 2
        # asymptotic series: stop once terms stop shrinking
        active &= np.abs(nxt) < np.abs(term)
        s = np.where(active, s + nxt, s)
        last = np.where(active, np.abs(nxt), last)
        term = np.where(active, nxt, term)
    m2 = TWO_OVER_PI / x * s
    y = 4.0 * x
    corr = (
        (mu - 1) / (2 * y)
        + (mu - 1) * (mu - 25) / (6 * y**3)
        + (mu - 1) * (mu * mu - 114 * mu + 1073) / (5 * y**5)
        + (mu - 1) * (5 * mu**3 - 1535 * mu**2 + 54703 * mu - 375733) / (14 * y**7)
    )
    # size of the first omitted phase term, used as a validity check
    omitted = abs(mu - 1) * (mu**4 + 1) / y**9
    return np.sqrt(m2), corr, np.maximum(last, omitted)


def modulus_phase(nu, x):
    """Modulus M and phase theta with J = M cos(theta), Y = M sin(theta).

    For large x the phase is returned as x - (nu/2 + 1/4) pi + correction, with
    the correction from the asymptotic series; ``asymptotic`` flags where that
    series was accurate enough to be used.  Elsewhere theta = atan2(Y, J).
    """
    nu = _order(nu)
    x = _pos(x, "x")
    m_as, corr, err = _asymptotic_modulus_phase(nu, np.maximum(x, 1.0))
    use = (x >= 30.0) & (err < 1e-17)
    j, y = _sp.jv(nu, x), _sp.yv(nu, x)
    modulus = np.where(use, m_as, np.hypot(j, y))
    base = x - (0.5 * nu + 0.25) * math.pi
    theta = np.where(use, base + corr, np.arctan2(y, j))
    return modulus, theta, use


def u_big_phase(nu, rho, t, geom: AnnulusGeometry):
    """U_nu(rho, t) through the modulus/phase form M(rho t) M(rho b) sin(dtheta).

    When both arguments are in the asymptotic regime the phase difference is
    formed as rho (b - t) + [corr(rho b) - corr(rho t)], which does not suffer
    the cancellation of the direct difference of products.
    """
    nu = _order(nu)
    r = _pos(rho, "rho")
    tt = _pos(t, "t")
    rt, rb = r * tt, r * geom.b
    mt, tht, use_t = modulus_phase(nu, rt)
    mb, thb, use_b = modulus_phase(nu, rb)
    both = use_t & use_b
    base_t = rt - (0.5 * nu + 0.25) * math.pi
    base_b = rb - (0.5 * nu + 0.25) * math.pi
    dtheta = np.where(both, r * (geom.b - tt) + ((thb - base_b) - (tht - base_t)), thb - tht)
    val = mt * mb * np.sin(dtheta)
    return _ret(val, rho, t)


def u_big_eigen(nu, rho, t, geom: AnnulusGeometry):
    """U_nu(rho, t) for an eigenvalue rho (U_nu(rho, 1) = 0), evaluated stably.

    At an eigenvalue U(rho, t) = c V(rho, t) with V = J(rho t) Y(rho) - J(rho) Y(rho t)
    and c = Y(rho b)/Y(rho) = J(rho b)/J(rho).  Where rho t < nu the direct
    form subtracts two huge products, while V is dominated by a single term.
    The ratio with the larger denominator is used.
    """
    nu = _order(nu)
    r = _pos(rho, "rho")
    tt = _pos(t, "t")
    j1, y1 = _sp.jv(nu, r), _sp.yv(nu, r)
    jb, yb = _sp.jv(nu, r * geom.b), _sp.yv(nu, r * geom.b)
    c = np.where(np.abs(y1) >= np.abs(j1), yb / y1, jb / np.where(j1 != 0, j1, 1.0))
    rt = r * tt
    val = c * (_sp.jv(nu, rt) * y1 - j1 * _sp.yv(nu, rt))
    return _ret(val, rho, t)


def u_small(nu, x, y):
    """u_nu(x, y) = sqrt(x) [J(y) Y(xy) - J(xy) Y(y)]; vanishes at x = 1."""
    nu = _order(nu)
    xx = _pos(x, "x")
    yy = _pos(y, "y")
    xy = xx * yy
    val = np.sqrt(xx) * (_sp.jv(nu, yy) * _sp.yv(nu, xy) - _sp.jv(nu, xy) * _sp.yv(nu, yy))
    return _ret(val, x, y)


def u_small_partials(nu, x, y):
    """(u, u_x, u_y, u_xy, u_yy) of u_nu at (x, y), all analytic.

    Second derivatives of the Bessel factors come from the order recurrences,
    never from finite differences.
    """
    nu = _order(nu)
    xx = _pos(x, "x")
    yy = _pos(y, "y")
    xy = xx * yy
    ja, jap, japp = _derivs("J", nu, yy)
    ya, yap, yapp = _derivs("Y", nu, yy)
    jx, jxp, jxpp = _derivs("J", nu, xy)
    yx, yxp, yxpp = _derivs("Y", nu, xy)

    f = ja * yx - jx * ya
    inner = ja * yxp - jxp * ya
    f_x = yy * inner
    f_y = jap * yx + xx * ja * yxp - xx * jxp * ya - jx * yap
    f_xy = inner + yy * (jap * yxp + xx * ja * yxpp - xx * jxpp * ya - jxp * yap)
    f_yy = (
        japp * yx
        + 2 * xx * jap * yxp
        + xx**2 * ja * yxpp
        - xx**2 * jxpp * ya
        - 2 * xx * jxp * yap
        - jx * yapp
    )
    sx = np.sqrt(xx)
    u = sx * f
    u_x = f / (2 * sx) + sx * f_x
    u_y = sx * f_y
    u_xy = f_y / (2 * sx) + sx * f_xy
    u_yy = sx * f_yy
    return tuple(_ret(v, x, y) for v in (u, u_x, u_y, u_xy, u_yy))


@dataclass(frozen=True)
class DECoefficients:
    """Coefficients of the second-order equation satisfied by y -> u_nu(x, y)/sqrt(x).

    Notation follows F = a f + b g with f = Y(xy), g = -J(xy), a = J(y),
    b = Y(y); F' = A f + B g, F'' = C f + D g; W, N belong to (f, g) and w, n to
    (a, b).
    """

    nu: float
    x: float
    y: float
    p_tilde: float
    p_tilde_prime: float
    q_tilde: float
    a_coef: float
    b_coef: float
    c_coef: float
    d_coef: float
    w_big: float
    n_big: float
    w_small: float
    n_small: float

    @property
    def q_potential(self) -> float:
        """q(x, y) = (nu^2 - 1/4)/x^2 - y^2, so that u_xx = q u."""
        return (self.nu**2 - 0.25) / self.x**2 - self.y**2


def de_coefficients(nu, x, y) -> DECoefficients:
    """Evaluate P~, P~', Q~ and the A..D coefficients at a single (x, y)."""
    nu = _order(nu)
    x = float(x)
    y = float(y)
    if not x > 1 or not y > 0:
        raise DomainError("de_coefficients needs x > 1 and y > 0")
    xy = x * y
    a, ap, app = _derivs("J", nu, y)
    b, bp, bpp = _derivs("Y", nu, y)
    jx, jxp, jxpp = _derivs("J", nu, xy)
    yx, yxp, yxpp = _derivs("Y", nu, xy)
    f, fp, fpp = yx, x * yxp, x * x * yxpp
    g, gp, gpp = -jx, -x * jxp, -x * x * jxpp

    nn = f * f + g * g
    nnp = 2 * (f * fp + g * gp)
    nnpp = 2 * (fp * fp + f * fpp + gp * gp + g * gpp)
    ww = f * gp - fp * g
    wwp = f * gpp - fpp * g
    w = a * bp - ap * b
    wp = a * bpp - app * b
    n = a * a + b * b
    npr = 2 * (a * ap + b * bp)

    big_a = ap + a * nnp / (2 * nn) + b * ww / nn
    big_b = bp + b * nnp / (2 * nn) - a * ww / nn
    big_ap = (
        app
        + (ap * nnp + a * nnpp) / (2 * nn)
        - a * nnp**2 / (2 * nn**2)
        + (bp * ww + b * wwp) / nn
        - b * ww * nnp / nn**2
    )
    big_bp = (
        bpp
        + (bp * nnp + b * nnpp) / (2 * nn)
        - b * nnp**2 / (2 * nn**2)
        - (ap * ww + a * wwp) / nn
        + a * ww * nnp / nn**2
    )
    big_c = big_ap + big_a * nnp / (2 * nn) + big_b * ww / nn
    big_d = big_bp + big_b * nnp / (2 * nn) - big_a * ww / nn

    p_t = ww * n - nn * w
    p_tp = wwp * n + ww * npr - nnp * w - nn * wp
    q_t = nn * (big_c * big_b - big_d * big_a)
    return DECoefficients(
        nu=nu, x=x, y=y,
        p_tilde=float(p_t), p_tilde_prime=float(p_tp), q_tilde=float(q_t),
        a_coef=float(big_a), b_coef=float(big_b), c_coef=float(big_c), d_coef=float(big_d),
        w_big=float(ww), n_big=float(nn), w_small=float(w), n_small=float(n),
    )


def ode_residual(nu, x, y):
    """(residual, scale) of P~ F'' - P~' F' + Q~ F with F = u/sqrt(x).

    F' and F'' are the direct y-derivatives of the cross product, independent
    of the A..D route used to build Q~.  ``scale`` is the sum of the absolute
    values of the three terms.
    """
    c = de_coefficients(nu, x, y)
    u, _, u_y, _, u_yy = u_small_partials(nu, x, y)
    sx = math.sqrt(x)
    f0, f1, f2 = u / sx, u_y / sx, u_yy / sx
    terms = (c.p_tilde * f2, -c.p_tilde_prime * f1, c.q_tilde * f0)
    return sum(terms), sum(abs(v) for v in terms)
