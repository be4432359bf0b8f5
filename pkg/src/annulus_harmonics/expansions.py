"""Tent kernels, closed-form coefficient integrals, normalisation constants and
Dini-type series in the eigenfunctions U_nu(rho_m, .) of the annulus [1, b]."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .cross_product import AnnulusGeometry, u_big
from .errors import DomainError, PreconditionError
from .oracles import quad_adaptive
from .special_functions import _order, nicholson_n, psi_kernel
from .zeros import CertifiedZero, ZeroTable, default_cache

__all__ = [
    "TentKernel",
    "tent_eval",
    "tent_ds",
    "i_nu_closed",
    "i_nu_quadrature",
    "norm_integral",
    "norm_lower_bound",
    "dini_coefficient",
    "series_kernel",
    "series_kernel_closed",
    "series_kernel_partial_sums",
    "cs_bound_value",
    "cs_bound_derivative",
    "decay_bound",
]

PI2 = math.pi**2


def _psi_ratio(nu, p, r):
    """psi_nu(p) / psi_nu(r) for 1 <= p <= r (log p / log r at nu = 0)."""
    lp, lr = np.log(p), math.log(r)
    if nu == 0:
        return lp / lr
    with np.errstate(under="ignore"):
        return np.exp(nu * (lp - lr)) * -np.expm1(-2 * nu * lp) / -math.expm1(-2 * nu * lr)


@dataclass(frozen=True)
class TentKernel:
    """Piecewise kernel f_{nu,s} on [a, b]: zero at both ends, peaked at s.

    For nu > 0 it is psi(t/a) psi(b/s) / psi(b/a) left of s and
    psi(s/a) psi(b/t) / psi(b/a) right of s; for nu = 0 the logarithm
    replaces psi.
    """

    nu: float
    s: float
    a: float
    b: float
    branch: str = ""

    def __post_init__(self):
        nu = _order(self.nu)
        if not 0 < self.a < self.s < self.b:
            raise DomainError(f"need 0 < a < s < b, got a={self.a}, s={self.s}, b={self.b}")
        expected = "zero_order" if nu == 0 else "positive_order"
        if self.branch == "":
            object.__setattr__(self, "branch", expected)
        elif self.branch != expected:
            raise DomainError(f"branch {self.branch!r} does not match order {nu}")


def _tent_t(k: TentKernel, t):
    tt = np.asarray(t, dtype=float)
    if np.any(tt < k.a) or np.any(tt > k.b) or not np.all(np.isfinite(tt)):
        raise DomainError("t must lie in [a, b]")
    return tt


def tent_eval(k: TentKernel, t):
    """f_{nu,s}(t); continuous at t = s, where the left branch is used."""
    tt = _tent_t(k, t)
    left = tt <= k.s
    # clip each branch's argument so the unused branch stays in range
    tl = np.where(left, tt, k.s)
    tr = np.where(left, k.s, tt)
    val = np.where(
        left,
        psi_kernel(k.nu, tl / k.a, k.b / k.s, k.b / k.a),
        psi_kernel(k.nu, k.s / k.a, k.b / tr, k.b / k.a),
    )
    return float(val) if np.ndim(t) == 0 else val


def tent_ds(k: TentKernel, t):
    """g_{nu,s}(t) = d f_{nu,s}(t) / ds."""
    tt = _tent_t(k, t)
    nu, a, b, s = k.nu, k.a, k.b, k.s
    left = tt <= s
    tl = np.where(left, tt, s)
    tr = np.where(left, s, tt)
    if nu == 0:
        val = np.where(left, -np.log(tl / a), np.log(b / tr)) / (s * math.log(b / a))
        return float(val) if np.ndim(t) == 0 else val
    lr = math.log(b / a)
    denom = -math.expm1(-2 * nu * lr)
    # left: psi(t/a) * (-nu/s) phi(b/s) / psi(b/a), phi = x^nu + x^-nu
    lt, lq = np.log(tl / a), math.log(b / s)
    left_val = -(nu / s) * np.exp(nu * (lt + lq - lr)) * -np.expm1(-2 * nu * lt) * (1 + math.exp(-2 * nu * lq)) / denom
    lp, lu = math.log(s / a), np.log(b / tr)
    right_val = (nu / s) * np.exp(nu * (lp + lu - lr)) * (1 + math.exp(-2 * nu * lp)) * -np.expm1(-2 * nu * lu) / denom
    val = np.where(left, left_val, right_val)
    return float(val) if np.ndim(t) == 0 else val


def _cyl(nu, alpha, beta, x):
    return alpha * _sp.jv(nu, x) + (beta * _sp.yv(nu, x) if beta != 0 else 0.0)


def i_nu_closed(nu, rho, s, a, b, coeffs=(1.0, 0.0)) -> float:
    """Closed form of int_a^b f_{nu,s}(t) C(rho t) t dt with C = alpha J + beta Y."""
    nu = _order(nu)
    rho = float(rho)
    if not rho > 0:
        raise DomainError("rho must be > 0")
    TentKernel(nu, s, a, b)  # validates the ordering
    alpha, beta = map(float, coeffs)
    cs, ca, cb = (_cyl(nu, alpha, beta, rho * v) for v in (s, a, b))
    if nu == 0:
        lba = math.log(b / a)
        return float((cs - (ca * math.log(b / s) + cb * math.log(s / a)) / lba) / rho**2)
    w_a = _psi_ratio(nu, b / s, b / a)
    w_b = _psi_ratio(nu, s / a, b / a)
    return float((2 * nu / rho**2) * (cs - (ca * w_a + cb * w_b)))


def i_nu_quadrature(nu, rho, s, a, b, coeffs=(1.0, 0.0), rel_tol=1e-12) -> float:
    """The same integral by adaptive quadrature, split at the kink t = s."""
    k = TentKernel(_order(nu), s, a, b)
    alpha, beta = map(float, coeffs)

    def f(t):
        return tent_eval(k, t) * _cyl(k.nu, alpha, beta, rho * t) * t

    return quad_adaptive(f, a, s, rel_tol).value + quad_adaptive(f, s, b, rel_tol).value


def norm_integral(nu, zero: CertifiedZero | float, a: float, geom: AnnulusGeometry, tol: float = 1e-9) -> float:
    """int_a^b U_nu(rho, t)^2 t dt at an eigenvalue rho with U_nu(rho, a) = 0.

    Uses rho^2 int = (2/pi^2)(1 - N(rho b)/N(rho a)).  Raises
    PreconditionError when |U(rho, a)| exceeds ``tol`` times the local
    amplitude sqrt(N(rho a) N(rho b)).
    """
    nu = _order(nu)
    rho = float(zero.value if isinstance(zero, CertifiedZero) else zero)
    a = float(a)
    if not 0 < a < geom.b:
        raise DomainError("need 0 < a < b")
    na, nb = nicholson_n(nu, rho * a), nicholson_n(nu, rho * geom.b)
    resid = abs(u_big(nu, rho, a, geom))
    if resid > tol * math.sqrt(na * nb):
        raise PreconditionError(f"U(rho, a) = {resid:.3e} is not zero; rho is not an eigenvalue for a = {a}")
    return (2 / PI2) * (1 - nb / na) / rho**2


def norm_lower_bound(nu, geom: AnnulusGeometry, first_zero: float | None = None) -> float:
    """Lower bound on rho^2 int_1^b U^2 t dt.

    (2/pi^2)(b-1)/b for nu >= 1/2; for nu = 0 the bound uses the first zero.
    """
    nu = _order(nu)
    if nu >= 0.5:
        return (2 / PI2) * (geom.b - 1) / geom.b
    if nu == 0:
        if first_zero is None:
            first_zero = default_cache.get(0.0, geom, 1)[0].value
        return (2 / PI2) * (1 - nicholson_n(0.0, first_zero * geom.b) / nicholson_n(0.0, first_zero))
    raise DomainError("no norm lower bound is available for 0 < nu < 1/2")


def _vectorize(f):
    def g(x):
        try:
            out = np.asarray(f(x), dtype=float)
            if out.shape == np.shape(x):
                return out
        except (TypeError, ValueError):
            pass
        return np.array([float(f(xi)) for xi in x])

    return g


def dini_coefficient(f, nu, zero: CertifiedZero | float, geom: AnnulusGeometry, rel_tol: float = 1e-10) -> float:
    """a_m = int_1^b f U_nu(rho_m, t) t dt / int_1^b U_nu(rho_m, t)^2 t dt.

    ``f`` should be of bounded variation on [1, b]; that is not checked.
    """
    nu = _order(nu)
    rho = float(zero.value if isinstance(zero, CertifiedZero) else zero)
    norm = norm_integral(nu, rho, 1.0, geom)
    fv = _vectorize(f)
    num = quad_adaptive(lambda t: fv(t) * u_big(nu, rho, t, geom) * t, 1.0, geom.b, rel_tol, abs_tol=1e-13 * norm)
    return num.value / norm


def _table(nu, geom, m_terms, table):
    if table is None:
        return default_cache.get(nu, geom, m_terms)
    if len(table) < m_terms:
        raise DomainError(f"table has {len(table)} zeros, {m_terms} requested")
    return table


def _kernel_terms(nu, s, t, geom, m_terms, table):
    nu = _order(nu)
    s = float(s)
    if not 1 < s < geom.b:
        raise DomainError("need 1 < s < b")
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < 1) or np.any(tt > geom.b):
        raise DomainError("t must lie in [1, b]")
    if m_terms < 1:
        raise DomainError("m_terms must be >= 1")
    rhos = _table(nu, geom, m_terms, table).values[:m_terms]
    weight = 2 * nu if nu > 0 else 1.0
    b = geom.b
    norms = (2 / PI2) * (1 - nicholson_n(nu, rhos * b) / nicholson_n(nu, rhos))
    us = u_big(nu, rhos, s, geom)
    ut = u_big(nu, rhos[:, None], tt[None, :], geom)
    terms = weight * (us / norms)[:, None] * ut
    # U vanishes exactly at t = 1 and t = b
    terms[:, (tt == 1.0) | (tt == b)] = 0.0
    return terms


def series_kernel(nu, s, t, geom: AnnulusGeometry, m_terms: int, table: ZeroTable | None = None):
    """Partial sum over m <= m_terms of weight * U(rho_m, s) U(rho_m, t) / (rho_m^2 int U^2 t).

    weight = 2 nu for nu > 0 and 1 for nu = 0.  Sums are compensated.
    """
    terms = _kernel_terms(nu, s, t, geom, m_terms, table)
    val = np.array([math.fsum(col) for col in terms.T])
    return float(val[0]) if np.ndim(t) == 0 else val


def series_kernel_partial_sums(nu, s, t, geom: AnnulusGeometry, checkpoints, table: ZeroTable | None = None):
    """Array of partial sums, one row per entry of ``checkpoints``."""
    cps = sorted(int(c) for c in checkpoints)
    terms = _kernel_terms(nu, s, t, geom, cps[-1], table)
    return np.array([[math.fsum(col[:c]) for col in terms.T] for c in cps])


def series_kernel_closed(nu, s, t, geom: AnnulusGeometry):
    """Limit of series_kernel: the tent kernel f_{nu,s} on [1, b]."""
    return tent_eval(TentKernel(_order(nu), float(s), 1.0, geom.b), t)


def cs_bound_value(nu, rho, geom: AnnulusGeometry, a: float = 1.0) -> float:
    """Bound on |U_nu(rho_m, s)| over [a, b]: rho b/(2 pi nu), or (rho b/4 pi) log(b/a) at nu = 0."""
    nu = _order(nu)
    if nu == 0:
        return rho * geom.b / (4 * math.pi) * math.log(geom.b / a)
    return rho * geom.b / (2 * math.pi * nu)


def cs_bound_derivative(rho, geom: AnnulusGeometry, a: float = 1.0) -> float:
    """Bound on |dU/dt(rho_m, s)| over [a, b]: (rho/pi)(b/a)."""
    return rho / math.pi * geom.b / a


def decay_bound(nu, t):
    """t^-nu / (pi nu), valid below the least positive zero of t -> U(rho_m, t)."""
    nu = _order(nu)
    if nu == 0:
        raise DomainError("decay bound needs nu > 0")
    return np.asarray(t, dtype=float) ** -nu / (math.pi * nu)

