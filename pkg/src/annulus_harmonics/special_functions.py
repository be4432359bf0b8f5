"""Real-order Bessel functions, their derivatives and companion polynomials.

Values of J_nu and Y_nu come from ``scipy.special`` (AMOS / Cephes); everything
built on top of them (derivatives through the order recurrences, the modulus
N_nu, cylinder-function second derivatives) is computed here so that the
downstream identities use a single consistent set of formulas.

All evaluators accept scalars or numpy arrays for the argument and return the
same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import DomainError

__all__ = [
    "Order",
    "Accuracy",
    "DEFAULT_ACCURACY",
    "bessel_j",
    "bessel_y",
    "cylinder",
    "cylinder_derivative",
    "cylinder_second_derivative",
    "nicholson_n",
    "nicholson_n_derivative",
    "gegenbauer",
    "gegenbauer_all",
    "chebyshev",
    "chebyshev_all",
    "psi",
    "psi_kernel",
]

_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class Order:
    """Bessel order nu >= 0."""

    nu: float

    def __post_init__(self):
        if not math.isfinite(self.nu) or self.nu < 0:
            raise DomainError(f"order must be finite and >= 0, got {self.nu!r}")

    @classmethod
    def from_dimension(cls, n: int, dim_n: int) -> "Order":
        """nu_n = n + (N - 3)/2 for the angular index n in R^N."""
        if n < 0 or dim_n < 3:
            raise DomainError(f"need n >= 0 and N >= 3, got n={n}, N={dim_n}")
        return cls(n + (dim_n - 3) / 2)

    def __float__(self):
        return float(self.nu)


@dataclass(frozen=True)
class Accuracy:
    """Target accuracy: relative tolerance plus an absolute floor near zeros.

    The absolute floor is scaled by max(1, |x|) where it is applied.
    """

    rel_tol: float = 1e-12
    abs_floor: float = 1e-13

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if not self.abs_floor >= 0:
            raise DomainError("abs_floor must be non-negative")

    def floor_at(self, x) -> float:
        return self.abs_floor * max(1.0, float(np.max(np.abs(x))))


DEFAULT_ACCURACY = Accuracy()


def _order(nu) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or nu < 0:
        raise DomainError(f"order must be finite and >= 0, got {nu!r}")
    return nu


def _arg(x, strict):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    if strict and np.any(arr <= 0):
        raise DomainError("argument must be > 0")
    if not strict and np.any(arr < 0):
        raise DomainError("argument must be >= 0")
    return arr


def _out(val, like):
    if not np.all(np.isfinite(val)):
        raise OverflowError("Bessel value not representable in double precision")
    return float(val) if np.ndim(like) == 0 else val


def bessel_j(nu, x):
    """J_nu(x) for nu >= 0, x >= 0."""
    nu = _order(nu)
    arr = _arg(x, strict=False)
    return _out(_sp.jv(nu, arr), x)


def bessel_y(nu, x):
    """Y_nu(x) for nu >= 0, x > 0."""
    nu = _order(nu)
    arr = _arg(x, strict=True)
    return _out(_sp.yv(nu, arr), x)


def _raw(kind, nu, x):
    if kind == "J":
        return _sp.jv(nu, x)
    if kind == "Y":
        return _sp.yv(nu, x)
    raise DomainError(f"kind must be 'J' or 'Y', got {kind!r}")


def cylinder(kind, nu, x):
    """J_nu or Y_nu selected by ``kind``."""
    return bessel_j(nu, x) if kind == "J" else bessel_y(nu, x)


def cylinder_derivative(kind, nu, x):
    """C'_nu(x) for C = J or Y.

    Uses (C_{nu-1} - C_{nu+1})/2 when nu >= 1.  Below that the equivalent form
    nu C_nu / x - C_{nu+1} avoids negative orders.
    """
    nu = _order(nu)
    arr = _arg(x, strict=True)
    if nu >= 1:
        val = 0.5 * (_raw(kind, nu - 1, arr) - _raw(kind, nu + 1, arr))
    else:
        val = nu * _raw(kind, nu, arr) / arr - _raw(kind, nu + 1, arr)
    return _out(val, x)


def _derivs(kind, nu, z):
    """(C, C', C'') of J or Y at z > 0 from the orders nu and nu+1 only."""
    c0 = _raw(kind, nu, z)
    c1 = _raw(kind, nu + 1, z)
    d1 = nu * c0 / z - c1
    # C'_{nu+1} = C_nu - (nu+1) C_{nu+1}/z
    d2 = -nu * c0 / z**2 + nu * d1 / z - (c0 - (nu + 1) * c1 / z)
    return c0, d1, d2


def cylinder_second_derivative(kind, nu, x):
    """C''_nu(x) through the recurrences for C'_nu and C'_{nu+1}."""
    nu = _order(nu)
    arr = _arg(x, strict=True)
    return _out(_derivs(kind, nu, arr)[2], x)


def nicholson_n(nu, x):
    """N_nu(x) = J_nu(x)^2 + Y_nu(x)^2."""
    nu = _order(nu)
    arr = _arg(x, strict=True)
    return _out(_sp.jv(nu, arr) ** 2 + _sp.yv(nu, arr) ** 2, x)


def nicholson_n_derivative(nu, x):
    """N'_nu(x) = 2 (J J' + Y Y')."""
    nu = _order(nu)
    arr = _arg(x, strict=True)
    j, jp, _ = _derivs("J", nu, arr)
    y, yp, _ = _derivs("Y", nu, arr)
    return _out(2.0 * (j * jp + y * yp), x)


def _poly_arg(t):
    arr = np.asarray(t, dtype=float)
    if np.any(np.abs(arr) > 1 + 1e-14):
        raise DomainError("polynomial argument must satisfy |t| <= 1")
    return np.clip(arr, -1.0, 1.0)


def gegenbauer_all(n_max, lam, t):
    """Array of P_k^(lam)(t) for k = 0..n_max, stacked along axis 0."""
    if n_max < 0:
        raise DomainError("degree must be >= 0")
    if not lam > 0:
        raise DomainError("Gegenbauer parameter must be > 0")
    t = _poly_arg(t)
    out = np.empty((n_max + 1,) + t.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * lam * t
    for k in range(2, n_max + 1):
        out[k] = (2.0 * t * (k + lam - 1) * out[k - 1] - (k + 2 * lam - 2) * out[k - 2]) / k
    return out


def gegenbauer(n, lam, t):
    """Ultraspherical polynomial P_n^(lam)(t) by the three-term recurrence."""
    val = gegenbauer_all(int(n), lam, t)[int(n)]
    return float(val) if np.ndim(t) == 0 else val


def chebyshev_all(n_max, t):
    """Array of T_k(t) for k = 0..n_max."""
    if n_max < 0:
        raise DomainError("degree must be >= 0")
    t = _poly_arg(t)
    out = np.empty((n_max + 1,) + t.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = t
    for k in range(2, n_max + 1):
        out[k] = 2.0 * t * out[k - 1] - out[k - 2]
    return out


def chebyshev(n, t):
    """Chebyshev polynomial T_n(t) = cos(n arccos t)."""
    val = chebyshev_all(int(n), t)[int(n)]
    return float(val) if np.ndim(t) == 0 else val


def psi(nu, t):
    """t^nu - t^(-nu) = 2 sinh(nu log t), for nu > 0 and t > 0."""
    nu = _order(nu)
    if nu == 0:
        raise DomainError("psi is undefined at nu = 0; use the logarithmic branch")
    arr = _arg(t, strict=True)
    arg = nu * np.log(arr)
    if np.any(np.abs(arg) > _LOG_MAX - 1):
        raise OverflowError("nu * log(t) exceeds the double range in psi")
    return _out(2.0 * np.sinh(arg), t)


def _neg_expm1(x):
    return -np.expm1(-x)


def psi_kernel(nu, p, q, r):
    """psi_nu(p) psi_nu(q) / psi_nu(r) without overflow, for p, q, r > 1.

    Writing psi_nu(t) = t^nu (1 - t^(-2nu)) gives
    (pq/r)^nu (1 - p^-2nu)(1 - q^-2nu) / (1 - r^-2nu), which stays finite for
    any nu as long as pq <= r (the only case the Green kernels need).
    At nu = 0 the logarithmic kernel log(p) log(q) / log(r) is returned; it is
    the nu -> 0 limit of psi_kernel / (2 nu).
    """
    nu = _order(nu)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    lp, lq, lr = np.log(p), np.log(q), math.log(r)
    if nu == 0:
        return lp * lq / lr
    with np.errstate(over="ignore", under="ignore"):
        scale = np.exp(nu * (lp + lq - lr))
        return scale * _neg_expm1(2 * nu * lp) * _neg_expm1(2 * nu * lq) / _neg_expm1(2 * nu * lr)
