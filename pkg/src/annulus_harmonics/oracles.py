"""Independent numerical checks: quadrature, finite-difference Laplacians,
Green-identity integrals and zero-curve shape tests.

Nothing here knows about Bessel cross products; these routines are the
yardstick the analytic formulas are measured against.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureError

__all__ = [
    "QuadResult",
    "quad_adaptive",
    "gauss_legendre",
    "fd_laplacian",
    "fd_laplacian_cartesian",
    "Bump",
    "green_identity",
    "curve_shape",
    "unit_sphere_area",
    "green_constant",
]

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))
_WK = np.concatenate((_WGK[:-1], _WGK[::-1]))
# Gauss nodes are the odd-indexed Kronrod nodes (1, 3, 5, 7 in each half)
_WG_FULL = np.zeros(15)
_WG_FULL[[1, 3, 5]] = _WG[:3]
_WG_FULL[7] = _WG[3]
_WG_FULL[[9, 11, 13]] = _WG[2::-1]


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    panels: int


def _panel(f, a, b, vectorized):
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    x = c + h * _NODES
    fx = np.asarray(f(x) if vectorized else [f(xi) for xi in x], dtype=float)
    k = h * np.dot(_WK, fx)
    g = h * np.dot(_WG_FULL, fx)
    return k, abs(k - g)


def quad_adaptive(f, a, b, rel_tol=1e-10, abs_tol=0.0, max_panels=10_000, vectorized=True) -> QuadResult:
    """Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].

    The panel with the largest error estimate is bisected until the summed
    estimate drops below max(rel_tol * |value|, abs_tol).  ``f`` must accept a
    numpy array unless ``vectorized=False``.
    """
    if not a < b:
        raise DomainError("quad_adaptive needs a < b")
    k, e = _panel(f, a, b, vectorized)
    heap = [(-e, a, b, k)]
    total, err = k, e
    panels = 1
    while err > max(rel_tol * abs(total), abs_tol):
        if panels >= max_panels:
            raise QuadratureError(
                f"no convergence after {panels} panels (estimate {err:.3e}, value {total:.3e})"
            )
        e0, lo, hi, k0 = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        k1, e1 = _panel(f, lo, mid, vectorized)
        k2, e2 = _panel(f, mid, hi, vectorized)
        heapq.heappush(heap, (-e1, lo, mid, k1))
        heapq.heappush(heap, (-e2, mid, hi, k2))
        panels += 1
        # re-sum from the heap to keep round-off out of the running totals
        total = math.fsum(item[3] for item in heap)
        err = math.fsum(-item[0] for item in heap)
    return QuadResult(float(total), float(err), panels)


def gauss_legendre(n, a, b):
    """Nodes and weights of the n-point Gauss-Legendre rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def unit_sphere_area(dim: int) -> float:
    """Surface area of the unit sphere in R^dim."""
    return 2 * math.pi ** (dim / 2) / math.gamma(dim / 2)


def green_constant(dim: int) -> float:
    """a_N with -Laplace G = a_N delta: sigma_N (N - 2) for N >= 3, sigma_2 for N = 2."""
    if dim == 2:
        return unit_sphere_area(2)
    if dim < 2:
        raise DomainError("dimension must be >= 2")
    return unit_sphere_area(dim) * (dim - 2)


def fd_laplacian_cartesian(f, x, h):
    """(laplacian, curvature scale) of f at the Cartesian point x.

    ``f`` maps an array of shape (k, d) to k values.  The scale is the sum of
    the absolute second differences along each axis.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    pts = [x]
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        pts.extend((x + e, x - e))
    vals = np.asarray(f(np.array(pts)), dtype=float)
    centre = vals[0]
    second = (vals[1::2] + vals[2::2] - 2 * centre) / h**2
    return float(np.sum(second)), float(np.sum(np.abs(second)))


def _embed(r, gamma, z, dim_n):
    x = np.zeros(dim_n)
    x[0] = r * gamma
    x[1] = r * math.sqrt(max(0.0, 1.0 - gamma * gamma))
    x[-1] = z
    return x


def fd_laplacian(u, x, h, dim_n, pole_z=None, min_r=0.0):
    """Central-difference Laplacian of a field given in reduced coordinates.

    ``u(r, gamma, z)`` takes arrays.  The point is embedded in R^N with x'
    in the plane spanned by the pole direction and one orthogonal axis; each
    stencil point is mapped back to (|x'|, cos angle, x_N), which is exact for
    fields that depend on x' only through those two quantities.

    Returns (laplacian, curvature scale).
    """
    r, gamma, z = float(x.r), float(x.gamma), float(x.z)
    centre = _embed(r, gamma, z, dim_n)
    if r - h <= min_r:
        raise DomainError("stencil reaches the axis")
    if pole_z is not None and (z - h - pole_z) * (z + h - pole_z) <= 0:
        raise DomainError("stencil crosses the pole plane")

    def field(pts):
        xp = pts[:, :-1]
        rr = np.linalg.norm(xp, axis=1)
        gg = np.clip(xp[:, 0] / rr, -1.0, 1.0)
        return u(rr, gg, pts[:, -1])

    return fd_laplacian_cartesian(field, centre, h)


@dataclass(frozen=True)
class Bump:
    """Radial C-infinity bump exp(-1/(1 - |x - c|^2 / R^2)) supported in |x - c| < R."""

    center: tuple
    radius: float

    @property
    def dim(self):
        return len(self.center)

    def profile(self, s):
        """(phi, phi', phi'') as functions of the distance s to the centre."""
        s = np.asarray(s, dtype=float)
        R2 = self.radius**2
        inside = s < self.radius
        q = np.where(inside, 1.0 - s * s / R2, 1.0)
        phi = np.where(inside, np.exp(-1.0 / q), 0.0)
        h1 = -2.0 * s / (R2 * q * q)
        h2 = -2.0 / (R2 * q * q) - 8.0 * s * s / (R2 * R2 * q**3)
        return phi, np.where(inside, h1 * phi, 0.0), np.where(inside, (h2 + h1 * h1) * phi, 0.0)

    def value(self, pts):
        pts = np.atleast_2d(pts)
        s = np.linalg.norm(pts - np.asarray(self.center), axis=1)
        return self.profile(s)[0]

    def laplacian(self, pts):
        pts = np.atleast_2d(pts)
        s = np.linalg.norm(pts - np.asarray(self.center), axis=1)
        _, d1, d2 = self.profile(s)
        with np.errstate(invalid="ignore", divide="ignore"):
            radial = np.where(s > 0, (self.dim - 1) * d1 / np.where(s > 0, s, 1.0), 0.0)
        # at s = 0 the radial term tends to (dim - 1) phi''(0)
        radial = np.where(s > 0, radial, (self.dim - 1) * d2)
        return d2 + radial


def green_identity(G, y, phi: Bump, n_radial=64, n_angular=64, expected_const=None):
    """Return -int G(x) Laplace(phi)(x) dx / phi(y) for a kernel singular at y.

    The integral uses polar (2D) or spherical (3D) coordinates centred at y,
    which absorbs the kernel singularity into the Jacobian.  If
    ``expected_const`` is given, the pair (measured, relative error) is
    returned instead.
    """
    y = np.asarray(y, dtype=float)
    dim = y.size
    rs, wr = gauss_legendre(n_radial, 0.0, phi.radius)
    if dim == 2:
        th = np.linspace(0, 2 * np.pi, n_angular, endpoint=False)
        wt = np.full(n_angular, 2 * np.pi / n_angular)
        R, T = np.meshgrid(rs, th, indexing="ij")
        pts = np.stack([y[0] + R * np.cos(T), y[1] + R * np.sin(T)], axis=-1).reshape(-1, 2)
        w = (wr[:, None] * R * wt[None, :]).ravel()
    elif dim == 3:
        ct, wct = gauss_legendre(n_angular, -1.0, 1.0)
        ph = np.linspace(0, 2 * np.pi, n_angular, endpoint=False)
        wph = np.full(n_angular, 2 * np.pi / n_angular)
        R, C, P = np.meshgrid(rs, ct, ph, indexing="ij")
        S = np.sqrt(1 - C * C)
        pts = np.stack(
            [y[0] + R * S * np.cos(P), y[1] + R * S * np.sin(P), y[2] + R * C], axis=-1
        ).reshape(-1, 3)
        w = (wr[:, None, None] * R**2 * wct[None, :, None] * wph[None, None, :]).ravel()
    else:
        raise DomainError("green_identity supports dimensions 2 and 3")
    integral = float(np.dot(w, np.asarray(G(pts), dtype=float) * phi.laplacian(pts)))
    measured = -integral / float(phi.value(y[None, :])[0])
    if expected_const is None:
        return measured
    return measured, abs(measured - expected_const) / abs(expected_const)


def curve_shape(samples, tol=1e-10):
    """(monotone_decreasing, convex, min_second_divided_difference) of sampled y(x)."""
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise DomainError("curve_shape needs at least 3 (x, y) samples")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(np.diff(x) <= 0):
        raise DomainError("x samples must be strictly increasing")
    d1 = np.diff(y) / np.diff(x)
    d2 = 2 * np.diff(d1) / (x[2:] - x[:-2])
    m = float(np.min(d2))
    return bool(np.all(d1 < 0)), bool(m >= -tol), m
