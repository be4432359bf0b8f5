"""Green functions of the annulus 1 < |x'| < b and of the annular cylinder.

Points are given in reduced coordinates (|x'|, cosine of the angle between x'
and y', x_N); the Green functions depend on x' only through these.
Normalisation: -Laplace G(., y) = a_N delta_y in R^N, so that G behaves like
|x - y|^(2-N) near the pole (-log |x' - y'| for the planar annulus).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .cross_product import AnnulusGeometry, u_big_eigen
from .errors import DomainError, PolePlaneError, RegionError, TruncationError
from .special_functions import chebyshev_all, gegenbauer_all, nicholson_n, psi_kernel
from .zeros import CertifiedZero, default_cache

__all__ = [
    "ReducedPoint",
    "Pole",
    "TruncationSpec",
    "Normalization",
    "normalization",
    "GreenValue",
    "green_annulus",
    "annulus_mode",
    "annulus_tail_bound",
    "term_u",
    "mode_data",
    "green_cylinder",
    "green_cylinder_field",
    "in_region_l",
    "extend_green",
]


@dataclass(frozen=True)
class ReducedPoint:
    r: float
    gamma: float
    z: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 0):
            raise DomainError(f"r must be > 0, got {self.r!r}")
        if not abs(self.gamma) <= 1:
            raise DomainError(f"gamma must lie in [-1, 1], got {self.gamma!r}")
        if not math.isfinite(self.z):
            raise DomainError("z must be finite")


@dataclass(frozen=True)
class Pole:
    ry: float
    zy: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.ry) and self.ry > 1):
            raise DomainError(f"pole radius must exceed 1, got {self.ry!r}")
        if not math.isfinite(self.zy):
            raise DomainError("pole height must be finite")

    def d(self, geom: AnnulusGeometry) -> float:
        """Distance of y' to the annulus boundary."""
        self.check(geom)
        return geom.boundary_distance(self.ry)

    def check(self, geom: AnnulusGeometry):
        if not self.ry < geom.b:
            raise DomainError(f"pole radius {self.ry} must be < b = {geom.b}")


@dataclass(frozen=True)
class TruncationSpec:
    """Cut-offs for the double series: n = 0..n_max, m = 1..m_max."""

    n_max: int = 40
    m_max: int = 60
    tail_tol: float = 1e-6
    min_axial_gap: float = 1e-2

    def __post_init__(self):
        if self.n_max < 1 or self.m_max < 1:
            raise DomainError("n_max and m_max must be >= 1")
        if not self.tail_tol > 0:
            raise DomainError("tail_tol must be > 0")
        if not self.min_axial_gap > 0:
            raise DomainError("min_axial_gap must be > 0")


@dataclass(frozen=True)
class Normalization:
    sigma_n: float
    a_n: float


def normalization(dim: int) -> Normalization:
    """sigma_N = 2 pi^(N/2)/Gamma(N/2); a_N = sigma_N (N - 2), a_2 = sigma_2."""
    if dim < 2:
        raise DomainError("dimension must be >= 2")
    sigma = 2 * math.pi ** (dim / 2) / math.gamma(dim / 2)
    return Normalization(sigma, sigma if dim == 2 else sigma * (dim - 2))


@dataclass(frozen=True)
class GreenValue:
    value: float
    tail_estimate: float
    terms_used: int
    tail_heuristic: float = float("nan")


# --------------------------------------------------------------------------
# annulus


def _lam(geom):
    return (geom.dim_n - 3) / 2


def _polys(geom, n_max, gamma):
    if geom.dim_n == 3:
        return chebyshev_all(n_max, gamma)
    return gegenbauer_all(n_max, _lam(geom), gamma)


def annulus_mode(n: int, r, ry: float, geom: AnnulusGeometry):
    """Radial factor of the n-th angular mode of the annulus Green function.

    N = 3: log(b/ry) log r / log b for n = 0 and psi_n psi_n / (n psi_n) above;
    N >= 4: psi_{nu_n}(r) psi_{nu_n}(b/ry) / psi_{nu_n}(b) (roles swapped for r > ry).
    The (|x'| |y'|)^((3-N)/2) prefactor is not included.
    """
    r = np.asarray(r, dtype=float)
    b = geom.b
    lo, hi = np.minimum(r, ry), np.maximum(r, ry)
    if geom.dim_n == 3 and n == 0:
        return np.log(lo) * np.log(b / hi) / math.log(b)
    nu = geom.nu_n(n)
    val = psi_kernel(nu, lo, b / hi, b)
    return val / n if geom.dim_n == 3 else val


def annulus_tail_bound(geom: AnnulusGeometry, r: float, ry: float, n_terms: int) -> float:
    """Upper bound on the modes n >= n_terms, from |P_n(gamma)| <= P_n(1) and
    psi(p) psi(q) / psi(b) <= (pq/b)^nu / (1 - b^(-2 nu))."""
    q = min(r, ry) / max(r, ry)
    if q >= 1:
        return math.inf
    lam = _lam(geom)
    nu0 = geom.nu_n(n_terms)
    damp = 1.0 / -math.expm1(-2 * nu0 * math.log(geom.b))
    total, n = 0.0, n_terms
    while True:
        nu = geom.nu_n(n)
        if geom.dim_n == 3:
            coef = 1.0 / n
        else:
            coef = math.exp(math.lgamma(n + 2 * lam) - math.lgamma(n + 1) - math.lgamma(2 * lam))
        term = coef * q**nu
        total += term
        if term < 1e-18 * total or n > n_terms + 100_000:
            # geometric remainder of the ratio-bounded series
            ratio = q * ((n + 2 * lam) / (n + 1) if geom.dim_n > 3 else 1.0)
            if ratio < 1:
                total += term * ratio / (1 - ratio)
            else:
                return math.inf
            break
        n += 1
    return float(total * damp * (r * ry) ** (-lam))


def green_annulus(geom: AnnulusGeometry, x, y_radius: float, n_terms: int, tail_tol: float | None = 1e-8):
    """n_terms partial sum of the annulus Green function G(x', y').

    ``x`` is an (r, gamma) pair; arrays are accepted for both.  Raises
    TruncationError if the tail bound at any point exceeds ``tail_tol``
    (pass None to skip the check).
    """
    r = np.asarray(x[0], dtype=float)
    gamma = np.asarray(x[1], dtype=float)
    ry = float(y_radius)
    b = geom.b
    if not 1 < ry < b:
        raise DomainError("pole radius must lie in (1, b)")
    if np.any(r < 1) or np.any(r > b):
        raise DomainError("r must lie in [1, b]")
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    if tail_tol is not None:
        worst = max(annulus_tail_bound(geom, float(ri), ry, n_terms) for ri in np.atleast_1d(r).ravel())
        if worst > tail_tol:
            raise TruncationError(
                f"annulus series tail bound {worst:.3e} exceeds {tail_tol:.1e}; point too close to the pole",
                tail_estimate=worst,
            )
    polys = _polys(geom, n_terms - 1, gamma)
    modes = np.array([annulus_mode(n, r, ry, geom) for n in range(n_terms)])
    val = _neumaier(polys * modes, axis=0)
    if geom.dim_n > 3:
        val = val * (r * ry) ** (-_lam(geom))
    return float(val) if np.ndim(val) == 0 else val


# --------------------------------------------------------------------------
# cylinder


def _neumaier(a, axis=0):
    """Compensated sum along ``axis``."""
    a = np.moveaxis(np.asarray(a, dtype=float), axis, 0)
    s = np.zeros(a.shape[1:])
    c = np.zeros(a.shape[1:])
    for x in a:
        t = s + x
        big = np.abs(s) >= np.abs(x)
        c += np.where(big, (s - t) + x, (x - t) + s)
        s = t
    return s + c


FIT_BLOCK = 5


@dataclass(frozen=True)
class _Mode:
    nu: float
    rhos: np.ndarray
    kappa: np.ndarray  # 1 / (rho int_1^b U^2 t dt)


_mode_lock = threading.Lock()
_mode_store: dict[tuple[float, float, int], _Mode] = {}


def mode_data(nu: float, geom: AnnulusGeometry, m_max: int) -> _Mode:
    """Eigenvalues and normalisation weights for one angular mode (cached)."""
    key = (float(nu), float(geom.b), int(m_max))
    with _mode_lock:
        hit = _mode_store.get(key)
    if hit is not None:
        return hit
    rhos = default_cache.get(nu, geom, m_max).values
    ratio = nicholson_n(nu, rhos * geom.b) / nicholson_n(nu, rhos)
    kappa = rhos / ((2 / math.pi**2) * (1 - ratio))
    mode = _Mode(float(nu), rhos, kappa)
    with _mode_lock:
        _mode_store[key] = mode
    return mode


def _outer_weights(geom, n_max, r, ry):
    """Per-mode weights multiplying P_n(gamma) * sum_m u."""
    n = np.arange(n_max + 1)
    if geom.dim_n == 3:
        w = np.where(n == 0, 1.0, 2.0)
        return w[:, None] * np.ones_like(r)[None, :]
    lam = _lam(geom)
    ratio = normalization(geom.dim_n).a_n / normalization(geom.dim_n - 1).a_n
    nus = n + lam
    return ratio * ry ** (-lam) * nus[:, None] * (r ** (-lam))[None, :]


def _poly_at_one(geom, n):
    if geom.dim_n == 3:
        return np.ones_like(n, dtype=float)
    lam = _lam(geom)
    from scipy.special import gammaln

    return np.exp(gammaln(n + 2 * lam) - gammaln(n + 1) - gammaln(2 * lam))


def term_u(n: int, zero: CertifiedZero | float, y: Pole, x: ReducedPoint, geom: AnnulusGeometry) -> float:
    """u_{n,m,y}(x): one term of the double series (outer weights excluded).

    prefactor * U(rho, |x'|) U(rho, |y'|) / (rho int_1^b U^2 t dt) * exp(-rho |x_N - y_N|),
    with prefactor T_n(gamma) for N = 3 and |x'|^((3-N)/2) P_n^((N-3)/2)(gamma) above.
    """
    y.check(geom)
    nu = geom.nu_n(n)
    if isinstance(zero, CertifiedZero):
        if zero.nu is not None and abs(float(zero.nu) - nu) > 1e-12:
            raise DomainError(f"zero has order {zero.nu}, mode {n} needs {nu}")
        rho = zero.value
    else:
        rho = float(zero)
    if x.r == 1.0:
        return 0.0
    ratio = nicholson_n(nu, rho * geom.b) / nicholson_n(nu, rho)
    kappa = rho / ((2 / math.pi**2) * (1 - ratio))
    pref = float(_polys(geom, n, x.gamma)[n])
    if geom.dim_n > 3:
        pref *= x.r ** (-_lam(geom))
    val = u_big_eigen(nu, rho, x.r, geom) * u_big_eigen(nu, rho, y.ry, geom) * kappa
    return float(pref * val * math.exp(-rho * abs(x.z - y.zy)))


def _lower_rhos(geom, nu, m, first):
    """Lower bounds for rho_{nu, m}: (nu + m/4)/b, with the spacing pi/(2b-1)
    from the second zero on, and ``first`` (a known smaller-order zero)."""
    b = geom.b
    m = np.asarray(m, dtype=float)
    spaced = (nu + 0.5) / b + (m - 2) * math.pi / (2 * b - 1)
    base = np.where(m >= 2, np.maximum((nu + m / 4) / b, spaced), (nu + 0.25) / b)
    return np.maximum(base, first)


def _shape(region, geom, n, rho, m, r, dz):
    """Decay shape of |u_{n,m}| without the fitted constant."""
    lam = _lam(geom)
    p1 = _poly_at_one(geom, np.asarray(n))
    ex = np.exp(-rho * dz)
    if region == "inside":
        return p1 * rho**3 * ex
    if region == "outside":
        return p1 * rho**2 / m * ex
    nu = np.asarray(n) + lam
    return p1 * rho**3 * r ** (-(nu + (geom.dim_n - 1) / 2)) * ex


def _tail_bound(region, geom, n_max, m_max, r, dz, mode_fits, tail_const, first_rho, ry):
    """Bound on all terms outside n <= n_max, m <= m_max.

    ``mode_fits`` holds (last rho, |weight|, fitted constant) per computed
    mode and bounds its remaining m-terms; ``tail_const`` scales the shape
    for the omitted modes, whose eigenvalues are replaced by lower bounds.
    """
    b = geom.b
    step = math.pi / (2 * b - 1)
    total = 0.0
    js = np.arange(1, 4000)
    for n, (rho_last, w, c) in enumerate(mode_fits):
        rho = rho_last + js * step
        if region != "outside":
            # rho^k e^{-rho dz} is decreasing only beyond k/dz
            rho = np.maximum(rho, 3.0 / dz)
        total += c * w * float(np.sum(_shape(region, geom, n, rho, m_max + js, r, dz)))
    ms = np.arange(1, 4000)
    rest = 0.0
    for n in range(n_max + 1, n_max + 20_000):
        rho = _lower_rhos(geom, geom.nu_n(n), ms, first_rho)
        if region != "outside":
            rho = np.maximum(rho, 3.0 / dz)
        block = float(np.sum(_shape(region, geom, n, rho, ms, r, dz))) * _mode_weight_bound(geom, n, r, ry)
        rest += block
        if block <= 1e-18 * rest:
            break
    else:
        return math.inf
    return total + tail_const * rest


def _mode_weight_bound(geom, n, r, ry):
    if geom.dim_n == 3:
        return 1.0 if n == 0 else 2.0
    lam = _lam(geom)
    ratio = normalization(geom.dim_n).a_n / normalization(geom.dim_n - 1).a_n
    return ratio * (n + lam) * ry ** (-lam) * r ** (-lam)


def _series(geom, r, gamma, dz, pole, trunc, region, fit=True):
    """Truncated double series at arrays (r, gamma, |dz|).

    Returns (values, per-point tail bound, per-point heuristic tail).
    """
    n_max, m_max = trunc.n_max, trunc.m_max
    ry = pole.ry
    polys = _polys(geom, n_max, gamma)
    weights = _outer_weights(geom, n_max, r, ry)
    mode_sums = np.empty((n_max + 1, r.size))
    on_inner = r == 1.0
    const = np.zeros(r.size)
    mode_const = np.zeros((n_max + 1, r.size))
    heur = np.zeros(r.size)
    last_terms = np.zeros((n_max + 1, r.size))
    mode_last = []
    first_rho_max = 0.0
    for n in range(n_max + 1):
        md = mode_data(geom.nu_n(n), geom, m_max)
        rhos = md.rhos
        with np.errstate(over="ignore", invalid="ignore"):
            ur = u_big_eigen(md.nu, rhos[:, None], r[None, :], geom)
            ur[:, on_inner] = 0.0
            uy = u_big_eigen(md.nu, rhos, ry, geom)
            terms = (md.kappa * uy)[:, None] * ur * np.exp(-np.outer(rhos, dz))
        if not np.all(np.isfinite(terms)):
            raise DomainError("series terms are not representable at this point; move further from the axis")
        mode_sums[n] = _neumaier(terms, axis=0)
        full = np.abs(terms * (weights[n] * polys[n])[None, :])
        last_terms[n] = full[-1]
        if fit:
            ms = np.arange(1, m_max + 1)
            shp = _shape(region, geom, n, rhos[:, None], ms[:, None], r[None, :], dz[None, :])
            shp = shp * np.abs(weights[n])[None, :]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(shp > 0, full / shp, 0.0)
            # constants come from the terms nearest the cut: the last few m
            # for this mode's own m-tail, the last few modes for the n-tail
            mode_const[n] = ratio[-FIT_BLOCK:].max(axis=0)
            if n > n_max - FIT_BLOCK:
                const = np.maximum(const, ratio.max(axis=0))
            # ratio of consecutive terms as a geometric tail proxy in m
            q = np.where(full[-2] > 0, full[-1] / np.where(full[-2] > 0, full[-2], 1.0), 1.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                heur += np.where(q < 1, full[-1] * q / (1 - q), np.inf)
        mode_last.append(rhos[-1])
        first_rho_max = max(first_rho_max, rhos[0])
    values = _neumaier(weights * polys * mode_sums, axis=0)
    if not fit:
        return values, None, None
    # geometric proxy in n from the last two mode sums
    a, b_ = np.abs(weights[-1] * mode_sums[-1]), np.abs(weights[-2] * mode_sums[-2])
    qn = np.where(b_ > 0, a / np.where(b_ > 0, b_, 1.0), 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        heur += np.where(qn < 1, a * qn / (1 - qn), np.inf)
    tails = np.empty(r.size)
    for i in range(r.size):
        fits = [
            (mode_last[n], abs(_mode_weight_bound(geom, n, r[i], ry)), mode_const[n, i])
            for n in range(n_max + 1)
        ]
        tails[i] = _tail_bound(region, geom, n_max, m_max, r[i], dz[i], fits, const[i], first_rho_max, ry)
    return values, tails, heur


def _check_pole(pole, geom, dz, trunc):
    pole.check(geom)
    if np.any(dz < trunc.min_axial_gap):
        raise PolePlaneError(
            f"|x_N - y_N| = {float(np.min(dz)):.3e} is below min_axial_gap = {trunc.min_axial_gap}"
        )


def _terms_used(trunc):
    return (trunc.n_max + 1) * trunc.m_max


def green_cylinder(geom: AnnulusGeometry, x: ReducedPoint, y: Pole, trunc: TruncationSpec = TruncationSpec()) -> GreenValue:
    """Truncated double series for the annular-cylinder Green function G(x, y).

    Inner sums run over m (exponential decay in rho |dz|), outer over n.
    tail_estimate bounds the omitted terms using the decay shape
    rho^3 e^{-rho |dz|} with a constant fitted to the computed terms and
    lower bounds for the omitted eigenvalues.
    """
    if not 1 <= x.r <= geom.b:
        raise DomainError("x.r must lie in [1, b]; use extend_green outside the cylinder")
    dz = abs(x.z - y.zy)
    _check_pole(y, geom, np.array([dz]), trunc)
    vals, tails, heur = _series(
        geom, np.array([x.r]), np.array([x.gamma]), np.array([dz]), y, trunc, "inside"
    )
    res = GreenValue(float(vals[0]), float(tails[0]), _terms_used(trunc), float(heur[0]))
    if res.tail_estimate > trunc.tail_tol:
        raise TruncationError(
            f"tail estimate {res.tail_estimate:.3e} exceeds tail_tol {trunc.tail_tol:.1e}",
            tail_estimate=res.tail_estimate,
        )
    return res


def green_cylinder_field(geom: AnnulusGeometry, r, gamma, z, y: Pole, trunc: TruncationSpec = TruncationSpec(),
                         with_tail: bool = False):
    """Vectorised truncated series at many points (no truncation check unless ``with_tail``).

    Points may lie outside [1, b] radially; no region check is made here.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float)).ravel()
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), r.shape).copy()
    z = np.broadcast_to(np.asarray(z, dtype=float), r.shape)
    dz = np.abs(z - y.zy)
    _check_pole(y, geom, dz, trunc)
    vals, tails, _ = _series(geom, r, gamma, dz, y, trunc, "inside", fit=with_tail)
    return (vals, tails) if with_tail else vals


def in_region_l(x: ReducedPoint, y: Pole, b_prime: float) -> bool:
    """x_N != y_N and |x'| > exp(-|x_N - y_N| / b')."""
    if not b_prime > 1:
        raise DomainError("b_prime must exceed 1")
    dz = abs(x.z - y.zy)
    return dz > 0 and x.r > math.exp(-dz / b_prime)


def extend_green(geom: AnnulusGeometry, x: ReducedPoint, y: Pole, trunc: TruncationSpec = TruncationSpec(),
                 b_prime: float | None = None) -> GreenValue:
    """Harmonic extension of G(., y) to the region L, by the same double series.

    For |x'| < 1 the tail bound uses the shape rho^3 |x'|^-(nu_n + (N-1)/2) e^{-rho |dz|},
    for |x'| > b the shape rho^2 / m e^{-rho |dz|}.
    """
    if b_prime is None:
        b_prime = 1.05 * geom.b
    if not b_prime > geom.b:
        raise DomainError(f"b_prime must exceed b = {geom.b}")
    if not in_region_l(x, y, b_prime):
        raise RegionError(f"point (r={x.r}, z={x.z}) is outside the extension region L")
    dz = abs(x.z - y.zy)
    _check_pole(y, geom, np.array([dz]), trunc)
    region = "inner" if x.r < 1 else ("outside" if x.r > geom.b else "inside")
    vals, tails, heur = _series(
        geom, np.array([x.r]), np.array([x.gamma]), np.array([dz]), y, trunc, region
    )
    res = GreenValue(float(vals[0]), float(tails[0]), _terms_used(trunc), float(heur[0]))
    if res.tail_estimate > trunc.tail_tol:
        raise TruncationError(
            f"tail estimate {res.tail_estimate:.3e} exceeds tail_tol {trunc.tail_tol:.1e}",
            tail_estimate=res.tail_estimate,
        )
    return res
