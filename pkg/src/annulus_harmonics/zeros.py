"""Certified zeros of cross-product Bessel functions.

Every zero is returned with a sign-change bracket and its residual so that
downstream checks never depend on the root finder's internals.  Completeness
of the scans rests on the spacing lower bound pi/(2b - 1) between consecutive
eigenvalues (orders nu >= 1/2, index m >= 2) and on the lower bound
rho_m > (nu + m/4)/b for the starting point; below the reach of those bounds the
scans are oversampled.
"""

from __future__ import annotations

import csv
import io
import json
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cross_product import AnnulusGeometry, u_big, u_big_drho, u_small, u_small_partials
from .errors import DomainError, IterationLimitError
from .special_functions import DEFAULT_ACCURACY, Accuracy, _order

__all__ = [
    "CertifiedZero",
    "ZeroTable",
    "ZeroTableCache",
    "default_cache",
    "mcmahon_estimate",
    "refine_zero",
    "rho_zeros",
    "x_zeros",
    "y_zero_curve",
    "least_positive_zero_t",
    "format_float",
]

HANDOFF_REL = 1e-6
FINAL_REL = 1e-12
CSV_FIELDS = ("nu", "m", "value", "bracket_lo", "bracket_hi", "residual")


def format_float(v) -> str:
    """17 significant digits, round-trip exact."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.16e}"


@dataclass(frozen=True)
class CertifiedZero:
    nu: float | None
    index: int
    value: float
    bracket_lo: float
    bracket_hi: float
    residual: float
    deriv_at_zero: float = float("nan")

    @property
    def width(self) -> float:
        return self.bracket_hi - self.bracket_lo


@dataclass(frozen=True)
class ZeroTable:
    geom: AnnulusGeometry
    nu: float
    zeros: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.zeros)

    def __getitem__(self, i):
        return self.zeros[i]

    @property
    def values(self) -> np.ndarray:
        return np.array([z.value for z in self.zeros])

    def head(self, m: int) -> "ZeroTable":
        if m > len(self.zeros):
            raise DomainError(f"table holds {len(self.zeros)} zeros, {m} requested")
        return ZeroTable(self.geom, self.nu, self.zeros[:m])

    def violations(self, accuracy: Accuracy = DEFAULT_ACCURACY) -> list[str]:
        """Return descriptions of every broken table invariant (empty if none)."""
        out = []
        b = self.geom.b
        prev = None
        for z in self.zeros:
            if not z.bracket_lo < z.value < z.bracket_hi:
                out.append(f"m={z.index}: value outside bracket")
            if z.width >= 1e-10 * z.value:
                out.append(f"m={z.index}: bracket too wide")
            if prev is not None:
                if z.value <= prev:
                    out.append(f"m={z.index}: not increasing")
                elif self.nu >= 0.5 and z.index >= 3 and z.value - prev <= math.pi / (2 * b - 1):
                    out.append(f"m={z.index}: gap below pi/(2b-1)")
            if self.nu >= 0.5 and z.value <= (self.nu + z.index / 4) / b:
                out.append(f"m={z.index}: below (nu + m/4)/b")
            prev = z.value
        return out

    # -- serialisation ----------------------------------------------------
    def rows(self):
        for z in self.zeros:
            yield {
                "nu": format_float(self.nu),
                "m": str(z.index),
                "value": format_float(z.value),
                "bracket_lo": format_float(z.bracket_lo),
                "bracket_hi": format_float(z.bracket_hi),
                "residual": format_float(z.residual),
            }

    def to_csv(self, command: str = "zeros") -> str:
        buf = io.StringIO()
        buf.write(f"# annulus-harmonics v{__version__} {command}\n")
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow(row)
        return buf.getvalue()

    def to_json(self) -> str:
        body = ",\n".join(
            "  {" + ", ".join(f'"{k}": {r[k]}' for k in CSV_FIELDS) + "}" for r in self.rows()
        )
        return (
            "{\n"
            f'"version": "{__version__}",\n"b": {format_float(self.geom.b)},\n'
            f'"nu": {format_float(self.nu)},\n"zeros": [\n{body}\n]\n}}\n'
        )

    @classmethod
    def _from_records(cls, records, geom):
        zeros = []
        nu = None
        for r in records:
            nu = float(r["nu"])
            zeros.append(
                CertifiedZero(
                    nu=nu,
                    index=int(r["m"]),
                    value=float(r["value"]),
                    bracket_lo=float(r["bracket_lo"]),
                    bracket_hi=float(r["bracket_hi"]),
                    residual=float(r["residual"]),
                )
            )
        return cls(geom, nu if nu is not None else 0.0, tuple(zeros))

    @classmethod
    def from_csv(cls, text: str, geom: AnnulusGeometry) -> "ZeroTable":
        lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
        return cls._from_records(csv.DictReader(lines), geom)

    @classmethod
    def from_json(cls, text: str) -> "ZeroTable":
        data = json.loads(text)
        geom = AnnulusGeometry(float(data["b"]))
        return cls._from_records(data["zeros"], geom)


def mcmahon_estimate(nu, geom: AnnulusGeometry, m: int) -> float:
    """Large-index asymptote m pi/(b - 1); used to place scans, not to certify."""
    _order(nu)
    if m < 1:
        raise DomainError("index m must be >= 1")
    return m * math.pi / (geom.b - 1)


def refine_zero(bracket, f, fprime=None, *, index=1, nu=None, handoff=HANDOFF_REL,
                final=FINAL_REL, max_iter=200) -> CertifiedZero:
    """Certify a simple zero of ``f`` inside a sign-change bracket.

    Bisection down to a relative width ``handoff``, then Newton steps (if a
    derivative is supplied) that are rejected whenever they leave the current
    bracket.  Convergence is confirmed by probing both sides of the iterate,
    so the returned bracket always carries a verified sign change of width
    below ``final`` times the zero.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise DomainError("bracket must satisfy lo < hi")
    flo, fhi = float(f(lo)), float(f(hi))
    if flo == 0.0 or fhi == 0.0:
        raise DomainError("bracket end point is an exact zero; shift the bracket")
    if np.sign(flo) == np.sign(fhi):
        raise DomainError("f has the same sign at both bracket ends")
    slo = np.sign(flo)

    def update(x, fx):
        nonlocal lo, hi
        if np.sign(fx) == slo:
            lo = x
        else:
            hi = x

    it = 0
    while hi - lo > handoff * abs(0.5 * (lo + hi)):
        mid = 0.5 * (lo + hi)
        fm = float(f(mid))
        if fm == 0.0:
            break
        update(mid, fm)
        it += 1
        if it > max_iter:
            raise IterationLimitError("bisection stalled", index=index)

    x = 0.5 * (lo + hi)
    value = None
    while it <= max_iter:
        it += 1
        fx = float(f(x))
        tol = final * abs(x)
        if fx == 0.0 or hi - lo < tol:
            probe = 0.4 * tol
            a, b = x - probe, x + probe
            fa, fb = float(f(a)), float(f(b))
            if fa != 0.0 and fb != 0.0 and np.sign(fa) != np.sign(fb):
                lo, hi = a, b
            value = x
            break
        update(x, fx)
        step = None
        if fprime is not None:
            d = float(fprime(x))
            if d != 0.0 and math.isfinite(d):
                step = fx / d
        x_new = x - step if step is not None else 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) < 0.5 * tol:
            probe = 0.4 * tol
            a, b = x_new - probe, x_new + probe
            fa, fb = float(f(a)), float(f(b))
            if fa != 0.0 and fb != 0.0 and np.sign(fa) != np.sign(fb):
                lo, hi, value = a, b, x_new
                break
            x_new = 0.5 * (lo + hi)
        x = x_new
    if value is None:
        raise IterationLimitError("zero refinement did not converge", index=index)
    if not lo < value < hi:
        value = 0.5 * (lo + hi)
    if hi - lo >= max(final, 1e-15) * abs(value) * 1.0000001:
        raise IterationLimitError("could not certify bracket width", index=index)
    residual = abs(float(f(value)))
    if fprime is not None:
        deriv = float(fprime(value))
    else:
        deriv = (float(f(hi)) - float(f(lo))) / (hi - lo)
    return CertifiedZero(nu, index, value, lo, hi, residual, deriv)


def _scan(fvec, start, steps, count, max_points=5_000_000):
    """Sign-change brackets of ``fvec`` on a grid starting at ``start``.

    ``steps(found)`` returns the grid step to use once ``found`` sign changes
    are known, so the scan can coarsen after the guaranteed-spacing regime
    begins.
    """
    brackets = []
    x0 = start
    f0 = float(fvec(np.array([x0]))[0])
    if f0 == 0.0:
        x0 *= 1 - 1e-9
        f0 = float(fvec(np.array([x0]))[0])
    used = 0
    while len(brackets) < count:
        h = steps(len(brackets))
        n = 512
        grid = x0 + h * np.arange(1, n + 1)
        vals = np.asarray(fvec(grid), dtype=float)
        exact = vals == 0.0
        if np.any(exact):
            grid[exact] += 1e-3 * h
            vals[exact] = np.asarray(fvec(grid[exact]), dtype=float)
        xs = np.concatenate(([x0], grid))
        fs = np.concatenate(([f0], vals))
        change = np.nonzero(np.sign(fs[:-1]) != np.sign(fs[1:]))[0]
        if len(change) == 0:
            x0, f0 = xs[-1], fs[-1]
        else:
            # keep changes while the planned step is unchanged, then re-plan
            last = None
            for i in change:
                if len(brackets) >= count or steps(len(brackets)) != h:
                    break
                brackets.append((xs[i], xs[i + 1]))
                last = i
            x0, f0 = xs[last + 1], fs[last + 1]
        used += n
        if used > max_points:
            raise IterationLimitError("scan exceeded its point budget", index=len(brackets) + 1)
    return brackets


def _rho_steps(nu, b):
    guaranteed = math.pi / (2 * b - 1)
    fine = min(guaranteed, math.pi / (b - 1)) / 8 / 4

    def steps(found):
        if nu >= 0.5 and found >= 2:
            return guaranteed / 4
        return fine

    return steps


def rho_zeros(nu, geom: AnnulusGeometry, m_max: int, accuracy: Accuracy = DEFAULT_ACCURACY) -> ZeroTable:
    """The first ``m_max`` positive zeros of rho -> U_nu(rho, 1), certified."""
    nu = _order(nu)
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    b = geom.b
    start = (nu + 0.25) / b if nu >= 0.5 else 1e-6

    def f(r):
        return u_big(nu, r, 1.0, geom)

    def df(r):
        return u_big_drho(nu, r, 1.0, geom)

    brackets = _scan(lambda r: u_big(nu, r, np.ones_like(r), geom), start, _rho_steps(nu, b), m_max)
    zeros = tuple(
        refine_zero(br, f, df, index=m, nu=nu) for m, br in enumerate(brackets, start=1)
    )
    return ZeroTable(geom, nu, zeros)


def x_zeros(nu, y, k_max: int) -> list[CertifiedZero]:
    """First ``k_max`` zeros of x -> u_nu(x, y) in (1, inf)."""
    nu = _order(nu)
    y = float(y)
    if not y > 0:
        raise DomainError("y must be > 0")
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    # Sturm comparison with u_xx = q u, q >= -(y^2 + 1/4): zeros (including x = 1)
    # are at least pi/sqrt(y^2 + 1/4) apart, and pi/y apart once nu >= 1/2.
    omega = y if nu >= 0.5 else math.sqrt(y * y + 0.25)
    h = math.pi / (4 * omega)

    def f(x):
        return u_small(nu, x, y)

    def df(x):
        return u_small_partials(nu, x, y)[1]

    brackets = _scan(lambda x: u_small(nu, x, np.full_like(x, y)), 1 + h / 4, lambda _: h, k_max)
    return [refine_zero(br, f, df, index=k, nu=nu) for k, br in enumerate(brackets, start=1)]


def y_zero_curve(nu, k: int, x_grid) -> list[CertifiedZero]:
    """y_{nu,k}(x) sampled on ``x_grid``: the k-th zero of y -> u_nu(x, y)."""
    nu = _order(nu)
    xs = [float(x) for x in x_grid]
    if any(x <= 1 for x in xs) or any(b <= a for a, b in zip(xs, xs[1:])):
        raise DomainError("x_grid must be strictly increasing with all values > 1")
    return [rho_zeros(nu, AnnulusGeometry(x), k)[k - 1] for x in xs]


def least_positive_zero_t(nu, rho, geom: AnnulusGeometry) -> float:
    """Least positive zero of t -> U_nu(rho, t) (it lies in (0, 1] for eigenvalues)."""
    nu = _order(nu)
    rho = float(rho)
    # zeros of t -> U(rho, t) are at least pi/rho apart for nu >= 1/2
    h = math.pi / (16 * rho)
    start = 1e-3 / rho
    brackets = _scan(lambda t: u_big(nu, rho, t, geom), start, lambda _: h, 1)
    z = refine_zero(brackets[0], lambda t: u_big(nu, rho, t, geom), index=1, nu=nu)
    return z.value


class ZeroTableCache:
    """Thread-safe, grow-only store of zero tables keyed by (nu, b)."""

    def __init__(self):
        self._tables: dict[tuple[float, float], ZeroTable] = {}
        self._lock = threading.Lock()

    def get(self, nu, geom: AnnulusGeometry, m: int) -> ZeroTable:
        key = (float(nu), float(geom.b))
        with self._lock:
            table = self._tables.get(key)
            if table is None or len(table) < m:
                table = rho_zeros(nu, AnnulusGeometry(geom.b), m)
                self._tables[key] = table
        return table.head(m)

    def clear(self):
        with self._lock:
            self._tables.clear()


default_cache = ZeroTableCache()
