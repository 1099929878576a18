"""Profit intensity of a withdrawal strategy against Gaussian quotes.

The Rest of World proposes a log-quote q ~ Normal(0, 1/m).  A player who
sells only when q exceeds her withdrawal level ``a`` earns, per unit time,

    rho(a) = integral_a^inf q f(q) dq / (1 + integral_a^inf f(q) dq)
           = phi(z) / (sqrt(m) (2 - Phi(z))),        z = a sqrt(m).

Since rho'(a) = f(a) (rho(a) - a) / (1 + P(q > a)), the maximiser of rho is
exactly the fixed point rho(a) = a, and the map a -> rho(a) is
superattracting there.  For m = 1 the fixed point is 0.2760298; in general
a_max(m) = a_max(1) / sqrt(m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import erfc

from ._io import write_csv
from .projective import DomainError

__all__ = [
    "RWQuoteModel",
    "FixedPointResult",
    "NonConvergenceError",
    "QuadratureError",
    "BracketError",
    "rho",
    "rho_quadrature",
    "fixed_point",
    "maximize_rho",
    "iterate_map",
    "rho_curve",
    "write_rho_curve",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
TAIL_SIGMAS = 12.0
MAX_ITER = 1000


class NonConvergenceError(ArithmeticError):
    pass


class QuadratureError(ArithmeticError):
    pass


class BracketError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RWQuoteModel:
    """Centred Gaussian quote density with inverse variance ``m``."""

    m: float = 1.0

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise DomainError(f"m must be a positive finite number, got {self.m}")

    @property
    def sigma(self) -> float:
        return 1.0 / math.sqrt(self.m)

    def density(self, q):
        q = np.asarray(q, dtype=float)
        return math.sqrt(self.m / (2 * math.pi)) * np.exp(-0.5 * self.m * q * q)

    @staticmethod
    def quote_price(q):
        """Price e^{-q} the Rest of World asks for the asset."""
        return np.exp(-np.asarray(q, dtype=float))


@dataclass(frozen=True)
class FixedPointResult:
    a_max: float
    rho_at_max: float
    iterations: int
    method: str

    @property
    def residual(self) -> float:
        return abs(self.rho_at_max - self.a_max)

    @property
    def rounded(self) -> float:
        return round(self.a_max, 5)


def rho(a, model: RWQuoteModel = RWQuoteModel()):
    """Closed-form profit intensity; accepts scalars or arrays."""
    sm = math.sqrt(model.m)
    if isinstance(a, (int, float)):
        z = a * sm
        # 2 - Phi(z) = 1 + erfc(z / sqrt 2) / 2, accurate in both tails
        return _INV_SQRT_2PI * math.exp(-0.5 * z * z) / (sm * (1.0 + 0.5 * math.erfc(z / _SQRT2)))
    z = np.asarray(a, dtype=float) * sm
    return _INV_SQRT_2PI * np.exp(-0.5 * z * z) / (sm * (1.0 + 0.5 * erfc(z / _SQRT2)))


def rho_quadrature(a: float, model: RWQuoteModel = RWQuoteModel()) -> float:
    """Profit intensity from direct adaptive quadrature of both integrals.

    Tails beyond 12 standard deviations are dropped.
    """
    hi = TAIL_SIGMAS * model.sigma
    lo = max(float(a), -hi)
    if lo >= hi:
        return 0.0
    f = model.density
    num = _quad(lambda q: q * f(q), lo, hi, "numerator", a)
    mass = _quad(f, lo, hi, "denominator", a)
    return num / (1.0 + mass)


def _quad(fn, lo, hi, label, a):
    value, abserr, info = integrate.quad(fn, lo, hi, epsabs=1e-15, epsrel=1e-13,
                                         limit=200, full_output=True)[:3]
    if abserr > 1e-11:
        raise QuadratureError(
            f"{label} integral on [{lo}, {hi}] (a={a}) did not converge: "
            f"value={value}, abserr={abserr}, neval={info['neval']}, last={info['last']}"
        )
    return value


def fixed_point(model: RWQuoteModel = RWQuoteModel(), tol: float = 1e-12,
                method: str = "iteration", a0: float = 0.0) -> FixedPointResult:
    """Solve rho(a) = a.

    ``method="iteration"`` runs a -> rho(a) from ``a0`` and falls back to
    bisection on a - rho(a) over [0, 1/sqrt(m)] if the cap is hit;
    ``method="bisection"`` goes straight to the bracketed solver.
    """
    if not tol >= 1e-14:
        raise DomainError(f"tol must be >= 1e-14, got {tol}")
    if method not in ("iteration", "bisection"):
        raise ValueError(f"unknown method {method!r}")
    if method == "iteration":
        a = float(a0)
        for k in range(1, MAX_ITER + 1):
            r = rho(a, model)
            if abs(r - a) <= tol:
                return FixedPointResult(a, r, k, "iteration")
            a = r
    return _bisect(model, tol)


def _bisect(model, tol):
    lo, hi = 0.0, model.sigma
    for k in range(1, MAX_ITER + 1):
        mid = 0.5 * (lo + hi)
        r = rho(mid, model)
        if abs(r - mid) <= tol:
            return FixedPointResult(mid, r, k, "bisection")
        if mid - r < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 2 * math.ulp(hi):
            break
    raise NonConvergenceError(f"no fixed point within tol={tol} after {k} bisection steps")


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# below this bracket width (in standard deviations) double-precision
# comparisons of rho near its flat peak stop being trustworthy
_DOUBLE_STAGE_WIDTH = 1e-5


def _golden(f, lo, hi, tol):
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
    return lo, hi


def maximize_rho(model: RWQuoteModel = RWQuoteModel(), tol: float = 1e-12,
                 scan_points: int = 121) -> float:
    """Argmax of rho by golden-section search, without derivatives.

    A coarse scan over +/- 6 standard deviations brackets the maximum.  rho
    is flat to second order at its peak, so double-precision comparisons
    cannot locate it better than ~1e-8; once the bracket is narrow the
    search continues with values computed in 40-digit arithmetic.
    """
    if not tol >= 1e-12:
        raise DomainError(f"tol must be >= 1e-12, got {tol}")
    grid = np.linspace(-6 * model.sigma, 6 * model.sigma, scan_points)
    i = int(np.argmax(rho(grid, model)))
    if i == 0 or i == scan_points - 1:
        raise BracketError(f"maximum of rho not bracketed by the scan (index {i})")
    lo, hi = _golden(lambda a: rho(a, model), float(grid[i - 1]), float(grid[i + 1]),
                     max(tol, _DOUBLE_STAGE_WIDTH * model.sigma))
    if hi - lo <= tol:
        return 0.5 * (lo + hi)
    with mpmath.workdps(40):
        sm = mpmath.sqrt(mpmath.mpf(model.m))
        root2 = mpmath.sqrt(2)

        # rho up to the constant 1/sqrt(2 pi), which does not move the argmax
        def rho_mp(a):
            z = a * sm
            return mpmath.exp(-z * z / 2) / (sm * (2 - mpmath.erfc(-z / root2) / 2))

        lo, hi = _golden(rho_mp, mpmath.mpf(lo), mpmath.mpf(hi), tol)
        return float((lo + hi) / 2)


def iterate_map(a0: float, model: RWQuoteModel = RWQuoteModel(), steps: int = 200) -> np.ndarray:
    """Orbit ``[a0, rho(a0), rho(rho(a0)), ...]`` of length ``steps + 1``."""
    if steps < 1:
        raise DomainError("steps must be >= 1")
    orbit = np.empty(steps + 1)
    a = orbit[0] = float(a0)
    for k in range(1, steps + 1):
        a = orbit[k] = rho(a, model)
    return orbit


def rho_curve(model: RWQuoteModel, a_min: float, a_max_range: float, steps: int):
    """Uniform samples ``(a, rho(a))`` with ``steps`` points, endpoints included."""
    if steps < 2:
        raise DomainError("steps must be >= 2")
    if not a_min < a_max_range:
        raise DomainError(f"empty range [{a_min}, {a_max_range}]")
    a = np.linspace(a_min, a_max_range, steps)
    return a, rho(a, model)


def write_rho_curve(path, a, values):
    return write_csv(path, ["a", "rho"], [a, values])
