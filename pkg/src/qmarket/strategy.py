"""Strategy wavefunctions on the log-profit line.

A pure strategy is a square-integrable amplitude psi(p) over the demand profit
p; |psi|^2 is the decision density and its cumulative integral the supply
curve.  The same strategy in the buying variable q is the Fourier transform

    psi~(q) = (2 pi hbar)^(-1/2) * integral exp(-i p q / hbar) psi(p) dp,

with hbar the economic constant of the canonical pair [P, Q] = i hbar.  The
risk operator R = P^2 / (2 m) + (m / 2) Q^2 has minimal expectation hbar / 2.

Gaussian strategies are parametrised by their mean ``a`` and the variance
``width`` of the density |psi|^2.  The risk parameter ``risk_m`` is a separate
knob.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from ._io import write_csv
from .projective import DomainError

__all__ = [
    "ContractError",
    "GaussianStrategy",
    "DiracStrategy",
    "GridWavefunction",
    "amplitude",
    "density",
    "supply_curve",
    "fourier_dual",
    "risk_expectation",
    "apply_risk_operator",
    "grid_risk_expectation",
    "export_curve",
    "DEFAULT_GRID_POINTS",
    "DEFAULT_HALF_SPAN",
]

DEFAULT_GRID_POINTS = 4096
# in units of sqrt(width); amplitude at the edge ~ exp(-36)
DEFAULT_HALF_SPAN = 12.0

NORM_TOL = 1e-9
BOUNDARY_TOL = 1e-12


class ContractError(ValueError):
    """A wavefunction violates a precondition (normalisation, boundary mass)."""


@dataclass(frozen=True)
class GaussianStrategy:
    a: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError(f"width must be > 0, got {self.width}")
        if not math.isfinite(self.a):
            raise DomainError(f"mean must be finite, got {self.a}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.width)


@dataclass(frozen=True)
class DiracStrategy:
    """Zero-width limit: sell only above the withdrawal log-profit ``a``."""

    a: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise DomainError(f"withdrawal level must be finite, got {self.a}")

    @property
    def withdrawal_price(self) -> float:
        return math.exp(self.a)

    def supply_curve(self, p):
        """Step function; the tie p == a belongs to the give-up side."""
        return np.where(np.asarray(p) > self.a, 1.0, 0.0)

    def dual_amplitude(self, q, hbar_e: float = 1.0):
        """Analytic dual exp(-i a q / hbar) / sqrt(2 pi hbar): flat modulus."""
        q = np.asarray(q, dtype=float)
        return np.exp(-1j * self.a * q / hbar_e) / math.sqrt(2 * math.pi * hbar_e)


def amplitude(strategy: GaussianStrategy, p):
    """(2 pi m)^(-1/4) exp(-(p - a)^2 / (4 m))."""
    m = strategy.width
    p = np.asarray(p, dtype=float)
    return (2 * math.pi * m) ** -0.25 * np.exp(-((p - strategy.a) ** 2) / (4 * m))


def density(strategy: GaussianStrategy, p):
    return amplitude(strategy, p) ** 2


def supply_curve(strategy: GaussianStrategy, p):
    """Cumulative decision density, Normal(a, width) CDF."""
    return ndtr((np.asarray(p, dtype=float) - strategy.a) / strategy.sigma)


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    """Complex amplitudes sampled on ``grid_min + k * grid_step``."""

    samples: np.ndarray
    grid_min: float
    grid_step: float
    hbar_e: float = 1.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        n = s.shape[0] if s.ndim == 1 else 0
        if n < 2 or n & (n - 1):
            raise DomainError(f"grid length must be a power of two >= 2, got {s.shape}")
        if not self.grid_step > 0:
            raise DomainError("grid_step must be positive")
        if not self.hbar_e > 0:
            raise DomainError("hbar_e must be positive")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, fn, grid_min, grid_step, n=DEFAULT_GRID_POINTS, hbar_e=1.0,
                      normalize=True):
        x = grid_min + grid_step * np.arange(n)
        psi = cls(np.asarray(fn(x), dtype=complex), grid_min, grid_step, hbar_e)
        return psi.normalized() if normalize else psi

    @classmethod
    def from_strategy(cls, strategy: GaussianStrategy, n=DEFAULT_GRID_POINTS,
                      half_span=None, hbar_e=1.0, center=None):
        """Sample a Gaussian strategy on ``n`` points around ``center``.

        The default window is ``a +/- 12 sqrt(width)``; ``half_span`` overrides
        it in absolute units.
        """
        if half_span is None:
            half_span = DEFAULT_HALF_SPAN * strategy.sigma
        if center is None:
            center = strategy.a
        step = 2 * half_span / n
        return cls.from_function(lambda x: amplitude(strategy, x), center - half_span,
                                 step, n=n, hbar_e=hbar_e)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def grid(self) -> np.ndarray:
        return self.grid_min + self.grid_step * np.arange(self.n)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid_step)

    def normalized(self) -> "GridWavefunction":
        return self.with_samples(self.samples / math.sqrt(self.norm()))

    def with_samples(self, samples) -> "GridWavefunction":
        return GridWavefunction(samples, self.grid_min, self.grid_step, self.hbar_e)

    def inner(self, other: "GridWavefunction") -> complex:
        """<self|other> by the rectangle rule."""
        return complex(np.vdot(self.samples, other.samples) * self.grid_step)

    def modulus_squared(self) -> np.ndarray:
        return np.abs(self.samples) ** 2

    def mean(self) -> float:
        return float(np.sum(self.grid * self.modulus_squared()) * self.grid_step / self.norm())

    def variance(self) -> float:
        mu = self.mean()
        return float(np.sum((self.grid - mu) ** 2 * self.modulus_squared())
                     * self.grid_step / self.norm())


def fourier_dual(psi: GridWavefunction, require_normalized: bool = True) -> GridWavefunction:
    """Transform a selling-side strategy psi(p) to its buying-side form psi~(q).

    The dual grid has the reciprocal step 2 pi hbar / (n dp) and is centred on
    q = 0, which makes the discrete transform exactly unitary.  Applying it
    twice yields psi(-p) on a zero-centred grid.

    ``require_normalized=False`` lifts the normalisation check so the linear
    map can be applied to operator outputs.
    """
    if require_normalized and abs(psi.norm() - 1.0) > NORM_TOL:
        raise ContractError(f"fourier_dual needs a normalised input, norm = {psi.norm()!r}")
    n, dp, hbar = psi.n, psi.grid_step, psi.hbar_e
    dq = 2 * math.pi * hbar / (n * dp)
    p0 = psi.grid_min
    q0 = -(n // 2) * dq
    j = np.arange(n)
    # exp(-i p_j q_k / hbar) split into pre-twiddle, DFT and post-twiddle
    pre = np.exp(-1j * j * dp * q0 / hbar)
    post = np.exp(-1j * p0 * (q0 + j * dq) / hbar)
    out = post * np.fft.fft(psi.samples * pre) * dp / math.sqrt(2 * math.pi * hbar)
    return GridWavefunction(out, q0, dq, hbar)


def _check_risk_params(risk_m, hbar_e):
    if not risk_m > 0:
        raise DomainError(f"risk_m must be > 0, got {risk_m}")
    if not hbar_e > 0:
        raise DomainError(f"hbar_e must be > 0, got {hbar_e}")


def risk_expectation(strategy: GaussianStrategy, risk_m: float, hbar_e: float = 1.0) -> float:
    """Closed-form <psi| P^2/(2m) + (m/2) Q^2 |psi> for a Gaussian strategy.

    <P^2> = a^2 + s^2 and <Q^2> = hbar^2 / (4 s^2) with s^2 the width.
    """
    _check_risk_params(risk_m, hbar_e)
    s2 = strategy.width
    return (strategy.a ** 2 + s2) / (2 * risk_m) + risk_m * hbar_e ** 2 / (8 * s2)


def _second_derivative(psi: GridWavefunction, method: str) -> np.ndarray:
    f, h = psi.samples, psi.grid_step
    if method == "spectral":
        k = 2 * math.pi * np.fft.fftfreq(psi.n, d=h)
        return np.fft.ifft(-(k ** 2) * np.fft.fft(f))
    if method == "central":
        d2 = np.empty_like(f)
        d2[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h ** 2
        # zero Dirichlet data outside the grid
        d2[0] = (f[1] - 2 * f[0]) / h ** 2
        d2[-1] = (f[-2] - 2 * f[-1]) / h ** 2
        return d2
    raise ValueError(f"unknown differentiation method {method!r}")


def apply_risk_operator(psi: GridWavefunction, risk_m: float,
                        method: str = "spectral") -> GridWavefunction:
    """R psi = p^2 psi / (2 m) + (m / 2) (i hbar d/dp)^2 psi on the grid."""
    _check_risk_params(risk_m, psi.hbar_e)
    edge = max(abs(psi.samples[0]), abs(psi.samples[-1]))
    if edge >= BOUNDARY_TOL:
        raise ContractError(f"boundary amplitude {edge:.3g} >= {BOUNDARY_TOL}; widen the grid")
    p = psi.grid
    q2 = -(psi.hbar_e ** 2) * _second_derivative(psi, method)
    return psi.with_samples(p ** 2 * psi.samples / (2 * risk_m) + 0.5 * risk_m * q2)


def grid_risk_expectation(psi: GridWavefunction, risk_m: float,
                          method: str = "spectral") -> float:
    return apply_risk_operator(psi, risk_m, method).inner(psi).real / psi.norm()


def export_curve(path, x, values) -> None:
    """Write a sampled curve as CSV with header ``x,value``."""
    write_csv(path, ["x", "value"], [np.asarray(x, dtype=float), np.asarray(values, dtype=float)])
