"""Quantum market games: projective profits, Gaussian strategies, profit
intensity and its fixed point, and a Monte Carlo engine for the game."""

__version__ = "0.1.0"

from .intensity import (
    FixedPointResult,
    RWQuoteModel,
    fixed_point,
    iterate_map,
    maximize_rho,
    rho,
    rho_curve,
    rho_quadrature,
)
from .market_sim import (
    Adaptive,
    BuyLeg,
    Fixed,
    GameConfig,
    SimResult,
    run,
    run_adaptive,
    run_fixed,
    run_reversed,
)
from .projective import (
    INFINITY,
    DegenerateError,
    DomainError,
    PortfolioPoint,
    cross_ratio,
    cycle_log_cross_ratio,
)
from .strategy import (
    DiracStrategy,
    GaussianStrategy,
    GridWavefunction,
    fourier_dual,
    risk_expectation,
)
