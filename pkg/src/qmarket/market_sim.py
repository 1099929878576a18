"""Seeded Monte Carlo engine for the Dirac-versus-Gaussian buying-selling game.

One cycle has two legs.  The unconditional leg (buying, in the direct game)
always executes at a Rest-of-World quote and takes one time unit.  On the
rational leg the Rest of World proposes a log-quote q; the player trades only
if q exceeds her withdrawal level a, which costs a second time unit and earns
q.  Otherwise she gives up at no time cost.  With this bookkeeping

    E[profit] = integral_a^inf q f(q) dq,    E[duration] = 1 + P(q > a),

so the long-run ratio of profit to time is the intensity rho(a).

Random numbers: a Philox4x32-10 counter-based generator (numpy) is read as raw
64-bit words; the top 52 bits give u = (k + 1/2) / 2^52 and the quote is
ndtri(u) / sqrt(m).  Cycle k consumes words 2k (unconditional leg) and
2k + 1 (rational leg), whichever buy-leg mode is used.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy.special import ndtri

from ._io import write_csv
from .projective import DomainError

__all__ = [
    "GENERATOR",
    "BuyLeg",
    "Fixed",
    "Adaptive",
    "GameConfig",
    "CycleOutcome",
    "SimResult",
    "make_rng",
    "standard_normals",
    "draw_quote",
    "play_cycle",
    "run",
    "run_fixed",
    "run_adaptive",
    "run_reversed",
    "write_trajectory_csv",
]

GENERATOR = "numpy Philox4x32-10, raw uint64 >> 12, u=(k+0.5)/2^52, q=ndtri(u)/sqrt(m)"
N_BATCHES = 100
_CHUNK = 1 << 20


class BuyLeg(str, Enum):
    DRAW = "draw"
    ZERO = "zero"


@dataclass(frozen=True)
class Fixed:
    a: float

    def __str__(self):
        return f"fixed:{self.a!r}"


@dataclass(frozen=True)
class Adaptive:
    a1: float = 0.0

    def __str__(self):
        return f"adaptive:{self.a1!r}"


Policy = Union[Fixed, Adaptive]


@dataclass(frozen=True)
class GameConfig:
    m: float = 1.0
    seed: int = 0
    cycles: int = 1_000_000
    policy: Policy = field(default_factory=Adaptive)
    buy_leg: BuyLeg = BuyLeg.DRAW

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise DomainError(f"m must be positive, got {self.m}")
        if int(self.cycles) != self.cycles or self.cycles < 1:
            raise DomainError(f"cycles must be a positive integer, got {self.cycles}")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "buy_leg", BuyLeg(self.buy_leg))

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "seed": self.seed,
            "cycles": self.cycles,
            "policy": str(self.policy),
            "buy_leg": self.buy_leg.value,
            "generator": GENERATOR,
        }


@dataclass(frozen=True)
class CycleOutcome:
    q_sell: float
    p_buy: float
    sold: bool
    profit: float
    duration: int


@dataclass(eq=False)
class SimResult:
    """Aggregates of one run.

    ``batch_*`` hold per-batch sums over 100 equal batches (the tail half of
    the run for adaptive play) and drive the batch-means standard errors.
    """

    config: GameConfig
    empirical_intensity: float
    std_error: float
    cycles_run: int
    total_profit: float
    total_tau: float
    n_sold: int
    batch_profit: np.ndarray
    batch_tau: np.ndarray
    batch_sold: np.ndarray
    batch_cycles: np.ndarray
    trajectory: Optional[np.ndarray] = None
    cum_profit: Optional[np.ndarray] = None
    cum_tau: Optional[np.ndarray] = None
    final_a: Optional[float] = None
    reversed: bool = False

    @property
    def mean_duration(self) -> float:
        return self.total_tau / self.cycles_run

    @property
    def sale_fraction(self) -> float:
        return self.n_sold / self.cycles_run

    def _batch_se(self, values) -> float:
        if len(values) < 2:
            return math.nan
        return float(np.std(values, ddof=1) / math.sqrt(len(values)))

    @property
    def duration_std_error(self) -> float:
        return self._batch_se(self.batch_tau / self.batch_cycles)

    @property
    def sale_std_error(self) -> float:
        return self._batch_se(self.batch_sold / self.batch_cycles)

    def to_json(self, trajectory_csv=None) -> str:
        se = self.std_error
        doc = {
            "config": self.config.to_dict(),
            "empirical_intensity": self.empirical_intensity,
            "std_error": None if math.isnan(se) else se,
            "cycles_run": self.cycles_run,
            "trajectory_csv": None if trajectory_csv is None else str(trajectory_csv),
        }
        if self.final_a is not None:
            doc["final_a"] = self.final_a
        if self.reversed:
            doc["reversed"] = True
        return json.dumps(doc, indent=2, sort_keys=False)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def standard_normals(rng: np.random.Generator, n: int) -> np.ndarray:
    """Next ``n`` standard normals of the stream by inverse-CDF transform."""
    raw = rng.bit_generator.random_raw(n)
    u = ((raw >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0 ** -52
    return ndtri(u)


def draw_quote(rng: np.random.Generator, m: float) -> float:
    """One Rest-of-World log-quote q ~ Normal(0, 1/m); the price is e^{-q}."""
    return float(standard_normals(rng, 1)[0]) / math.sqrt(m)


def play_cycle(a: float, p_buy: float, q_sell: float) -> CycleOutcome:
    """Apply the game rule: sell iff ``q_sell > a``; a tie gives up."""
    sold = q_sell > a
    return CycleOutcome(
        q_sell=q_sell,
        p_buy=p_buy,
        sold=sold,
        profit=p_buy + (q_sell if sold else 0.0),
        duration=2 if sold else 1,
    )


def _leg_chunks(config: GameConfig, sign: float):
    """Yield ``(unconditional, rational)`` leg profits chunk by chunk."""
    rng = make_rng(config.seed)
    scale = sign / math.sqrt(config.m)
    left = config.cycles
    while left:
        n = min(left, _CHUNK)
        z = standard_normals(rng, 2 * n).reshape(n, 2) * scale
        uncond = z[:, 0] if config.buy_leg is BuyLeg.DRAW else np.zeros(n)
        yield uncond, z[:, 1]
        left -= n


def _batch_ids(start, n, total):
    nb = min(N_BATCHES, total)
    return (np.arange(start, start + n, dtype=np.int64) * nb) // total, nb


def _ratio_se(batch_profit, batch_tau):
    if len(batch_profit) < 2:
        return math.nan
    r = batch_profit / batch_tau
    return float(np.std(r, ddof=1) / math.sqrt(len(r)))


def _run_fixed(config: GameConfig, sign: float, reversed_: bool) -> SimResult:
    a = config.policy.a
    total = config.cycles
    nb = min(N_BATCHES, total)
    bp, bt, bs, bc = (np.zeros(nb) for _ in range(4))
    start = 0
    for uncond, rational in _leg_chunks(config, sign):
        n = len(rational)
        sold = rational > a
        profit = uncond + np.where(sold, rational, 0.0)
        tau = 1.0 + sold
        ids, _ = _batch_ids(start, n, total)
        bp += np.bincount(ids, profit, minlength=nb)
        bt += np.bincount(ids, tau, minlength=nb)
        bs += np.bincount(ids, sold, minlength=nb)
        bc += np.bincount(ids, minlength=nb)
        start += n
    total_profit, total_tau = float(bp.sum()), float(bt.sum())
    return SimResult(
        config=config,
        empirical_intensity=total_profit / total_tau,
        std_error=_ratio_se(bp, bt),
        cycles_run=total,
        total_profit=total_profit,
        total_tau=total_tau,
        n_sold=int(bs.sum()),
        batch_profit=bp,
        batch_tau=bt,
        batch_sold=bs,
        batch_cycles=bc,
        reversed=reversed_,
    )


def _run_adaptive(config: GameConfig, sign: float, reversed_: bool) -> SimResult:
    n = config.cycles
    uncond = np.empty(n)
    rational = np.empty(n)
    pos = 0
    for u, r in _leg_chunks(config, sign):
        uncond[pos:pos + len(r)] = u
        rational[pos:pos + len(r)] = r
        pos += len(r)

    traj = np.empty(n)
    cum_profit = np.empty(n)
    cum_tau = np.empty(n)
    sold = np.zeros(n, dtype=bool)
    a = float(config.policy.a1)
    P = T = 0.0
    # path dependent: a_{k+1} = sum(profit) / sum(tau) after cycle k
    for k, (u, q) in enumerate(zip(uncond.tolist(), rational.tolist())):
        traj[k] = a
        if q > a:
            P += u + q
            T += 2.0
            sold[k] = True
        else:
            P += u
            T += 1.0
        cum_profit[k] = P
        cum_tau[k] = T
        a = P / T

    profit = np.diff(cum_profit, prepend=0.0)
    tau = np.diff(cum_tau, prepend=0.0)
    tail = n // 2 if n >= 2 * N_BATCHES else 0
    ids, nb = _batch_ids(0, n - tail, n - tail)
    bp = np.bincount(ids, profit[tail:], minlength=nb)
    bt = np.bincount(ids, tau[tail:], minlength=nb)
    bs = np.bincount(ids, sold[tail:], minlength=nb).astype(float)
    bc = np.bincount(ids, minlength=nb).astype(float)
    return SimResult(
        config=config,
        empirical_intensity=P / T,
        std_error=_ratio_se(bp, bt),
        cycles_run=n,
        total_profit=P,
        total_tau=T,
        n_sold=int(sold.sum()),
        batch_profit=bp,
        batch_tau=bt,
        batch_sold=bs,
        batch_cycles=bc,
        trajectory=traj,
        cum_profit=cum_profit,
        cum_tau=cum_tau,
        final_a=a,
        reversed=reversed_,
    )


def run_fixed(config: GameConfig) -> SimResult:
    if not isinstance(config.policy, Fixed):
        raise DomainError("run_fixed needs a Fixed policy")
    return _run_fixed(config, 1.0, False)


def run_adaptive(config: GameConfig) -> SimResult:
    """Play the running-ratio tactic: a_{n+1} = sum(p + q)_k / sum(tau_k)."""
    if not isinstance(config.policy, Adaptive):
        raise DomainError("run_adaptive needs an Adaptive policy")
    return _run_adaptive(config, 1.0, False)


def run(config: GameConfig) -> SimResult:
    if isinstance(config.policy, Fixed):
        return run_fixed(config)
    return run_adaptive(config)


def run_reversed(config: GameConfig, antithetic: bool = False) -> SimResult:
    """Reversed game: unconditional selling, rational buying with withdrawal.

    A buying log-profit is the negated Rest-of-World quote, so the player's
    leg profits are -x for quotes x drawn from the stream.  With
    ``antithetic=True`` the quotes are the negated draws of the direct game
    with the same seed, and both runs coincide exactly.
    """
    sign = 1.0 if antithetic else -1.0
    if isinstance(config.policy, Fixed):
        return _run_fixed(config, sign, True)
    return _run_adaptive(config, sign, True)


def write_trajectory_csv(result: SimResult, path):
    """Stream an adaptive trajectory as ``n,a_n,cum_profit,cum_tau``."""
    if result.trajectory is None:
        raise DomainError("only adaptive runs have a trajectory")
    n = np.arange(1, result.cycles_run + 1)
    return write_csv(path, ["n", "a_n", "cum_profit", "cum_tau"],
                     [n, result.trajectory, result.cum_profit, result.cum_tau])
