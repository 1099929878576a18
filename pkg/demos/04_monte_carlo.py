"""
Playing the game
================

Simulate many buy-sell cycles, first with a fixed withdrawal level and then
with the running-ratio tactic that learns it.
"""

import numpy as np

from qmarket.intensity import RWQuoteModel, fixed_point, rho
from qmarket.market_sim import Adaptive, Fixed, GameConfig, run, run_reversed

target = fixed_point(RWQuoteModel(1.0)).a_max

for a in (-1.0, 0.0, target, 1.0):
    res = run(GameConfig(seed=7, cycles=2_000_000, policy=Fixed(a), buy_leg="zero"))
    print(f"a = {a:+.5f}: simulated {res.empirical_intensity:.5f} +/- {res.std_error:.5f}, "
          f"theory {rho(a):.5f}")

# the adaptive player starts far off and drifts to the fixed point
for a1 in (-2.0, 0.0, 2.0):
    res = run(GameConfig(seed=1, cycles=300_000, policy=Adaptive(a1)))
    checkpoints = res.trajectory[[9, 99, 999, 9999, -1]]
    print(f"a1 = {a1:+}: ", "  ".join(f"{v:.4f}" for v in checkpoints))

# the reversed game (sell first, buy rationally) has the same optimum
res = run_reversed(GameConfig(seed=3, cycles=300_000, policy=Adaptive(0.0)))
print(f"reversed game final a = {res.final_a:.4f} (target {target:.4f})")
print("rounded target:", np.round(target, 5))
