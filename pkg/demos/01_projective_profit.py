"""
Cycle profit as a projective invariant
======================================

Buy an asset, then sell it.  The two log-quotations add up to the cycle
profit, and that sum survives any change of measurement units.
"""

import numpy as np

from qmarket.projective import (
    build_cycle_points,
    cycle_log_cross_ratio,
    demand_profit,
    points_log_cross_ratio,
    rescale_units,
    supply_profit,
)

# buying: pay 10 dollars for 4 shares; selling later: 4 shares fetch 11 dollars
q = supply_profit(asset_amount=4.0, money_amount=10.0)
p = demand_profit(money_amount=11.0, asset_amount=4.0)
print(f"buy leg q = {q:+.6f}, sell leg p = {p:+.6f}, cycle p+q = {p + q:+.6f}")
print(f"exp(p+q) = {np.exp(p + q):.6f}  (11/10 = {11 / 10:.6f})")

# the same number from the cross ratio of four points on the cycle line
print("log cross ratio        :", cycle_log_cross_ratio(p, q, upsilon=1.0, w=2.0))

# change units: shares -> lots of 100, dollars -> cents
u_q, u_p = build_cycle_points(p, q, upsilon=1.0, w=2.0)
for scales in [(1.0, 1.0), (0.01, 100.0), (37.0, 1e-3)]:
    value = points_log_cross_ratio(rescale_units(u_q, scales), rescale_units(u_p, scales))
    print(f"units scaled by {scales!s:14}: {value:.15f}")

# a null cycle (sell at the buying price) sits at the origin of the invariant
print("null cycle             :", cycle_log_cross_ratio(0.3, -0.3, 1.0, 2.0))
