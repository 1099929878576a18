"""
Best withdrawal level
=====================

Against Gaussian quotes the profit per unit time of a "sell above a" rule
peaks exactly where the rule's own intensity equals a.
"""

import numpy as np

from qmarket.intensity import RWQuoteModel, fixed_point, iterate_map, maximize_rho, rho, rho_curve

model = RWQuoteModel(m=1.0)
a, r = rho_curve(model, -1.0, 1.5, 2501)
print(f"curve peak at a = {a[np.argmax(r)]:.4f}, rho = {r.max():.6f}")

res = fixed_point(model)
print(f"fixed point {res.a_max!r} after {res.iterations} iterations")
print(f"golden-section argmax {maximize_rho(model)!r}")

# the map a -> rho(a) squares the error at every step
orbit = iterate_map(-3.0, model, steps=6)
for k, value in enumerate(orbit):
    print(f"  step {k}: a = {value:+.16f}  error {abs(value - res.a_max):.2e}")

# more precise quotes shrink the optimal level like one over sqrt(m)
for m in (0.25, 1.0, 4.0, 16.0):
    fp = fixed_point(RWQuoteModel(m)).a_max
    print(f"m = {m:5}: a_max = {fp:.10f}, a_max * sqrt(m) = {fp * np.sqrt(m):.10f}")

print("rho(0) =", rho(0.0), "rho(a_max) =", rho(res.a_max))
