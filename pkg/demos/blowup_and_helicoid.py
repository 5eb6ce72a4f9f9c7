"""
Curvature blow-up and the helicoid limit
========================================

Two scale facts about the spiral surface itself, before any graph is built.
"""

from spiral_minimal import verification as V

# |A|^2 above height h0 is maximal at s = 0 on the lowest level, which gives
# sup |A|^2 = 2 / (delta h0)^2 exactly
for delta in (0.01, 0.05, 0.1):
    rep = V.scaling_report(delta, [0.01 / delta, 0.1 / delta, 0.5 / delta])
    print(f"delta={delta}: sup|A|^2 * (delta h0)^2 =", rep.ratios)

# shifted down by 1/delta, the surface approaches the helicoid at rate delta
table = V.helicoid_limit([0.04, 0.02, 0.01])
for delta, err in table:
    print(f"delta={delta}: max deviation {err:.4e}")
print("observed orders:", V.observed_orders(table))
