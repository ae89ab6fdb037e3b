"""
Slopes at weight 12 for p = 5
=============================

Build the level 1 dimension model, list the first ghost coefficients and
read off the Newton polygon at the classical weight k = 12.
"""

from ghostseries import IntegerWeight, build_gamma0_model, coefficient, ghost_slopes
from ghostseries.newton import ghost_polygon
from ghostseries.ghost import valuation_sequence

model = build_gamma0_model(5, 1, 0)

# dimensions along the component: k_n = 4n
for n in range(7):
    print(f"n={n} k={model.params.k(n):3d} d={model.d(n)} dnew={model.dnew(n)} dp={model.dp(n)}")

# each coefficient is a product of (w - w_{k_n})^m
for i in range(5):
    c = coefficient(model, i)
    print(f"g_{i}: zeros {list(c.zeros)} degree {c.degree}")

# coefficient valuations at w_12; g_2 and g_3 vanish there
kappa = IntegerWeight(12)
print("valuations:", [str(v) for v in valuation_sequence(model, kappa, 6)])

poly = ghost_polygon(model, kappa, 12)
print("vertices:", [(x, str(y)) for x, y in poly.vertices])

seq = ghost_slopes(model, kappa, 5)
print("slopes:", [str(s) for s in seq.slopes], "certified up to index", seq.index_bound)
