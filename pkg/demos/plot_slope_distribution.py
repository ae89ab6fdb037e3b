"""
Distribution of normalized slopes
=================================

Normalized classical slopes at k_n cluster at 1/2 and spread uniformly over
two outer intervals.  Here we watch the block masses and the KS distances.
"""

from ghostseries import build_gamma0_model
from ghostseries.analysis import distribution_report, gouvea_check, semistable_check

model = build_gamma0_model(5, 1, 0)

for n in (50, 100, 200):
    r = distribution_report(model, n)
    print(f"n={n:3d} k={model.params.k(n)} masses {float(r.mass_low):.4f} "
          f"{float(r.mass_at_half):.4f} {float(r.mass_high):.4f} "
          f"ks {float(r.ks_low):.4f} {float(r.ks_high):.4f}")

# the masses are ratios of dimensions, so they wobble with n mod 3
for n in range(99, 105):
    r = distribution_report(model, n)
    print(n, r.mass_at_half, float(r.deviations()["mass_at_half"]))

# the largest old slope over k approaches 1/6 from below
for n in (25, 50, 100, 150):
    g = gouvea_check(model, n)
    print(f"n={n} ratio {float(g.ratio_old):.4f} Buzzard bound ok: {g.buzzard_ok}")

# the semistable block is a single segment of slope close to k/2
for n in (10, 30, 60):
    s = semistable_check(model, n)
    print(f"n={n} block {s.lower_index}..{s.upper_index} slope {s.slope} vs {s.predicted}")
