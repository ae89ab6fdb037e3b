"""
Arithmetic progressions near the boundary
=========================================

Close to the boundary of weight space the slopes are the w-adic slopes scaled
by v(w), and they split into Q progressions with a common difference.
"""

from fractions import Fraction

from ghostseries import BoundaryWeight, NearIntegerWeight, build_gamma0_model, ghost_slopes, wadic_slopes
from ghostseries.analysis import ap_parameters, ap_verify
from ghostseries.ghost import lambda_sequence, lambda_shift

model = build_gamma0_model(5, 1, 0)

# the lambda invariants repeat with a shift
Q, D = lambda_shift(model)
lam = lambda_sequence(model, 20)
print(f"Q={Q} D={D}")
print("lambda_1..20:", lam)

# at v(w) = 1/2 the slopes are half the w-adic slopes
kappa = BoundaryWeight(Fraction(1, 2))
half = ghost_slopes(model, kappa, 30)
wadic = wadic_slopes(model, 30)
print("halved:", all(a == b / 2 for a, b in zip(half.slopes, wadic.slopes)))

params = ap_parameters(model, kappa)
report = ap_verify(ghost_slopes(model, kappa, 200), params.Q_r, params.common_difference, params)
print(f"boundary: Q_r={params.Q_r} difference={params.common_difference} verified={report.verified}")

# a weight at distance p^(-3/2) from k = 12 needs p times as many progressions
near = NearIntegerWeight(12, Fraction(3, 2))
params = ap_parameters(model, near)
report = ap_verify(ghost_slopes(model, near, 200), params.Q_r, params.common_difference, params)
print(f"near 12: r={params.r} Q_r={params.Q_r} difference={params.common_difference} verified={report.verified}")
