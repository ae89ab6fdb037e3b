"""
Dimension models from residual representation data
==================================================

A generic nonsplit representation with p = 13 and Serre weight 12 determines
its dimension sequences from a single multiplicity.
"""

from fractions import Fraction

from ghostseries import BoundaryWeight, ghost_slopes
from ghostseries.analysis import ap_parameters
from ghostseries.dimensions import RhobarSpec, build_rhobar_model, rhobar_defect, verify_axioms

spec = RhobarSpec(13, 12, False, 1)
model = build_rhobar_model(spec)
print("defect per period:", rhobar_defect(spec))
print("periods:", model.periods)
print("axioms:", verify_axioms(model).ok)

for n in range(0, 28, 3):
    print(f"k={model.params.k(n):4d} d={model.d(n)} dnew={model.dnew(n)}")

# per unit of v(w) the common difference is (p-1)^2
params = ap_parameters(model, BoundaryWeight(Fraction(1, 2)))
print("Q =", params.Q, "difference =", params.common_difference)
print("first slopes:", [str(s) for s in ghost_slopes(model, BoundaryWeight(Fraction(1, 2)), 12).slopes])
