"""
Comparison theorems, numerically
================================
Ordered curvatures force ordered polar coefficients (growth comparison),
and a curvature upper bound forces the support-Hessian bound G'/G >= h_c.
Model spaces sit exactly on the equality case.
"""

import numpy as np

from nitsche_lab import (
    CurvatureBound,
    catalog_surface,
    constant_curvature_metric,
    hessian_check,
    osserman_check,
    surface_metric,
)

hyp = constant_curvature_metric(CurvatureBound.negative(1.0))
flat = constant_curvature_metric(CurvatureBound.zero())
sph = constant_curvature_metric(CurvatureBound.positive(1.0))
enneper = surface_metric(catalog_surface("enneper"))


def show(rep, label):
    state = "pass" if rep.passed else f"status={rep.status}"
    print(f"  {label:42s} min margin {rep.min_margin:+.3e}  {state}")


print("growth comparison (more negative curvature grows faster):")
show(osserman_check(hyp, flat, 2.0), "hyperbolic vs flat on (0, 2]")
show(osserman_check(flat, sph, 1.5), "flat vs spherical on (0, 1.5]")
show(osserman_check(enneper, flat, 1.3), "enneper surface vs flat on (0, 1.3]")
show(osserman_check(hyp, hyp, 2.0), "hyperbolic vs itself (equality case)")

print("\nordering hypothesis is checked first and reported separately:")
rep = osserman_check(flat, hyp, 2.0)
print(f"  flat vs hyperbolic: status = {rep.status} ({rep.note})")

print("\nsupport-Hessian bound G'/G >= h_c under a curvature ceiling:")
show(hessian_check(hyp, 2.0, CurvatureBound.negative(1.0)), "model space of its own bound")
show(hessian_check(flat, 1.4, CurvatureBound.positive(1.0)), "flat metric under a +1 ceiling")
show(hessian_check(enneper, 1.3, CurvatureBound.zero()), "enneper under the flat ceiling")
print("  (the radial-radial Hessian entry vanishes identically for radial charts)")
