"""
Sampling the Lipschitz constant
===============================

Monte Carlo lower bounds from random pairs of states, next to the sup of the
tangent Jacobian norm and the analytic bound zeta.
"""

import biqso
from biqso.render import render_lipschitz

# %%
# Results depend only on the seed, not on how many threads do the work.

for name in ("example1", "example3", "uniform:3,2"):
    m = biqso.builtin_model(name)
    est = biqso.empirical_lipschitz(m, 50_000, seed=7, workers=2)
    jac = biqso.jacobian_lipschitz(m, 50_000, seed=7, workers=2)
    print(name)
    print(render_lipschitz(est, jac, biqso.zeta(m).value, "table"))
    print()

# %%
# The worst pair found for example1.

est = biqso.empirical_lipschitz(biqso.builtin_model("example1"), 50_000, seed=7)
z, t = est.witness_pair
print(z.z, t.z, est.lower_bound)
