"""
Contraction bounds
==================

The scatter constant zeta bounds the l1 Lipschitz constant of W. When all
coefficients are positive, cheaper ratio bounds are available too.
"""

import numpy as np

import biqso
from biqso.contraction import corollary3_holds, lemma4_bound, mu_ratios
from biqso.render import render_report

# %%
# ``example1`` is a strict contraction.

ex1 = biqso.builtin_model("example1")
print(render_report(biqso.analyze(ex1), "table"))

# %%
# ``example3`` has zeros, so the ratio bounds are undefined, and zeta = 2
# does not certify anything. It still converges (see the dynamics demo).

print(render_report(biqso.analyze(biqso.builtin_model("example3")), "json"))

# %%
# How tight are the bounds? Shrink random positive rows towards a common
# base and watch zeta, the ratio bound and its verdict.

rng = np.random.default_rng(0)
base_f = rng.dirichlet(np.ones(2), size=(2, 2))
base_m = rng.dirichlet(np.ones(2), size=(2, 2))
noise_f = rng.dirichlet(np.ones(2), size=(2, 2))
noise_m = rng.dirichlet(np.ones(2), size=(2, 2))
print(" spread    zeta   ratio bound  verdict")
for s in (0.8, 0.4, 0.2, 0.1, 0.05):
    # mix towards a constant-row model, whose zeta is zero
    f = (1 - s) * base_f[:1, :1] + s * noise_f
    m = (1 - s) * base_m[:1, :1] + s * noise_m
    model = biqso.validate_tensors(f, m)
    z = biqso.zeta(model).value
    print(f"{s:7.2f} {z:7.4f} {lemma4_bound(model):12.4f}  {corollary3_holds(model)}")

# %%
# Ratios are taken over parent pairs that differ in one parent. With the
# narrower own-parent ratio the bound would miss this model entirely.

e = 0.1
tricky = biqso.validate_tensors(
    np.full((2, 2, 2), 0.5),
    np.array([[[1 - e, e]] * 2, [[e, 1 - e]] * 2]),
)
print("zeta", biqso.zeta(tricky).value)
print("own-parent mu", mu_ratios(tricky, over="own"), "bound", lemma4_bound(tricky, over="own"))
print("one-parent mu", mu_ratios(tricky), "bound", lemma4_bound(tricky))
