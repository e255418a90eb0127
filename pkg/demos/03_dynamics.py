"""
Long-run behaviour
==================

Trajectories, fixed points and cycles of the three built-in examples.
"""

import numpy as np

import biqso
from biqso.render import render_classification

rng = np.random.default_rng(1)

# %%
# ``example1``: every start goes to the uniform state.

ex1 = biqso.builtin_model("example1")
starts = biqso.sample_states(2, 2, 25, rng)
print(biqso.find_fixed_points(ex1, starts))

# %%
# ``example2``: on the edge x = (0, 1) the male part just swaps, so most
# points there are 2-cycles; inside the square x1 dies out.

ex2 = biqso.builtin_model("example2")
c = biqso.classify(ex2, biqso.validate_state([0, 1], [0.3, 0.7]))
print(render_classification(c, "table"))
print(biqso.is_idempotent(ex2, biqso.validate_state([0, 1], [0.5, 0.5]), 1e-12))

tr = biqso.trajectory(ex2, biqso.validate_state([0.6, 0.4], [0.5, 0.5]), 2000)
x1 = tr.as_array()[:, 0]
for t in (0, 10, 100, 1000, 2000):
    print(f"t={t:5d}  x1={x1[t]:.3e}")

# %%
# ``example3``: zeta = 2, still globally convergent. The female marginal
# obeys x1' = (1 - x1)/2, which has a closed-form iterate.

ex3 = biqso.builtin_model("example3")
z0 = biqso.validate_state([0.9, 0.1], [0.2, 0.8])
tr = biqso.trajectory(ex3, z0, 12).as_array()
for t in range(0, 13, 3):
    print(t, tr[t, 0], biqso.scalar_iterate_closed_form(0.9, t))
print(render_classification(biqso.classify(ex3, z0), "table"))
