"""
Models and states
=================

Building a bisexual population model from inheritance tensors, checking
states on the product of simplices, and applying one generation of W.
"""

# %%
# A model is two probability tensors. ``female[i, j]`` is the distribution
# of a daughter's type for a mother of type i and a father of type j;
# ``male[i, j]`` the same for a son.

import numpy as np

import biqso
from biqso.model import serialize_model

female = np.array([[[0.9, 0.1], [0.5, 0.5]],
                   [[0.5, 0.5], [0.1, 0.9]]])
male = female[:, :, ::-1].copy()
model = biqso.validate_tensors(female, male)
print(model.n, model.nu)

# %%
# Rows that do not sum to one are rejected, never renormalized.

try:
    biqso.validate_tensors(female * 1.1, male)
except biqso.QSOError as exc:
    print(type(exc).__name__, exc)

# %%
# One generation.

z = biqso.validate_state([0.8, 0.2], [0.3, 0.7])
w = biqso.evolve(model, z)
print("x' =", w.x, "y' =", w.y)

# the algebra square is the same map
print(np.allclose(biqso.algebra_product(model, z.z, z.z), w.z))

# %%
# Models round-trip through the plain-text file format.

text = serialize_model(model, comments=["demo model"])
print(text)
again = biqso.parse_model_file(text)
print(again.equals(model))

# %%
# The three built-in examples.

for name in ("example1", "example2", "example3"):
    m = biqso.builtin_model(name)
    print(name, "zeta =", biqso.zeta(m).value)
