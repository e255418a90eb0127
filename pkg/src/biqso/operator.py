"""The evolution operator, its evolution-algebra product, and its derivative.

Algebra elements are plain float vectors of length ``n + nu`` (no sum
constraint); states are :class:`~biqso.model.PopulationState`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisIndexError, DimensionMismatch
from .model import BisexualModel, PopulationState


def _check_state(model: BisexualModel, z: PopulationState) -> None:
    if z.n != model.n or z.nu != model.nu:
        raise DimensionMismatch(
            f"state has dimensions ({z.n}, {z.nu}), model has ({model.n}, {model.nu})"
        )


def _check_element(model: BisexualModel, v) -> np.ndarray:
    v = np.asarray(v, dtype=float).ravel()
    if v.size != model.dim:
        raise DimensionMismatch(f"element has {v.size} coordinates, expected {model.dim}")
    return v


def evolve_arrays(model: BisexualModel, x: np.ndarray, y: np.ndarray):
    """Raw one-step map on arrays; accepts a leading batch axis.

    ``x`` has shape ``(..., n)`` and ``y`` shape ``(..., nu)``.
    """
    x2 = np.einsum("...i,...j,ijk->...k", x, y, model.female)
    y2 = np.einsum("...i,...j,ijl->...l", x, y, model.male)
    return x2, y2


def evolve(model: BisexualModel, z: PopulationState) -> PopulationState:
    """Offspring state ``W(z)``: ``x'_k = sum_ij pf[i,j,k] x_i y_j``, same for ``y'``."""
    _check_state(model, z)
    x2, y2 = evolve_arrays(model, z.x, z.y)
    return PopulationState(x2, y2)


def algebra_product(model: BisexualModel, z, t) -> np.ndarray:
    """Product ``z t`` in the evolution algebra, extended bilinearly.

    Female-female and male-male basis products vanish, so only the mixed
    terms ``x_i v_j + u_i y_j`` contribute, each with weight 1/2.
    """
    z = _check_element(model, z)
    t = _check_element(model, t)
    n = model.n
    x, y = z[:n], z[n:]
    u, v = t[:n], t[n:]
    mixed = np.outer(x, v) + np.outer(u, y)
    return 0.5 * np.einsum("ij,ijk->k", mixed, model.offspring())


def square(model: BisexualModel, z) -> np.ndarray:
    return algebra_product(model, z, z)


@dataclass(frozen=True, eq=False)
class JacobianMatrix:
    entries: np.ndarray  # (n + nu, n + nu), rows = outputs, columns = inputs
    point: PopulationState

    @property
    def female_columns(self) -> np.ndarray:
        """Columns for the female inputs ``x``, shape ``(n + nu, n)``."""
        return self.entries[:, : self.point.n]

    @property
    def male_columns(self) -> np.ndarray:
        return self.entries[:, self.point.n :]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def jacobian(model: BisexualModel, z: PopulationState) -> JacobianMatrix:
    """Derivative of :func:`evolve` at ``z`` (no 1/2 prefactor).

    Column ``i`` (female input) is ``sum_j P[i, j, :] y_j``; column ``n + j``
    (male input) is ``sum_i P[i, j, :] x_i``, where ``P`` stacks both
    offspring tensors. On S every column sums to 2.
    """
    _check_state(model, z)
    p = model.offspring()
    d_x = np.einsum("ijk,j->ki", p, z.y)
    d_y = np.einsum("ijk,i->kj", p, z.x)
    entries = np.hstack([d_x, d_y])
    entries.setflags(write=False)
    return JacobianMatrix(entries, z)


def multiplication_matrix(model: BisexualModel, sex: str, index: int) -> np.ndarray:
    """Matrix of ``t -> e t`` for the basis vector ``e`` = female ``index`` or male ``index``.

    ``sex`` is ``"f"`` or ``"m"``.
    """
    n, nu = model.n, model.nu
    p = model.offspring()
    m = np.zeros((n + nu, n + nu))
    if sex == "f":
        if not 0 <= index < n:
            raise BasisIndexError(f"female basis index {index} out of range 0..{n - 1}")
        # e^(f)_k e^(m)_j = 1/2 P[k, j, :]
        m[:, n:] = 0.5 * p[index].T
    elif sex == "m":
        if not 0 <= index < nu:
            raise BasisIndexError(f"male basis index {index} out of range 0..{nu - 1}")
        m[:, :n] = 0.5 * p[:, index, :].T
    else:
        raise ValueError(f"sex must be 'f' or 'm', got {sex!r}")
    return m


def is_idempotent(model: BisexualModel, z: PopulationState, tol: float) -> bool:
    """True iff ``||z z - z||_1 <= tol``, i.e. ``z`` is a fixed point of W."""
    _check_state(model, z)
    if not tol > 0:
        raise ValueError("tol must be positive")
    zz = algebra_product(model, z.z, z.z)
    return float(np.abs(zz - z.z).sum()) <= tol
