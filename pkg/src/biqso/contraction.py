"""Sufficient contraction conditions for the bisexual evolution operator.

``zeta`` is an upper bound on the l1 Lipschitz constant of W on S, built from
the scatter of inheritance rows when one parent's type is changed. The
multiplicative bounds replace row differences by the maximal coefficient
ratio ``mu`` and are only defined when every coefficient is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import TooFewColumns, UnequalColumnSums
from .model import BisexualModel


@dataclass(frozen=True)
class ZetaResult:
    value: float
    female_term: float
    female_argmax: Optional[tuple[int, int, int]]  # (i1, i2, j); None if n == 1
    male_term: float
    male_argmax: Optional[tuple[int, int, int]]  # (j1, j2, i); None if nu == 1


def _sorted_l1(d: np.ndarray) -> np.ndarray:
    # summing in sorted order makes the result independent of type labelling
    return np.sort(np.abs(d), axis=-1).sum(axis=-1)


def _first_argmax(a: np.ndarray) -> tuple[float, tuple[int, ...]]:
    # a[p, q, r] with p == q is the trivial zero comparison; never a witness.
    # C-order argmax = lexicographically smallest index tuple among ties
    a = np.where(np.eye(a.shape[0], dtype=bool)[:, :, None], -np.inf, a)
    flat = int(np.argmax(a))
    idx = np.unravel_index(flat, a.shape)
    return float(a[idx]), tuple(int(v) for v in idx)


def zeta(model: BisexualModel) -> ZetaResult:
    """Exhaustive evaluation of the two scatter terms and their sum.

    female term: max over (i1, i2, j) of ``||P[i1, j] - P[i2, j]||_1``
    male term:   max over (j1, j2, i) of ``||P[i, j1] - P[i, j2]||_1``

    where ``P[i, j]`` is the female row followed by the male row of the pair.
    """
    p = model.offspring()
    if model.n > 1:
        # axes (i1, i2, j)
        t_f = _sorted_l1(p[:, None, :, :] - p[None, :, :, :])
        f_val, f_arg = _first_argmax(t_f)
    else:
        f_val, f_arg = 0.0, None
    if model.nu > 1:
        # axes (i, j1, j2) -> reorder to (j1, j2, i)
        t_m = _sorted_l1(p[:, :, None, :] - p[:, None, :, :]).transpose(1, 2, 0)
        m_val, m_arg = _first_argmax(t_m)
    else:
        m_val, m_arg = 0.0, None
    return ZetaResult(f_val + m_val, f_val, f_arg, m_val, m_arg)


def _max_ratio(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(a / b))


def mu_ratios(model: BisexualModel, over: str = "both") -> tuple[Optional[float], Optional[float]]:
    """Maximal coefficient ratios ``(mu_f, mu_m)``; ``None`` where a coefficient is 0.

    ``over="both"`` (default) takes, for each offspring sex, the maximum of
    ``p[a, k] / p[b, k]`` over pairs of parent pairs ``a, b`` that differ in
    exactly one parent, female or male. This is the quantity the multiplicative
    bound on ``zeta`` needs: each scatter term changes one parent and compares
    both offspring tensors.

    ``over="own"`` restricts the female ratio to changing the female parent and
    the male ratio to changing the male parent. It is smaller, and with it the
    inequality ``zeta <= lemma4_bound`` can fail.
    """
    if over not in ("both", "own"):
        raise ValueError(f"over must be 'both' or 'own', got {over!r}")
    out = []
    for sex, t in (("f", model.female), ("m", model.male)):
        if np.any(t <= 0):
            out.append(None)
            continue
        vary_i = _max_ratio(t[:, None, :, :], t[None, :, :, :])
        vary_j = _max_ratio(t[:, :, None, :], t[:, None, :, :])
        if over == "both":
            out.append(max(vary_i, vary_j))
        else:
            out.append(vary_i if sex == "f" else vary_j)
    return out[0], out[1]


def _ratio_term(mu: float) -> float:
    return 4.0 * (mu - 1.0) / (mu + 1.0)


def lemma4_bound(model: BisexualModel, over: str = "both") -> Optional[float]:
    """``4(mu_f - 1)/(mu_f + 1) + 4(mu_m - 1)/(mu_m + 1)``, or ``None``."""
    mu_f, mu_m = mu_ratios(model, over)
    if mu_f is None or mu_m is None:
        return None
    return _ratio_term(mu_f) + _ratio_term(mu_m)


def corollary3_holds(model: BisexualModel, over: str = "both") -> Optional[bool]:
    """``7 mu_f mu_m - (mu_f + mu_m) < 9`` (equivalent to ``lemma4_bound < 1``)."""
    mu_f, mu_m = mu_ratios(model, over)
    if mu_f is None or mu_m is None:
        return None
    return bool(7.0 * mu_f * mu_m - (mu_f + mu_m) < 9.0)


def corollary4_bound(model: BisexualModel, over: str = "both") -> tuple[Optional[float], Optional[bool]]:
    """``(8(mu - 1)/(mu + 1), mu < 9/7)`` with ``mu = max(mu_f, mu_m)``."""
    mu_f, mu_m = mu_ratios(model, over)
    if mu_f is None or mu_m is None:
        return None, None
    mu = max(mu_f, mu_m)
    return 2.0 * _ratio_term(mu), bool(mu < 9.0 / 7.0)


def tangent_block_norm(a, tol: float = 1e-9) -> float:
    """l1 operator norm of ``a`` restricted to zero-sum input vectors.

    Requires equal column sums; then the norm is
    ``1/2 max_{j1 != j2} sum_i |a[i, j1] - a[i, j2]|`` and is attained at
    ``e_{j1} - e_{j2}``.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    if a.shape[1] < 2:
        raise TooFewColumns("need at least two columns for a zero-sum input")
    sums = a.sum(axis=0)
    if np.ptp(sums) > tol:
        raise UnequalColumnSums(f"column sums differ by {np.ptp(sums):.3g}")
    diff = np.abs(a[:, :, None] - a[:, None, :]).sum(axis=0)
    return 0.5 * float(diff.max())


@dataclass(frozen=True)
class ContractionReport:
    zeta: float
    zeta_term_female: float
    zeta_argmax_female: Optional[tuple[int, int, int]]
    zeta_term_male: float
    zeta_argmax_male: Optional[tuple[int, int, int]]
    mu_f: Optional[float]
    mu_m: Optional[float]
    lemma4_bound: Optional[float]
    corollary3_holds: Optional[bool]
    corollary4_bound: Optional[float]
    corollary4_holds: Optional[bool]
    is_strict_contraction_by_cor1: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def analyze(model: BisexualModel) -> ContractionReport:
    z = zeta(model)
    mu_f, mu_m = mu_ratios(model)
    c4_bound, c4_holds = corollary4_bound(model)
    return ContractionReport(
        zeta=z.value,
        zeta_term_female=z.female_term,
        zeta_argmax_female=z.female_argmax,
        zeta_term_male=z.male_term,
        zeta_argmax_male=z.male_argmax,
        mu_f=mu_f,
        mu_m=mu_m,
        lemma4_bound=lemma4_bound(model),
        corollary3_holds=corollary3_holds(model),
        corollary4_bound=c4_bound,
        corollary4_holds=c4_holds,
        is_strict_contraction_by_cor1=z.value < 1.0,
    )
