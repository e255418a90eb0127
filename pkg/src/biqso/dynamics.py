"""Trajectories, convergence/period classification and sampled Lipschitz estimates.

Iteration renormalizes each iterate onto S. The sums ``sum x = sum y = 1``
are an unstable invariant of W (a sum error ``d`` becomes roughly ``2d``
after one step), so without renormalization round-off leaves the simplex
within a few dozen steps. A deviation above :data:`DRIFT_LIMIT` before
renormalization is treated as a real defect and raises :class:`DriftError`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .contraction import tangent_block_norm
from .errors import DimensionMismatch, DomainError, DriftError, InvalidParameters
from .model import BisexualModel, PopulationState
from .operator import evolve_arrays, is_idempotent, jacobian

DEFAULT_TOL = 1e-10
DEFAULT_MAX_STEPS = 100_000
DEFAULT_MAX_PERIOD = 12
DRIFT_LIMIT = 1e-6
MIN_PAIR_DISTANCE = 1e-12

# fixed chunking keeps sampled estimates identical at any worker count
CHUNK_SIZE = 4096


def _check_dims(model: BisexualModel, z: PopulationState) -> None:
    if z.n != model.n or z.nu != model.nu:
        raise DimensionMismatch(
            f"state has dimensions ({z.n}, {z.nu}), model has ({model.n}, {model.nu})"
        )


def step(model: BisexualModel, x: np.ndarray, y: np.ndarray):
    """One renormalized application of W to raw arrays."""
    x2, y2 = evolve_arrays(model, x, y)
    sx, sy = x2.sum(), y2.sum()
    if abs(sx - 1.0) > DRIFT_LIMIT or abs(sy - 1.0) > DRIFT_LIMIT:
        raise DriftError(f"iterate sums drifted to ({sx!r}, {sy!r})")
    return x2 / sx, y2 / sy


# --------------------------------------------------------------------------
# sampling


def _sample_simplex(rng: np.random.Generator, size: int, m: int) -> np.ndarray:
    e = rng.standard_exponential((size, m))
    p = e / e.sum(axis=1, keepdims=True)
    # last coordinate closes the sum; for m = 2 the sum is then exactly 1
    p[:, -1] = np.maximum(1.0 - p[:, :-1].sum(axis=1), 0.0)
    return p


def sample_state(n: int, nu: int, rng: np.random.Generator) -> PopulationState:
    """Independent flat-Dirichlet draws for ``x`` and ``y``."""
    x = _sample_simplex(rng, 1, n)[0]
    y = _sample_simplex(rng, 1, nu)[0]
    return PopulationState._trusted(x, y)


def sample_states(n: int, nu: int, count: int, rng: np.random.Generator) -> list[PopulationState]:
    return [sample_state(n, nu, rng) for _ in range(count)]


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


def _chunks(samples: int) -> list[tuple[int, int]]:
    return [
        (c, min(CHUNK_SIZE, samples - c * CHUNK_SIZE))
        for c in range(math.ceil(samples / CHUNK_SIZE))
    ]


def _map_chunks(fn, samples: int, workers: int):
    chunks = _chunks(samples)
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


# --------------------------------------------------------------------------
# trajectories


@dataclass(frozen=True, eq=False)
class Trajectory:
    points: list[PopulationState]
    model: BisexualModel

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        """Shape ``(steps + 1, n + nu)``."""
        return np.array([p.z for p in self.points])


def trajectory(model: BisexualModel, z0: PopulationState, steps: int) -> Trajectory:
    """``z0, W(z0), ..., W^steps(z0)``."""
    _check_dims(model, z0)
    if steps < 0:
        raise InvalidParameters("steps must be >= 0")
    x, y = z0.x, z0.y
    points = [z0]
    for _ in range(steps):
        x, y = step(model, x, y)
        points.append(PopulationState._trusted(x, y))
    return Trajectory(points, model)


@dataclass(frozen=True, eq=False)
class TrajectoryClassification:
    """Outcome of :func:`classify`.

    ``kind`` is ``"converged"`` (``state`` is the limit), ``"periodic"``
    (``period`` and ``cycle`` are set, ``state`` is the latest iterate) or
    ``"undecided"`` (``state`` is the last iterate reached).
    """

    kind: str
    state: PopulationState
    steps: int
    tol: float
    max_steps: int
    period: Optional[int] = None
    cycle: list[PopulationState] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.kind == "converged"

    @property
    def periodic(self) -> bool:
        return self.kind == "periodic"


def classify(
    model: BisexualModel,
    z0: PopulationState,
    max_steps: int = DEFAULT_MAX_STEPS,
    tol: float = DEFAULT_TOL,
    max_period: int = DEFAULT_MAX_PERIOD,
) -> TrajectoryClassification:
    """Iterate until the orbit converges, certifies a cycle, or ``max_steps`` runs out.

    Converged: consecutive l1 distance below ``tol`` and the iterate is a
    fixed point at ``10 * tol``. Periodic(p): the lag-p distance stayed below
    ``tol`` for ``2p`` consecutive steps while the orbit is not converging; the
    smallest such ``p`` in ``2..max_period`` is reported.
    """
    _check_dims(model, z0)
    if max_steps < 1 or not tol > 0 or max_period < 1:
        raise InvalidParameters("need max_steps >= 1, tol > 0, max_period >= 1")
    ring = max_period + 1
    hist = np.empty((ring, model.dim))
    hist[0] = z0.z
    lags = np.arange(2, max_period + 1)
    runs = np.zeros(lags.size, dtype=int)
    n = model.n
    x, y = z0.x, z0.y
    for t in range(1, max_steps + 1):
        x, y = step(model, x, y)
        z = np.concatenate([x, y])
        prev = hist[(t - 1) % ring]
        hist[t % ring] = z
        if np.abs(z - prev).sum() < tol:
            limit = PopulationState._trusted(x, y)
            if is_idempotent(model, limit, 10 * tol):
                return TrajectoryClassification("converged", limit, t, tol, max_steps)
            runs[:] = 0
            continue
        if lags.size:
            avail = lags <= t
            past = hist[(t - lags[avail]) % ring]
            close = np.abs(past - z).sum(axis=1) < tol
            runs[avail] = np.where(close, runs[avail] + 1, 0)
            hit = np.flatnonzero(runs >= 2 * lags)
            if hit.size:
                p = int(lags[hit[0]])
                cycle = [
                    PopulationState._trusted(v[:n], v[n:])
                    for v in (hist[(t - p + 1 + s) % ring] for s in range(p))
                ]
                return TrajectoryClassification(
                    "periodic", cycle[-1], t, tol, max_steps, period=p, cycle=cycle
                )
    return TrajectoryClassification(
        "undecided", PopulationState._trusted(x, y), max_steps, tol, max_steps
    )


def find_fixed_points(
    model: BisexualModel,
    starts: Sequence[PopulationState],
    max_steps: int = DEFAULT_MAX_STEPS,
    tol: float = DEFAULT_TOL,
    max_period: int = DEFAULT_MAX_PERIOD,
) -> list[PopulationState]:
    """Distinct limits of the converging orbits among ``starts``.

    Limits closer than ``100 * tol`` in l1 are merged (first one kept).
    """
    if not starts:
        raise InvalidParameters("need at least one start")
    found: list[PopulationState] = []
    for z0 in starts:
        c = classify(model, z0, max_steps, tol, max_period)
        if not c.converged or not is_idempotent(model, c.state, 10 * tol):
            continue
        if all(c.state.distance(f) > 100 * tol for f in found):
            found.append(c.state)
    return found


# --------------------------------------------------------------------------
# Lipschitz estimates


@dataclass(frozen=True, eq=False)
class LipschitzEstimate:
    lower_bound: float
    witness_pair: tuple[PopulationState, PopulationState]
    samples: int
    seed: int


def lipschitz_ratio(model: BisexualModel, z: PopulationState, t: PopulationState) -> float:
    """``||W z - W t||_1 / ||z - t||_1``."""
    wz = np.concatenate(evolve_arrays(model, z.x, z.y))
    wt = np.concatenate(evolve_arrays(model, t.x, t.y))
    return float(np.abs(wz - wt).sum() / np.abs(z.z - t.z).sum())


def _check_sampling(samples: int, seed: int) -> None:
    if samples < 1:
        raise InvalidParameters("samples must be >= 1")
    if seed < 0:
        raise InvalidParameters("seed must be a non-negative integer")


def _pair_chunk(model: BisexualModel, seed: int, chunk: tuple[int, int]):
    c, size = chunk
    rng = _chunk_rng(seed, c)
    n, nu = model.n, model.nu
    z = np.empty((size, n + nu))
    t = np.empty((size, n + nu))
    todo = np.arange(size)
    while todo.size:
        k = todo.size
        z[todo, :n] = _sample_simplex(rng, k, n)
        z[todo, n:] = _sample_simplex(rng, k, nu)
        t[todo, :n] = _sample_simplex(rng, k, n)
        t[todo, n:] = _sample_simplex(rng, k, nu)
        dist = np.abs(z[todo] - t[todo]).sum(axis=1)
        todo = todo[dist <= MIN_PAIR_DISTANCE]
    wz = np.concatenate(evolve_arrays(model, z[:, :n], z[:, n:]), axis=1)
    wt = np.concatenate(evolve_arrays(model, t[:, :n], t[:, n:]), axis=1)
    ratio = np.abs(wz - wt).sum(axis=1) / np.abs(z - t).sum(axis=1)
    best = int(np.argmax(ratio))
    return float(ratio[best]), z[best], t[best]


def empirical_lipschitz(
    model: BisexualModel, samples: int, seed: int, workers: int = 1
) -> LipschitzEstimate:
    """Largest difference quotient of W over ``samples`` random pairs from S x S.

    A lower bound for the l1 Lipschitz constant. Deterministic in ``seed``;
    ``workers`` only changes wall time.
    """
    _check_sampling(samples, seed)
    results = _map_chunks(lambda ch: _pair_chunk(model, seed, ch), samples, workers)
    # strict > keeps the earliest chunk on ties
    best = results[0]
    for r in results[1:]:
        if r[0] > best[0]:
            best = r
    n = model.n
    z = PopulationState._trusted(best[1][:n], best[1][n:])
    t = PopulationState._trusted(best[2][:n], best[2][n:])
    return LipschitzEstimate(lipschitz_ratio(model, z, t), (z, t), samples, seed)


def tangent_jacobian_norm(model: BisexualModel, z: PopulationState) -> float:
    """l1 norm of the derivative at ``z`` restricted to the tangent space.

    Female and male input columns form separate blocks with equal column
    sums on S; the restricted norm is the larger of the two block norms.
    """
    jac = jacobian(model, z)
    blocks = [b for b in (jac.female_columns, jac.male_columns) if b.shape[1] >= 2]
    if not blocks:
        return 0.0
    return max(tangent_block_norm(b) for b in blocks)


def _block_norms(cols: np.ndarray) -> np.ndarray:
    # cols: (batch, columns, rows); 1/2 max over column pairs of the l1 difference
    if cols.shape[1] < 2:
        return np.zeros(cols.shape[0])
    d = np.abs(cols[:, :, None, :] - cols[:, None, :, :]).sum(axis=-1)
    return 0.5 * d.reshape(d.shape[0], -1).max(axis=1)


def _jacobian_chunk(model: BisexualModel, seed: int, chunk: tuple[int, int]) -> float:
    c, size = chunk
    rng = _chunk_rng(seed, c)
    x = _sample_simplex(rng, size, model.n)
    y = _sample_simplex(rng, size, model.nu)
    p = model.offspring()
    cols_x = np.einsum("ijk,bj->bik", p, y)
    cols_y = np.einsum("ijk,bi->bjk", p, x)
    return float(np.maximum(_block_norms(cols_x), _block_norms(cols_y)).max())


def jacobian_lipschitz(
    model: BisexualModel, samples: int, seed: int, workers: int = 1
) -> float:
    """Max over sampled ``z`` in S of :func:`tangent_jacobian_norm` (vectorized)."""
    _check_sampling(samples, seed)
    return max(_map_chunks(lambda ch: _jacobian_chunk(model, seed, ch), samples, workers))


# --------------------------------------------------------------------------


def scalar_iterate_closed_form(x0: float, steps: int) -> float:
    """``f^steps(x0)`` for ``f(x) = (1 - x) / 2``, in closed form.

    ``f^n(x) = sum_{k=1..n} (-1)^(k+1) / 2^k + (-1/2)^n x``, evaluated as
    ``(1 - r^n) / 3 + r^n x`` with ``r = -1/2``. This is the female marginal
    ``x_1`` of the third built-in example.
    """
    if not 0.0 <= x0 <= 1.0:
        raise DomainError(f"x0 = {x0!r} is outside [0, 1]")
    if steps < 0:
        raise InvalidParameters("steps must be >= 0")
    r = (-0.5) ** steps
    return (1.0 - r) / 3.0 + r * x0
