"""Acceptance criteria, one test (or group) per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints a
PASS/FAIL line for every criterion.
"""

import numpy as np
import pytest

from biqso.cli import main
from biqso.contraction import lemma4_bound, mu_ratios, zeta
from biqso.dynamics import (
    classify,
    empirical_lipschitz,
    find_fixed_points,
    jacobian_lipschitz,
    sample_state,
    sample_states,
    scalar_iterate_closed_form,
    trajectory,
)
from biqso.model import validate_state
from biqso.operator import evolve, evolve_arrays, is_idempotent, jacobian, multiplication_matrix

from oracles import fd_jacobian, random_model

ac = pytest.mark.acceptance


@ac("AC1 zeta(example1) = 4/7 with terms 2/7")
def test_ac1(ex1):
    z = zeta(ex1)
    assert abs(z.value - 4 / 7) <= 1e-12
    assert abs(z.female_term - 2 / 7) <= 1e-12
    assert abs(z.male_term - 2 / 7) <= 1e-12


@ac("AC2 zeta(example3) = 2 yet every start converges")
def test_ac2(ex3):
    assert abs(zeta(ex3).value - 2) <= 1e-12
    star = np.array([1 / 3, 2 / 3, 1 / 3, 2 / 3])
    for z0 in sample_states(2, 2, 100, np.random.default_rng(102)):
        c = classify(ex3, z0)
        assert c.converged and c.steps <= 200
        assert np.abs(c.state.z - star).max() <= 1e-8


@ac("AC3 example1 has a unique attracting fixed point")
def test_ac3(ex1):
    starts = sample_states(2, 2, 100, np.random.default_rng(103))
    for z0 in starts:
        c = classify(ex1, z0)
        assert c.converged and c.steps <= 500
        assert np.abs(c.state.z - 0.5).max() <= 1e-8
    assert len(find_fixed_points(ex1, starts)) == 1


@ac("AC4 example2 period-2 orbit and fixed points of W^2")
def test_ac4(ex2):
    c = classify(ex2, validate_state([0, 1], [0.3, 0.7]))
    assert c.periodic and c.period == 2
    assert is_idempotent(ex2, validate_state([0, 1], [0.5, 0.5]), 1e-12)
    for y in (0, 0.25, 0.5, 0.75, 1):
        z = validate_state([0, 1], [y, 1 - y])
        assert np.abs(evolve(ex2, evolve(ex2, z)).z - z.z).max() <= 1e-12


@ac("AC5 example2 interior decay of x1")
def test_ac5(ex2):
    for z0 in sample_states(2, 2, 20, np.random.default_rng(105)):
        x1 = trajectory(ex2, z0, 10_000).as_array()[:, 0]
        assert np.all(np.diff(x1) <= 0)
        assert x1[-1] < 1e-3


@ac("AC6 example3 x1 marginal follows the closed form")
def test_ac6(ex3):
    rng = np.random.default_rng(106)
    for _ in range(10):
        z0 = sample_state(2, 2, rng)
        x1 = trajectory(ex3, z0, 40).as_array()[:, 0]
        # the marginal solves x1' = (1 - x1)/2
        expected = [scalar_iterate_closed_form(z0.x[0], k) for k in range(41)]
        assert np.abs(x1 - expected).max() <= 1e-12


@ac("AC7 zeta is a Lipschitz bound on random models")
def test_ac7():
    rng = np.random.default_rng(107)
    violations = 0
    for _ in range(10_000):
        n, nu = rng.integers(2, 4, size=2)
        m = random_model(rng, n, nu, spread=rng.uniform(0.05, 1.0))
        z, t = sample_state(n, nu, rng), sample_state(n, nu, rng)
        lhs = evolve(m, z).distance(evolve(m, t))
        violations += lhs > zeta(m).value * z.distance(t) + 1e-10
    assert violations == 0


@ac("AC8 ratio bound dominates zeta on positive models")
def test_ac8(ex1):
    rng = np.random.default_rng(108)
    violations = 0
    for _ in range(1000):
        n, nu = rng.integers(1, 4, size=2)
        m = random_model(rng, n, nu, positive=True, spread=rng.uniform(0.05, 1.0))
        violations += zeta(m).value > lemma4_bound(m) + 1e-12
    assert violations == 0
    mu_f, mu_m = mu_ratios(ex1)
    assert abs(mu_f - 7 / 6) <= 1e-12 and abs(mu_m - 7 / 6) <= 1e-12
    assert abs(lemma4_bound(ex1) - 8 / 13) <= 1e-12


@ac("AC9 analytic Jacobian")
def test_ac9():
    rng = np.random.default_rng(109)
    for _ in range(20):
        n, nu = rng.integers(1, 5, size=2)
        m = random_model(rng, n, nu)
        fun = lambda v: np.concatenate(evolve_arrays(m, v[:n], v[n:]))  # noqa: E731
        for _ in range(5):
            z = sample_state(n, nu, rng)
            j = jacobian(m, z).entries
            assert np.abs(j - fd_jacobian(fun, z.z, 1e-6)).max() <= 1e-6
            assert np.abs(j.sum(axis=0) - 2).max() <= 1e-12
            mz = sum(z.x[k] * multiplication_matrix(m, "f", k) for k in range(n))
            mz = mz + sum(z.y[l] * multiplication_matrix(m, "m", l) for l in range(nu))
            assert np.abs(j - 2 * mz).max() <= 1e-12


@ac("AC10 sampled Lipschitz estimates")
def test_ac10(ex1, ex3):
    est = empirical_lipschitz(ex3, 100_000, seed=110)
    assert 0.48 <= est.lower_bound <= 0.5 + 1e-10
    assert jacobian_lipschitz(ex3, 100_000, seed=110) == 0.5
    assert empirical_lipschitz(ex1, 100_000, seed=110).lower_bound <= 4 / 7 + 1e-10


@ac("AC11 lipschitz output independent of worker count")
def test_ac11(capsys):
    outs = []
    for workers in ("1", "1", "4"):
        argv = ["lipschitz", "--builtin", "example1", "--samples", "100000", "--seed", "42"]
        assert main(argv + ["--workers", workers]) == 0
        outs.append(capsys.readouterr().out.encode())
    assert outs[0] == outs[1] == outs[2]
