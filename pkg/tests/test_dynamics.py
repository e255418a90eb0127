import numpy as np
import pytest

from biqso import catalog
from biqso.contraction import zeta
from biqso.dynamics import (
    DriftError,
    classify,
    empirical_lipschitz,
    find_fixed_points,
    jacobian_lipschitz,
    lipschitz_ratio,
    sample_state,
    sample_states,
    scalar_iterate_closed_form,
    step,
    tangent_jacobian_norm,
    trajectory,
)
from biqso.errors import DomainError, InvalidParameters
from biqso.model import BisexualModel, InheritanceTensors, validate_state, validate_tensors
from biqso.operator import evolve, is_idempotent

from oracles import random_model


def S(x, y):
    return validate_state(x, y)


# sampling


def test_single_type_sample():
    rng = np.random.default_rng(0)
    for _ in range(5):
        z = sample_state(1, 1, rng)
        assert z.x.tolist() == [1.0] and z.y.tolist() == [1.0]


def test_sample_mean():
    rng = np.random.default_rng(11)
    xs = np.array([sample_state(3, 2, rng).x for _ in range(100_000)])
    np.testing.assert_allclose(xs.mean(axis=0), 1 / 3, atol=0.01)


def test_sample_determinism():
    a = sample_states(3, 4, 10, np.random.default_rng(5))
    b = sample_states(3, 4, 10, np.random.default_rng(5))
    assert all(np.array_equal(p.z, q.z) for p, q in zip(a, b))


def test_two_type_samples_sum_exactly_to_one():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        z = sample_state(2, 2, rng)
        assert z.x[0] + z.x[1] == 1.0 and z.y[0] + z.y[1] == 1.0


# trajectories


def test_trajectory_at_fixed_point(ex1):
    tr = trajectory(ex1, S([0.5, 0.5], [0.5, 0.5]), 5)
    assert len(tr) == 6
    assert all(np.array_equal(p.z, [0.5] * 4) for p in tr.points)


def test_trajectory_example2_cycle(ex2):
    tr = trajectory(ex2, S([0, 1], [0.3, 0.7]), 2)
    np.testing.assert_allclose(
        tr.as_array(), [[0, 1, 0.3, 0.7], [0, 1, 0.7, 0.3], [0, 1, 0.3, 0.7]], atol=1e-15
    )


def test_trajectory_example3_step(ex3):
    tr = trajectory(ex3, S([1, 0], [1, 0]), 1)
    np.testing.assert_array_equal(tr.as_array(), [[1, 0, 1, 0], [0, 1, 0, 1]])


def test_trajectory_follows_evolve(rng):
    m = random_model(rng, 3, 2)
    tr = trajectory(m, sample_state(3, 2, rng), 200)
    for a, b in zip(tr.points, tr.points[1:]):
        np.testing.assert_allclose(evolve(m, a).z, b.z, atol=1e-12, rtol=0)
    with pytest.raises(InvalidParameters):
        trajectory(m, tr.points[0], -1)


def test_long_trajectory_stays_on_simplex(rng):
    m = random_model(rng, 3, 3)
    last = trajectory(m, sample_state(3, 3, rng), 5000).points[-1]
    assert abs(last.x.sum() - 1) < 1e-12 and abs(last.y.sum() - 1) < 1e-12


def test_drift_is_detected():
    # bypass validation to get rows that leak mass
    f = np.full((1, 1, 1), 0.99)
    bad = BisexualModel(1, 1, InheritanceTensors(f, np.ones((1, 1, 1))))
    with pytest.raises(DriftError):
        step(bad, np.array([1.0]), np.array([1.0]))


# classification


def test_classify_example1(ex1):
    c = classify(ex1, S([0.9, 0.1], [0.2, 0.8]))
    assert c.converged
    np.testing.assert_allclose(c.state.z, [0.5] * 4, atol=1e-9)
    assert evolve(ex1, c.state).distance(c.state) <= 10 * c.tol


def test_classify_example2_period_two(ex2):
    c = classify(ex2, S([0, 1], [0.3, 0.7]))
    assert c.periodic and c.period == 2
    got = sorted(tuple(np.round(s.z, 12)) for s in c.cycle)
    assert got == [(0, 1, 0.3, 0.7), (0, 1, 0.7, 0.3)]


def test_classify_example3(ex3, rng):
    for _ in range(10):
        c = classify(ex3, sample_state(2, 2, rng))
        assert c.converged
        np.testing.assert_allclose(c.state.z, [1 / 3, 2 / 3, 1 / 3, 2 / 3], atol=1e-9)


def test_classify_undecided(ex2):
    # a 2-cycle cannot be certified with max_period 1, nor within 3 steps
    c = classify(ex2, S([0, 1], [0.3, 0.7]), max_steps=5000, max_period=1)
    assert c.kind == "undecided" and c.steps == c.max_steps
    c = classify(ex2, S([0, 1], [0.3, 0.7]), max_steps=3)
    assert c.kind == "undecided"


def test_classify_parameters(ex1):
    z = S([0.5, 0.5], [0.5, 0.5])
    for kw in ({"max_steps": 0}, {"tol": 0.0}, {"max_period": 0}):
        with pytest.raises(InvalidParameters):
            classify(ex1, z, **kw)


def _cyclic_model(p):
    # female type k -> k+1 (mod p) whatever the male; single male type
    f = np.zeros((p, 1, p))
    for k in range(p):
        f[k, 0, (k + 1) % p] = 1
    return validate_tensors(f, np.ones((p, 1, 1)))


@pytest.mark.parametrize("p", [2, 3, 4, 6])
def test_period_minimality_by_lag_scan(p):
    m = _cyclic_model(p)
    x0 = np.arange(1, p + 1, dtype=float)
    x0 /= x0.sum()
    c = classify(m, validate_state(x0, [1.0]), max_period=12)
    assert c.periodic and c.period == p
    # brute-force: smallest lag with zero return distance along the orbit
    pts = trajectory(m, validate_state(x0, [1.0]), 30).as_array()
    lags = [q for q in range(1, 13) if np.abs(pts[q:] - pts[:-q]).sum(axis=1).max() < 1e-10]
    assert lags[0] == p


def test_example2_monotone_and_decay(ex2, rng):
    for _ in range(3):
        z = sample_state(2, 2, rng)
        x1 = trajectory(ex2, z, 2000).as_array()[:, 0]
        assert np.all(np.diff(x1) <= 0)


def test_w_squared_fixes_invariant_line(ex2):
    for y in np.linspace(0, 1, 11):
        z = S([0, 1], [y, 1 - y])
        zz = evolve(ex2, evolve(ex2, z))
        np.testing.assert_allclose(zz.z, z.z, atol=1e-12, rtol=0)


def test_contraction_convergence_and_rate(rng):
    done = 0
    while done < 5:
        n, nu = rng.integers(2, 4, size=2)
        m = random_model(rng, n, nu, spread=0.1)
        zm = zeta(m).value
        if zm >= 1:
            continue
        done += 1
        limits = [classify(m, sample_state(n, nu, rng)) for _ in range(50)]
        assert all(c.converged for c in limits)
        star = limits[0].state
        tol = limits[0].tol
        assert all(c.state.distance(star) <= 10 * tol for c in limits)
        assert is_idempotent(m, star, 10 * tol)
        pts = trajectory(m, sample_state(n, nu, rng), 30).points
        for a, b in zip(pts, pts[1:]):
            assert b.distance(star) <= zm * a.distance(star) + 1e-10


# fixed points


def test_fixed_points_unique(ex1, ex3):
    rng = np.random.default_rng(2)
    found = find_fixed_points(ex1, sample_states(2, 2, 20, rng))
    assert len(found) == 1
    np.testing.assert_allclose(found[0].z, [0.5] * 4, atol=1e-9)
    found = find_fixed_points(ex3, sample_states(2, 2, 20, rng))
    assert len(found) == 1
    np.testing.assert_allclose(found[0].z, [1 / 3, 2 / 3, 1 / 3, 2 / 3], atol=1e-9)


def test_fixed_points_none_on_cycle(ex2):
    starts = [S([0, 1], [y, 1 - y]) for y in (0.0, 0.1, 0.3, 0.7, 0.9, 1.0)]
    assert find_fixed_points(ex2, starts) == []
    with pytest.raises(InvalidParameters):
        find_fixed_points(ex2, [])


# Lipschitz estimates


def test_empirical_lipschitz_example3(ex3):
    est = empirical_lipschitz(ex3, 100_000, seed=1)
    assert 0.48 <= est.lower_bound <= 0.5 + 1e-10
    z, t = est.witness_pair
    assert est.lower_bound == lipschitz_ratio(ex3, z, t)


def test_empirical_lipschitz_uniform():
    est = empirical_lipschitz(catalog.uniform_model(2, 3), 1000, seed=0)
    assert est.lower_bound <= 1e-14  # round-off in sums of three types


def test_empirical_lipschitz_example1(ex1):
    est = empirical_lipschitz(ex1, 100_000, seed=2)
    assert 0 < est.lower_bound <= 4 / 7 + 1e-10


def test_lipschitz_worker_independence(ex1):
    a = empirical_lipschitz(ex1, 20_000, seed=9, workers=1)
    b = empirical_lipschitz(ex1, 20_000, seed=9, workers=4)
    assert a.lower_bound == b.lower_bound
    assert np.array_equal(a.witness_pair[0].z, b.witness_pair[0].z)
    assert jacobian_lipschitz(ex1, 20_000, 9, 1) == jacobian_lipschitz(ex1, 20_000, 9, 3)


def test_jacobian_lipschitz_examples(ex3):
    assert jacobian_lipschitz(ex3, 5000, seed=0) == 0.5
    assert jacobian_lipschitz(catalog.uniform_model(3, 2), 100, seed=0) == 0.0


def test_vectorized_jacobian_norm_matches_block_formula(rng):
    from biqso.dynamics import _chunk_rng, _sample_simplex

    m = random_model(rng, 3, 2)
    gen = _chunk_rng(4, 0)
    x = _sample_simplex(gen, 50, 3)
    y = _sample_simplex(gen, 50, 2)
    expected = max(tangent_jacobian_norm(m, validate_state(a, b)) for a, b in zip(x, y))
    assert jacobian_lipschitz(m, 50, seed=4) == pytest.approx(expected, abs=1e-14)


def test_jacobian_sup_dominates_sampled_ratio(rng):
    for _ in range(5):
        m = random_model(rng, 2, 3)
        lower = empirical_lipschitz(m, 5000, seed=3).lower_bound
        assert jacobian_lipschitz(m, 5000, seed=3) >= lower - 0.05
        assert lower <= zeta(m).value + 1e-10


def test_sampling_parameters(ex1):
    with pytest.raises(InvalidParameters):
        empirical_lipschitz(ex1, 0, seed=1)
    with pytest.raises(InvalidParameters):
        jacobian_lipschitz(ex1, 10, seed=-1)


# closed form


def test_closed_form_values():
    assert scalar_iterate_closed_form(1 / 3, 17) == pytest.approx(1 / 3, abs=1e-16)
    assert scalar_iterate_closed_form(0.0, 1) == 0.5
    assert scalar_iterate_closed_form(0.3, 0) == 0.3
    assert scalar_iterate_closed_form(0.9, 40) == pytest.approx(1 / 3, abs=1e-12)
    with pytest.raises(DomainError):
        scalar_iterate_closed_form(1.5, 3)


def test_closed_form_matches_direct_iteration():
    x = 0.9
    for k in range(1, 41):
        x = 0.5 * (1 - x)
        assert scalar_iterate_closed_form(0.9, k) == pytest.approx(x, abs=1e-15)
