import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chandisc import QuantumState, TwoStateProblem, helstrom, posterior, unambiguous_pure
from chandisc.errors import NotNormalized, ZeroTotalProbability
from chandisc.states import achieved_error, unambiguous_failure
from helpers import random_density, random_povm, random_vector

seeds = st.integers(0, 2**32 - 1)
priors = st.floats(0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, eta=priors, d=st.integers(2, 4))
def test_helstrom_attains_its_value(seed, eta, d):
    rng = np.random.default_rng(seed)
    p = TwoStateProblem(QuantumState(random_density(d, rng)), QuantumState(random_density(d, rng)), eta, 1 - eta)
    sol = helstrom(p)
    assert sol.effect1.is_valid() and sol.effect2.is_valid()
    assert achieved_error(p, sol.effect1, sol.effect2) == pytest.approx(sol.p_error, abs=1e-10)
    assert -1e-12 <= sol.p_error <= min(eta, 1 - eta) + 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=seeds, eta=priors)
def test_helstrom_beats_sampled_povms(seed, eta):
    rng = np.random.default_rng(seed)
    p = TwoStateProblem(QuantumState(random_density(2, rng)), QuantumState(random_density(2, rng)), eta, 1 - eta)
    best = helstrom(p).p_error
    for _ in range(50):
        e1, e2 = random_povm(2, 2, rng)
        assert achieved_error(p, e1, e2) >= best - 1e-9


@settings(max_examples=60, deadline=None)
@given(seed=seeds, eta=priors)
def test_helstrom_pure_state_formula(seed, eta):
    rng = np.random.default_rng(seed)
    a, b = random_vector(3, rng), random_vector(3, rng)
    s2 = abs(np.vdot(a, b)) ** 2
    sol = helstrom(TwoStateProblem(QuantumState.pure(a), QuantumState.pure(b), eta, 1 - eta))
    assert sol.p_error == pytest.approx(0.5 * (1 - np.sqrt(1 - 4 * eta * (1 - eta) * s2)), abs=1e-10)


def test_helstrom_identical_states_guesses_larger_prior():
    rho = QuantumState.maximally_mixed(2)
    assert helstrom(TwoStateProblem(rho, rho, 0.3, 0.7)).p_error == pytest.approx(0.3)


@settings(max_examples=80, deadline=None)
@given(seed=seeds, eta=st.floats(0.01, 0.99), d=st.integers(2, 4))
def test_unambiguous_pure_is_unambiguous_and_optimal(seed, eta, d):
    rng = np.random.default_rng(seed)
    a, b = random_vector(d, rng), random_vector(d, rng)
    sol = unambiguous_pure(a, b, eta, 1 - eta)
    for e in (sol.effect1, sol.effect2, sol.effect_inconclusive):
        assert e.is_valid(1e-10)
    assert abs(np.vdot(b, sol.effect1.e @ b)) < 1e-10
    assert abs(np.vdot(a, sol.effect2.e @ a)) < 1e-10
    fail = eta * np.vdot(a, sol.effect_inconclusive.e @ a).real + (1 - eta) * np.vdot(b, sol.effect_inconclusive.e @ b).real
    assert fail == pytest.approx(sol.p_fail, abs=1e-10)
    assert sol.p_fail == pytest.approx(unambiguous_failure(abs(np.vdot(a, b)), eta, 1 - eta))


@settings(max_examples=50, deadline=None)
@given(eta=st.floats(0.5, 0.99))
def test_failure_branches_meet_at_threshold(eta):
    s = np.sqrt((1 - eta) / eta)
    lower = 2 * np.sqrt(eta * (1 - eta)) * s
    upper = (1 - eta) + eta * s * s
    assert lower == pytest.approx(upper, abs=1e-12)
    assert unambiguous_failure(s, eta, 1 - eta) == pytest.approx(lower, abs=1e-12)
    # continuous across the threshold
    assert unambiguous_failure(s + 1e-9, eta, 1 - eta) == pytest.approx(lower, abs=1e-7)


def test_unambiguous_edge_cases():
    e0, e1 = np.array([1, 0]), np.array([0, 1])
    assert unambiguous_pure(e0, e1).p_fail == 0
    same = unambiguous_pure(e0, e0)
    assert same.p_fail == 1 and np.allclose(same.effect_inconclusive.e, np.eye(2))
    # a zero prior never concludes the impossible hypothesis
    sol = unambiguous_pure(e0, (e0 + e1) / np.sqrt(2), 1.0, 0.0)
    assert np.allclose(sol.effect2.e, 0)
    with pytest.raises(NotNormalized):
        unambiguous_pure(np.array([1, 1]), e0)


def test_posterior():
    table = [[0.9, 0.1], [0.2, 0.8]]
    post = posterior([0.5, 0.5], table, 0)
    assert np.allclose(post, [0.9 / 1.1, 0.2 / 1.1])
    assert post.sum() == pytest.approx(1)
    with pytest.raises(ZeroTotalProbability):
        posterior([1.0, 0.0], [[1.0, 0.0], [0.5, 0.5]], 1)
    with pytest.raises(ValueError):
        posterior([0.6, 0.6], table, 0)
