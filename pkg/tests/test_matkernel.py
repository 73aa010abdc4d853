import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chandisc import matkernel as mk
from chandisc.errors import NotHermitian, NotPSD, NotSquare, NotUnitary
from helpers import haar, random_density, random_hermitian

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 5)


@settings(max_examples=50, deadline=None)
@given(seed=seeds, d=dims)
def test_hermitian_eig_reconstructs_sorted(seed, d):
    h = random_hermitian(d, np.random.default_rng(seed))
    w, v = mk.hermitian_eig(h)
    assert np.all(np.diff(w) <= 1e-12)
    assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-12)
    assert np.allclose((v * w) @ v.conj().T, h, atol=1e-10)
    for k in range(d):
        first = v[np.flatnonzero(np.abs(v[:, k]) > 1e-8)[0], k]
        assert abs(first.imag) < 1e-12 and first.real > 0


def test_hermitian_eig_degenerate_is_deterministic():
    w, v = mk.hermitian_eig(np.eye(3))
    assert np.allclose(w, 1)
    w2, v2 = mk.hermitian_eig(np.eye(3))
    assert np.array_equal(v, v2)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        mk.hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NotSquare):
        mk.hermitian_eig(np.zeros((2, 3)))


@settings(max_examples=50, deadline=None)
@given(seed=seeds, d=dims)
def test_unitary_eigphases_reconstruct(seed, d):
    u = haar(d, np.random.default_rng(seed)) if d > 1 else np.array([[np.exp(0.3j)]])
    th, v = mk.unitary_eigphases(u)
    assert np.all(th > -np.pi) and np.all(th <= np.pi)
    assert np.all(np.diff(th) >= 0)
    assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-10)
    assert np.allclose((v * np.exp(1j * th)) @ v.conj().T, u, atol=1e-10)


def test_unitary_eigphases_minus_one_maps_to_pi():
    th, _ = mk.unitary_eigphases(np.diag([1, -1]))
    assert np.allclose(th, [0, np.pi])


def test_unitary_eigphases_degenerate_cluster_orthonormal():
    from chandisc import GATES
    w = GATES["CNOT"].conj().T @ GATES["SWAP"]
    th, v = mk.unitary_eigphases(w)
    assert np.allclose(th, [-2 * np.pi / 3, 0, 0, 2 * np.pi / 3], atol=1e-12)
    assert np.allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
    assert np.allclose((v * np.exp(1j * th)) @ v.conj().T, w, atol=1e-12)


def test_unitary_eigphases_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        mk.unitary_eigphases(np.diag([1, 2]))


@settings(max_examples=50, deadline=None)
@given(seed=seeds, d=dims)
def test_trace_norm_properties(seed, d):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    assert np.isclose(mk.trace_norm(a), np.linalg.norm(a, "nuc"))
    assert mk.trace_norm(a + b) <= mk.trace_norm(a) + mk.trace_norm(b) + 1e-10
    if d > 1:
        u, v = haar(d, rng), haar(d, rng)
        assert np.isclose(mk.trace_norm(u @ a @ v), mk.trace_norm(a))
    rho = random_density(d, rng)
    assert np.isclose(mk.trace_norm(rho), 1.0)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, d=dims)
def test_psd_sqrt_squares_back(seed, d):
    rho = random_density(d, np.random.default_rng(seed), rank=max(1, d - 1))
    s = mk.psd_sqrt(rho)
    assert mk.is_psd(s)
    assert np.allclose(s @ s, rho, atol=1e-10)


def test_psd_sqrt_rejects_negative():
    with pytest.raises(NotPSD):
        mk.psd_sqrt(np.diag([1.0, -0.1]))
    # tiny negative rounding is clamped
    assert np.allclose(mk.psd_sqrt(np.diag([1.0, -1e-12])), np.diag([1.0, 0.0]))


def test_predicates():
    assert mk.is_unitary(np.array([[0, 1j], [1j, 0]]))
    assert not mk.is_unitary(np.eye(2) * 1.001)
    assert mk.is_psd(np.eye(2))
    assert not mk.is_psd(np.diag([1, -1]))
    assert mk.max_abs(np.array([[1, -3j]])) == 3
