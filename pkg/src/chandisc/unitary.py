"""Exact single-shot discrimination of two unitary channels.

Everything reduces to the eigenphases of ``W = U^dag V``: the completely
bounded process fidelity ``D`` is the distance from the origin to the convex
hull of the eigenvalues of ``W`` on the unit circle. The optimal test state is
ancilla-free and puts weight only on the eigenvectors spanning the closest
hull point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import matkernel as mk
from .core import Channel, QuantumState, basis
from .errors import DimensionMismatch, NotUnitary
from .ppovm import TestStrategy, outcome_probabilities, ppovm_of_strategy, product_test_state
from .states import TwoStateProblem, check_priors, helstrom, unambiguous_failure, unambiguous_pure

HULL_TOL = 1e-12
DEGENERATE_GAP = 1e-9


@dataclass(frozen=True, eq=False)
class UnitaryPair:
    u: np.ndarray
    v: np.ndarray
    eta_u: float = 0.5
    eta_v: float = 0.5
    tol: float = mk.DEFAULT_TOL

    def __post_init__(self):
        u, v = mk.as_matrix(self.u), mk.as_matrix(self.v)
        if u.shape != v.shape:
            raise DimensionMismatch(f"unitaries of shapes {u.shape} and {v.shape}")
        for name, m in (("u", u), ("v", v)):
            r = mk.unitary_residual(m)
            if r > self.tol:
                raise NotUnitary(f"{name} is not unitary (residual {r:.3e})")
        check_priors(self.eta_u, self.eta_v)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_channels(cls, ch1: Channel, ch2: Channel, eta1=0.5, eta2=0.5, tol=mk.DEFAULT_TOL):
        if not (ch1.is_unitary and ch2.is_unitary):
            raise NotUnitary("both channels must be unitary")
        return cls(ch1.unitary, ch2.unitary, eta1, eta2, tol)

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    @property
    def w(self) -> np.ndarray:
        return self.u.conj().T @ self.v


@dataclass(frozen=True, eq=False)
class FidelityResult:
    d_value: float
    zero_in_hull: bool
    optimal_pair: tuple | None
    eigenphases: np.ndarray
    eigenvectors: np.ndarray
    optimal_xi_diagonal: np.ndarray

    @property
    def support(self) -> list:
        return [int(k) for k in np.flatnonzero(self.optimal_xi_diagonal > 0)]

    def test_vector(self) -> np.ndarray:
        """Pure system state with |<phi_k|psi>|^2 equal to the optimal weights."""
        amps = np.sqrt(self.optimal_xi_diagonal)
        psi = self.eigenvectors @ amps
        return psi / np.linalg.norm(psi)

    def xi(self) -> np.ndarray:
        """Optimal reduced state sum_k w_k |phi_k><phi_k|."""
        v = self.eigenvectors
        return (v * self.optimal_xi_diagonal) @ v.conj().T

    def hull_point(self) -> complex:
        return complex(np.sum(self.optimal_xi_diagonal * np.exp(1j * self.eigenphases)))


def _cluster_heads(phases: np.ndarray) -> list:
    """Index of the first eigenphase in each degenerate cluster."""
    heads = [0]
    for k in range(1, len(phases)):
        if phases[k] - phases[k - 1] >= DEGENERATE_GAP:
            heads.append(k)
    return heads


def _zero_witness(points: np.ndarray, heads: list) -> dict:
    """Convex weights (on at most three vertices) whose combination is ~0."""
    for k, l in itertools.combinations(heads, 2):
        if 0.5 * abs(points[k] + points[l]) <= HULL_TOL:
            return {k: 0.5, l: 0.5}
    best, best_mod = None, np.inf
    for tri in itertools.combinations(heads, 3):
        z = points[list(tri)]
        a = np.array([z.real, z.imag, np.ones(3)])
        try:
            lam = np.linalg.solve(a, np.array([0.0, 0.0, 1.0]))
        except np.linalg.LinAlgError:
            continue
        if lam.min() < -HULL_TOL:
            continue
        lam = np.clip(lam, 0.0, None)
        lam /= lam.sum()
        mod = abs(np.dot(lam, z))
        if mod <= 1e-9:
            return dict(zip(tri, lam))
        if mod < best_mod:
            best, best_mod = dict(zip(tri, lam)), mod
    if best is None:
        raise RuntimeError("origin reported inside hull but no witness found")
    return best


def cb_process_fidelity(p: UnitaryPair) -> FidelityResult:
    """Distance from 0 to the convex hull of the eigenvalues of U^dag V."""
    phases, vecs = mk.unitary_eigphases(p.w, tol=p.tol)
    points = np.exp(1j * phases)
    heads = _cluster_heads(phases)
    n = len(phases)
    weights = np.zeros(n)

    if len(heads) == 1:
        k = heads[0]
        weights[k] = 1.0
        return FidelityResult(1.0, False, (k, k), phases, vecs, weights)

    hp = phases[heads]
    gaps = np.append(np.diff(hp), 2 * np.pi - (hp[-1] - hp[0]))
    if gaps.max() <= np.pi + HULL_TOL:
        for k, w in _zero_witness(points, heads).items():
            weights[k] = w
        return FidelityResult(0.0, True, None, phases, vecs, weights)

    best, best_pair = np.inf, None
    for k, l in itertools.combinations(heads, 2):
        val = 0.5 * abs(points[k] + points[l])
        if val < best - 1e-15:
            best, best_pair = val, (k, l)
    weights[list(best_pair)] = 0.5
    return FidelityResult(float(best), False, best_pair, phases, vecs, weights)


def _simplex_compositions(k: int, total: int) -> np.ndarray:
    """All nonnegative integer k-vectors with sum <= total, as rows."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if k == 1:
        return np.arange(total + 1, dtype=np.int64)[:, None]
    rows = []
    for head in range(total + 1):
        tail = _simplex_compositions(k - 1, total - head)
        rows.append(np.column_stack([np.full(len(tail), head), tail]))
    return np.vstack(rows)


def fidelity_bruteforce_oracle(p: UnitaryPair, grid_resolution: int = 200) -> float:
    """Minimum of |sum_k w_k lambda_k| over the simplex grid with step 1/grid_resolution.

    Independent of :func:`cb_process_fidelity`: eigenvalues come from a plain
    eigvals call and no hull geometry is used. The last two weights are
    handled exactly by rounding the (convex) line minimizer to the grid.
    """
    z = np.linalg.eigvals(p.w)
    n = len(z)
    r_total = int(grid_resolution)
    if n == 1:
        return float(abs(z[0]))
    head = _simplex_compositions(n - 2, r_total)
    rem = r_total - head.sum(axis=1)
    partial = head @ z[: n - 2] / r_total if n > 2 else np.zeros(len(head), dtype=complex)
    base = partial + rem * z[n - 1] / r_total
    step = (z[n - 2] - z[n - 1]) / r_total
    step2 = abs(step) ** 2
    if step2 == 0:
        return float(np.min(np.abs(base)))
    t_star = -np.real(base * np.conj(step)) / step2
    t_star = np.clip(t_star, 0, rem)
    lo = np.floor(t_star)
    hi = np.minimum(lo + 1, rem)
    vals = np.minimum(np.abs(base + lo * step), np.abs(base + hi * step))
    return float(vals.min())


def min_error_probability(d_value: float, eta_u: float, eta_v: float) -> float:
    return 0.5 * (1.0 - np.sqrt(max(0.0, 1.0 - 4.0 * eta_u * eta_v * d_value**2)))


def optimal_test_state(fid: FidelityResult) -> np.ndarray:
    """Ancilla-free test vector |0>_anc (x) psi_S on ancilla (x) system."""
    d = fid.eigenvectors.shape[0]
    return product_test_state(basis(d, 0), fid.test_vector())


def output_states(p: UnitaryPair, test_state: np.ndarray):
    eye = np.eye(p.dim)
    return np.kron(eye, p.u) @ test_state, np.kron(eye, p.v) @ test_state


def min_error_unitary(p: UnitaryPair, fid: FidelityResult | None = None):
    """Optimal error probability and a strategy attaining it."""
    fid = fid or cb_process_fidelity(p)
    p_error = min_error_probability(fid.d_value, p.eta_u, p.eta_v)
    psi = optimal_test_state(fid)
    a, b = output_states(p, psi)
    sol = helstrom(TwoStateProblem(QuantumState.pure(a), QuantumState.pure(b), p.eta_u, p.eta_v))
    return p_error, TestStrategy(psi, (sol.effect1, sol.effect2))


def unambiguous_unitary(p: UnitaryPair, fid: FidelityResult | None = None):
    """Optimal failure probability and a strategy attaining it.

    Output effects are (conclude U, conclude V, inconclusive).
    """
    fid = fid or cb_process_fidelity(p)
    p_fail = unambiguous_failure(fid.d_value, p.eta_u, p.eta_v)
    psi = optimal_test_state(fid)
    a, b = output_states(p, psi)
    sol = unambiguous_pure(a, b, p.eta_u, p.eta_v)
    return p_fail, TestStrategy(psi, (sol.effect1, sol.effect2, sol.effect_inconclusive))


@dataclass(frozen=True)
class SaturationResult:
    lower_bound: float
    p_fail: float
    saturated: bool
    gap: float
    branch_threshold: float


def saturation_check(p: UnitaryPair, fid: FidelityResult | None = None) -> SaturationResult:
    """Compare the failure probability with the fidelity lower bound.

    The bound is evaluated on the Choi operators at the optimal reduced
    state, tr|sqrt(Omega_U) (xi^T (x) I) sqrt(Omega_V)|. Both Choi operators
    are rank one, d |psi_U><psi_U|, so sqrt(Omega_U) = Omega_U / sqrt(d)
    exactly; a numerical square root would turn rounding-level eigenvalues
    into errors of order 1e-8.
    """
    fid = fid or cb_process_fidelity(p)
    d = p.dim
    cu = Channel.from_unitary(p.u).choi
    cv = Channel.from_unitary(p.v).choi
    x = np.kron(fid.xi().T, np.eye(d))
    value = mk.trace_norm(cu @ x @ cv) / d
    lower = 2.0 * np.sqrt(p.eta_u * p.eta_v) * value
    p_fail = unambiguous_failure(fid.d_value, p.eta_u, p.eta_v)
    hi, lo = max(p.eta_u, p.eta_v), min(p.eta_u, p.eta_v)
    threshold = float(np.sqrt(lo / hi)) if hi > 0 else 1.0
    gap = p_fail - lower
    return SaturationResult(float(lower), float(p_fail), abs(gap) <= 1e-9, float(gap), threshold)


def perfect_witness(fid: FidelityResult) -> np.ndarray | None:
    """State xi with Omega_U (xi (x) I) Omega_V = 0, or None when D > 0."""
    if not fid.zero_in_hull:
        return None
    return fid.xi().T


def choi_overlap_residual(p: UnitaryPair, xi: np.ndarray) -> float:
    cu = Channel.from_unitary(p.u).choi
    cv = Channel.from_unitary(p.v).choi
    return mk.max_abs(cu @ np.kron(xi, np.eye(p.dim)) @ cv)


def achieved_probabilities(strategy: TestStrategy, ch: Channel) -> np.ndarray:
    return outcome_probabilities(ppovm_of_strategy(strategy), ch)

