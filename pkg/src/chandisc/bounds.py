"""Bounds for discriminating two general channels.

The failure-probability lower bound and the no-ancilla error bound require
an optimization over input states; these are solved numerically with a
seeded multi-start Nelder-Mead search and are reported as ``numerical``,
never as certified optima. Density matrices are charted as
``xi = L L^dag / tr(L L^dag)`` so that every iterate is feasible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from . import matkernel as mk
from .core import Channel, QuantumState, proj
from .errors import DimensionMismatch, NotUnitary
from .states import check_priors
from .unitary import UnitaryPair, cb_process_fidelity, choi_overlap_residual, perfect_witness

DISTINGUISHABLE_THRESHOLD = 1e-7


@dataclass(frozen=True, eq=False)
class ChannelPairProblem:
    ch1: Channel
    ch2: Channel
    eta1: float = 0.5
    eta2: float = 0.5

    def __post_init__(self):
        if self.ch1.dim != self.ch2.dim:
            raise DimensionMismatch(f"channel dimensions {self.ch1.dim} and {self.ch2.dim}")
        check_priors(self.eta1, self.eta2)

    @property
    def dim(self) -> int:
        return self.ch1.dim

    @property
    def is_unitary(self) -> bool:
        return self.ch1.is_unitary and self.ch2.is_unitary

    def unitary_pair(self) -> UnitaryPair:
        return UnitaryPair.from_channels(self.ch1, self.ch2, self.eta1, self.eta2)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_iterations: int = 2000
    seed: int = 0
    convergence_tol: float = 1e-10

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")


def _density_from_params(x: np.ndarray, d: int) -> np.ndarray:
    lmat = (x[: d * d] + 1j * x[d * d :]).reshape(d, d)
    rho = lmat @ lmat.conj().T
    return rho / np.trace(rho).real


def _hermitian_trace_norm(h: np.ndarray) -> float:
    return float(np.sum(np.abs(np.linalg.eigvalsh(h))))


def _vector_from_params(x: np.ndarray, d: int) -> np.ndarray:
    v = x[:d] + 1j * x[d:]
    return v / np.linalg.norm(v)


def multistart_minimize(fun, n_params: int, cfg: OptimizerConfig):
    """Best ``(x, f)`` over seeded Nelder-Mead restarts.

    Restart ``r`` draws its start from ``default_rng([seed, r])`` so the
    outcome does not depend on evaluation order. Each run is re-started
    from its own endpoint until it stops improving.
    """
    opts = {
        "maxiter": cfg.max_iterations,
        "xatol": 1e-10,
        "fatol": cfg.convergence_tol,
        "adaptive": n_params > 8,
    }
    best_x, best_f = None, np.inf
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        x = rng.standard_normal(n_params)
        f = fun(x)
        for _ in range(3):
            res = minimize(fun, x, method="Nelder-Mead", options=opts)
            improved = f - res.fun
            if res.fun < f:
                x, f = res.x, res.fun
            if improved <= cfg.convergence_tol:
                break
        if f < best_f:
            best_x, best_f = x, f
    return best_x, float(best_f)


class Prop1Result(NamedTuple):
    bound: float
    argmin_xi: QuantumState
    trace_value: float


def _sqrt_factor(omega: np.ndarray) -> np.ndarray:
    """Columns ``V sqrt(S)`` with ``sqrt(omega) = V S^(1/2) V^dag`` over the support."""
    w, v = np.linalg.eigh(0.5 * (omega + omega.conj().T))
    keep = w > 1e-12 * max(1.0, w[-1])
    return v[:, keep] * np.sqrt(w[keep])


def fidelity_objective(problem: ChannelPairProblem):
    """xi -> tr|sqrt(Omega_1) (xi^T (x) I) sqrt(Omega_2)| on parameter vectors.

    The isometric parts of both square roots drop out of the trace norm, so
    only the (rank_1 x rank_2) core is decomposed.
    """
    d = problem.dim
    k1 = _sqrt_factor(problem.ch1.choi)
    k2 = _sqrt_factor(problem.ch2.choi).reshape(d, d, -1)

    def f(x):
        xi = _density_from_params(x, d)
        core = k1.conj().T @ np.einsum("ab,bjr->ajr", xi.T, k2).reshape(d * d, -1)
        return float(np.sum(np.linalg.svd(core, compute_uv=False)))

    return f


def prop1_lower_bound(problem: ChannelPairProblem, cfg: OptimizerConfig = OptimizerConfig()) -> Prop1Result:
    """Numerical lower bound on the unambiguous failure probability.

    ``trace_value`` is the smallest objective found; the true minimum can
    only be lower, so the bound is exact up to the optimizer gap.
    """
    d = problem.dim
    x, fmin = multistart_minimize(fidelity_objective(problem), 2 * d * d, cfg)
    xi = QuantumState(_density_from_params(x, d))
    bound = 2.0 * np.sqrt(problem.eta1 * problem.eta2) * fmin
    return Prop1Result(float(bound), xi, fmin)


def maxent_upper_bound(problem: ChannelPairProblem) -> float:
    """Error probability with the maximally entangled test state."""
    d = problem.dim
    diff = problem.eta1 * problem.ch1.choi - problem.eta2 * problem.ch2.choi
    return 0.5 * (1.0 - mk.trace_norm(diff) / d)


def no_ancilla_upper_bound(problem: ChannelPairProblem, cfg: OptimizerConfig = OptimizerConfig()) -> float:
    """Error probability of the best test without ancilla (numerical maximum)."""
    d = problem.dim

    def neg_norm(x):
        p = proj(_vector_from_params(x, d))
        diff = problem.eta1 * problem.ch1(p) - problem.eta2 * problem.ch2(p)
        return -_hermitian_trace_norm(diff)

    _, fmin = multistart_minimize(neg_norm, 2 * d, cfg)
    return 0.5 * (1.0 + fmin)


class SandwichResult(NamedTuple):
    lhs: float
    mid: float
    rhs: float
    holds: bool


def unitary_cb_distance(d_value: float) -> float:
    """||E_U - E_V||_cb for unitaries with process fidelity ``d_value``."""
    return 2.0 * np.sqrt(max(0.0, 1.0 - d_value**2))


def sandwich_check(problem: ChannelPairProblem) -> SandwichResult:
    if not problem.is_unitary:
        raise NotUnitary("the cb-norm is only available in closed form for unitary channels")
    dval = cb_process_fidelity(problem.unitary_pair()).d_value
    cb = unitary_cb_distance(dval)
    lhs = 1.0 - 0.5 * cb
    rhs = float(np.sqrt(max(0.0, 1.0 - 0.25 * cb * cb)))
    holds = lhs <= dval + 1e-9 and dval <= rhs + 1e-9
    return SandwichResult(float(lhs), float(dval), rhs, bool(holds))


class DistinguishabilityResult(NamedTuple):
    distinguishable: bool
    witness_xi: QuantumState | None
    residual: float
    provenance: str


def perfect_distinguishability(
    problem: ChannelPairProblem, cfg: OptimizerConfig = OptimizerConfig()
) -> DistinguishabilityResult:
    """Decide whether Omega_1 (xi (x) I) Omega_2 = 0 for some state xi."""
    if problem.is_unitary:
        pair = problem.unitary_pair()
        fid = cb_process_fidelity(pair)
        xi = perfect_witness(fid)
        if xi is None:
            return DistinguishabilityResult(False, None, fid.d_value, "exact")
        res = choi_overlap_residual(pair, xi)
        return DistinguishabilityResult(res <= 1e-8, QuantumState(xi), res, "exact")

    d = problem.dim
    o1, o2 = problem.ch1.choi, problem.ch2.choi
    eye = np.eye(d)

    def f(x):
        return np.linalg.norm(o1 @ np.kron(_density_from_params(x, d), eye) @ o2)

    x, _ = multistart_minimize(f, 2 * d * d, cfg)
    xi = _density_from_params(x, d)
    res = mk.max_abs(o1 @ np.kron(xi, eye) @ o2)
    ok = res <= DISTINGUISHABLE_THRESHOLD
    return DistinguishabilityResult(ok, QuantumState(xi) if ok else None, res, "numerical")
