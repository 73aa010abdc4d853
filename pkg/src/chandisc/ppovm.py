"""Process POVMs: single-use channel tests and their probability rule.

A test strategy is a pure test state on ancilla (x) system, with the ancilla
the same size as the system, followed by a POVM on the output. Writing the
test state as ``psi = sqrt(d) (A (x) I) psi_+`` gives ``A[i, j] = <i j|psi>``
with ``tr A^dag A = 1``, and the induced process effects are
``M_j = (A^dag (x) I) F_j (A (x) I)``, summing to ``xi^T (x) I`` where
``xi`` is the reduced test state on the system.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matkernel as mk
from .core import Channel, Check, Effect, QuantumState, ValidationReport, partial_trace, proj
from .errors import DimensionMismatch, InvalidStrategy

NEG_CLAMP = 1e-10


@dataclass(frozen=True, eq=False)
class ProcessPOVM:
    effects: tuple
    dim: int
    xi: QuantumState | None = None

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(mk.as_matrix(m) for m in self.effects))
        n = self.dim * self.dim
        for m in self.effects:
            if m.shape != (n, n):
                raise DimensionMismatch(f"process effect shape {m.shape}, expected {(n, n)}")


@dataclass(frozen=True, eq=False)
class TestStrategy:
    test_state: np.ndarray
    output_povm: tuple

    __test__ = False  # not a pytest class

    def __post_init__(self):
        psi = np.asarray(self.test_state, dtype=complex).reshape(-1)
        object.__setattr__(self, "test_state", psi)
        povm = tuple(e if isinstance(e, Effect) else Effect(e) for e in self.output_povm)
        object.__setattr__(self, "output_povm", povm)

    @property
    def dim(self) -> int:
        d = int(round(np.sqrt(self.test_state.size)))
        if d * d != self.test_state.size:
            raise InvalidStrategy("test state length is not a perfect square")
        return d

    @property
    def operator_a(self) -> np.ndarray:
        d = self.dim
        return self.test_state.reshape(d, d)

    def check(self, tol: float = mk.DEFAULT_TOL) -> "TestStrategy":
        d = self.dim
        norm = np.linalg.norm(self.test_state)
        if abs(norm - 1) > 1e-9:
            raise InvalidStrategy(f"test state norm {norm:.12g} is not 1")
        total = np.zeros((d * d, d * d), dtype=complex)
        for e in self.output_povm:
            if e.e.shape != (d * d, d * d):
                raise InvalidStrategy("POVM effect does not act on ancilla (x) system")
            if not mk.is_psd(e.e, tol):
                raise InvalidStrategy("POVM effect is not positive")
            total += e.e
        res = mk.max_abs(total - np.eye(d * d))
        if res > 1e-9:
            raise InvalidStrategy(f"POVM effects sum to I only within {res:.3e}")
        return self

    def schmidt_coefficients(self) -> np.ndarray:
        return np.linalg.svd(self.operator_a, compute_uv=False)


def product_test_state(ancilla, system) -> np.ndarray:
    return np.kron(np.asarray(ancilla, dtype=complex), np.asarray(system, dtype=complex))


def recovered_xi_transpose(effects, d: int) -> np.ndarray:
    total = sum(mk.as_matrix(m) for m in effects)
    return partial_trace(total, (d, d), keep="A") / d


def validate_ppovm(p: ProcessPOVM, tol: float = mk.DEFAULT_TOL):
    """Check positivity and the xi^T (x) I normalization.

    Returns ``(report, xi)`` where ``xi`` is the normalization operator
    recovered from the effects (a matrix, possibly not a state).
    """
    d = p.dim
    checks = []
    worst = 0.0
    for m in p.effects:
        worst = max(worst, mk.hermitian_residual(m), -mk.min_eigenvalue(m))
    checks.append(Check("effects_positive", worst <= tol, max(worst, 0.0)))

    xi_t = recovered_xi_transpose(p.effects, d)
    total = sum(p.effects)
    norm_res = mk.max_abs(total - np.kron(xi_t, np.eye(d)))
    checks.append(Check("product_normalization", norm_res <= 1e-9, norm_res))
    xi = xi_t.T
    tr_res = abs(np.trace(xi) - 1)
    checks.append(Check("xi_unit_trace", tr_res <= 1e-9, float(tr_res)))
    neg = max(0.0, -mk.min_eigenvalue(xi))
    checks.append(Check("xi_positive", neg <= tol, neg))
    if p.xi is not None:
        r = mk.max_abs(p.xi.rho - xi)
        checks.append(Check("xi_matches_declared", r <= 1e-9, r))
    return ValidationReport(tuple(checks)), xi


def ppovm_of_strategy(s: TestStrategy, tol: float = mk.DEFAULT_TOL) -> ProcessPOVM:
    try:
        s.check(tol)
    except DimensionMismatch as exc:
        raise InvalidStrategy(str(exc)) from exc
    d = s.dim
    a = s.operator_a
    lift = np.kron(a, np.eye(d))
    effects = tuple(lift.conj().T @ f.e @ lift for f in s.output_povm)
    xi = (a.conj().T @ a).T
    return ProcessPOVM(effects, d, QuantumState(xi))


def outcome_probabilities(p: ProcessPOVM, ch: Channel) -> np.ndarray:
    """p_j = tr(M_j Omega_E); rounding negatives above -1e-10 are clamped."""
    if ch.dim != p.dim:
        raise DimensionMismatch(f"PPOVM dimension {p.dim} vs channel dimension {ch.dim}")
    omega = ch.choi
    # tr(M Omega) = sum_ij M_ij Omega_ji
    probs = np.array([np.sum(m * omega.T).real for m in p.effects])
    if probs.min(initial=0.0) < -NEG_CLAMP:
        raise ValueError(f"negative outcome probability {probs.min():.3e}")
    return np.clip(probs, 0.0, None)


def strategy_probabilities(s: TestStrategy, ch: Channel) -> np.ndarray:
    """Two-step rule: feed the test state through id (x) E and measure."""
    d = s.dim
    out = ch(proj(s.test_state), anc_dim=d)
    return np.array([np.trace(f.e @ out).real for f in s.output_povm])
