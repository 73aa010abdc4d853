"""Discrimination of two quantum states, plus Bayes bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matkernel as mk
from .core import Effect, QuantumState, proj
from .errors import DimensionMismatch, NotNormalized, ZeroTotalProbability

PRIOR_TOL = 1e-12


def check_priors(eta1: float, eta2: float) -> None:
    if eta1 < 0 or eta2 < 0 or abs(eta1 + eta2 - 1) > PRIOR_TOL:
        raise ValueError(f"priors ({eta1}, {eta2}) must be nonnegative and sum to 1")


@dataclass(frozen=True, eq=False)
class TwoStateProblem:
    rho1: QuantumState
    rho2: QuantumState
    eta1: float = 0.5
    eta2: float = 0.5

    def __post_init__(self):
        check_priors(self.eta1, self.eta2)
        if self.rho1.dim != self.rho2.dim:
            raise DimensionMismatch("states have different dimensions")


@dataclass(frozen=True, eq=False)
class MinErrorSolution:
    p_error: float
    effect1: Effect
    effect2: Effect


@dataclass(frozen=True, eq=False)
class UnambiguousSolution:
    p_fail: float
    effect1: Effect
    effect2: Effect
    effect_inconclusive: Effect


def helstrom(p: TwoStateProblem, tol: float = mk.DEFAULT_TOL) -> MinErrorSolution:
    """Minimum-error measurement: project onto the positive part of eta1 rho1 - eta2 rho2.

    Eigenvectors with eigenvalue in [-tol, tol] go to the second effect.
    """
    delta = p.eta1 * p.rho1.rho - p.eta2 * p.rho2.rho
    w, v = mk.hermitian_eig(delta, tol=max(tol, 1e-9))
    pos = v[:, w > tol]
    e1 = pos @ pos.conj().T
    e2 = np.eye(p.rho1.dim) - e1
    p_error = 0.5 * (1.0 - float(np.sum(np.abs(w))))
    return MinErrorSolution(p_error, Effect(e1), Effect(e2))


def achieved_error(p: TwoStateProblem, e1, e2) -> float:
    e1 = getattr(e1, "e", e1)
    e2 = getattr(e2, "e", e2)
    return float(
        1.0
        - p.eta1 * np.trace(e1 @ p.rho1.rho).real
        - p.eta2 * np.trace(e2 @ p.rho2.rho).real
    )


def _unit(v, tol=1e-9) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if abs(n - 1) > tol:
        raise NotNormalized(f"vector norm {n:.12g} is not 1")
    return mk.normalize_phase(v / n)


def unambiguous_failure(s: float, eta1: float, eta2: float) -> float:
    """Optimal failure probability for two pure states with overlap modulus ``s``."""
    hi, lo = max(eta1, eta2), min(eta1, eta2)
    if hi == 0:
        return 0.0
    if s * s * hi <= lo:
        return 2.0 * np.sqrt(eta1 * eta2) * s
    return lo + hi * s * s


def unambiguous_pure(psi, phi, eta1: float = 0.5, eta2: float = 0.5) -> UnambiguousSolution:
    """Optimal unambiguous discrimination of pure states ``psi`` (prior eta1) and ``phi``.

    Conclusive effects are the clamped multiples of (Q - |phi><phi|) and
    (Q - |psi><psi|), Q the projector onto span{psi, phi}.
    """
    check_priors(eta1, eta2)
    psi, phi = _unit(psi), _unit(phi)
    if psi.shape != phi.shape:
        raise DimensionMismatch("vectors have different dimensions")
    n = psi.size
    s = float(abs(np.vdot(psi, phi)))

    swapped = eta1 < eta2
    a, b = (phi, psi) if swapped else (psi, phi)
    ea, eb = (eta2, eta1) if swapped else (eta1, eta2)

    if s >= 1 - 1e-14:
        f_a = np.zeros((n, n), dtype=complex)
        f_b = np.zeros((n, n), dtype=complex)
        p_fail = 1.0
    else:
        # orthonormal basis of the span: a and the normalized component of b orthogonal to a
        b_perp = b - np.vdot(a, b) * a
        b_perp /= np.linalg.norm(b_perp)
        q = proj(a) + proj(b_perp)
        c_a = min((1 - np.sqrt(eb / ea) * s) / (1 - s * s), 1.0)
        if eb == 0:
            c_b = 0.0
        else:
            c_b = max((1 - np.sqrt(ea / eb) * s) / (1 - s * s), 0.0)
        f_a = c_a * (q - proj(b))
        f_b = c_b * (q - proj(a))
        p_fail = unambiguous_failure(s, eta1, eta2)

    e1, e2 = (f_b, f_a) if swapped else (f_a, f_b)
    inc = np.eye(n) - e1 - e2
    return UnambiguousSolution(p_fail, Effect(e1), Effect(e2), Effect(inc))


def posterior(eta, likelihoods, outcome: int) -> np.ndarray:
    """Bayes posterior over hypotheses after observing ``outcome``.

    ``likelihoods[k][x]`` is p(x | hypothesis k).
    """
    eta = np.asarray(eta, dtype=float)
    table = np.asarray(likelihoods, dtype=float)
    if abs(eta.sum() - 1) > 1e-9:
        raise ValueError("priors must sum to 1")
    if not np.allclose(table.sum(axis=1), 1.0, atol=1e-9):
        raise ValueError("likelihood rows must be distributions")
    joint = eta * table[:, outcome]
    total = joint.sum()
    if total <= 0:
        raise ZeroTotalProbability(f"outcome {outcome} has zero total probability")
    return joint / total
