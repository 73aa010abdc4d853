"""States, effects, channels and Choi operators.

Tensor convention: the basis vector |i> (x) |j> of a (dA x dB) space has
index ``i * dB + j``. In every bipartite object the first factor is the
ancilla (reference) system and the second the system the channel acts on,
so a Choi operator is ``(id (x) E)[Omega_+]``. Transposes are always taken
in the computational basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import matkernel as mk
from .errors import DimensionMismatch, InvalidChannel, InvalidState

DEFAULT_TOL = mk.DEFAULT_TOL

_S2 = 1 / np.sqrt(2)
GATES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "SWAP": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}


def ket(v) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(-1)


def proj(v) -> np.ndarray:
    v = ket(v)
    return np.outer(v, v.conj())


def basis(d: int, k: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[k] = 1.0
    return e


@dataclass(frozen=True, eq=False)
class QuantumState:
    rho: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        rho = mk.as_matrix(self.rho)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "dim", rho.shape[0])

    @classmethod
    def pure(cls, psi) -> "QuantumState":
        return cls(proj(psi))

    @classmethod
    def maximally_mixed(cls, d: int) -> "QuantumState":
        return cls(np.eye(d, dtype=complex) / d)

    def check(self, tol: float = DEFAULT_TOL) -> "QuantumState":
        if not mk.is_psd(self.rho, tol):
            raise InvalidState("density operator is not positive semidefinite")
        tr = np.trace(self.rho)
        if abs(tr - 1) > 1e-9:
            raise InvalidState(f"trace {tr.real:.12g} differs from 1")
        return self


@dataclass(frozen=True, eq=False)
class Effect:
    e: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "e", mk.as_matrix(self.e))

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        if not mk.is_hermitian(self.e, tol):
            return False
        w = np.linalg.eigvalsh(0.5 * (self.e + self.e.conj().T))
        return bool(w[0] >= -tol and w[-1] <= 1 + tol)


@dataclass(frozen=True, eq=False)
class ChoiOperator:
    omega: np.ndarray
    dim: int


@dataclass(frozen=True, eq=False)
class Channel:
    """A CPTP map stored by its constructor data.

    ``kind`` is ``"unitary"`` (``operators`` holds the single unitary) or
    ``"kraus"``. ``name`` records a gate shorthand when one was used.
    """

    kind: str
    operators: tuple
    dim: int = field(init=False)
    name: str | None = None

    def __post_init__(self):
        if self.kind not in ("unitary", "kraus"):
            raise InvalidChannel(f"unknown channel kind {self.kind!r}")
        ops = tuple(mk.as_matrix(k) for k in self.operators)
        if not ops:
            raise InvalidChannel("channel needs at least one operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise DimensionMismatch("Kraus operators must all be d x d")
        if self.kind == "unitary" and len(ops) != 1:
            raise InvalidChannel("a unitary channel has exactly one operator")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "dim", d)

    @classmethod
    def from_unitary(cls, u, name: str | None = None) -> "Channel":
        return cls("unitary", (u,), name=name)

    @classmethod
    def from_kraus(cls, ops) -> "Channel":
        return cls("kraus", tuple(ops))

    @classmethod
    def gate(cls, name: str) -> "Channel":
        return cls.from_unitary(GATES[name], name=name)

    @classmethod
    def identity(cls, d: int) -> "Channel":
        return cls.from_unitary(np.eye(d, dtype=complex))

    @property
    def is_unitary(self) -> bool:
        return self.kind == "unitary"

    @property
    def unitary(self) -> np.ndarray:
        if not self.is_unitary:
            raise InvalidChannel("channel is not unitary")
        return self.operators[0]

    def completeness_residual(self) -> float:
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.linalg.norm(np.eye(self.dim) - s, 2))

    @cached_property
    def choi(self) -> np.ndarray:
        d = self.dim
        if self.is_unitary:
            # d |psi_U><psi_U| with psi_U = (I (x) U) psi_+
            v = np.kron(np.eye(d), self.unitary) @ omega_plus_vector(d)
            return np.outer(v, v.conj())
        return apply_map(self, omega_plus(d), anc_dim=d)

    def __call__(self, x, anc_dim: int = 1) -> np.ndarray:
        return apply_map(self, x, anc_dim)


def omega_plus_vector(d: int) -> np.ndarray:
    """Unnormalized sum_j |j>|j> (norm sqrt(d))."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0
    return v


def maximally_entangled(d: int) -> np.ndarray:
    return omega_plus_vector(d) / np.sqrt(d)


def omega_plus(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError("omega_plus needs d >= 2")
    v = omega_plus_vector(d)
    return np.outer(v, v)


def apply_map(ch: Channel, x, anc_dim: int = 1) -> np.ndarray:
    """Raw linear action ``(id_anc (x) E)[x]`` on any operator ``x``."""
    x = mk.as_matrix(x)
    n = anc_dim * ch.dim
    if x.shape != (n, n):
        raise DimensionMismatch(
            f"operator of shape {x.shape} does not fit ancilla {anc_dim} x system {ch.dim}"
        )
    out = np.zeros_like(x)
    eye = np.eye(anc_dim)
    for k in ch.operators:
        kk = np.kron(eye, k) if anc_dim > 1 else k
        out += kk @ x @ kk.conj().T
    return out


def choi_of(ch: Channel, tol: float = DEFAULT_TOL) -> ChoiOperator:
    failed = [c for c in validate_channel(ch, tol).checks if not c.passed]
    if failed:
        raise InvalidChannel("; ".join(f"{c.name} residual {c.residual:.3e}" for c in failed))
    return ChoiOperator(ch.choi, ch.dim)


def apply_channel(
    ch: Channel,
    rho: QuantumState,
    with_identity_on_ancilla: bool = False,
    anc_dim: int = 1,
) -> QuantumState:
    if not with_identity_on_ancilla:
        anc_dim = 1
    if rho.dim != anc_dim * ch.dim:
        raise DimensionMismatch(
            f"state of dimension {rho.dim} does not match {anc_dim} x {ch.dim}"
        )
    return QuantumState(apply_map(ch, rho.rho, anc_dim))


def partial_trace(m, dims: tuple[int, int], keep: str = "A") -> np.ndarray:
    m = mk.as_matrix(m)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise DimensionMismatch(f"shape {m.shape} incompatible with dims {dims}")
    t = m.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError("keep must be 'A' or 'B'")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return [{"name": c.name, "passed": c.passed, "residual": c.residual} for c in self.checks]


def validate_choi(omega, d: int, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Complete positivity and trace preservation read off a Choi operator."""
    omega = mk.as_matrix(omega)
    herm = mk.hermitian_residual(omega)
    neg = max(0.0, -mk.min_eigenvalue(omega))
    tp = mk.max_abs(partial_trace(omega, (d, d), keep="A") - np.eye(d))
    return ValidationReport(
        (
            Check("hermiticity", herm <= tol, herm),
            Check("complete_positivity", neg <= tol, neg),
            Check("choi_trace_preservation", tp <= 1e-8, tp),
        )
    )


def validate_channel(ch: Channel, tol: float = DEFAULT_TOL) -> ValidationReport:
    checks = []
    if ch.is_unitary:
        r = mk.unitary_residual(ch.unitary)
        checks.append(Check("unitarity", r <= tol, r))
    else:
        r = ch.completeness_residual()
        checks.append(Check("trace_preservation", r <= tol, r))
    neg = max(0.0, -mk.min_eigenvalue(ch.choi))
    checks.append(Check("complete_positivity", neg <= tol, neg))
    return ValidationReport(tuple(checks))
