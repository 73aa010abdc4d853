"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128. Every
routine is a pure function; ties in eigen-ordering are broken
deterministically so that downstream reports are reproducible.
"""
from __future__ import annotations

import numpy as np
from scipy import linalg as sla

from .errors import NotHermitian, NotPSD, NotSquare, NotUnitary

DEFAULT_TOL = 1e-9
# entries below this magnitude are skipped when fixing eigenvector phases
_PHASE_FLOOR = 1e-8
_CLUSTER_GAP = 1e-9


def as_matrix(m) -> np.ndarray:
    return np.asarray(m, dtype=complex)


def _require_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")


def hermitian_residual(m) -> float:
    m = as_matrix(m)
    _require_square(m)
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def unitary_residual(m) -> float:
    m = as_matrix(m)
    _require_square(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    return hermitian_residual(m) <= tol


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    return unitary_residual(m) <= tol


def min_eigenvalue(m) -> float:
    m = as_matrix(m)
    return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    return is_hermitian(m, tol) and min_eigenvalue(m) >= -tol


def normalize_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its first non-negligible entry is real and positive."""
    idx = np.flatnonzero(np.abs(v) > _PHASE_FLOOR)
    if idx.size == 0:
        return v
    first = v[idx[0]]
    return v * (abs(first) / first)


def _lex_key(v: np.ndarray) -> tuple:
    return tuple(np.column_stack([v.real, v.imag]).ravel())


def _order_within_clusters(values, vecs, gap):
    """Return column order: ``values`` assumed sorted; equal-valued runs ordered lexicographically."""
    order = []
    start = 0
    n = len(values)
    for k in range(1, n + 1):
        if k == n or abs(values[k] - values[k - 1]) >= gap:
            block = list(range(start, k))
            block.sort(key=lambda j: _lex_key(vecs[:, j]))
            order.extend(block)
            start = k
    return order


def hermitian_eig(m, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted in
    descending order and eigenvectors as orthonormal columns, each with its
    first non-negligible entry real positive.
    """
    m = as_matrix(m)
    _require_square(m)
    res = hermitian_residual(m)
    if res > tol:
        raise NotHermitian(f"matrix is not Hermitian (residual {res:.3e} > {tol:.1e})")
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    w = w[::-1].copy()
    v = v[:, ::-1]
    v = np.column_stack([normalize_phase(v[:, k]) for k in range(v.shape[1])])
    order = _order_within_clusters(-w, v, _CLUSTER_GAP)
    return w[order], v[:, order]


def _reorthonormalize(vecs: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(vecs)
    # keep QR column signs aligned with the input
    signs = np.sign(np.diag(r).real)
    signs[signs == 0] = 1.0
    return q * signs


def unitary_eigphases(w, tol: float = DEFAULT_TOL):
    """Eigenphases in (-pi, pi] and orthonormal eigenvectors of a unitary.

    Uses the complex Schur form, which is diagonal up to rounding for a
    normal matrix. Phases are returned in ascending order.
    """
    w = as_matrix(w)
    _require_square(w)
    res = unitary_residual(w)
    if res > tol:
        raise NotUnitary(f"matrix is not unitary (residual {res:.3e} > {tol:.1e})")
    t, z = sla.schur(w, output="complex")
    phases = np.angle(np.diag(t))
    phases[phases <= -np.pi + 1e-12] += 2 * np.pi
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    z = z[:, order]

    start = 0
    n = len(phases)
    for k in range(1, n + 1):
        if k == n or phases[k] - phases[k - 1] >= _CLUSTER_GAP:
            if k - start > 1:
                z[:, start:k] = _reorthonormalize(z[:, start:k])
            start = k
    z = np.column_stack([normalize_phase(z[:, k]) for k in range(n)])
    order = _order_within_clusters(phases, z, _CLUSTER_GAP)
    return phases[order], z[:, order]


def trace_norm(m) -> float:
    """Sum of singular values."""
    m = as_matrix(m)
    _require_square(m)
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def psd_sqrt(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero.
    """
    m = as_matrix(m)
    _require_square(m)
    res = hermitian_residual(m)
    if res > tol:
        raise NotHermitian(f"matrix is not Hermitian (residual {res:.3e})")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    if w[0] < -tol:
        raise NotPSD(f"matrix has eigenvalue {w[0]:.3e} < -{tol:.1e}")
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return 0.5 * (s + s.conj().T)


def max_abs(m) -> float:
    return float(np.max(np.abs(as_matrix(m)), initial=0.0))
