"""Dense complex linear algebra for small quantum systems.

Operators are plain complex numpy arrays, states are 1-D complex arrays.
Subsystem ordering is data-first everywhere: in a product basis vector
|ab> the first factor's index a is the slow (most significant) index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Structural checks (unitarity, projector, hermiticity) use an absolute
# max-norm tolerance; numerical rank uses a cutoff relative to the largest
# singular value.  Every construction in this package is exact at the
# dimensions it is used for, so these only absorb float rounding.
ATOL = 1e-10
RANK_CUTOFF = 1e-9

_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def pauli(k: int) -> np.ndarray:
    """Return the k-th Pauli matrix; index 0 is the 2x2 identity."""
    if k not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index must be in 0..3, got {k}")
    return _PAULI[k].copy()


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, first factor slow."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Reduce a bipartite operator to one factor.

    ``dims`` gives the (first, second) factor dimensions and ``keep``
    selects the surviving factor (0 or 1).  The trace of the result equals
    the trace of the input.
    """
    da, db = dims
    m = np.asarray(m, dtype=complex)
    if m.shape != (da * db, da * db):
        raise ValueError(f"operator shape {m.shape} does not match factor dims {dims}")
    t = m.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ikjk->ij", t)
    if keep == 1:
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 0 or 1, got {keep}")


def bell_anchor() -> np.ndarray:
    """The maximally entangled two-qubit state (|00> + |11>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return v


def is_hermitian(m: np.ndarray, tol: float = ATOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - dag(m))) <= tol)


def is_unitary(m: np.ndarray, tol: float = ATOL) -> bool:
    """True when m^dagger m equals the identity within tol (max-norm)."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"is_unitary expects a square matrix, got shape {m.shape}")
    return bool(np.max(np.abs(dag(m) @ m - np.eye(m.shape[0]))) <= tol)


def is_projector(m: np.ndarray, tol: float = ATOL) -> bool:
    """True when m is Hermitian and idempotent within tol."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"is_projector expects a square matrix, got shape {m.shape}")
    return is_hermitian(m, tol) and bool(np.max(np.abs(m @ m - m)) <= tol)


def is_density_operator(m: np.ndarray, tol: float = ATOL) -> bool:
    """Hermitian, unit trace, and no eigenvalue below -tol."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1] or not is_hermitian(m, tol):
        return False
    if abs(np.trace(m).real - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh(m).min() >= -tol)


@dataclass(frozen=True)
class BlochExpansion:
    """Pauli expansion ``h = scalar*I + vector . sigma`` of a Hermitian qubit operator."""

    scalar: float
    vector: np.ndarray

    def assemble(self) -> np.ndarray:
        out = self.scalar * _PAULI[0].astype(complex)
        for c, s in zip(self.vector, _PAULI[1:]):
            out = out + c * s
        return out


def bloch_expand(h: np.ndarray, tol: float = ATOL) -> BlochExpansion:
    """Expand a Hermitian 2x2 operator in the Pauli basis.

    scalar = Tr(h)/2 and vector_j = Tr(h sigma_j)/2, so reassembling is
    exact to rounding (within 1e-12).
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise ValueError(f"bloch_expand expects a 2x2 operator, got shape {h.shape}")
    if not is_hermitian(h, tol):
        raise ValueError("bloch_expand expects a Hermitian operator")
    scalar = 0.5 * np.trace(h).real
    vector = np.array([0.5 * np.trace(h @ _PAULI[j]).real for j in (1, 2, 3)])
    return BlochExpansion(scalar=scalar, vector=vector)


def operator_rank(ops: list[np.ndarray], cutoff: float = RANK_CUTOFF) -> int:
    """Rank of a set of equal-shape operators under vectorization.

    Singular values below ``cutoff`` times the largest one are treated as
    zero.
    """
    if len(ops) == 0:
        raise ValueError("operator_rank of an empty set")
    shape = np.asarray(ops[0]).shape
    for o in ops:
        if np.asarray(o).shape != shape:
            raise ValueError("operator_rank expects operators of equal shape")
    mat = np.stack([np.asarray(o, dtype=complex).ravel() for o in ops])
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > cutoff * s[0]))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of a - b (both Hermitian)."""
    evals = np.linalg.eigvalsh(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))
    return 0.5 * float(np.sum(np.abs(evals)))
