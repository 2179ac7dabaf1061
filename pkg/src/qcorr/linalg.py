"""Dense complex linear algebra for small qubit systems.

Everything here is sized for matrices of dimension at most 8 (three
qubits).  Matrices are plain ``numpy.ndarray`` of complex128; row/column
index convention is <row|A|col>, and for multi-qubit operators the
leftmost ket label is qubit 0 and the most significant bit of the index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_cycle
from .errors import (
    BadIndex,
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    NotPSD,
    NotUnitary,
)

HERMITICITY_TOL = 1e-9
UNITARITY_TOL = 1e-10
PSD_CLAMP = 1e-10
# off-diagonal convergence target relative to the matrix scale
_CONVERGENCE_FACTOR = 1e-13

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
IDENTITY_2 = np.eye(2, dtype=np.complex128)


def as_complex_matrix(matrix) -> np.ndarray:
    """Coerce to a square, finite complex128 array."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Full spectrum of a Hermitian matrix.

    ``eigenvalues`` is real and ascending; column k of ``eigenvectors``
    pairs with ``eigenvalues[k]`` and the columns are orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _diagonalize(matrix, max_sweeps, with_vectors):
    m = as_complex_matrix(matrix)
    if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
        raise NotHermitian("matrix is not Hermitian within 1e-9")
    h = 0.5 * (m + m.conj().T)
    n = h.shape[0]
    scale = max(1.0, float(np.max(np.abs(h))))
    v = np.eye(n, dtype=np.complex128) if with_vectors else _DUMMY_VECTORS
    sweeps = jacobi_cycle(h, v, max_sweeps, _CONVERGENCE_FACTOR * scale, with_vectors)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    return h.diagonal().real.copy(), v


_DUMMY_VECTORS = np.empty((1, 1), dtype=np.complex128)


def hermitian_eigensystem(matrix, max_sweeps: int = 100) -> EigenSystem:
    """Diagonalize a Hermitian matrix with cyclic Jacobi rotations.

    Raises NotHermitian if max|H - H^dag| exceeds 1e-9, and NoConvergence
    if the sweep budget runs out (unreachable in practice at dim <= 8).
    """
    w, v = _diagonalize(matrix, max_sweeps, True)
    order = np.argsort(w, kind="stable")
    return EigenSystem(w[order], np.ascontiguousarray(v[:, order]))


def eigenvalues_hermitian(matrix, max_sweeps: int = 100) -> np.ndarray:
    """Ascending real spectrum of a Hermitian matrix; skips the
    eigenvector accumulation."""
    w, _ = _diagonalize(matrix, max_sweeps, False)
    return np.sort(w)


def psd_sqrt(matrix) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in [-1e-10, 0] are treated as exact zeros; anything more
    negative raises NotPSD.
    """
    es = hermitian_eigensystem(matrix)
    if es.eigenvalues[0] < -PSD_CLAMP:
        raise NotPSD(f"minimum eigenvalue {es.eigenvalues[0]:.3e} below -1e-10")
    w = np.sqrt(np.clip(es.eigenvalues, 0.0, None))
    s = (es.eigenvectors * w) @ es.eigenvectors.conj().T
    return 0.5 * (s + s.conj().T)


def kron(a, b) -> np.ndarray:
    """Kronecker product, dim = dimA * dimB."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def qubit_count_of(dim: int) -> int:
    """Number of qubits for a 2**n dimension; DimensionMismatch otherwise."""
    n = dim.bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


def partial_trace(matrix, traced_qubit: int) -> np.ndarray:
    """Trace out one qubit of an n-qubit operator (n >= 2).

    Qubit 0 is the leftmost tensor factor (most significant index bit).
    """
    m = as_complex_matrix(matrix)
    n = qubit_count_of(m.shape[0])
    if n < 2:
        raise DimensionMismatch("partial trace needs at least two qubits")
    if not 0 <= traced_qubit < n:
        raise BadIndex(f"traced qubit {traced_qubit} out of range for {n} qubits")
    t = m.reshape([2] * (2 * n))
    out = np.trace(t, axis1=traced_qubit, axis2=traced_qubit + n)
    half = m.shape[0] // 2
    return np.ascontiguousarray(out.reshape(half, half))


def conjugate_by_unitary(matrix, unitary) -> np.ndarray:
    """Return U^dag M U; entry (i, j) is <u_i|M|u_j> for columns u_i of U."""
    m = as_complex_matrix(matrix)
    u = as_complex_matrix(unitary)
    if m.shape != u.shape:
        raise DimensionMismatch(f"matrix {m.shape} and unitary {u.shape} differ")
    defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if defect > UNITARITY_TOL:
        raise NotUnitary(f"unitarity defect {defect:.3e} exceeds 1e-10")
    return u.conj().T @ m @ u
