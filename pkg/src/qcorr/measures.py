"""Quantifiers for two-qubit mixed states.

Coherence depends on the reference basis and is evaluated on the matrix
re-expressed in that basis.  Concurrence, linear entropy, the correlation
tensor and everything derived from it are basis independent; they are
always evaluated on the computational-basis representation, because the
spin flip and the Pauli expectation values are only meaningful in product
coordinates.  A state labeled with another basis is converted first, so
callers get the invariant value no matter how the state arrives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NotXState, ValidationError
from .states import (
    COMPUTATIONAL,
    BasisSpec,
    DensityMatrix,
    express_in_basis,
)

PPT_TOL = 1e-10
XSTATE_TOL = 1e-10

_SYSY = linalg.kron(linalg.PAULI_Y, linalg.PAULI_Y)
_PAULIS = (linalg.PAULI_X, linalg.PAULI_Y, linalg.PAULI_Z)
_PAULI_PAIRS = [[linalg.kron(a, b) for b in _PAULIS] for a in _PAULIS]


def _computational_matrix(rho: DensityMatrix) -> np.ndarray:
    if rho.basis.kind == "computational":
        return rho.matrix
    return express_in_basis(rho, COMPUTATIONAL).matrix


def _two_qubit_matrix(rho: DensityMatrix) -> np.ndarray:
    if rho.dim != 4:
        raise DimensionMismatch(f"expected a two-qubit state, got dim {rho.dim}")
    return _computational_matrix(rho)


def l1_coherence(rho: DensityMatrix, basis: BasisSpec = COMPUTATIONAL) -> float:
    """Sum of |rho_ij| over i != j in the given reference basis."""
    m = express_in_basis(rho, basis).matrix
    a = np.abs(m)
    return float(a.sum() - np.trace(a))


def _entropy_bits(eigenvalues: np.ndarray) -> float:
    w = eigenvalues[eigenvalues > 0.0]
    return float(-(w * np.log2(w)).sum())


def relative_entropy_coherence(
    rho: DensityMatrix, basis: BasisSpec = COMPUTATIONAL
) -> float:
    """S(rho_dephased) - S(rho) in bits, rho_dephased keeping only the
    diagonal in the reference basis.  0*log 0 is 0; tiny negative results
    from rounding are clamped to 0."""
    m = express_in_basis(rho, basis).matrix
    diag = np.clip(m.diagonal().real, 0.0, None)
    s_dephased = _entropy_bits(diag)
    w = np.clip(linalg.eigenvalues_hermitian(m), 0.0, None)
    s_state = _entropy_bits(w)
    return max(0.0, s_dephased - s_state)


def _spin_flip(m: np.ndarray) -> np.ndarray:
    return _SYSY @ m.conj() @ _SYSY


def concurrence(rho: DensityMatrix) -> float:
    """Entanglement monotone from the spin-flipped spectrum.

    The square roots of the eigenvalues of rho * rho_tilde equal the
    singular values of B = sqrt(rho) (sy x sy) sqrt(rho)*, since
    B B^dag = sqrt(rho) rho_tilde sqrt(rho).  Reading them off the
    Hermitian dilation [[0, B], [B^dag, 0]] avoids the sqrt noise
    amplification that eigenvalues of the product suffer at rank
    deficiency, keeping the result accurate to machine precision.
    """
    m = _two_qubit_matrix(rho)
    s = linalg.psd_sqrt(m)
    b = s @ _SYSY @ s.conj()
    dilation = np.zeros((8, 8), dtype=np.complex128)
    dilation[:4, 4:] = b
    dilation[4:, :4] = b.conj().T
    w = linalg.eigenvalues_hermitian(dilation)
    roots = np.clip(w[::-1][:4], 0.0, None)
    c = roots[0] - roots[1] - roots[2] - roots[3]
    return min(1.0, max(0.0, float(c)))


def concurrence_xstate(rho: DensityMatrix) -> float:
    """Closed form for states supported on the main and anti diagonals:
    2 * max(0, |f| - sqrt(a*d), |g| - sqrt(b*c)) with f = rho_12, g = rho_03."""
    m = _two_qubit_matrix(rho)
    mask = np.ones((4, 4), dtype=bool)
    mask[np.arange(4), np.arange(4)] = False
    mask[np.arange(4), 3 - np.arange(4)] = False
    worst = float(np.max(np.abs(m[mask])))
    if worst > XSTATE_TOL:
        raise NotXState(f"off-X entry of magnitude {worst:.3e} exceeds 1e-10")
    a, b, c, d = (m[i, i].real for i in range(4))
    f = m[1, 2]
    g = m[0, 3]
    inner = abs(f) - math.sqrt(max(a * d, 0.0))
    outer = abs(g) - math.sqrt(max(b * c, 0.0))
    return 2.0 * max(0.0, inner, outer)


def linear_entropy(rho: DensityMatrix) -> float:
    """Normalized mixedness d/(d-1) * (1 - Tr rho^2); basis independent."""
    m = rho.matrix
    purity = float((np.abs(m) ** 2).sum())
    d = rho.dim
    return min(1.0, max(0.0, d / (d - 1.0) * (1.0 - purity)))


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """Pauli-Pauli expectation table t[s, u] = Tr(rho sigma_s x sigma_u)
    and the descending eigenvalues of T^T T (clamped at 0)."""

    t: np.ndarray
    u_eigs: np.ndarray


def correlation_tensor(rho: DensityMatrix) -> CorrelationTensor:
    m = _two_qubit_matrix(rho)
    t = np.empty((3, 3), dtype=np.float64)
    for i in range(3):
        for j in range(3):
            val = np.einsum("ij,ji->", m, _PAULI_PAIRS[i][j])
            if abs(val.imag) > 1e-10:
                raise ValidationError(
                    "hermiticity",
                    f"correlation entry ({i},{j}) has imaginary part {val.imag:.3e}",
                )
            t[i, j] = val.real
    u = linalg.eigenvalues_hermitian(t.T @ t)
    u = np.clip(u[::-1], 0.0, None)
    return CorrelationTensor(t, u)


def _teleportation_from_tensor(ct: CorrelationTensor):
    n = float(np.sqrt(ct.u_eigs).sum())
    fidelity = 0.5 * (1.0 + n / 3.0)
    # strict inequality, no tolerance band; callers see the raw value
    return n, fidelity, n > 1.0


def teleportation_fidelity(rho: DensityMatrix):
    """Return (n_value, fidelity, useful).

    n is the sum of square roots of the correlation-tensor eigenvalues,
    fidelity = (1 + n/3)/2, and the channel beats classical teleportation
    iff n > 1.
    """
    return _teleportation_from_tensor(correlation_tensor(rho))


def _chsh_from_tensor(ct: CorrelationTensor):
    m = float(ct.u_eigs[0] + ct.u_eigs[1])
    return m, m > 1.0


def chsh_m(rho: DensityMatrix):
    """Return (m_value, violates): sum of the two largest eigenvalues of
    T^T T, with violation iff it strictly exceeds 1."""
    return _chsh_from_tensor(correlation_tensor(rho))


def ppt_check(rho: DensityMatrix):
    """Partial transpose over the second qubit; returns
    (min_eigenvalue, entangled).  For 2x2 systems a negative partial
    transpose is equivalent to entanglement."""
    m = _two_qubit_matrix(rho)
    pt = m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    min_eig = float(linalg.eigenvalues_hermitian(pt)[0])
    return min_eig, min_eig < -PPT_TOL


@dataclass(frozen=True, eq=False)
class MeasureReport:
    """Every quantity this package computes for one state."""

    c_l1: float
    c_rel_ent: float
    concurrence: float
    linear_entropy: float
    n_value: float
    teleport_fidelity: float
    useful_for_teleportation: bool
    chsh_m: float
    violates_chsh: bool
    ppt_min_eigenvalue: float
    is_ppt_separable_candidate: bool
    basis_used: BasisSpec

    NUMERIC_FIELDS = (
        "c_l1",
        "c_rel_ent",
        "concurrence",
        "linear_entropy",
        "n_value",
        "teleport_fidelity",
        "chsh_m",
        "ppt_min_eigenvalue",
    )

    def value(self, field: str) -> float:
        return float(getattr(self, field))


def full_report(rho: DensityMatrix, basis: BasisSpec = COMPUTATIONAL) -> MeasureReport:
    """Compute all measures at once.

    Coherences use the requested basis; everything else is evaluated on
    the computational-basis representation.
    """
    if rho.dim != 4:
        raise DimensionMismatch(f"expected a two-qubit state, got dim {rho.dim}")
    comp = express_in_basis(rho, COMPUTATIONAL)
    ct = correlation_tensor(comp)
    n, fidelity, useful = _teleportation_from_tensor(ct)
    m_val, violates = _chsh_from_tensor(ct)
    ppt_min, entangled = ppt_check(comp)
    return MeasureReport(
        c_l1=l1_coherence(rho, basis),
        c_rel_ent=relative_entropy_coherence(rho, basis),
        concurrence=concurrence(comp),
        linear_entropy=linear_entropy(comp),
        n_value=n,
        teleport_fidelity=fidelity,
        useful_for_teleportation=useful,
        chsh_m=m_val,
        violates_chsh=violates,
        ppt_min_eigenvalue=ppt_min,
        is_ppt_separable_candidate=not entangled,
        basis_used=basis,
    )
