"""State constructors, reference bases, and density-matrix file I/O.

Conventions used throughout:

* qubit 0 is the leftmost ket label and the most significant bit of the
  row index, so |10> sits at index 2 of a two-qubit vector;
* the entangled reference basis is ordered (phi+, psi+, psi-, phi-) with
  phi_pm = (|00> +- |11>)/sqrt(2) and psi_pm = (|01> +- |10>)/sqrt(2),
  all coefficients real.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    IncompatibleFiller,
    NotUnitary,
    ParseError,
    ValidationError,
)

TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-9

BELL_KINDS = ("phi+", "phi-", "psi+", "psi-")
BELL_ORDER = ("phi+", "psi+", "psi-", "phi-")
KET_LABELS = ("00", "01", "10", "11")

# valid (bell_kind, filler) pairings: class 1 mixes a Bell state with one
# of its own components, class 2 with a ket outside its support
CLASS1_FILLERS = {
    "phi+": ("00", "11"),
    "phi-": ("00", "11"),
    "psi+": ("01", "10"),
    "psi-": ("01", "10"),
}
CLASS2_FILLERS = {
    "phi+": ("01", "10"),
    "phi-": ("01", "10"),
    "psi+": ("00", "11"),
    "psi-": ("00", "11"),
}


def computational_ket(label: str) -> np.ndarray:
    """Basis vector for a bit-string label like '01' or '101'."""
    if not label or any(ch not in "01" for ch in label):
        raise ValueError(f"ket label must be a nonempty bit string, got {label!r}")
    v = np.zeros(2 ** len(label), dtype=np.complex128)
    v[int(label, 2)] = 1.0
    return v


def bell_ket(kind: str) -> np.ndarray:
    if kind not in BELL_KINDS:
        raise ValueError(f"unknown Bell state {kind!r}, expected one of {BELL_KINDS}")
    sign = 1.0 if kind.endswith("+") else -1.0
    if kind.startswith("phi"):
        v = computational_ket("00") + sign * computational_ket("11")
    else:
        v = computational_ket("01") + sign * computational_ket("10")
    return v / np.sqrt(2.0)


def bell_unitary() -> np.ndarray:
    """Change-of-basis matrix whose columns are the ordered Bell kets."""
    return np.column_stack([bell_ket(k) for k in BELL_ORDER])


def _projector(ket: np.ndarray) -> np.ndarray:
    return np.outer(ket, ket.conj())


@dataclass(frozen=True, eq=False)
class BasisSpec:
    """Reference basis: computational, bell, or a custom unitary.

    For a custom basis the columns of ``unitary`` are the basis vectors
    in computational coordinates; it must be unitary within 1e-10.
    """

    kind: str
    unitary: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("computational", "bell", "custom"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.kind == "custom":
            if self.unitary is None:
                raise ValueError("custom basis requires a unitary")
            u = linalg.as_complex_matrix(self.unitary)
            defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
            if defect > linalg.UNITARITY_TOL:
                raise NotUnitary(f"custom basis defect {defect:.3e} exceeds 1e-10")
            u = u.copy()
            u.flags.writeable = False
            object.__setattr__(self, "unitary", u)
        elif self.unitary is not None:
            raise ValueError(f"{self.kind} basis takes no unitary")

    @property
    def label(self) -> str:
        return self.kind

    def transform(self, dim: int) -> np.ndarray:
        """Unitary mapping this basis' coordinates to computational ones."""
        if self.kind == "computational":
            return np.eye(dim, dtype=np.complex128)
        if self.kind == "bell":
            if dim != 4:
                raise DimensionMismatch("bell basis is defined for two qubits only")
            return bell_unitary()
        if self.unitary.shape[0] != dim:
            raise DimensionMismatch(
                f"custom basis has dim {self.unitary.shape[0]}, state has dim {dim}"
            )
        return np.asarray(self.unitary)


COMPUTATIONAL = BasisSpec("computational")
BELL = BasisSpec("bell")


def custom_basis(unitary) -> BasisSpec:
    return BasisSpec("custom", np.asarray(unitary, dtype=np.complex128))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix with the basis its entries refer to."""

    matrix: np.ndarray
    qubit_count: int
    basis: BasisSpec

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def density_matrix(matrix, basis: BasisSpec = COMPUTATIONAL) -> DensityMatrix:
    """Validate and wrap a raw matrix.

    Checks, in order: square complex shape, dimension a power of two,
    finite entries, hermiticity within 1e-9, unit trace within 1e-9,
    minimum eigenvalue >= -1e-9.  ValidationError names the first
    violated invariant.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("dimension", f"expected a square matrix, got {m.shape}")
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise ValidationError("dimension", f"dimension {dim} is not a power of two")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValidationError("finiteness", "matrix entries must be finite")
    if np.max(np.abs(m - m.conj().T)) > linalg.HERMITICITY_TOL:
        raise ValidationError("hermiticity", "matrix is not Hermitian within 1e-9")
    tr = m.trace()
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError("trace", f"trace {tr:.12g} differs from 1 beyond 1e-9")
    # Gershgorin certificate first; the eigensolve runs only when the
    # cheap lower bound cannot rule out a negative eigenvalue
    diag = m.diagonal().real
    radii = np.abs(m).sum(axis=1) - np.abs(diag)
    if float(np.min(diag - radii)) < -POSITIVITY_TOL:
        min_eig = linalg.eigenvalues_hermitian(0.5 * (m + m.conj().T))[0]
        if min_eig < -POSITIVITY_TOL:
            raise ValidationError(
                "positivity", f"minimum eigenvalue {min_eig:.3e} below -1e-9"
            )
    m = m.copy()
    m.flags.writeable = False
    return DensityMatrix(m, n, basis)


def bell_state(kind: str) -> DensityMatrix:
    """Rank-1 projector onto one of the four maximally entangled states."""
    return density_matrix(_projector(bell_ket(kind)))


def _check_mixing_parameter(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter must lie in [0, 1], got {p}")
    return p


def class1_state(bell_kind: str, filler: str, p1: float) -> DensityMatrix:
    """p1 * Bell projector + (1 - p1) * filler projector, filler inside
    the Bell state's support (|00>/|11> with phi_pm, |01>/|10> with psi_pm)."""
    p1 = _check_mixing_parameter(p1)
    if bell_kind not in BELL_KINDS:
        raise ValueError(f"unknown Bell state {bell_kind!r}")
    if filler not in CLASS1_FILLERS[bell_kind]:
        raise IncompatibleFiller(
            f"{filler!r} with {bell_kind!r} is a class-2 pairing; "
            f"class 1 needs one of {CLASS1_FILLERS[bell_kind]}"
        )
    m = p1 * _projector(bell_ket(bell_kind)) + (1.0 - p1) * _projector(
        computational_ket(filler)
    )
    return density_matrix(m)


def class2_state(bell_kind: str, filler: str, p2: float) -> DensityMatrix:
    """p2 * Bell projector + (1 - p2) * filler projector, filler outside
    the Bell state's support."""
    p2 = _check_mixing_parameter(p2)
    if bell_kind not in BELL_KINDS:
        raise ValueError(f"unknown Bell state {bell_kind!r}")
    if filler not in CLASS2_FILLERS[bell_kind]:
        raise IncompatibleFiller(
            f"{filler!r} with {bell_kind!r} is a class-1 pairing; "
            f"class 2 needs one of {CLASS2_FILLERS[bell_kind]}"
        )
    m = p2 * _projector(bell_ket(bell_kind)) + (1.0 - p2) * _projector(
        computational_ket(filler)
    )
    return density_matrix(m)


def werner_state(fw: float) -> DensityMatrix:
    """Isotropic singlet mixture with singlet fraction ``fw``.

    (1-fw)/3 * I + (4*fw-1)/3 * |psi-><psi-|.  Any fw is accepted; values
    outside [0, 1] fail the positivity validation.
    """
    fw = float(fw)
    m = (1.0 - fw) / 3.0 * np.eye(4, dtype=np.complex128) + (
        4.0 * fw - 1.0
    ) / 3.0 * _projector(bell_ket("psi-"))
    return density_matrix(m)


TRIPARTITE_KINDS = ("ghz", "w", "wtilde", "wwtilde", "star")


def tripartite_ket(which: str) -> np.ndarray:
    if which == "ghz":
        v = computational_ket("000") + computational_ket("111")
    elif which == "w":
        v = (
            computational_ket("001")
            + computational_ket("010")
            + computational_ket("100")
        )
    elif which == "wtilde":
        v = (
            computational_ket("110")
            + computational_ket("101")
            + computational_ket("011")
        )
    elif which == "wwtilde":
        # the six component kets are mutually orthogonal, so the 1/sqrt(2)
        # prefactor normalizes exactly
        v = (tripartite_ket("w") + tripartite_ket("wtilde")) / np.sqrt(2.0)
        return v
    elif which == "star":
        v = (
            computational_ket("000")
            + computational_ket("100")
            + computational_ket("101")
            + computational_ket("111")
        )
    else:
        raise ValueError(f"unknown tripartite state {which!r}")
    return v / np.linalg.norm(v)


def tripartite_state(which: str) -> DensityMatrix:
    """Pure three-qubit state as an 8x8 density matrix."""
    return density_matrix(_projector(tripartite_ket(which)))


# Tracing qubit 2 of the star state leaves the two peripheral qubits,
# which are separable; tracing qubit 0 (or 1) removes a peripheral qubit
# and leaves an entangled pair.  Qubits 0 and 1 yield reductions that
# differ by a local relabeling but share every measure value.
STAR_CENTRAL_TRACED = 2
STAR_PERIPHERAL_TRACED = 0

FAMILY_KINDS = (
    "class1",
    "class2",
    "werner",
    "ghz-reduced",
    "w-reduced",
    "wwtilde-reduced",
    "star-reduced",
    "mix-ghz-w",
    "mix-w-wtilde",
)
SWEEP_FAMILY_KINDS = ("class1", "class2", "werner", "mix-ghz-w", "mix-w-wtilde")


@dataclass(frozen=True)
class StateFamily:
    """Descriptor of a parameterized two-qubit state family."""

    kind: str
    parameter: float | None = None
    bell_kind: str = "phi+"
    filler: str | None = None
    cut: str = "central"

    def with_parameter(self, p: float) -> "StateFamily":
        return dataclasses.replace(self, parameter=p)


def _require_parameter(family: StateFamily) -> float:
    if family.parameter is None:
        raise ValueError(f"family {family.kind!r} needs a mixing parameter")
    return float(family.parameter)


def _reduced(which: str, traced_qubit: int = 2) -> DensityMatrix:
    rho3 = tripartite_state(which)
    return density_matrix(linalg.partial_trace(rho3.matrix, traced_qubit))


def family_state(family: StateFamily) -> DensityMatrix:
    """Construct the two-qubit density matrix a StateFamily describes."""
    kind = family.kind
    if kind == "class1":
        filler = family.filler or CLASS1_FILLERS[family.bell_kind][0]
        return class1_state(family.bell_kind, filler, _require_parameter(family))
    if kind == "class2":
        filler = family.filler or CLASS2_FILLERS[family.bell_kind][0]
        return class2_state(family.bell_kind, filler, _require_parameter(family))
    if kind == "werner":
        return werner_state(_require_parameter(family))
    if kind == "ghz-reduced":
        return _reduced("ghz")
    if kind == "w-reduced":
        return _reduced("w")
    if kind == "wwtilde-reduced":
        return _reduced("wwtilde")
    if kind == "star-reduced":
        if family.cut == "central":
            return _reduced("star", STAR_CENTRAL_TRACED)
        if family.cut == "peripheral":
            return _reduced("star", STAR_PERIPHERAL_TRACED)
        raise ValueError(f"star cut must be 'central' or 'peripheral', got {family.cut!r}")
    if kind == "mix-ghz-w":
        p = _check_mixing_parameter(_require_parameter(family))
        mixed = p * tripartite_state("ghz").matrix + (1.0 - p) * tripartite_state(
            "w"
        ).matrix
        return density_matrix(linalg.partial_trace(mixed, 2))
    if kind == "mix-w-wtilde":
        p = _check_mixing_parameter(_require_parameter(family))
        mixed = p * tripartite_state("w").matrix + (1.0 - p) * tripartite_state(
            "wtilde"
        ).matrix
        return density_matrix(linalg.partial_trace(mixed, 2))
    raise ValueError(f"unknown family kind {kind!r}")


def express_in_basis(rho: DensityMatrix, basis: BasisSpec) -> DensityMatrix:
    """Re-express a density matrix so entry (i, j) is <b_i|rho|b_j>.

    The spectrum and trace are unchanged; only the coordinates and the
    basis label move.  Unitary conjugation preserves every density-matrix
    invariant, so the result is wrapped without re-validation.
    """
    if basis.kind == rho.basis.kind and basis.kind != "custom":
        return rho
    u_src = rho.basis.transform(rho.dim)
    comp = u_src @ rho.matrix @ u_src.conj().T
    u_tgt = basis.transform(rho.dim)
    out = linalg.conjugate_by_unitary(comp, u_tgt)
    out.flags.writeable = False
    return DensityMatrix(out, rho.qubit_count, basis)


# --- text file format -------------------------------------------------------
#
# line 1: dim=<n>
# line 2: basis=<computational|bell|custom>
# then dim rows of dim whitespace-separated entries formatted a+bi / a-bi;
# a custom basis is followed by dim more rows holding its unitary.
# '#' starts a comment line anywhere.

_COMPLEX_RE = re.compile(
    r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"([+-](?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)i$"
)


def _format_complex(z: complex) -> str:
    re_part = repr(float(z.real))
    im = float(z.imag)
    sign = "+" if im >= 0 else "-"
    return f"{re_part}{sign}{repr(abs(im))}i"


def _parse_complex(token: str) -> complex:
    m = _COMPLEX_RE.match(token)
    if m is None:
        raise ParseError(f"bad complex entry {token!r}, expected a+bi form")
    return complex(float(m.group(1)), float(m.group(2)))


def save_density_matrix(rho: DensityMatrix, path) -> None:
    lines = [f"dim={rho.dim}", f"basis={rho.basis.kind}"]
    for row in rho.matrix:
        lines.append(" ".join(_format_complex(z) for z in row))
    if rho.basis.kind == "custom":
        for row in rho.basis.unitary:
            lines.append(" ".join(_format_complex(z) for z in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _read_matrix_block(lines: list[str], start: int, dim: int, what: str):
    rows = []
    for r in range(dim):
        if start + r >= len(lines):
            raise ParseError(f"{what} row {r + 1} missing")
        tokens = lines[start + r].split()
        if len(tokens) != dim:
            raise ParseError(
                f"{what} row {r + 1} has {len(tokens)} entries, expected {dim}"
            )
        rows.append([_parse_complex(t) for t in tokens])
    return np.array(rows, dtype=np.complex128), start + dim


def load_density_matrix(path) -> DensityMatrix:
    """Parse and fully validate a density-matrix file."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise ParseError("file must start with dim= and basis= lines")
    if not lines[0].startswith("dim="):
        raise ParseError(f"first line must be dim=<n>, got {lines[0]!r}")
    try:
        dim = int(lines[0][4:])
    except ValueError:
        raise ParseError(f"bad dimension {lines[0][4:]!r}") from None
    if dim <= 0:
        raise ParseError(f"bad dimension {dim}")
    if not lines[1].startswith("basis="):
        raise ParseError(f"second line must be basis=<kind>, got {lines[1]!r}")
    kind = lines[1][6:]
    if kind not in ("computational", "bell", "custom"):
        raise ParseError(f"unknown basis {kind!r}")
    entries, pos = _read_matrix_block(lines, 2, dim, "matrix")
    if kind == "custom":
        unitary, pos = _read_matrix_block(lines, pos, dim, "basis unitary")
        basis = custom_basis(unitary)
    else:
        basis = COMPUTATIONAL if kind == "computational" else BELL
    if pos != len(lines):
        raise ParseError(f"{len(lines) - pos} unexpected trailing line(s)")
    return density_matrix(entries, basis)
