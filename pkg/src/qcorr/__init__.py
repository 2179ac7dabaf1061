"""Quantum correlations of two-qubit mixed states.

Coherence (l1 norm and relative entropy), concurrence, linear entropy,
teleportation fidelity, Bell-CHSH value and PPT verdicts, with state
factories for the Bell-plus-ket mixture families, the Werner family,
and two-qubit reductions of three-qubit states.
"""

from ._kernels import active_backend
from .errors import (
    BadIndex,
    DimensionMismatch,
    IncompatibleFiller,
    NoConvergence,
    NotHermitian,
    NotPSD,
    NotUnitary,
    NotXState,
    ParseError,
    QcorrError,
    SweepError,
    ValidationError,
)
from .linalg import (
    EigenSystem,
    conjugate_by_unitary,
    hermitian_eigensystem,
    kron,
    partial_trace,
    psd_sqrt,
)
from .measures import (
    CorrelationTensor,
    MeasureReport,
    chsh_m,
    concurrence,
    concurrence_xstate,
    correlation_tensor,
    full_report,
    l1_coherence,
    linear_entropy,
    ppt_check,
    relative_entropy_coherence,
    teleportation_fidelity,
)
from .report import (
    SweepRow,
    SweepSpec,
    Table1Reconciliation,
    analyze_file,
    emit_csv,
    emit_figures,
    emit_svg,
    run_sweep,
    table1_reconciliation,
)
from .states import (
    BELL,
    COMPUTATIONAL,
    BasisSpec,
    DensityMatrix,
    StateFamily,
    bell_state,
    class1_state,
    class2_state,
    custom_basis,
    density_matrix,
    express_in_basis,
    family_state,
    load_density_matrix,
    save_density_matrix,
    tripartite_state,
    werner_state,
)

__version__ = "0.1.0"
