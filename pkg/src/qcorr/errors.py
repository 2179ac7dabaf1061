"""Exception types shared across the package."""


class QcorrError(ValueError):
    """Base class for all qcorr errors."""


class NotHermitian(QcorrError):
    """Matrix is not Hermitian within tolerance."""


class NotPSD(QcorrError):
    """Matrix has an eigenvalue below the positivity tolerance."""


class NotUnitary(QcorrError):
    """Matrix is not unitary within tolerance."""


class NoConvergence(QcorrError):
    """Eigensolver exhausted its sweep budget."""


class BadIndex(QcorrError):
    """Qubit index out of range."""


class DimensionMismatch(QcorrError):
    """Operands have incompatible dimensions."""


class IncompatibleFiller(QcorrError):
    """Filler ket does not pair with the requested Bell state for this class."""


class NotXState(QcorrError):
    """Matrix has support outside the main and anti diagonals."""


class ParseError(QcorrError):
    """Density-matrix file could not be parsed."""


class ValidationError(QcorrError):
    """A density-matrix invariant is violated.

    ``invariant`` names the violated invariant: one of ``dimension``,
    ``finiteness``, ``hermiticity``, ``trace``, ``positivity``.
    """

    def __init__(self, invariant: str, message: str | None = None):
        self.invariant = invariant
        super().__init__(message or f"density matrix invariant violated: {invariant}")


class SweepError(QcorrError):
    """A sweep aborted; the message names the offending parameter value."""
