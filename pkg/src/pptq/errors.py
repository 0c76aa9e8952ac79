"""Exception types shared across the package."""


class PptqError(Exception):
    """Base class for all package errors."""


class InvariantViolation(PptqError):
    """Input violates a structural invariant (non-Hermitian, wrong trace, ...)."""


class ParseError(PptqError):
    """Malformed file: bad JSON, wrong schema, or inconsistent shape."""


class NonConvergence(PptqError):
    """The dense eigensolver failed; signals pathological input."""


class DimensionCapExceeded(PptqError):
    """Requested operation would exceed the configured dimension cap."""


class DimensionMismatch(PptqError):
    """Operands live on incompatible spaces."""


class PreconditionViolated(PptqError):
    """No PPT quasi-operation exists for the requested transformation."""


class NegativeNegativity(PptqError):
    """Entanglement cost is ill-posed for negative log-negativity."""


class ZeroNegativityTarget(PptqError):
    """Conversion ratio with a zero-negativity denominator is unbounded."""


class SolverNotConverged(PptqError):
    """Feasibility solver exhausted its iteration budget."""
