"""Exception types shared across the toolkit."""


class TcAuditError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(TcAuditError):
    """Operands live on incompatible spaces (shape or basis mismatch)."""


class HermiticityError(TcAuditError):
    """A matrix handed to a Hermitian eigensolver is not Hermitian within tolerance."""


class SectorParityError(TcAuditError):
    """2*lambda + 2*j must be even for the sector constraints to have integer solutions."""


class EmptySectorError(TcAuditError):
    """The requested (j, lambda) sector contains no occupation states."""


class DomainSingularError(TcAuditError):
    """g^2 * n reaches omega^2 inside the cutoff, so sqrt(omega^2 - g^2 n) turns imaginary."""


class SizeError(TcAuditError):
    """Requested product space exceeds the supported dense-matrix size."""


class DegenerateBlockError(TcAuditError):
    """A 2x2 block has zero Rabi splitting, so its rotation matrix is undefined."""
