"""Exception types shared across the package."""


class SeqmixError(Exception):
    """Base class for all seqmix-specific errors."""


class SequentialityViolation(SeqmixError):
    """Constraint coefficients do not form a sequential set 1..k."""


class InfeasibleWarmStart(SeqmixError):
    """Supplied warm-start bitstring violates the constraint."""


class EmptyFeasibleSet(SeqmixError):
    """No bitstring satisfies the constraint."""


class CoefficientMismatch(SeqmixError):
    """Source coefficients of a merge operator do not sum to the target's."""


class MuTooSmall(SeqmixError):
    """Support truncation would drop operators the minimal family needs."""


class TooLargeForExhaustive(SeqmixError):
    """Instance too large for a full computational-basis scan."""


class TooLarge(SeqmixError):
    """Instance too large for a full-Hilbert-space simulation."""


class OutOfRange(SeqmixError):
    """Requested witness parameters fall outside the valid range."""


class MissingWarmStart(SeqmixError):
    """Operation requires an instance with a warm-start solution."""


class DimensionTooLarge(SeqmixError):
    """Subspace dimension exceeds the dense-solve cap."""


class GapCollapse(SeqmixError):
    """Interior spectral gap vanished; the mixing family is broken."""


class NegativeBeta(SeqmixError):
    """Annealing schedule has a negative mixer coefficient."""


class DomainError(SeqmixError):
    """Argument outside the domain of a polynomial basis."""


class UnknownFormat(SeqmixError):
    """Unsupported export format."""
