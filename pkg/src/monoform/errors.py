"""Exception types shared across the package."""


class MonoformError(Exception):
    """Base class for all engine errors."""


class BasisMismatch(MonoformError):
    """Two values from different embedding bases were combined or compared."""


class RefinementLimit(MonoformError):
    """Interval refinement failed to decide a sign within the round cap."""


class IndependenceError(MonoformError):
    """A rational-independence precondition was violated (for example a tie
    between values that must be distinct)."""


class StepLimitExceeded(MonoformError):
    """A transform iteration hit its step cap before reaching its goal."""


class InadmissibleProblem(MonoformError):
    """Input falls outside the supported problem class."""


class LatticeError(MonoformError):
    """Ill-posed lattice or cone computation (rank deficiency etc.)."""


class CertificateError(MonoformError):
    """A certificate is structurally malformed (as opposed to failing a
    check, which is reported, not raised)."""
