"""Exception hierarchy shared by all modules."""


class MajorantError(Exception):
    """Base class for every error raised by this package."""


# numerics
class NonConvergence(MajorantError):
    pass


class InvalidInterval(MajorantError, ValueError):
    pass


class TargetOutOfRange(MajorantError, ValueError):
    pass


class NonMonotoneDetected(MajorantError):
    pass


# specfun
class DomainError(MajorantError, ValueError):
    pass


# measures / convex order
class UnknownDensity(MajorantError, KeyError):
    pass


class BadParams(MajorantError, ValueError):
    pass


class LevelSetResolutionFailure(MajorantError):
    pass


class PreconditionMassMismatch(MajorantError):
    pass


class PreconditionMomentMismatch(MajorantError):
    pass


class NonIntegrable(MajorantError):
    pass


# transport
class MassMismatch(MajorantError):
    pass


class DegenerateCumulative(MajorantError):
    pass


class DerivativeUndefined(MajorantError):
    pass


# inequalities / lattice
class UnknownLemma(MajorantError, KeyError):
    pass


class ParamOutOfDomain(MajorantError, ValueError):
    pass


class CapacityExceeded(MajorantError):
    pass


class DegenerateBox(MajorantError, ValueError):
    pass


class CaseCondition(MajorantError):
    """The box falls in the case where one side dominates; no Fourier chain applies."""


# entropy
class FamilyViolation(MajorantError):
    pass


class NotAProbabilityDensity(MajorantError):
    pass


class NonIntegrablePower(MajorantError):
    pass


# cli
class ConfigError(MajorantError):
    pass


class CheckFailure(MajorantError):
    """A strict check did not clear its error budget."""
