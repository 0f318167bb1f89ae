"""
Error types

Every failure the library reports on purpose derives from OmegaIdealsError.
The exit code is what the command line returns when the error escapes an
operation.
"""


class OmegaIdealsError(Exception):
    """Base class for library errors."""

    exit_code = 4

    @property
    def name(self):
        return type(self).__name__

    def to_json(self):
        return {"error": self.name, "detail": str(self)}


class InvalidSpec(OmegaIdealsError):
    """An ideal, set, sequence or matrix description violates its invariants."""

    exit_code = 2


class UnsupportedFamily(OmegaIdealsError):
    """The operation is not defined for this ideal family."""

    exit_code = 2


class NotApplicable(OmegaIdealsError):
    """The operation's precondition does not hold for these inputs."""


class NotTall(NotApplicable):
    """A construction that needs a tall ideal was given a nontall or undecided one."""


class NotFound(OmegaIdealsError):
    """A scan ended before finding what it was looking for."""


class DomainError(OmegaIdealsError):
    """A matrix series could not be certified convergent (x outside d_A at horizon)."""


class InsufficientHorizon(OmegaIdealsError):
    """The horizon is too short to certify the requested decay."""


class NotInfinite(OmegaIdealsError):
    """An infinite set was required but a finite one was given."""


class KappaScanInconclusive(OmegaIdealsError):
    """The scanned coordinate suprema neither settle nor diverge."""


class SelectionFailed(OmegaIdealsError):
    """The adversary ran out of scanned elements before finishing."""


class InconsistentDeclaration(OmegaIdealsError):
    """A caller-declared exceedance set does not match the sequence."""
