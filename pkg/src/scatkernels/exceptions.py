"""Exception types raised by scatkernels."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class NearSingularError(DomainError):
    """The evaluation point is too close to a singularity to be trusted."""


class PhaseSpecError(ValueError):
    """A phase-spec document could not be parsed or describes an invalid phase function."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class ToleranceError(RuntimeError):
    """The requested tolerance cannot be reached within the node budget.

    ``achievable`` carries the best a-priori bound available at the cap.
    """

    def __init__(self, message, achievable=float("nan")):
        super().__init__(message)
        self.achievable = achievable
