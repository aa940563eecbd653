"""Exception hierarchy shared by every module and mapped onto CLI exit codes."""


class CscError(Exception):
    """Base class for all errors raised by csckit."""


class ValidationError(CscError, ValueError):
    """Malformed input. ``pointer`` is a JSON pointer into the offending document."""

    def __init__(self, message, pointer=""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}" if pointer is not None else message)


class DomainError(CscError, ValueError):
    """Well-formed input outside an operation's domain."""


class InfeasibleSectionError(DomainError):
    """No holomorphic section of the requested degree and incidence exists."""


class SNCViolation(DomainError):
    """Contraction would create a double incidence or a self-incidence."""


class UnknownGeneratorError(DomainError):
    """A relator refers to a generator with no assigned image."""


class CheckFailure(CscError):
    """A verification check (stability, relators, feasibility) did not pass."""


class ConvergenceError(CscError, RuntimeError):
    pass
