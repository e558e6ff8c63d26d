"""Error hierarchy. Each error carries the process exit code the CLI maps it to."""


class PennerError(Exception):
    exit_code = 3

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UsageError(PennerError):
    """Flag combination that cannot be run (symbolic size where a bound is needed, ...)."""
    exit_code = 2


class DomainError(PennerError, ValueError):
    """A mathematical precondition does not hold."""
    exit_code = 3


class StabilityError(DomainError):
    pass


class UnsupportedTermError(DomainError):
    pass
