"""Exception hierarchy shared by every hlestim module."""


class HlestimError(Exception):
    """Base class for all errors raised by hlestim."""


class DomainError(HlestimError, ValueError):
    """An input violates a documented precondition."""


class ConvergenceError(HlestimError, ArithmeticError):
    """An iterative routine stopped before meeting its tolerance."""


class ConfigError(HlestimError, ValueError):
    """An environment setting could not be parsed or is out of range."""


def require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)
