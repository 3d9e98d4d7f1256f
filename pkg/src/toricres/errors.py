"""Exception types raised across the package."""


class ToricResError(Exception):
    """Base class for all package errors."""


class InvalidInput(ToricResError, ValueError):
    pass


class InvalidCenter(ToricResError, ValueError):
    pass


class InvalidChart(ToricResError, ValueError):
    pass


class SharedSupport(ToricResError, ValueError):
    pass


class ZeroBinomial(ToricResError, ValueError):
    pass


class TorsionError(ToricResError, ValueError):
    pass


class NoXInitial(ToricResError, ValueError):
    pass


class EmptyDerivativeSet(ToricResError, ValueError):
    pass


class NotAdmissible(ToricResError, ValueError):
    pass


class InvalidOrder(ToricResError, ValueError):
    pass


class NotPermissible(ToricResError, ValueError):
    pass


class IncomparableMaxima(ToricResError, RuntimeError):
    pass


class NonTermination(ToricResError, RuntimeError):
    pass
