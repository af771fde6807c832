"""Exception hierarchy shared by every module."""


class ElemopError(Exception):
    """Base class for all errors raised by elemop."""


class DimensionError(ElemopError, ValueError):
    pass


class CapacityError(ElemopError):
    """A Kronecker realization would exceed the configured size cap."""


class ConvergenceError(ElemopError):
    pass


class PreconditionError(ElemopError, ValueError):
    pass


class ConfigError(ElemopError, ValueError):
    pass
