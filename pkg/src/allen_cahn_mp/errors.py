"""Exception types raised by the package."""


class InvalidArgumentError(ValueError):
    pass


class DomainNotConnectedError(ValueError):
    """The interior node set of a masked domain has more than one component."""


class InvalidFieldError(ValueError):
    """A field holds NaN or Inf on in-set nodes."""


class PreconditionError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class DivergenceError(RuntimeError):
    pass


class StalledError(RuntimeError):
    """Line search failed; carries the best iterate reached so far."""

    def __init__(self, message, field=None, stats=None):
        super().__init__(message)
        self.field = field
        self.stats = stats
