"""Exception hierarchy shared by all modules."""


class TunnelingError(Exception):
    """Base class for errors raised by kgtunnel."""


class DomainError(TunnelingError, ValueError):
    """An input lies outside the domain of an operation."""


class DegenerateInputError(TunnelingError, ValueError):
    """The input sits on a zone edge where the generic formula is singular.

    Callers should use :func:`kgtunnel.times.edge_limits` or the
    cancellation-free kernels instead.
    """


class NumericalError(TunnelingError, ArithmeticError):
    """A numerical procedure failed to reach its accuracy target."""
