"""Exception types shared across the package."""


class ReadoutError(Exception):
    """Base class for all failures raised by this package."""


class ValidationError(ReadoutError):
    """An input fell outside the model's domain (bad parameter, bad config)."""


class NumericalError(ReadoutError):
    """A computation could not produce a trustworthy number."""


class UndefinedPointError(NumericalError):
    """A metric was requested at a point where it is not defined (e.g. SNR at t=0)."""
