class ValidationError(ValueError):
    """Invalid distribution, channel or parameter value."""


class RegimeError(ValueError):
    """The requested quantity does not exist for these parameters
    (n = 2, an extreme crossover probability, or a rate outside the
    applicable range)."""


class NumericalError(RuntimeError):
    """A root could not be bracketed or a residual check failed."""
