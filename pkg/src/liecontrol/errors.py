class ValidationError(ValueError):
    """Input matrices or parameters violate a structural requirement."""


class NumericError(RuntimeError):
    """A numerical routine failed or produced non-finite output."""
