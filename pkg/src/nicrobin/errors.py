"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid prime-class configuration (bad residues, overlapping overrides, ...)."""


class UnfactoredError(Exception):
    """A value could not be completely factored within the given budget."""

    def __init__(self, value, cofactor, message=None):
        self.value = value
        self.cofactor = cofactor
        super().__init__(message or f"unfactored cofactor {cofactor} of {value}")


class UndecidedError(RuntimeError):
    """A certified comparison stayed undecided at the maximum precision."""

    def __init__(self, n, precision_bits):
        self.n = n
        self.precision_bits = precision_bits
        super().__init__(
            f"verdict undecided for n = {n} at {precision_bits} mantissa bits"
        )


class ResourceError(RuntimeError):
    """A request would exceed the configured memory budget."""
