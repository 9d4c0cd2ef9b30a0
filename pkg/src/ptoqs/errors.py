"""Exception and warning classes used across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class BrokenPTError(ValueError):
    """Parameters lie at or beyond the exceptional point (complex spectrum)."""


class InvariantError(RuntimeError):
    """A numerical invariant (unit trace, positivity, hermiticity) was violated."""


class TruncationWarning(UserWarning):
    """The highest retained Fock level carries non-negligible population."""


class SpectrumWarning(UserWarning):
    """A spectrum expected to be real and non-negative was not, beyond tolerance."""
