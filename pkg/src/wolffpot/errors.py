"""Exception types shared across the package."""


class WolffpotError(ValueError):
    """Base class for all package-specific errors."""


class DimensionMismatchError(WolffpotError):
    """Operands live in different ambient dimensions."""


class LevelRangeError(WolffpotError):
    """A requested dyadic level falls outside the window's level range."""


class OutOfWindowError(WolffpotError):
    """A query point lies outside the window's root region."""


class GridAlignmentError(WolffpotError):
    """A box is not a union of cells of the requested dyadic level."""


class DegenerateInputError(WolffpotError):
    """All sampled masses vanish, so the requested diagnostic is undefined."""


class InvalidKernelError(WolffpotError):
    """Kernel parameters violate positivity or monotonicity requirements."""


class ScenarioError(WolffpotError):
    """A scenario configuration failed to parse or validate."""
