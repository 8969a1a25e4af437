"""Exception hierarchy shared by the solver library and the bench CLI."""


class RwflowError(Exception):
    """Base class for all rwflow errors."""


class ParameterError(RwflowError, ValueError):
    """Invalid sizes, mismatched lengths or out-of-range tunables."""


class DegenerateInputError(RwflowError, ValueError):
    """Input carries no information (all-zero intensities, zero ground truth)."""


class StagnationError(RwflowError, ArithmeticError):
    """Armijo backtracking ran out of halvings without sufficient decrease."""

    def __init__(self, message: str, halvings: int):
        super().__init__(message)
        self.halvings = halvings


class ConfigError(RwflowError):
    """Malformed or unknown experiment configuration."""


class PpmFormatError(RwflowError):
    """Malformed PPM image; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class QuotaError(RwflowError):
    """An experiment could not collect the number of trials it was asked for."""
