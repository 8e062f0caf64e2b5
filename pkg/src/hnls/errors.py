"""Exception types shared across the package."""


class DomainError(ValueError):
    """A time or coordinate falls outside the admissible moving domain."""


class SingularDomainError(DomainError):
    """The interval width is zero or negative, so 1/(beta - alpha) blows up."""


class SolverError(RuntimeError):
    """A linear solve failed (singular or numerically singular matrix)."""


class PicardError(RuntimeError):
    """Base class for fixed-point iteration failures.

    Attributes
    ----------
    iteration : int
        Picard index p at which the failure was detected.
    ratio : float
        Last contraction ratio observed.
    step : int or None
        Time-step index, filled in by the trajectory driver.
    records : list
        Partial per-step diagnostics collected before the failure
        (filled in by the trajectory driver).
    """

    def __init__(self, message, iteration=0, ratio=float("nan")):
        super().__init__(message)
        self.iteration = iteration
        self.ratio = ratio
        self.step = None
        self.records = []


class ContractionFailure(PicardError):
    """Successive Picard increments stopped shrinking; no trustworthy output."""


class MaxPicardExceeded(PicardError):
    """The iteration cap was hit before the increment dropped below tolerance."""


class ConfigError(ValueError):
    """A scenario configuration file is malformed or inconsistent."""
