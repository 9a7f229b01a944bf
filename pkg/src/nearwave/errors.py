"""Exception types shared across the package."""


class NearwaveError(Exception):
    """Base class for package-specific failures."""


class QuadratureError(NearwaveError, RuntimeError):
    """Adaptive integration could not reach the requested tolerance.

    Carries the best value obtained and the achieved error estimate so
    callers can report exactly how far the computation got.
    """

    def __init__(self, message: str, value=None, achieved: float | None = None):
        super().__init__(message)
        self.value = value
        self.achieved = achieved


class DegenerateInputError(NearwaveError, ValueError):
    """Kinematic input for which the selection rules break down.

    The canonical case is a probe initially at rest: the selected mode
    diverges and the fixed-frequency scaling no longer applies, so no
    numeric answer is returned.
    """


class ConfigError(NearwaveError, ValueError):
    """A scenario configuration failed validation.

    ``field`` holds the dotted path of the offending entry.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
