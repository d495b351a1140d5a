"""Exception hierarchy shared by all modules."""


class CascadeError(Exception):
    """Base class for numerical failures."""


class DivergedOrbitError(CascadeError):
    def __init__(self, step, value):
        super().__init__(f"orbit escaped at step {step} (|z| = {abs(complex(value)):.3g})")
        self.step = step


class NoConvergenceError(CascadeError):
    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (last residual {float(residual):.3g})")
        self.residual = float(residual)


class SingularSystemError(CascadeError):
    pass


class ContinuationBlockedError(CascadeError):
    def __init__(self, message, parameter=None):
        super().__init__(message)
        self.parameter = parameter


class DomainError(CascadeError, ValueError):
    pass


class SamplingTooCoarseError(CascadeError):
    pass


class ClusteringAmbiguousError(CascadeError):
    pass


class DegenerateClusterError(CascadeError):
    pass


class LevelError(CascadeError):
    """A failure inside run_cascade, tagged with the failing level."""

    def __init__(self, level, cause):
        super().__init__(f"level {level}: {cause}")
        self.level = level
        self.cause = cause
