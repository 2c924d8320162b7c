"""Exception hierarchy for the penalized DG solver."""


class PenalDGError(Exception):
    """Base class for all errors raised by :mod:`penaldg`."""


class InvalidOrderError(PenalDGError, ValueError):
    pass


class DegenerateNodesError(PenalDGError, ValueError):
    pass


class MaskError(PenalDGError, ValueError):
    pass


class MeshError(PenalDGError, ValueError):
    pass


class ShapeError(PenalDGError, ValueError):
    pass


class RegionError(PenalDGError, ValueError):
    pass


class ConfigError(PenalDGError, ValueError):
    pass


class DivergenceError(PenalDGError, ArithmeticError):
    """Raised when the time integration produces non-finite or blown-up values."""

    def __init__(self, step, max_norm, t=None):
        self.step = step
        self.max_norm = max_norm
        self.t = t
        super().__init__(f"diverged solution at step {step} (t={t}, max|u|={max_norm})")
