"""Exception hierarchy for the engine simulator."""


class EngineError(Exception):
    """Base class for all simulator-specific errors."""


class NonThermalizingError(EngineError):
    """Bath gains photons at least as fast as it removes them (G <= E).

    The oscillator's photon number grows without bound under such a bath,
    so it is rejected everywhere a relaxing bath is required.
    """


class InfeasibleCoherenceError(EngineError):
    """Requested bath would need a ground-space weight above 1.

    Equivalent to E + G > 1: no normalized atomic state can supply the
    required capture weight, however the ground-space state is tuned.
    """


class DomainError(EngineError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ProtocolError(EngineError):
    """Frequency ramp is not positive everywhere on its time interval."""


class QuadratureError(EngineError):
    """Adaptive quadrature could not reach the requested tolerance."""


class TruncationError(EngineError):
    """Probability leaked past the photon-number cutoff beyond the allowed bound."""


class NegativityError(EngineError):
    """A population went negative; the per-collision step is too large."""


class InconsistentOrderingError(EngineError):
    """Slope-based ordering prediction disagrees with directly computed values.

    This signals a bug in the derivative bookkeeping, not a physics outcome.
    """


class NoProfitableCycleError(EngineError):
    """No cycle time in the searched range produces positive net power."""
