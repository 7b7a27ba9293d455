"""Exception types shared across the package.

Exit-code mapping used by the CLI: ConfigError -> 1, CapacityError -> 2,
ResonanceError -> 3, verification failures -> 4.
"""


class FacrydError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(FacrydError):
    """A physical or numerical parameter violates its constraints."""


class FacilitationViolationError(InvalidParameterError):
    """detuning + nn_interaction != 0, breaking the anti-blockade condition."""


class NotInSectorError(FacrydError):
    """A spin configuration is not a single contiguous excitation domain."""


class BasisMismatchError(FacrydError):
    """Two objects were combined that live on different bases."""


class CapacityError(FacrydError):
    """Requested state space exceeds the configured amplitude budget."""


class ResonanceError(FacrydError):
    """An energy denominator fell below the resonance tolerance."""


class KrylovConvergenceError(FacrydError):
    """The Krylov propagator could not reach the requested accuracy."""


class UndefinedVarianceError(FacrydError):
    """Density variance requested for a state with zero total density."""


class InsufficientSamplesError(FacrydError):
    """Too few usable samples inside a fit window."""


class ConfigError(FacrydError):
    """Malformed or inconsistent experiment configuration."""
