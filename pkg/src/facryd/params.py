"""Physical parameters and unit conventions.

All energies are measured in units of the Rabi frequency (rabi = 1 by
convention) and times in its inverse. The anti-blockade condition ties the
nearest-neighbour interaction to the detuning, nn_interaction = -detuning,
so that an atom next to exactly one excitation is driven resonantly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import FacilitationViolationError, InvalidParameterError

#: Default cap on the number of complex amplitudes a basis may hold.
#: One vector at this size is ~128 MB; a Krylov propagation needs ~15-20 of
#: them, which keeps the working set inside a small machine's memory.
DEFAULT_AMPLITUDE_BUDGET = 8_000_000


@dataclass(frozen=True)
class ModelParams:
    """Couplings and cutoffs of the spin-phonon chain, in units of rabi."""

    n_sites: int = 5
    rabi: float = 1.0
    detuning: float = 500.0
    trap_freq: float = 8.0
    coupling: float = 0.0
    exponent: float = 6.0
    nn_interaction: float | None = None  # derived as -detuning when None
    site_cutoff: int = 0
    total_cutoff: int = 0
    max_amplitudes: int = DEFAULT_AMPLITUDE_BUDGET

    def __post_init__(self):
        if self.nn_interaction is None:
            object.__setattr__(self, "nn_interaction", -self.detuning)

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class MicroscopicParams:
    """Microscopic trap and interaction constants behind the coupling kappa."""

    c_gamma: float
    lattice_spacing: float
    mass: float
    osc_length: float = field(init=False)
    trap_freq: float = 1.0

    def __post_init__(self):
        for name in ("c_gamma", "lattice_spacing", "mass", "trap_freq"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be positive")
        object.__setattr__(self, "osc_length", (self.mass * self.trap_freq) ** -0.5)


def kappa_from_microscopic(micro: MicroscopicParams, gamma: float, trap_freq: float | None = None) -> float:
    """Spin-phonon coupling from the interaction gradient at the lattice spacing.

    kappa = gamma * C_gamma / (a0**(gamma+1) * sqrt(2 m omega)); equivalently
    (gamma/sqrt(2)) (x0/a0) V_nn with V_nn = C_gamma / a0**gamma.
    """
    if gamma < 0:
        raise InvalidParameterError("gamma must be non-negative")
    omega = micro.trap_freq if trap_freq is None else trap_freq
    if omega <= 0:
        raise InvalidParameterError("trap_freq must be positive")
    a0 = micro.lattice_spacing
    return gamma * micro.c_gamma / (a0 ** (gamma + 1) * math.sqrt(2.0 * micro.mass * omega))


def validate_params(p: ModelParams) -> ModelParams:
    """Check every invariant of ModelParams; return p unchanged if all hold."""
    problems = []
    if p.n_sites < 3:
        problems.append("n_sites must be >= 3")
    if p.n_sites % 2 == 0:
        problems.append("n_sites must be odd")
    if p.rabi <= 0:
        problems.append("rabi must be positive")
    if p.trap_freq <= 0:
        problems.append("trap_freq must be positive")
    if p.site_cutoff < 0:
        problems.append("site_cutoff must be >= 0")
    if p.total_cutoff < 0:
        problems.append("total_cutoff must be >= 0")
    if p.max_amplitudes < 1:
        problems.append("max_amplitudes must be >= 1")
    if problems:
        raise InvalidParameterError("; ".join(problems))
    if p.nn_interaction + p.detuning != 0.0:
        raise FacilitationViolationError(
            f"facilitation-violation: detuning + nn_interaction = "
            f"{p.detuning + p.nn_interaction!r}, expected 0"
        )
    return p
