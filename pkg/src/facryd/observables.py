"""Observables: site-resolved excitation density, its variance and growth
exponent, and the reflection asymmetry of bond-centred expansions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bases import DomainPhononBasis, RelativeBasis, SpinPhononBasis
from .errors import InsufficientSamplesError, InvalidParameterError, UndefinedVarianceError

DELTA_SIGMA_FLOOR = 1e-9


@dataclass(frozen=True)
class SiteCoordinates:
    """Integer site labels unwrapped around the initial CM (minimal image).

    Site-centred domains put label 0 on the centre site; bond-centred ones
    put the two central sites at -1 and 0, making j <-> -j-1 the reflection.
    """

    labels: np.ndarray
    center: float
    bond_centered: bool


def centered_site_labels(n: int, center: float) -> SiteCoordinates:
    j = np.arange(1, n + 1)
    half = (n - 1) // 2
    if center == int(center):
        ref = int(center)
        bond = False
    else:
        if abs(center - int(center) - 0.5) > 1e-12:
            raise InvalidParameterError("center must be an integer or half-integer")
        ref = int(center + 0.5)
        bond = True
    labels = ((j - ref + half) % n) - half
    return SiteCoordinates(labels, center, bond)


def rydberg_density(psi: np.ndarray, basis) -> np.ndarray:
    """Per-site excitation probability with the phonons traced out."""
    w = np.abs(np.asarray(psi)) ** 2
    if isinstance(basis, SpinPhononBasis):
        per_spin = w.reshape(basis.spin_dim, basis.register.size).sum(axis=1)
        dens = np.empty(basis.n_sites)
        for j, mask in enumerate(basis.site_masks()):
            dens[j] = per_spin[mask].sum()
        return dens
    if isinstance(basis, DomainPhononBasis):
        per_domain = w.reshape(len(basis.domains), basis.register.size).sum(axis=1)
        return per_domain @ basis.spin_table.astype(float)
    raise InvalidParameterError(f"density undefined on basis kind {getattr(basis, 'kind', '?')}")


def relative_distribution(psi: np.ndarray, basis: RelativeBasis) -> np.ndarray:
    """Probability of each relative-coordinate label, phonons traced out."""
    w = np.abs(np.asarray(psi)) ** 2
    return w.reshape(basis.n_labels, basis.ph_size).sum(axis=1)


def variance(density: np.ndarray, coords) -> float:
    """Normalized second moment of the density over the coordinate labels."""
    labels = coords.labels if isinstance(coords, SiteCoordinates) else np.asarray(coords)
    total = float(np.sum(density))
    if total <= 0.0:
        raise UndefinedVarianceError("total density vanishes")
    m1 = float(labels @ density) / total
    m2 = float((labels.astype(float) ** 2) @ density) / total
    return m2 - m1 * m1


def fit_beta(times, delta_sigma, window) -> tuple[float, float]:
    """Least-squares slope of log(delta_sigma) against log(t) inside a window.

    Returns (beta, r_squared); needs at least five samples above the
    delta-sigma floor.
    """
    times = np.asarray(times, dtype=float)
    delta_sigma = np.asarray(delta_sigma, dtype=float)
    lo, hi = window
    mask = (times >= lo) & (times <= hi) & (delta_sigma > DELTA_SIGMA_FLOOR)
    if mask.sum() < 5:
        raise InsufficientSamplesError(
            f"only {int(mask.sum())} usable samples in window [{lo}, {hi}]"
        )
    x = np.log(times[mask])
    y = np.log(delta_sigma[mask])
    beta, intercept = np.polyfit(x, y, 1)
    resid = y - (beta * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(beta), r2


def asymmetry(density: np.ndarray, coords: SiteCoordinates) -> tuple[np.ndarray, np.ndarray]:
    """Delta n_j = <n_j> - <n_{-j-1}> for j >= 0, on bond-centred coordinates."""
    if not isinstance(coords, SiteCoordinates) or not coords.bond_centered:
        raise InvalidParameterError("asymmetry needs bond-centred coordinates (even r0)")
    labels = coords.labels
    n = labels.size
    half = (n - 1) // 2
    pos = {int(l): i for i, l in enumerate(labels)}
    js = np.arange(0, half + 1)
    out = np.empty(js.size)
    for idx, j in enumerate(js):
        mirror = ((-1 - j + half) % n) - half  # ring reflection of the label
        out[idx] = density[pos[int(j)]] - density[pos[int(mirror)]]
    return js, out
