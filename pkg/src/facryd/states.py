"""Initial-state preparation: a spin domain tensored with vibrational states.

Vibrational options per site: a Fock state, the balanced superposition
(|0> + e^{i phi} |1>)/sqrt(2), a truncated coherent state (leakage checked),
or a sampled thermal ensemble of Fock products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bases import Basis, DomainPhononBasis, SpinPhononBasis
from .domain import DomainState, PARITY_EVEN, PARITY_ODD, domain_to_spins, is_admissible
from .errors import InvalidParameterError

COHERENT_LEAKAGE_LIMIT = 1e-3


@dataclass(frozen=True)
class VibrationalSpec:
    kind: str
    n: int = 0
    phi: float = 0.0
    alpha: complex = 0.0
    temperature: float = 0.0
    n_samples: int = 1
    seed: int = 0

    @staticmethod
    def fock(n: int) -> "VibrationalSpec":
        return VibrationalSpec(kind="fock", n=n)

    @staticmethod
    def phase(phi: float) -> "VibrationalSpec":
        return VibrationalSpec(kind="phase", phi=phi)

    @staticmethod
    def coherent(alpha: complex) -> "VibrationalSpec":
        return VibrationalSpec(kind="coherent", alpha=alpha)

    @staticmethod
    def thermal(temperature: float, n_samples: int, seed: int = 0) -> "VibrationalSpec":
        if n_samples < 1:
            raise InvalidParameterError("thermal n_samples must be >= 1")
        return VibrationalSpec(kind="thermal", temperature=temperature, n_samples=n_samples, seed=seed)


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitudes over a tagged basis."""

    data: np.ndarray
    basis: Basis

    def __post_init__(self):
        nrm = float(np.linalg.norm(self.data))
        if abs(nrm - 1.0) > 1e-10:
            raise InvalidParameterError(f"state norm {nrm} deviates from 1 beyond 1e-10")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.data))


def single_site_vector(spec: VibrationalSpec, cutoff: int) -> tuple[np.ndarray, float]:
    """Amplitudes of one trap's vibrational state over 0..cutoff, plus leakage."""
    dim = cutoff + 1
    if spec.kind == "fock":
        if spec.n > cutoff:
            raise InvalidParameterError(f"fock({spec.n}) exceeds site_cutoff={cutoff}")
        v = np.zeros(dim, dtype=complex)
        v[spec.n] = 1.0
        return v, 0.0
    if spec.kind == "phase":
        if cutoff < 1:
            raise InvalidParameterError("phase state needs site_cutoff >= 1")
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0 / math.sqrt(2.0)
        v[1] = np.exp(1j * spec.phi) / math.sqrt(2.0)
        return v, 0.0
    if spec.kind == "coherent":
        ns = np.arange(dim)
        logfact = np.cumsum(np.log(np.maximum(ns, 1)))
        amps = np.exp(-0.5 * abs(spec.alpha) ** 2) * np.power(complex(spec.alpha), ns) / np.exp(0.5 * logfact)
        kept = float(np.sum(np.abs(amps) ** 2))
        leakage = 1.0 - kept
        if leakage > COHERENT_LEAKAGE_LIMIT:
            raise InvalidParameterError(
                f"coherent-state truncation leakage {leakage:.2e} exceeds {COHERENT_LEAKAGE_LIMIT}"
            )
        return amps / math.sqrt(kept), leakage
    raise InvalidParameterError(f"cannot build a single-site vector for kind {spec.kind!r}")


def domain_from_size_center(r0: int, center: float, n: int) -> DomainState:
    """Domain with r0 excitations whose CM sits at `center` (site or bond)."""
    if not 1 <= r0 <= n - 1:
        raise InvalidParameterError(f"r0 must lie in 1..{n - 1}")
    if r0 % 2 == 1:
        if center != int(center):
            raise InvalidParameterError("odd r0 needs a site-centred domain (integer center)")
        d = DomainState(int(center), (r0 + 1) // 2, PARITY_ODD)
    else:
        if center == int(center):
            raise InvalidParameterError("even r0 needs a bond-centred domain (half-integer center)")
        if abs(center - int(center) - 0.5) > 1e-12:
            raise InvalidParameterError("center must be an integer or half-integer")
        d = DomainState(int(center + 0.5), r0 // 2, PARITY_EVEN)
    if not is_admissible(d, n):
        raise InvalidParameterError(f"domain r0={r0}, center={center} not admissible for n={n}")
    return d


def _phonon_product(basis_register, site_vectors: list[np.ndarray]) -> np.ndarray:
    """Amplitude of each occupation vector in a product of per-site states."""
    occs = basis_register.occs
    amp = np.ones(basis_register.size, dtype=complex)
    for j, vec in enumerate(site_vectors):
        amp *= vec[occs[:, j]]
    return amp


def _vib_vectors(vib, n: int, cutoff: int) -> tuple[list[np.ndarray], float]:
    if isinstance(vib, Mapping):
        specs = [vib.get(j, VibrationalSpec.fock(0)) for j in range(1, n + 1)]
    else:
        specs = [vib] * n
    vectors, leakage = [], 0.0
    for spec in specs:
        v, leak = single_site_vector(spec, cutoff)
        vectors.append(v)
        leakage = max(leakage, leak)
    return vectors, leakage


def prepare_initial(params, r0: int, center: float, vib, basis):
    """Product state: spin domain x per-site vibrational state.

    `vib` is one VibrationalSpec for all sites or a {site: spec} mapping
    (1-based sites, missing sites sit in their ground state). A thermal spec
    returns a list of (weight, StateVector) samples instead of one state.
    """
    n = params.n_sites
    domain = domain_from_size_center(r0, center, n)
    if isinstance(vib, VibrationalSpec) and vib.kind == "thermal":
        return _thermal_samples(params, domain, vib, basis)
    psi = _domain_product_state(domain, vib, basis)
    return StateVector(psi, basis)


def _domain_product_state(domain: DomainState, vib, basis) -> np.ndarray:
    if isinstance(basis, DomainPhononBasis):
        if basis.register.scheme != "site":
            if isinstance(vib, VibrationalSpec) and vib.kind == "fock" and vib.n == 0:
                psi = np.zeros(basis.dim, dtype=complex)
                vac = basis.register.index(np.zeros(basis.n_sites, dtype=int))
                psi[basis.index(domain, vac)] = 1.0
                return psi
            raise InvalidParameterError(
                "total-scheme bases only support the vibrational vacuum; per-site "
                "states need the site scheme"
            )
        vectors, _ = _vib_vectors(vib, basis.n_sites, basis.register.cutoff)
        amp = _phonon_product(basis.register, vectors)
        psi = np.zeros(basis.dim, dtype=complex)
        i = basis.domain_index[domain]
        psi[i * basis.register.size : (i + 1) * basis.register.size] = amp
        return psi
    if isinstance(basis, SpinPhononBasis):
        vectors, _ = _vib_vectors(vib, basis.n_sites, basis.register.cutoff)
        amp = _phonon_product(basis.register, vectors)
        psi = np.zeros(basis.dim, dtype=complex)
        bits = basis.spin_bits_of(domain_to_spins(domain, basis.n_sites))
        psi[bits * basis.register.size : (bits + 1) * basis.register.size] = amp
        return psi
    raise InvalidParameterError(f"cannot prepare a domain state on basis kind {getattr(basis, 'kind', '?')}")


def _thermal_samples(params, domain: DomainState, vib: VibrationalSpec, basis):
    """Fock-product samples drawn from the per-site truncated Boltzmann law."""
    cutoff = basis.register.cutoff
    if basis.register.scheme != "site":
        raise InvalidParameterError("thermal preparation needs a site-scheme register")
    n = basis.n_sites
    levels = np.arange(cutoff + 1)
    if vib.temperature <= 1e-12:
        probs = np.zeros(cutoff + 1)
        probs[0] = 1.0
    else:
        w = np.exp(-params.trap_freq * levels / vib.temperature)
        probs = w / w.sum()
    rng = np.random.default_rng(vib.seed)
    out = []
    weight = 1.0 / vib.n_samples
    for _ in range(vib.n_samples):
        occ = rng.choice(levels, size=n, p=probs)
        spec_map = {j + 1: VibrationalSpec.fock(int(occ[j])) for j in range(n)}
        psi = _domain_product_state(domain, spec_map, basis)
        out.append((weight, StateVector(psi, basis)))
    return out
