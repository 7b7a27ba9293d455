"""Momentum-block Hamiltonians of the single-domain model.

After decoupling the centre of mass, each CM momentum q carries an
independent block over the relative coordinate and the N Fourier phonon
modes: an open hopping chain whose amplitude depends on the phonon momentum
occupation, free phonons, and a relative-coordinate-dependent displacement
coupling. Rotating the chain into its sine eigenmodes turns the coupling
into scattering amplitudes f(k, k', p) between quasiparticles k, k'
exchanging a phonon of momentum p; both the closed form and the defining
brute-force sum are implemented, the latter serving as the oracle for the
former.
"""

from __future__ import annotations

import numpy as np

from .bases import RelativeBasis
from .errors import InvalidParameterError
from .params import ModelParams, validate_params
from .sparse_op import SparseHermitianOperator

#: |denominator| below which the closed form falls back to the oracle sum.
DENOMINATOR_GUARD = 1e-12


def _check_fkp(k: int, kp: int, p: int, n: int):
    if not (1 <= k <= n - 1 and 1 <= kp <= n - 1):
        raise InvalidParameterError(f"k, k' must lie in 1..{n - 1}")
    if not (1 <= p <= n):
        raise InvalidParameterError(f"p must lie in 1..{n}")


def f_coeff_oracle(k: int, kp: int, p: int, n: int) -> float:
    """Defining sum of the spin-phonon scattering amplitude, evaluated directly."""
    _check_fkp(k, kp, p, n)
    r = np.arange(1, n)
    return float(
        -4.0
        * n**-1.5
        * np.sum(np.sin(np.pi * k * r / n) * np.sin(np.pi * p * (r - 1) / n) * np.sin(np.pi * kp * r / n))
    )


def f_coeff_closed(k: int, kp: int, p: int, n: int) -> float:
    """Closed form of the scattering amplitude.

    A rational-trigonometric term fires when k - k' - p is odd; a
    momentum-conservation term of Kronecker deltas weighted by
    (n/4) sin(pi p / n) covers the even case. Overall prefactor 4 n^{-3/2}.
    """
    _check_fkp(k, kp, p, n)
    a = np.pi * p / n
    b = np.pi * k / n
    c = np.pi * kp / n
    term1 = 0.0
    if (k - kp - p) % 2 != 0:
        den = (
            np.cos(a) ** 2
            + np.cos(b) ** 2
            + np.cos(c) ** 2
            - 2.0 * np.cos(a) * np.cos(b) * np.cos(c)
            - 1.0
        )
        if abs(den) < DENOMINATOR_GUARD:
            return f_coeff_oracle(k, kp, p, n)
        term1 = np.cos(a) * np.sin(a) * np.sin(b) * np.sin(c) / den
    deltas = (float(k - kp == -p) + float(k - kp == p)) - (
        float(k + kp == 2 * n - p) + float(k + kp == p)
    )
    return float(4.0 * n**-1.5 * (term1 + 0.25 * n * np.sin(a) * deltas))


def coupling_tensor(n: int) -> np.ndarray:
    """f[k-1, k'-1, p-1] for all k, k' in 1..n-1 and p in 1..n."""
    out = np.empty((n - 1, n - 1, n))
    for k in range(1, n):
        for kp in range(1, n):
            for p in range(1, n + 1):
                out[k - 1, kp - 1, p - 1] = f_coeff_closed(k, kp, p, n)
    return out


def change_of_basis(n: int) -> np.ndarray:
    """Orthogonal sine transform diagonalizing the open relative-coordinate chain.

    U[j-1, k-1] = sqrt(2/n) sin(pi k j / n); identity on the phonon factor.
    """
    if n < 3:
        raise InvalidParameterError("n must be >= 3")
    j = np.arange(1, n)[:, None]
    k = np.arange(1, n)[None, :]
    return np.sqrt(2.0 / n) * np.sin(np.pi * k * j / n)


def hop_amplitudes(p: ModelParams, q: int, occs: np.ndarray) -> np.ndarray:
    """Occupation-dependent hopping amplitude of block q, one value per
    occupation vector: 2*rabi*cos(pi (q + sum_p p N_p) / n)."""
    n = p.n_sites
    modes = np.arange(1, n + 1)
    shift = occs.astype(np.int64) @ modes
    return 2.0 * p.rabi * np.cos(np.pi * (q + shift) / n)


def build_hq_position(p: ModelParams, q: int, basis: RelativeBasis | None = None) -> SparseHermitianOperator:
    """One CM-momentum block in the relative-position form."""
    validate_params(p)
    n = p.n_sites
    if basis is None:
        basis = RelativeBasis(n, q, "position", p.total_cutoff, max_amplitudes=p.max_amplitudes)
    M = basis.ph_size
    H = SparseHermitianOperator(basis.dim, basis)
    occ_idx = np.arange(M, dtype=np.int64)
    jq = hop_amplitudes(p, q, basis.occs)
    for rp in range(1, n - 1):  # open chain, n-2 hops
        H.add_entries((rp - 1) * M + occ_idx, rp * M + occ_idx, jq)
    idx = np.arange(basis.dim, dtype=np.int64)
    H.add_entries(idx, idx, np.tile(p.trap_freq * basis.occ_totals.astype(float), basis.n_labels))
    if p.coupling != 0.0 and basis.register.cutoff > 0:
        for rp in range(1, n):
            for mode in range(1, n + 1):
                coeff = -2.0 * p.coupling / np.sqrt(n) * np.sin(np.pi * (rp - 1) * mode / n)
                if abs(coeff) < 1e-15:
                    continue
                low = basis.register.lowering(mode).tocoo()
                H.add_entries((rp - 1) * M + low.row, (rp - 1) * M + low.col, coeff * low.data)
    return H


def quasiparticle_energies(p: ModelParams, q: int, basis: RelativeBasis) -> np.ndarray:
    """Diagonal of the sine-mode block: dressed dispersion plus phonon energy."""
    n = p.n_sites
    jq = hop_amplitudes(p, q, basis.occs)
    diag = np.empty(basis.dim)
    for k in range(1, n):
        diag[(k - 1) * basis.ph_size : k * basis.ph_size] = (
            2.0 * jq * np.cos(k * np.pi / n) + p.trap_freq * basis.occ_totals
        )
    return diag


def _add_scattering_entries(H: SparseHermitianOperator, p: ModelParams, basis: RelativeBasis, coeffs: np.ndarray):
    """kappa-linear scattering term on a diagonal-form basis (annihilation
    direction only; the conjugate side comes from Hermitian storage together
    with the k <-> k' symmetry of the amplitudes)."""
    n = p.n_sites
    M = basis.ph_size
    for mode in range(1, n + 1):
        low = basis.register.lowering(mode).tocoo()
        if low.nnz == 0:
            continue
        for k in range(1, n):
            for kp in range(1, n):
                val = p.coupling * coeffs[k - 1, kp - 1, mode - 1]
                if abs(val) < 1e-15:
                    continue
                H.add_entries((k - 1) * M + low.row, (kp - 1) * M + low.col, val * low.data)


def scattering_operator(
    p: ModelParams, q: int, coeffs: np.ndarray | None = None, basis: RelativeBasis | None = None
) -> SparseHermitianOperator:
    """The kappa-linear spin-phonon term of one block, alone."""
    validate_params(p)
    if basis is None:
        basis = RelativeBasis(p.n_sites, q, "diagonal", p.total_cutoff, max_amplitudes=p.max_amplitudes)
    if coeffs is None:
        coeffs = coupling_tensor(p.n_sites)
    V = SparseHermitianOperator(basis.dim, basis)
    if p.coupling != 0.0 and basis.register.cutoff > 0:
        _add_scattering_entries(V, p, basis, coeffs)
    return V


def build_hq_diagonalform(
    p: ModelParams, q: int, coeffs: np.ndarray | None = None, basis: RelativeBasis | None = None
) -> SparseHermitianOperator:
    """The same block in the sine-mode basis, with explicit scattering amplitudes."""
    validate_params(p)
    n = p.n_sites
    if basis is None:
        basis = RelativeBasis(n, q, "diagonal", p.total_cutoff, max_amplitudes=p.max_amplitudes)
    if coeffs is None:
        coeffs = coupling_tensor(n)
    H = SparseHermitianOperator(basis.dim, basis)
    idx = np.arange(basis.dim, dtype=np.int64)
    H.add_entries(idx, idx, quasiparticle_energies(p, q, basis))
    if p.coupling != 0.0 and basis.register.cutoff > 0:
        _add_scattering_entries(H, p, basis, coeffs)
    return H


def assemble_blocks(p: ModelParams) -> dict[int, SparseHermitianOperator]:
    """All CM-momentum blocks, q = 1..n, in the position form."""
    validate_params(p)
    return {q: build_hq_position(p, q) for q in range(1, p.n_sites + 1)}
