"""Schrieffer-Wolff reduction of a momentum block to fixed phonon number.

The block Hamiltonian splits into a diagonal part H0 (dressed quasiparticle
dispersion plus free phonons) and the kappa-linear scattering term V, which
changes the total phonon number by one. The generator solving
V + [S, H0] = 0 is S_ab = V_ab / (E_a - E_b); eliminating V to first order
leaves H0 + [S, V]/2, whose phonon-number-conserving part restricted to one
total-number subspace is the effective Hamiltonian. Valid for |kappa| much
smaller than the trap frequency; near-degenerate denominators raise a
resonance error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .bases import RelativeBasis
from .errors import ResonanceError
from .momentum_space import (
    coupling_tensor,
    hop_amplitudes,
    quasiparticle_energies,
    scattering_operator,
)
from .params import ModelParams, validate_params
from .sparse_op import SparseHermitianOperator

#: |denominator| below this multiple of the trap frequency is a resonance.
RESONANCE_TOL = 1e-6


@dataclass
class SwDecomposition:
    """Pieces of the reduction on one block: H0 diagonal, coupling V,
    anti-Hermitian generator S, and the parent basis they live on."""

    basis: RelativeBasis
    h0_diag: np.ndarray
    v: sp.csr_matrix
    generator: sp.csr_matrix


def sw_denominators(
    k: int, kp: int, mode: int, q: int, occupation, params: ModelParams
) -> tuple[float, float]:
    """Energy denominators for adding one phonon in `mode` on top of `occupation`.

    d1 = E(k', {N}) - E(k, {N}+1_mode); d2 = E(k', {N}+1_mode) - E(k, {N}).
    """
    n = params.n_sites
    occ = np.asarray(occupation, dtype=np.int64)
    occ_up = occ.copy()
    occ_up[mode - 1] += 1

    def energy(kk: int, o: np.ndarray) -> float:
        jq = hop_amplitudes(params, q, o[None, :])[0]
        return 2.0 * jq * np.cos(kk * np.pi / n) + params.trap_freq * float(o.sum())

    d1 = energy(kp, occ) - energy(k, occ_up)
    d2 = energy(kp, occ_up) - energy(k, occ)
    floor = RESONANCE_TOL * params.trap_freq
    if abs(d1) < floor or abs(d2) < floor:
        raise ResonanceError(
            f"denominator below {floor:.1e} for k={k}, k'={kp}, p={mode}, q={q}: "
            f"d1={d1:.3e}, d2={d2:.3e}"
        )
    return d1, d2


def sw_decomposition(
    params: ModelParams, q: int, *, total_cutoff: int | None = None, coeffs: np.ndarray | None = None
) -> SwDecomposition:
    """H0, V, and the generator S on the truncated block."""
    validate_params(params)
    cutoff = params.total_cutoff if total_cutoff is None else total_cutoff
    basis = RelativeBasis(params.n_sites, q, "diagonal", cutoff, max_amplitudes=params.max_amplitudes)
    if coeffs is None:
        coeffs = coupling_tensor(params.n_sites)
    energies = quasiparticle_energies(params, q, basis)
    v = scattering_operator(params, q, coeffs, basis).to_csr().tocoo()
    floor = RESONANCE_TOL * params.trap_freq
    if v.nnz:
        gaps = energies[v.row] - energies[v.col]
        bad = np.flatnonzero(np.abs(gaps) < floor)
        if bad.size:
            i = int(bad[0])
            raise ResonanceError(
                f"{bad.size} near-resonant denominators on block q={q}; first at "
                f"states ({v.row[i]}, {v.col[i]}) with gap {gaps[i]:.3e} "
                f"(tolerance {floor:.1e}); the reduction is invalid here"
            )
        s_data = v.data / gaps
    else:
        s_data = v.data
    S = sp.csr_matrix((s_data, (v.row, v.col)), shape=v.shape)
    return SwDecomposition(basis=basis, h0_diag=energies, v=v.tocsr(), generator=S)


def sw_generator(params: ModelParams, q: int, *, total_cutoff: int | None = None) -> sp.csr_matrix:
    return sw_decomposition(params, q, total_cutoff=total_cutoff).generator


def sw_residual(dec: SwDecomposition) -> float:
    """max |V + [S, H0]| over rows and columns interior to the truncation.

    States saturating the total cutoff cannot host the defining identity (the
    coupling maps them out of the space), so they are excluded.
    """
    E = dec.h0_diag
    S = dec.generator
    R = (dec.v + (S.multiply(E[None, :]) - S.multiply(E[:, None]))).tocoo()
    interior = np.tile(dec.basis.occ_totals < dec.basis.register.cutoff, dec.basis.n_labels)
    keep = interior[R.row] & interior[R.col]
    if not np.any(keep):
        return 0.0
    return float(np.max(np.abs(R.data[keep])))


def sw_effective(
    params: ModelParams, q: int, n_phonons: int, *, coeffs: np.ndarray | None = None
) -> SparseHermitianOperator:
    """Effective Hamiltonian in the subspace with n_phonons total phonons.

    Built as the phonon-number-conserving block of H0 + [S, V]/2 with the
    parent truncation one phonon above the subspace, which realizes the
    second-order phonon-mediated quasiparticle interaction exactly.
    """
    validate_params(params)
    dec = sw_decomposition(params, q, total_cutoff=n_phonons + 1, coeffs=coeffs)
    S, V = dec.generator, dec.v
    correction = 0.5 * (S @ V - V @ S)
    big = sp.diags(dec.h0_diag) + correction
    sub = RelativeBasis(
        params.n_sites,
        q,
        "diagonal",
        n_phonons + 1,
        fixed_total=n_phonons,
        max_amplitudes=params.max_amplitudes,
    )
    emb = sub.embedding_into(dec.basis)
    block = big.tocsr()[emb][:, emb].tocoo()
    H = SparseHermitianOperator(sub.dim, sub)
    upper = block.row <= block.col
    H.add_entries(block.row[upper], block.col[upper], block.data[upper])
    return H
