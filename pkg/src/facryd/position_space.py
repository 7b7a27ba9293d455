"""Position-space Hamiltonians: the driven chain with trap phonons and its
single-domain reduction.

The full chain acts on all spin strings tensored with per-site Fock states:
drive, detuning, free phonons, and a nearest-neighbour interaction whose
gradient displaces the two atoms of every excited pair. The reduced model
acts on single-domain states: each facilitated move carries the drive
amplitude, and the pair-interaction gradient telescopes over the block so
that only the two wall sites couple to phonons.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .bases import DomainPhononBasis, SpinPhononBasis
from .domain import facilitated_neighbors, wall_sites
from .errors import BasisMismatchError
from .params import ModelParams, validate_params
from .sparse_op import SparseHermitianOperator


def _spin_diagonal(basis: SpinPhononBasis, p: ModelParams) -> np.ndarray:
    """Detuning + static pair interaction for every spin bitmask."""
    k = basis.excitation_counts()
    m = basis.adjacent_pair_counts()
    return p.detuning * k + p.nn_interaction * m


def _pair_active(spin: int, j: int, n: int) -> bool:
    """Is the ring pair (j, j+1) doubly excited in bitmask `spin`? j is 1-based."""
    b1 = (spin >> (j - 1)) & 1
    b2 = (spin >> (j % n)) & 1
    return bool(b1 and b2)


def _alpha_coefficients(basis: SpinPhononBasis) -> np.ndarray:
    """Net displacement coefficient per (spin, site): +1 where the site is the
    right end of an active pair, -1 where it is the left end; interior sites of
    a block cancel."""
    n = basis.n_sites
    alpha = np.zeros((basis.spin_dim, n), dtype=np.int8)
    for s in range(basis.spin_dim):
        for m in range(1, n + 1):
            left_pair = _pair_active(s, (m - 2) % n + 1, n)
            right_pair = _pair_active(s, m, n)
            alpha[s, m - 1] = int(left_pair) - int(right_pair)
    return alpha


def build_full_hamiltonian(p: ModelParams, basis: SpinPhononBasis | None = None) -> SparseHermitianOperator:
    """Assemble the driven spin-phonon chain on spin strings x site Fock states."""
    validate_params(p)
    if basis is None:
        basis = SpinPhononBasis(p.n_sites, p.site_cutoff, p.max_amplitudes)
    n = p.n_sites
    M = basis.register.size
    H = SparseHermitianOperator(basis.dim, basis)
    occ_idx = np.arange(M, dtype=np.int64)

    # drive: one spin flip anywhere, identity on phonons
    for s in range(basis.spin_dim):
        for j in range(n):
            s2 = s ^ (1 << j)
            if s2 > s:
                H.add_entries(s * M + occ_idx, s2 * M + occ_idx, np.full(M, p.rabi))

    # diagonal: detuning + pair interaction + free phonons
    diag_spin = _spin_diagonal(basis, p)
    diag = np.repeat(diag_spin, M) + np.tile(p.trap_freq * basis.register.occ_totals.astype(float), basis.spin_dim)
    idx = np.arange(basis.dim, dtype=np.int64)
    H.add_entries(idx, idx, diag)

    # pair-interaction gradient: -coupling * (x_j - x_{j+1}) on every active pair
    if p.coupling != 0.0 and p.site_cutoff > 0:
        alpha = _alpha_coefficients(basis)
        lowers = [basis.register.lowering(m) for m in range(1, n + 1)]
        for m in range(1, n + 1):
            low = lowers[m - 1].tocoo()
            for s in np.flatnonzero(alpha[:, m - 1] != 0):
                coeff = p.coupling * float(alpha[s, m - 1])
                H.add_entries(s * M + low.row, s * M + low.col, coeff * low.data)
    return H


class FullModelOperator:
    """Matrix-free action of the full chain, factorized over spin x phonon.

    Used for time evolution when assembling the sparse matrix would be
    wasteful; matches build_full_hamiltonian exactly.
    """

    def __init__(self, p: ModelParams, basis: SpinPhononBasis | None = None):
        validate_params(p)
        if basis is None:
            basis = SpinPhononBasis(p.n_sites, p.site_cutoff, p.max_amplitudes)
        self.params = p
        self.basis = basis
        self.dim = basis.dim
        n = p.n_sites
        spin_dim = basis.spin_dim
        rows, cols = [], []
        for s in range(spin_dim):
            for j in range(n):
                s2 = s ^ (1 << j)
                rows.append(s)
                cols.append(s2)
        self._flip = sp.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(spin_dim, spin_dim)
        )
        self._diag_spin = _spin_diagonal(basis, p).astype(float)
        self._occ_energy = p.trap_freq * basis.register.occ_totals.astype(float)
        self._mode_rows = []
        if p.coupling != 0.0 and p.site_cutoff > 0:
            alpha = _alpha_coefficients(basis)
            for m in range(1, n + 1):
                plus = np.flatnonzero(alpha[:, m - 1] == 1)
                minus = np.flatnonzero(alpha[:, m - 1] == -1)
                disp = basis.register.displacement(m)
                self._mode_rows.append((plus, minus, disp))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        basis = self.basis
        p = self.params
        psi = v.reshape(basis.spin_dim, basis.register.size)
        out = p.rabi * (self._flip @ psi)
        out += self._diag_spin[:, None] * psi
        out += psi * self._occ_energy[None, :]
        for plus, minus, disp in self._mode_rows:
            if plus.size:
                out[plus] += p.coupling * (psi[plus] @ disp)
            if minus.size:
                out[minus] -= p.coupling * (psi[minus] @ disp)
        return out.reshape(-1)

    def expectation(self, v: np.ndarray) -> float:
        return float(np.real(np.vdot(v, self.matvec(v))))


def build_constrained_hamiltonian(
    p: ModelParams, truncation: str = "site", basis: DomainPhononBasis | None = None
) -> SparseHermitianOperator:
    """Assemble the single-domain model on domain states x phonons.

    truncation 'site' attaches Fock modes to lattice sites with a per-site
    cutoff; 'total' works with the N Fourier modes under a total-number
    cutoff, the scheme under which the momentum-block decomposition is exact.
    """
    validate_params(p)
    if basis is None:
        cutoff = p.site_cutoff if truncation == "site" else p.total_cutoff
        basis = DomainPhononBasis(p.n_sites, cutoff, truncation, p.max_amplitudes)
    elif not basis.kind.endswith(truncation):
        raise BasisMismatchError(f"basis {basis.kind} does not match truncation {truncation!r}")
    n = p.n_sites
    reg = basis.register
    M = reg.size
    H = SparseHermitianOperator(basis.dim, basis)
    occ_idx = np.arange(M, dtype=np.int64)

    # kinetic term: each facilitated move carries the drive amplitude
    for i, d in enumerate(basis.domains):
        for nb in facilitated_neighbors(d, n):
            j = basis.domain_index[nb]
            if j > i:
                H.add_entries(i * M + occ_idx, j * M + occ_idx, np.full(M, p.rabi))

    # free phonons
    idx = np.arange(basis.dim, dtype=np.int64)
    H.add_entries(idx, idx, np.tile(p.trap_freq * reg.occ_totals.astype(float), len(basis.domains)))

    # wall-site displacement coupling: -coupling * (x_R - x_L) on each domain
    if p.coupling != 0.0 and reg.cutoff > 0:
        if truncation == "site":
            for i, d in enumerate(basis.domains):
                left, right = wall_sites(d, n)
                if left == right:
                    continue  # single excitation: the two walls share the site
                for site, sign in ((right, -1.0), (left, +1.0)):
                    low = reg.lowering(site).tocoo()
                    H.add_entries(i * M + low.row, i * M + low.col, sign * p.coupling * low.data)
        else:
            phases = np.exp(2j * np.pi * np.arange(1, n + 1)[None, :] * np.arange(1, n + 1)[:, None] / n)
            # phases[site-1, mode-1] = e^{2 pi i site*mode / n}
            for i, d in enumerate(basis.domains):
                left, right = wall_sites(d, n)
                if left == right:
                    continue
                for mode in range(1, n + 1):
                    z = -p.coupling / np.sqrt(n) * (phases[right - 1, mode - 1] - phases[left - 1, mode - 1])
                    if abs(z) < 1e-15:
                        continue
                    low = reg.lowering(mode).tocoo()
                    H.add_entries(i * M + low.row, i * M + low.col, z * low.data)
    return H


def project_to_single_domain(
    psi: np.ndarray, full_basis: SpinPhononBasis, domain_basis: DomainPhononBasis
) -> tuple[np.ndarray, float]:
    """Copy the amplitudes of admissible single-domain spin strings.

    Returns the (unnormalized) projected vector on the domain basis and its
    squared norm, the weight of the single-domain sector.
    """
    if full_basis.n_sites != domain_basis.n_sites:
        raise BasisMismatchError("bases differ in n_sites")
    if domain_basis.register.scheme != "site" or full_basis.register.cutoff != domain_basis.register.cutoff:
        raise BasisMismatchError("projection requires matching site-scheme registers")
    M = full_basis.register.size
    psi_full = psi.reshape(full_basis.spin_dim, M)
    rows = np.array(
        [full_basis.spin_bits_of(domain_basis.spin_table[i]) for i in range(len(domain_basis.domains))],
        dtype=np.int64,
    )
    proj = psi_full[rows].reshape(-1).copy()
    weight = float(np.vdot(proj, proj).real)
    return proj, weight


def domain_wall_counts(basis: SpinPhononBasis) -> np.ndarray:
    """Number of up/down boundaries around the ring for every spin bitmask."""
    n = basis.n_sites
    s = np.arange(basis.spin_dim, dtype=np.int64)
    rot = (s >> 1) | ((s & 1) << (n - 1))
    diff = s ^ rot
    out = np.zeros(basis.spin_dim, dtype=np.int64)
    for i in range(n):
        out += (diff >> i) & 1
    return out
