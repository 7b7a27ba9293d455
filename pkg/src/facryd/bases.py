"""Indexed product bases: spin or domain configurations tensored with Fock registers.

Every basis assigns a dense integer index to each element, checks the total
amplitude count against a capacity budget before allocating anything, and is
immutable afterwards. Phonon registers come in two truncation schemes: 'site'
caps the occupation of each mode independently, 'total' caps the summed
occupation (the scheme preserved by the momentum-space transformation chain).
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from .domain import DomainState, domain_to_spins, enumerate_domain_states
from .errors import BasisMismatchError, CapacityError, InvalidParameterError
from .params import DEFAULT_AMPLITUDE_BUDGET


def site_register_size(n_modes: int, cutoff: int) -> int:
    return (cutoff + 1) ** n_modes


def total_register_size(n_modes: int, cutoff: int) -> int:
    return math.comb(n_modes + cutoff, n_modes)


def _compositions(n_modes: int, total: int):
    """Occupation vectors of n_modes summing to total, ascending lexicographic."""
    if n_modes == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(n_modes - 1, total - first):
            yield (first,) + rest


class PhononRegister:
    """Enumerated Fock space over n_modes bosonic modes under a cutoff."""

    def __init__(self, n_modes: int, cutoff: int, scheme: str):
        if scheme not in ("site", "total"):
            raise InvalidParameterError(f"unknown phonon scheme {scheme!r}")
        if cutoff < 0:
            raise InvalidParameterError("cutoff must be >= 0")
        self.n_modes = n_modes
        self.cutoff = cutoff
        self.scheme = scheme
        if scheme == "site":
            self.size = site_register_size(n_modes, cutoff)
            base = cutoff + 1
            arr = np.arange(self.size, dtype=np.int64)
            occs = np.empty((self.size, n_modes), dtype=np.int8)
            for j in range(n_modes):
                # mode 1 is the most significant digit
                occs[:, n_modes - 1 - j] = (arr // base**j) % base
            self.occs = occs
            self._weights = np.array(
                [base ** (n_modes - 1 - j) for j in range(n_modes)], dtype=np.int64
            )
            self._index = None
        else:
            rows = []
            for t in range(cutoff + 1):
                rows.extend(_compositions(n_modes, t))
            self.occs = np.array(rows, dtype=np.int8)
            self.size = self.occs.shape[0]
            self._index = {tuple(int(x) for x in occ): i for i, occ in enumerate(self.occs)}
            self._weights = None
        self.occ_totals = self.occs.sum(axis=1).astype(np.int64)
        self._lowering_cache: dict[int, sp.csr_matrix] = {}

    def index(self, occ) -> int:
        occ = np.asarray(occ, dtype=np.int64)
        if self.scheme == "site":
            return int(occ @ self._weights)
        return self._index[tuple(int(x) for x in occ)]

    def indices_of(self, occs: np.ndarray) -> np.ndarray:
        if self.scheme == "site":
            return occs.astype(np.int64) @ self._weights
        return np.array([self._index[tuple(int(x) for x in o)] for o in occs], dtype=np.int64)

    def lowering(self, mode: int) -> sp.csr_matrix:
        """Annihilation operator of `mode` (1-based) over this register."""
        if mode in self._lowering_cache:
            return self._lowering_cache[mode]
        m = mode - 1
        sel = np.flatnonzero(self.occs[:, m] > 0)
        vals = np.sqrt(self.occs[sel, m].astype(float))
        to_occ = self.occs[sel].copy()
        to_occ[:, m] -= 1
        rows = self.indices_of(to_occ)
        mat = sp.csr_matrix((vals, (rows, sel)), shape=(self.size, self.size))
        self._lowering_cache[mode] = mat
        return mat

    def displacement(self, mode: int) -> sp.csr_matrix:
        """a + a^dagger for one mode (real symmetric)."""
        low = self.lowering(mode)
        return (low + low.T).tocsr()


class Basis:
    """Common surface of all indexed bases."""

    kind: str = ""
    dim: int = 0

    def describe(self) -> str:
        return f"{self.kind} basis, dim={self.dim}"

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Basis) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


def _check_capacity(dim: int, what: str, max_amplitudes: int | None):
    budget = DEFAULT_AMPLITUDE_BUDGET if max_amplitudes is None else max_amplitudes
    if dim > budget:
        raise CapacityError(
            f"{what} needs {dim} amplitudes, over the budget of {budget}; "
            "reduce n_sites or the phonon cutoff, or raise max_amplitudes"
        )


class SpinPhononBasis(Basis):
    """All 2^N spin strings tensored with a site-scheme Fock register."""

    kind = "spin-site"

    def __init__(self, n_sites: int, site_cutoff: int, max_amplitudes: int | None = None):
        spin_dim = 2**n_sites
        ph_size = site_register_size(n_sites, site_cutoff)
        _check_capacity(spin_dim * ph_size, f"spin basis N={n_sites}, cutoff={site_cutoff}", max_amplitudes)
        self.n_sites = n_sites
        self.spin_dim = spin_dim
        self.register = PhononRegister(n_sites, site_cutoff, "site")
        self.dim = spin_dim * self.register.size

    def _key(self):
        return (self.kind, self.n_sites, self.register.cutoff)

    def index(self, spin_bits: int, occ_index: int) -> int:
        return spin_bits * self.register.size + occ_index

    def spin_bits_of(self, spins) -> int:
        """Bitmask of a 0/1 spin array; site j maps to bit j-1."""
        spins = np.asarray(spins)
        return int(sum(int(s) << i for i, s in enumerate(spins)))

    def excitation_counts(self) -> np.ndarray:
        """Number of up spins for every spin bitmask."""
        s = np.arange(self.spin_dim, dtype=np.uint64)
        out = np.zeros(self.spin_dim, dtype=np.int64)
        for i in range(self.n_sites):
            out += ((s >> np.uint64(i)) & np.uint64(1)).astype(np.int64)
        return out

    def adjacent_pair_counts(self) -> np.ndarray:
        """Number of excited ring-adjacent pairs for every spin bitmask."""
        s = np.arange(self.spin_dim, dtype=np.int64)
        rot = (s >> 1) | ((s & 1) << (self.n_sites - 1))
        both = s & rot
        out = np.zeros(self.spin_dim, dtype=np.int64)
        for i in range(self.n_sites):
            out += (both >> i) & 1
        return out

    def site_masks(self) -> list[np.ndarray]:
        """For each site j (1-based order), the spin bitmasks with j excited."""
        s = np.arange(self.spin_dim, dtype=np.int64)
        return [np.flatnonzero((s >> (j - 1)) & 1) for j in range(1, self.n_sites + 1)]


class DomainPhononBasis(Basis):
    """Single-domain states tensored with a phonon register.

    scheme 'site': Fock modes attached to the physical lattice sites;
    scheme 'total': modes are the N Fourier modes with a total-number cutoff.
    """

    def __init__(self, n_sites: int, cutoff: int, scheme: str, max_amplitudes: int | None = None):
        domains = enumerate_domain_states(n_sites)
        if scheme == "site":
            ph_size = site_register_size(n_sites, cutoff)
        else:
            ph_size = total_register_size(n_sites, cutoff)
        _check_capacity(
            len(domains) * ph_size,
            f"domain basis N={n_sites}, scheme={scheme}, cutoff={cutoff}",
            max_amplitudes,
        )
        self.kind = f"domain-{scheme}"
        self.n_sites = n_sites
        self.domains = domains
        self.domain_index = {d: i for i, d in enumerate(domains)}
        self.register = PhononRegister(n_sites, cutoff, scheme)
        self.dim = len(domains) * self.register.size
        self.spin_table = np.array([domain_to_spins(d, n_sites) for d in domains], dtype=np.int8)

    def _key(self):
        return (self.kind, self.n_sites, self.register.cutoff)

    def index(self, domain: DomainState | int, occ_index: int) -> int:
        d = domain if isinstance(domain, int) else self.domain_index[domain]
        return d * self.register.size + occ_index


class RelativeBasis(Basis):
    """Relative-coordinate states of one CM-momentum block, with total-scheme phonons.

    form 'position' labels the relative coordinate 1..N-1 directly; form
    'diagonal' labels the sine modes k = 1..N-1 that diagonalize the hopping.
    An optional fixed_total restricts the register to one total phonon number.
    """

    def __init__(
        self,
        n_sites: int,
        q: int,
        form: str,
        total_cutoff: int,
        fixed_total: int | None = None,
        max_amplitudes: int | None = None,
    ):
        if form not in ("position", "diagonal"):
            raise InvalidParameterError(f"unknown relative form {form!r}")
        if not 1 <= q <= n_sites:
            raise InvalidParameterError(f"q must lie in 1..{n_sites}")
        full = PhononRegister(n_sites, total_cutoff, "total")
        if fixed_total is None:
            self.occs = full.occs
            self.occ_indices_in_parent = np.arange(full.size)
        else:
            if fixed_total > total_cutoff:
                raise InvalidParameterError("fixed_total exceeds total_cutoff")
            sel = np.flatnonzero(full.occ_totals == fixed_total)
            self.occs = full.occs[sel]
            self.occ_indices_in_parent = sel
        self.kind = f"relative-{form}" + ("" if fixed_total is None else "-fixed")
        self.n_sites = n_sites
        self.q = q
        self.form = form
        self.total_cutoff = total_cutoff
        self.fixed_total = fixed_total
        self.register = full
        self.n_labels = n_sites - 1
        self.ph_size = self.occs.shape[0]
        dim = self.n_labels * self.ph_size
        _check_capacity(dim, f"relative basis N={n_sites}, cutoff={total_cutoff}", max_amplitudes)
        self.dim = dim
        self.occ_totals = self.occs.sum(axis=1).astype(np.int64)

    def _key(self):
        return (self.kind, self.n_sites, self.q, self.total_cutoff, self.fixed_total)

    def index(self, label: int, occ_index: int) -> int:
        return (label - 1) * self.ph_size + occ_index

    def embedding_into(self, parent: "RelativeBasis") -> np.ndarray:
        """Indices of this basis's elements inside a superset basis."""
        if (
            parent.n_sites != self.n_sites
            or parent.q != self.q
            or parent.form != self.form
            or parent.fixed_total is not None
        ):
            raise BasisMismatchError("parent basis is not a superset of this one")
        occ_map = np.array(
            [parent.register.index(occ) for occ in self.occs], dtype=np.int64
        )
        out = np.empty(self.dim, dtype=np.int64)
        for lab in range(1, self.n_labels + 1):
            out[(lab - 1) * self.ph_size : lab * self.ph_size] = (lab - 1) * parent.ph_size + occ_map
        return out
