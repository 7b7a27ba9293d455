"""Single-domain sector of the facilitated chain.

A contiguous block of excitations on a ring of N sites (N odd) is labelled by
its centre-of-mass index c in 1..N, a relative-size index r in 1..(N-1)/2 and
a parity tag: 'o' blocks hold 2r-1 excitations and sit on a lattice site,
'e' blocks hold 2r and sit on a bond (centre c - 1/2). Facilitation moves
grow or shrink a block by one site at either wall, so each state couples to
at most four others.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NotInSectorError

PARITY_ODD = "o"
PARITY_EVEN = "e"


@dataclass(frozen=True, order=True)
class DomainState:
    """One admissible spin domain in (c, r, parity) coordinates."""

    cm_index: int
    rel_index: int
    parity: str

    @property
    def exc_count(self) -> int:
        return 2 * self.rel_index - 1 if self.parity == PARITY_ODD else 2 * self.rel_index

    @property
    def cm_position(self) -> float:
        return float(self.cm_index) if self.parity == PARITY_ODD else self.cm_index - 0.5

    def __repr__(self):
        return f"DomainState({self.cm_index},{self.rel_index},{self.parity})"


def _check_n(n: int):
    if n < 3 or n % 2 == 0:
        raise InvalidParameterError(f"n_sites must be odd and >= 3, got {n}")


def _wrap(c: int, n: int) -> int:
    """Ring arithmetic for the CM index, into 1..n."""
    return (c - 1) % n + 1


def is_admissible(s: DomainState, n: int) -> bool:
    return (
        s.parity in (PARITY_ODD, PARITY_EVEN)
        and 1 <= s.cm_index <= n
        and 1 <= s.rel_index <= (n - 1) // 2
    )


def enumerate_domain_states(n: int) -> list[DomainState]:
    """All admissible domains on the ring, ordered by (parity, r, c); o < e.

    The count is n*(n-1): n CM positions per parity times (n-1)/2 relative
    indices times two parities.
    """
    _check_n(n)
    states = []
    for parity in (PARITY_ODD, PARITY_EVEN):
        for r in range(1, (n - 1) // 2 + 1):
            for c in range(1, n + 1):
                states.append(DomainState(c, r, parity))
    return states


def domain_to_spins(s: DomainState, n: int) -> np.ndarray:
    """Spin string (1 = excited) of length n for a domain, with wraparound."""
    _check_n(n)
    if not is_admissible(s, n):
        raise InvalidParameterError(f"{s} is not admissible for n={n}")
    spins = np.zeros(n, dtype=np.int8)
    if s.parity == PARITY_ODD:
        left = s.cm_index - (s.rel_index - 1)
    else:
        left = s.cm_index - s.rel_index
    for k in range(s.exc_count):
        spins[(_wrap(left + k, n)) - 1] = 1
    return spins


def spins_to_domain(spins) -> DomainState:
    """Inverse of domain_to_spins; rejects anything but a single ring block."""
    spins = np.asarray(spins, dtype=np.int8)
    n = spins.size
    _check_n(n)
    exc = int(spins.sum())
    if exc == 0 or exc == n:
        raise NotInSectorError(f"spin string has {exc} excitations, no domain walls")
    walls = int(np.abs(spins - np.roll(spins, -1)).sum())
    if walls != 2:
        raise NotInSectorError(f"spin string has {walls} domain walls, expected 2")
    # start of the block: a down site followed by an up site
    ups = np.flatnonzero(spins)
    if spins[0] and spins[-1]:  # block wraps through the ring seam
        gap = np.flatnonzero(spins == 0)
        start = (gap[-1] + 1) % n
    else:
        start = ups[0]
    left = start + 1  # 1-based site index of the leftmost excitation
    if exc % 2 == 1:
        r = (exc + 1) // 2
        c = _wrap(left + (exc - 1) // 2, n)
        return DomainState(c, r, PARITY_ODD)
    r = exc // 2
    c = _wrap(left + exc // 2, n)  # CM sits at c - 1/2
    return DomainState(c, r, PARITY_EVEN)


def facilitated_neighbors(s: DomainState, n: int) -> list[DomainState]:
    """States reachable by one resonant spin flip (grow/shrink at either wall)."""
    if not is_admissible(s, n):
        raise InvalidParameterError(f"{s} is not admissible for n={n}")
    c, r = s.cm_index, s.rel_index
    r_max = (n - 1) // 2
    out = []
    if s.parity == PARITY_ODD:
        # grow: 2r-1 -> 2r excitations
        out.append(DomainState(c, r, PARITY_EVEN))
        out.append(DomainState(_wrap(c + 1, n), r, PARITY_EVEN))
        if r > 1:  # shrink: 2r-1 -> 2r-2
            out.append(DomainState(_wrap(c + 1, n), r - 1, PARITY_EVEN))
            out.append(DomainState(c, r - 1, PARITY_EVEN))
    else:
        if r < r_max:  # grow: 2r -> 2r+1
            out.append(DomainState(_wrap(c - 1, n), r + 1, PARITY_ODD))
            out.append(DomainState(c, r + 1, PARITY_ODD))
        # shrink: 2r -> 2r-1
        out.append(DomainState(c, r, PARITY_ODD))
        out.append(DomainState(_wrap(c - 1, n), r, PARITY_ODD))
    return out


def wall_sites(s: DomainState, n: int) -> tuple[int, int]:
    """Physical sites (1-based) whose displacement couples to the domain.

    These are the leftmost and rightmost excited sites; the telescoping of
    the pair interaction over the block leaves only its two edges.
    """
    c, r = s.cm_index, s.rel_index
    if s.parity == PARITY_ODD:
        return _wrap(c - r + 1, n), _wrap(c + r - 1, n)
    return _wrap(c - r, n), _wrap(c + r - 1, n)
