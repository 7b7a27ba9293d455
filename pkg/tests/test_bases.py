import numpy as np
import pytest

from facryd.bases import (
    DomainPhononBasis,
    PhononRegister,
    RelativeBasis,
    SpinPhononBasis,
    site_register_size,
    total_register_size,
)
from facryd.errors import BasisMismatchError, CapacityError, InvalidParameterError


@pytest.mark.parametrize("scheme,n,cutoff", [("site", 4, 2), ("total", 5, 2)])
def test_register_index_is_a_bijection(scheme, n, cutoff):
    reg = PhononRegister(n, cutoff, scheme)
    expected = site_register_size(n, cutoff) if scheme == "site" else total_register_size(n, cutoff)
    assert reg.size == expected
    seen = set()
    for i, occ in enumerate(reg.occs):
        j = reg.index(occ)
        assert j == i
        seen.add(tuple(int(x) for x in occ))
    assert len(seen) == reg.size


def test_total_register_respects_cutoff():
    reg = PhononRegister(5, 2, "total")
    assert reg.occ_totals.max() == 2
    assert reg.size == 21


def test_lowering_matrix_elements():
    reg = PhononRegister(3, 2, "site")
    low = reg.lowering(2).toarray()
    occ = reg.index(np.array([0, 2, 0]))
    target = reg.index(np.array([0, 1, 0]))
    assert low[target, occ] == pytest.approx(np.sqrt(2.0))
    # annihilating an empty mode gives nothing
    vac = reg.index(np.zeros(3, dtype=int))
    assert not low[:, vac].any()


def test_capacity_errors_raise_before_allocation():
    with pytest.raises(CapacityError):
        SpinPhononBasis(21, 2)  # 2^21 * 3^21 amplitudes
    with pytest.raises(CapacityError):
        DomainPhononBasis(21, 2, "site")
    with pytest.raises(CapacityError):
        RelativeBasis(5, 1, "position", 1, max_amplitudes=10)


def test_spin_basis_bit_convention():
    basis = SpinPhononBasis(5, 0)
    bits = basis.spin_bits_of([1, 0, 0, 1, 0])
    assert bits == 0b01001
    assert basis.excitation_counts()[bits] == 2
    assert basis.adjacent_pair_counts()[basis.spin_bits_of([1, 1, 0, 1, 1])] == 3  # ring pair (5,1) counts


def test_relative_basis_embedding_roundtrip():
    parent = RelativeBasis(5, 2, "diagonal", 2)
    sub = RelativeBasis(5, 2, "diagonal", 2, fixed_total=1)
    emb = sub.embedding_into(parent)
    assert emb.size == sub.dim
    # embedded occupations agree elementwise
    for i_sub, i_par in enumerate(emb):
        lab_sub, occ_sub = divmod(i_sub, sub.ph_size)
        lab_par, occ_par = divmod(int(i_par), parent.ph_size)
        assert lab_sub == lab_par
        assert np.array_equal(sub.occs[occ_sub], parent.register.occs[occ_par])
    with pytest.raises(BasisMismatchError):
        sub.embedding_into(RelativeBasis(5, 1, "diagonal", 2))


def test_basis_equality_by_parameters():
    assert SpinPhononBasis(5, 1) == SpinPhononBasis(5, 1)
    assert SpinPhononBasis(5, 1) != SpinPhononBasis(5, 0)
    assert DomainPhononBasis(5, 1, "site") != DomainPhononBasis(5, 1, "total")


def test_unknown_scheme_rejected():
    with pytest.raises(InvalidParameterError):
        PhononRegister(3, 1, "per-bond")
