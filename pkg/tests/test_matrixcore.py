from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from muwm.errors import (
    BadEntry,
    BadParams,
    DimensionMismatch,
    InexactDivision,
    NonDiagonalProduct,
    NonSquareScale,
    NotMuwmParams,
    NotQuasiUnbiased,
    TooFewMembers,
    UnequalDiagonal,
)
from muwm.lattice import d_frames_family, weight4_maximum
from muwm.matrixcore import (
    FamilyParams,
    MatrixFamily,
    Verdict,
    canonical_family,
    canonical_rows,
    derive_muwm,
    derive_muwm_with_transpose,
    make_family,
    product_square_identity,
    quasi_unbiased_check,
    screen_parameters,
    verify_family,
    verify_weighing,
)

H2 = [[1, 1], [1, -1]]


def test_identity_and_hadamard():
    assert verify_weighing(np.eye(5, dtype=int)).weight == 1
    assert verify_weighing(H2).weight == 2


def test_binary_members_have_weight_8(binary3):
    assert all(verify_weighing(W.entries).weight == 8 for W in binary3.family)


@pytest.mark.parametrize("M, err", [
    ([[2, 0], [0, 2]], BadEntry),
    ([[1, 1], [1, 1]], NonDiagonalProduct),
    ([[1, 1], [0, 1]], NonDiagonalProduct),
    ([[1, 0], [0, 0]], UnequalDiagonal),
    ([[1, 0, 0], [0, 1, 0]], DimensionMismatch),
])
def test_verify_weighing_errors(M, err):
    with pytest.raises(err):
        verify_weighing(M)


def test_quasi_unbiased_examples(binary3):
    W = verify_weighing(H2)
    assert quasi_unbiased_check(W, W, 4)
    I3 = verify_weighing(np.eye(3, dtype=int))
    assert not quasi_unbiased_check(I3, I3, 4)
    A, B = binary3.family[0], binary3.family[1]
    assert quasi_unbiased_check(A, B, 16)
    with pytest.raises(NonSquareScale):
        quasi_unbiased_check(A, B, 8)
    with pytest.raises(DimensionMismatch):
        quasi_unbiased_check(W, I3, 1)


def test_params_validation():
    assert FamilyParams(8, 8, 4, 16).scale_root == 4
    assert FamilyParams.from_k_a(6, 2, 1).l == 4
    for bad in [(8, 8, 4, 15), (8, 8, 5, 16), (4, 8, 8, 8), (3, 6, 4, 9)]:
        with pytest.raises(BadParams):
            FamilyParams(*bad)


def test_family_rejects_bad_pair():
    # H4 H4^T = 4I has entries 16 after squaring, not in {0, 4}
    W = verify_weighing(np.kron(H2, H2))
    fam = MatrixFamily(FamilyParams(4, 4, 4, 4), (W, W))
    with pytest.raises(NotQuasiUnbiased) as info:
        verify_family(fam)
    assert info.value.pair == (0, 1)


def test_derive_muwm_binary(binary3):
    out = derive_muwm(binary3.family)
    assert out.size == 7
    assert out.params.as_tuple() == (8, 4, 4, 4)
    for W in out:
        assert W.weight == 4


def test_derive_muwm_two_members(binary3):
    fam = MatrixFamily(binary3.family.params, binary3.family.members[:2])
    out = derive_muwm(fam)
    assert out.size == 1 and out[0].weight == 4


def test_derive_errors():
    W = verify_weighing(H2)
    with pytest.raises(TooFewMembers):
        derive_muwm(MatrixFamily(FamilyParams(2, 2, 1, 4), (W,)))
    fam, _, _ = d_frames_family(4)
    with pytest.raises(InexactDivision):
        # W_i W_1^T has entries ±1 that a declared sqrt(a)=2 cannot divide
        derive_muwm(MatrixFamily(FamilyParams(4, 2, 1, 4), fam.members))
    with pytest.raises(NotMuwmParams):
        derive_muwm_with_transpose(fam)


def test_derive_with_transpose_e8():
    fam = weight4_maximum(8).family
    out = derive_muwm_with_transpose(fam)
    assert out.size == 14 and out.params.as_tuple() == (8, 4, 4, 4)
    verify_family(out, debug=True)


def test_derive_with_transpose_d6_pair():
    fam = weight4_maximum(6).family
    pair = MatrixFamily(fam.params, fam.members[:2])
    out = derive_muwm_with_transpose(pair)
    assert out.size == 2
    assert out[0] == pair[0].T
    expected = pair[1].entries @ pair[0].entries.T // 2
    assert np.array_equal(out[1].entries, expected)


def test_screening_examples():
    s = screen_parameters(7, 6, 9)
    assert s.verdict is Verdict.INFEASIBLE and s.rules == ["odd-order"]
    s = screen_parameters(7, 2, 1, size=9)
    assert s.verdict is Verdict.INFEASIBLE and "counting-bound" in s.rules
    assert screen_parameters(8, 8, 16, size=8).verdict is Verdict.UNKNOWN
    assert "lp-bound" in screen_parameters(8, 8, 16, size=9).rules
    assert "non-square-scale" in screen_parameters(8, 4, 2, size=2).rules
    assert screen_parameters(8, 3, 2).rules == ["precondition"]


def test_canonical_rows_identity_fixed():
    assert np.array_equal(canonical_rows(np.eye(4, dtype=int)), np.eye(4, dtype=int))


def test_parallel_verify_same_result(binary5):
    fam = binary5.family
    verify_family(fam, workers=4)
    bad = list(fam.members)
    bad[5], bad[6] = bad[5], verify_weighing(-bad[5].entries)
    with pytest.raises(NotQuasiUnbiased) as one:
        verify_family(MatrixFamily(fam.params, tuple(bad)), workers=1)
    with pytest.raises(NotQuasiUnbiased) as many:
        verify_family(MatrixFamily(fam.params, tuple(bad)), workers=4)
    assert one.value.pair == many.value.pair == (5, 6)


signed_perm = st.integers(2, 7).flatmap(
    lambda n: st.tuples(st.permutations(range(n)), st.lists(st.sampled_from([-1, 1]),
                                                             min_size=n, max_size=n)))


@settings(max_examples=60, deadline=None)
@given(signed_perm)
def test_signed_permutations_are_weight_one(ps):
    perm, signs = ps
    n = len(perm)
    M = np.zeros((n, n), dtype=int)
    M[range(n), perm] = signs
    W = verify_weighing(M)
    assert W.weight == 1
    assert product_square_identity(W, W)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_row_signs_and_order_preserve_family(binary3, data):
    fam = binary3.family
    perm = data.draw(st.permutations(range(8)))
    signs = np.array(data.draw(st.lists(st.sampled_from([-1, 1]), min_size=8, max_size=8)))
    moved = [W.entries[list(perm)] * signs[:, None] for W in fam.members]
    again = make_family(moved, fam.params)
    assert canonical_family(again) == canonical_family(fam)
