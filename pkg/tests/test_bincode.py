from __future__ import annotations

import numpy as np
import pytest

from muwm.bincode import (
    GF2m,
    BinaryCode,
    all_ones,
    augment_all_ones,
    bch_narrow_sense,
    coset_representatives,
    cyclotomic_coset,
    dual,
    extend,
    field_points,
    minimum_distance,
    mquwm_code,
    primitive_polynomial,
    psi,
    rm1,
    weight_set,
)
from muwm.errors import EvenModulus, NotSubcode, UnsupportedM


def test_cyclotomic_cosets():
    assert set(cyclotomic_coset(0, 7)) == {0}
    assert set(cyclotomic_coset(1, 7)) == {1, 2, 4}
    assert set(cyclotomic_coset(3, 7)) == {3, 5, 6}
    with pytest.raises(EvenModulus):
        cyclotomic_coset(1, 8)


def test_field_is_primitive():
    for m in range(2, 9):
        F = GF2m(m)
        n = (1 << m) - 1
        assert sorted(F.exp[i] for i in range(n)) == list(range(1, n + 1))
        # minimal polynomial of alpha is the pinned primitive polynomial
        assert F.minimal_polynomial(1) == primitive_polynomial(m)


def test_bch_small():
    b3 = bch_narrow_sense(3)
    assert b3.dimension == 1 and b3.generators == (all_ones(7),)
    b4 = bch_narrow_sense(4)
    assert b4.length == 15 and b4.dimension == 7
    assert minimum_distance(b4) >= 5
    assert dual(b3).dimension == 6


def test_dual_extend_augment_m3():
    ev = dual(bch_narrow_sense(3))
    assert weight_set(ev) == {0, 2, 4, 6}
    ext = extend(ev)
    assert all(not (w >> 7) & 1 for w in ext.codewords())
    aug = augment_all_ones(ext)
    assert aug.dimension == 7 and aug.size == 128
    assert weight_set(aug) == {0, 2, 4, 6, 8}
    # adjoining an existing word is a no-op
    assert augment_all_ones(aug).generators == aug.generators


@pytest.mark.parametrize("m", [3, 5])
def test_rm_is_subcode(m):
    assert mquwm_code(m).contains_code(rm1(m))


def test_rm_small():
    assert rm1(1).dimension == 2 and rm1(1).size == 4
    assert rm1(3).size == 16 and weight_set(rm1(3)) == {0, 4, 8}
    assert sorted(field_points(3)) == list(range(8))


def test_weight_set_m5():
    d, a = 32, 4
    assert weight_set(mquwm_code(5)) == {0, d // 2 - a, d // 2, d // 2 + a, d}


def test_coset_counts():
    C, D = mquwm_code(3), rm1(3)
    assert coset_representatives(D, D) == [0]
    reps = coset_representatives(C, D)
    assert len(reps) == 8 and reps[0] == 0
    assert len(coset_representatives(mquwm_code(5), rm1(5))) == 32
    with pytest.raises(NotSubcode):
        coset_representatives(D, C)


def test_reduce_is_coset_invariant():
    C, D = mquwm_code(3), rm1(3)
    for c in list(C.codewords())[:20]:
        r = D.reduce(c)
        for g in D.generators:
            assert D.reduce(c ^ g) == r


def test_psi():
    assert psi(0, 4).tolist() == [1, 1, 1, 1]
    assert psi(0b0101, 4).tolist() == [-1, 1, -1, 1]


def test_pipeline_params(binary3):
    assert binary3.family.size == 8
    assert binary3.family.params.as_tuple() == (8, 8, 4, 16)
    assert binary3.checks["weight_set"] == [0, 2, 4, 6, 8]


def test_pipeline_rejects_even_m():
    from muwm.bincode import binary_pipeline
    with pytest.raises(UnsupportedM):
        binary_pipeline(4)


def test_from_rows_reduces():
    C = BinaryCode.from_rows(4, [[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0]])
    assert C.dimension == 2
    assert np.array_equal(C.matrix().sum(axis=1) % 2, [0, 0])
