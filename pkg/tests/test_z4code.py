from __future__ import annotations

import numpy as np
import pytest

from muwm.bincode import field_points, primitive_polynomial, rm1, word_to_bits
from muwm.errors import UnsupportedM
from muwm.z4code import (
    Z4Code,
    Z4Polynomial,
    correlation,
    correlation_spectrum,
    coset_representatives,
    divides_x_n_minus_1,
    gray,
    gray_nonlinearity_witness,
    gray_points,
    hensel_lift_primitive,
    kerdock,
    lee_weight,
    psi_gray,
    zrm1,
)


def test_polynomial_arithmetic():
    p = Z4Polynomial((1, 1))      # 1 + x
    q = Z4Polynomial((3, 1))      # x - 1
    assert (p * q).coefficients == (3, 0, 1)
    quo, rem = Z4Polynomial((3, 0, 1)).divmod(q)
    assert quo == p and rem.degree < 0


@pytest.mark.parametrize("m, expected", [(2, (1, 1, 1)), (3, (3, 1, 2, 1))])
def test_hensel_lift(m, expected):
    h = hensel_lift_primitive(m)
    assert h.coefficients == expected
    assert h.mod2() == primitive_polynomial(m)
    assert divides_x_n_minus_1(h, (1 << m) - 1)


def test_other_lift_candidate_does_not_divide():
    # x^2 + 3x + 1 reduces to x^2 + x + 1 but is not a divisor of x^3 - 1 over Z4
    assert not divides_x_n_minus_1(Z4Polynomial((1, 3, 1)), 3)


@pytest.mark.parametrize("m", range(2, 7))
def test_lift_reduces(m):
    assert hensel_lift_primitive(m).mod2() == primitive_polynomial(m)


@pytest.mark.parametrize("m, size, n", [(2, 64, 4), (3, 256, 8)])
def test_kerdock_size(m, size, n):
    K = kerdock(m)
    assert K.length == n and K.size == size
    words = K.codewords()
    assert len({tuple(w) for w in words.tolist()}) == size
    assert K.contains_code(zrm1(m))


def test_zrm_small():
    Z = zrm1(1)
    assert Z.length == 2 and Z.size == 8
    assert (1, 1) in Z and (0, 2) in Z


def test_gray_of_zrm2_is_rm3():
    pts = gray_points(field_points(2), 2)
    images = {tuple(r) for r in gray(zrm1(2).codewords()).tolist()}
    rm = {tuple(word_to_bits(w, 8)) for w in rm1(3, points=pts).codewords()}
    assert images == rm


def test_gray_values():
    assert gray([1, 3]).tolist() == [0, 1, 1, 0]
    assert gray([0, 0, 0]).tolist() == [0] * 6
    assert lee_weight([1, 2, 3, 0]) == 4


def test_spectrum_kerdock3():
    spec = correlation_spectrum(kerdock(3))
    corners = {(x, y) for x in (2, -2) for y in (2, -2)}
    assert spec == {(8, 0), (-8, 0), (0, 8), (0, -8), (0, 0)} | corners
    assert correlation([0, 1, 2, 3]) == (0, 0)


@pytest.mark.parametrize("m", [2, 3])
def test_cosets_are_cross_polytopes(m):
    K, Z = kerdock(m), zrm1(m)
    reps = coset_representatives(K, Z)
    assert len(reps) == K.size // Z.size
    sub = Z.codewords()
    n = 2 * K.length
    for u in reps:
        V = psi_gray((np.array(u) + sub) % 4)
        G = V @ V.T
        assert np.isin(G, (0, n, -n)).all()
        assert ((G == -n).sum(axis=1) == 1).all()


def test_nonlinear_gray_image():
    x, y = gray_nonlinearity_witness(kerdock(3))
    images = {tuple(r) for r in gray(kerdock(3).codewords()).tolist()}
    s = tuple((gray(x) ^ gray(y)).tolist())
    assert s not in images


def test_z4_pipeline_measured(z4_2, z4_3):
    assert z4_2.family.size == 4 and z4_2.family.params.as_tuple() == (8, 8, 4, 16)
    assert z4_3.family.size == 8 and z4_3.family.params.as_tuple() == (16, 16, 16, 16)
    assert set(z4_3.checks["inner_products"]) <= {0, 4, -4, -16}
    assert z4_3.checks["cosets_are_cross_polytopes"]


def test_standard_form_type():
    # the third row is twice the first
    C = Z4Code.from_rows(3, [[1, 0, 2], [0, 2, 2], [2, 0, 0]])
    assert (C.k1, C.k2) == (1, 1)
    assert C.size == 8 == len(C.codewords())


def test_kerdock_needs_m2():
    with pytest.raises(UnsupportedM):
        kerdock(1)
