from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from muwm.bounds import (
    RationalPolynomial,
    annihilator,
    counting_bound,
    krawtchouk,
    krawtchouk_expansion,
    krawtchouk_orthogonality_defect,
    krawtchouk_value,
    stated_lp_coefficients,
    verify_lp_certificate,
)
from muwm.errors import DegenerateD, ExpansionMismatch


def projection_coefficients(poly, d):
    """Independent oracle: c_k = sum_z C(d,z) p(z) K_k(z) / (2^d C(d,k))."""
    return [sum(math.comb(d, z) * poly(z) * krawtchouk_value(k, d, z) for z in range(d + 1))
            / (2 ** d * math.comb(d, k)) for k in range(d + 1)]


def test_krawtchouk_small():
    assert krawtchouk(0, 8) == 1
    assert krawtchouk(1, 8) == RationalPolynomial([8, -2])
    assert krawtchouk(2, 8)(0) == 28


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 14).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, d),
                                                      st.integers(0, d))))
def test_krawtchouk_poly_matches_sum(args):
    d, k, z = args
    assert krawtchouk(k, d)(z) == krawtchouk_value(k, d, z)


def test_annihilator_values():
    for d in (8, 32, 128):
        a = annihilator(d)
        assert a(0) == 2 * d
        assert a(d) == 0 and a(Fraction(d, 2)) == 0
    with pytest.raises(DegenerateD):
        annihilator(2)


@pytest.mark.parametrize("d", [8, 18, 32, 50, 128])
def test_expansion_matches_projection(d):
    alpha = annihilator(d)
    coeffs = krawtchouk_expansion(alpha, d)
    proj = projection_coefficients(alpha, d)
    assert coeffs == proj[:5]
    assert all(c == 0 for c in proj[5:])


def test_expansion_closed_form():
    # c_0..c_3 agree with the printed values; the top one is 24/(d^2(d-2))
    for d in (8, 32, 128, 10, 12):
        c = krawtchouk_expansion(annihilator(d), d)
        assert c[:4] == stated_lp_coefficients(d)[:4]
        assert c[4] == Fraction(24, d * d * (d - 2))


@pytest.mark.parametrize("d", [8, 32, 128])
def test_lp_certificate(d):
    cert = verify_lp_certificate(d)
    assert cert.family_bound == d
    assert cert.conclusion == f"f <= {d}"
    assert cert.all_positive and cert.roots_vanish
    assert cert.code_size_bound == 2 * d * d
    assert cert.mismatches == [4]


def test_lp_strict_flags_difference():
    with pytest.raises(ExpansionMismatch):
        verify_lp_certificate(8, strict=True)


def test_lp_non_square_root_case():
    cert = verify_lp_certificate(10)
    assert cert.roots is None and cert.family_bound == 10


@pytest.mark.parametrize("d, f", [(6, 5), (7, 6), (2, 1), (10, 9)])
def test_counting_bound(d, f):
    assert counting_bound(d).family_bound == f


@pytest.mark.parametrize("d", range(1, 13))
def test_krawtchouk_orthogonality(d):
    for i in range(d + 1):
        for j in range(d + 1):
            assert krawtchouk_orthogonality_defect(d, i, j) == 0
