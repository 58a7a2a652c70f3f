from fractions import Fraction

import pytest

from cartancover.errors import DegreeVsCharacteristic
from cartancover.fields import GF, QQ
from cartancover.poly import (
    Poly,
    is_squarefree,
    nonsplit_witness,
    poly_gcd,
    roots_in_field,
    squarefree_no_guard,
    squarefree_part,
)


def P(field, *coeffs):
    return Poly(field, coeffs)


def test_canonical_form_strips_trailing_zeros():
    assert P(QQ, 1, 2, 0, 0).coeffs == (Fraction(1), Fraction(2))
    assert P(QQ, 0).is_zero()
    assert P(QQ, 0, 0, 3).degree == 2


def test_roots_x_squared_minus_one_over_q():
    roots, split = roots_in_field(P(QQ, -1, 0, 1))
    assert roots == ((Fraction(-1), 1), (Fraction(1), 1))
    assert split


def test_roots_x_squared_minus_two_over_q_not_split():
    roots, split = roots_in_field(P(QQ, -2, 0, 1))
    assert roots == ()
    assert not split


def test_roots_x_squared_minus_two_over_gf7():
    f = GF(7)
    roots, split = roots_in_field(P(f, -2, 0, 1))
    assert [(r.val, m) for r, m in roots] == [(3, 1), (4, 1)]
    assert split


def test_roots_with_multiplicity_and_rational_candidates():
    # (x - 1/2)^2 (x + 3)
    p = Poly.from_roots(QQ, [Fraction(1, 2), Fraction(1, 2), Fraction(-3)])
    roots, split = roots_in_field(p)
    assert dict(roots) == {Fraction(-3): 1, Fraction(1, 2): 2}
    assert split


def test_zero_root_is_found():
    roots, split = roots_in_field(P(QQ, 0, 0, 1, 1))  # x^2 (x + 1)
    assert dict(roots) == {Fraction(0): 2, Fraction(-1): 1}
    assert split


def test_is_squarefree_examples():
    assert is_squarefree(P(QQ, -1, 0, 1))
    assert not is_squarefree(P(QQ, 0, 0, 1))
    # (x-1)^2 (x-2), expanded
    p = Poly.from_roots(QQ, [1, 1, 2])
    assert not is_squarefree(p)


def test_is_squarefree_degree_guard_over_prime_field():
    f = GF(3)
    cubic = P(f, 1, 1, 0, 1)
    with pytest.raises(DegreeVsCharacteristic):
        is_squarefree(cubic)
    # the unguarded test still answers, and correctly
    assert squarefree_no_guard(P(f, 0, 2, 0, 1))  # x^3 - x = x(x-1)(x-2)
    assert not squarefree_no_guard(P(f, 0, 0, 0, 1))  # x^3


def test_squarefree_no_guard_detects_pth_powers():
    f = GF(3)
    # (x^2 + 1)^3 = x^6 + 1 over GF(3): derivative vanishes
    p = P(f, 1, 0, 0, 0, 0, 0, 1)
    assert p.derivative().is_zero()
    assert not squarefree_no_guard(p)
    assert squarefree_part(p) == P(f, 1, 0, 1)


def test_gcd_examples():
    p = Poly.from_roots(QQ, [1, 1, 2])
    q = Poly.from_roots(QQ, [1, 3])
    assert poly_gcd(p, q) == Poly.from_roots(QQ, [1])
    assert poly_gcd(p, p) == p.monic()


def test_nonsplit_witness_is_rootless_factor():
    p = Poly.from_roots(QQ, [2]) * P(QQ, -2, 0, 1)  # (x - 2)(x^2 - 2)
    w = nonsplit_witness(p)
    assert w == P(QQ, -2, 0, 1)
    assert (p % w).is_zero()


def test_division_identity():
    a = P(QQ, 3, -1, 0, 2, 5)
    b = P(QQ, -1, 1, 1)
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_poly_str_formatting():
    assert str(P(QQ, -2, 0, 1)) == "x^2 - 2"
    assert str(P(QQ, 0, 0, 1)) == "x^2"
    assert str(P(GF(7), 5, 0, 1)) == "x^2 + 5"
    assert str(P(QQ, Fraction(-1, 2), 1)) == "x - 1/2"


def test_evaluation_annihilates_roots():
    p = Poly.from_roots(QQ, [Fraction(2, 3), -1])
    assert p(Fraction(2, 3)) == 0
    assert p(-1) == 0
    assert p(0) != 0
