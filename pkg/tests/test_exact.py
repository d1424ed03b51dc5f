import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from naw.exact import (
    Cyclotomic, LaurentMat2, LaurentPoly, Torsion, common_conductor, cyclotomic_polynomial, mat2_det,
    star,
)


@pytest.mark.parametrize("q", list(range(1, 41)) + [64, 72, 105])
def test_cyclotomic_polynomial_matches_sympy(q):
    # [DERIVED] sympy is the oracle
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(q, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(q)) == [int(c) for c in expected]


def test_torsion_reduction():
    assert Torsion(5, 4) == Torsion(1, 4)
    assert Torsion(-1, 3).value == Fraction(2, 3)
    assert Torsion(1, 6).order() == 6
    assert not Torsion(3, 3)


@given(st.integers(-50, 50), st.integers(1, 30), st.integers(-50, 50), st.integers(1, 30))
def test_torsion_is_a_group(a, b, c, d):
    x, y = Torsion(a, b), Torsion(c, d)
    assert x + y == y + x
    assert x + (-x) == Torsion(0)
    assert (x + y).value == Fraction(a, b) + Fraction(c, d) - ((Fraction(a, b) + Fraction(c, d)) // 1)


def _cyc(q, draw_coeffs):
    return Cyclotomic(q, dict(enumerate(draw_coeffs)))


coeff_lists = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), max_size=8)


@given(st.sampled_from([3, 4, 5, 8, 9, 12, 15]), coeff_lists, coeff_lists)
def test_cyclotomic_embedding_is_a_ring_hom(q, u, v):
    x, y = _cyc(q, u), _cyc(q, v)
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-9
    assert abs((x + y).to_complex() - x.to_complex() - y.to_complex()) < 1e-9
    assert abs(x.conjugate().to_complex() - x.to_complex().conjugate()) < 1e-9


@given(st.sampled_from([3, 4, 5, 7, 8, 12]), coeff_lists)
def test_cyclotomic_inverse(q, u):
    x = _cyc(q, u)
    if x.is_zero():
        with pytest.raises(ZeroDivisionError):
            x.inverse()
    else:
        assert x * x.inverse() == Cyclotomic.rational(q, 1)


def test_zeta_powers():
    for q in (2, 3, 4, 6, 10, 12):
        z = Cyclotomic.zeta(q)
        assert z**q == Cyclotomic.rational(q, 1)
        assert all(z**k != Cyclotomic.rational(q, 1) for k in range(1, q))
        assert abs(z.to_complex() - cmath.exp(2j * cmath.pi / q)) < 1e-12
    # 1 + zeta + ... + zeta^(p-1) = 0 for prime p
    s = sum((Cyclotomic.zeta(7, k) for k in range(7)), Cyclotomic.rational(7, 0))
    assert s.is_zero()


def _poly(q, terms):
    return LaurentPoly(q, {(a, b): c for a, b, c in terms})


laurent_terms = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-4, 4)), max_size=5)
points = st.tuples(st.floats(0, 6.283), st.floats(0, 6.283))


@given(laurent_terms, laurent_terms, points)
def test_laurent_evaluation_is_multiplicative(t1, t2, pt):
    q = 4
    p1, p2 = _poly(q, t1), _poly(q, t2)
    tau, theta = cmath.exp(1j * pt[0]), cmath.exp(1j * pt[1])
    assert abs((p1 * p2).evaluate(tau, theta) - p1.evaluate(tau, theta) * p2.evaluate(tau, theta)) < 1e-8


@given(laurent_terms, points)
def test_star_is_conjugation_on_the_torus(t, pt):
    p = _poly(6, t)
    tau, theta = cmath.exp(1j * pt[0]), cmath.exp(1j * pt[1])
    assert abs(p.star().evaluate(tau, theta) - p.evaluate(tau, theta).conjugate()) < 1e-9


@given(laurent_terms, points)
def test_substitution_matches_evaluation(t, pt):
    q = 8
    p = _poly(q, t)
    z = Cyclotomic.zeta(q, 3)
    sub_tau = LaurentPoly.monomial(q, 1, 0, z)                   # tau -> zeta^3 tau
    sub_theta = LaurentPoly.monomial(q, 0, -1)                   # theta -> theta^-1
    tau, theta = cmath.exp(1j * pt[0]), cmath.exp(1j * pt[1])
    lhs = p.substitute(sub_tau, sub_theta).evaluate(tau, theta)
    rhs = p.evaluate(z.to_complex() * tau, 1 / theta)
    assert abs(lhs - rhs) < 1e-8


def test_monomial_inverse_only():
    q = 4
    m = LaurentPoly.monomial(q, 2, -1, Cyclotomic.zeta(q))
    assert m * m.inverse() == LaurentPoly.const(q, 1)
    with pytest.raises(ValueError):
        (LaurentPoly.tau(q) + 1).inverse()


def test_matrix_inverse_and_det():
    q = 4
    t, th = LaurentPoly.tau(q), LaurentPoly.theta(q)
    M = LaurentMat2(q, t, th, 0, t**-1)
    assert mat2_det(M) == LaurentPoly.const(q, 1)
    assert M * M.inverse() == LaurentMat2.identity(q)
    assert M**-2 * M**2 == LaurentMat2.identity(q)
    assert star(star(M)) == M


def test_common_conductor():
    assert common_conductor(4, 6) == 12
    assert common_conductor() == 1
