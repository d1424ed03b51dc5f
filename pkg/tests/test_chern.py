import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from naw.chern import (
    GradedClass, Line, PiG, Pullback, TensorProd, assemble_pi_g, chi_of_multiset, exp_class,
    lemma46_solve, lemma46_verify, psi, pullback_eps, realize_class, subsets, sum_omega_power_identity,
    triviality_preconditions,
)
from naw.waring import build_multiset, capped_N, delta_schedule


def mobius_coefficients(n, g):
    """Oracle: coefficients of the multilinear P = sum_J prod_{j in J}(1 + g_J(j) x_j),
    recovered from its values on {0,1}^n by Mobius inversion."""
    def P(S):
        total = 0
        for J, vals in g.items():
            v = 1
            for j, a in zip(J, vals):
                if j in S:
                    v *= 1 + a
            total += v
        return total
    out = {}
    for I in subsets(n, nonempty=False):
        out[I] = sum((-1) ** (len(I) - len(S)) * P(set(S))
                     for k in range(len(I) + 1) for S in itertools.combinations(I, k))
    return out


@st.composite
def lemma_inputs(draw, modular=False):
    n = draw(st.integers(1, 5))
    q = draw(st.integers(2, 97)) if modular else None
    f = {I: draw(st.integers(-1000, 1000)) for I in subsets(n)}
    return n, f, q


@given(lemma_inputs())
def test_lemma46_over_Z(inp):
    n, f, _ = inp
    g = lemma46_solve(n, f)
    assert lemma46_verify(n, f, g).ok
    coeffs = mobius_coefficients(n, g)
    assert coeffs[()] == 2**n - 1
    assert all(coeffs[I] == f[I] for I in subsets(n))


@given(lemma_inputs(modular=True))
def test_lemma46_over_Zq(inp):
    n, f, q = inp
    g = lemma46_solve(n, f, modulus=q)
    assert lemma46_verify(n, f, g, modulus=q).ok
    coeffs = mobius_coefficients(n, g)
    assert all((coeffs[I] - f[I]) % q == 0 for I in subsets(n))


def test_lemma46_verify_catches_errors():
    f = {(1,): 3, (2,): 0, (1, 2): 5}
    g = lemma46_solve(2, f)
    g[(1, 2)] = (g[(1, 2)][0], g[(1, 2)][1] + 1)
    assert not lemma46_verify(2, f, g).ok


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 6) for k in range(0, n + 2)])
def test_sum_omega_power(n, k):
    assert sum_omega_power_identity(n, k)


def test_square_zero():
    w = GradedClass.omega(3, 1)
    assert (w * w).coeffs == {}
    assert (GradedClass.omega_sum(3) ** 4).coeffs == {}


@given(st.integers(1, 4), st.lists(st.integers(-5, 5), min_size=4, max_size=4),
       st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_exp_is_multiplicative(n, a, b):
    x = GradedClass(n, {(i,): a[i - 1] for i in range(1, n + 1)})
    y = GradedClass(n, {(i,): b[i - 1] for i in range(1, n + 1)})
    assert exp_class(x + y) == exp_class(x) * exp_class(y)


def test_line_bundle_arithmetic():
    n = 2
    L = Line(GradedClass.omega_sum(n, 3))
    assert L.power(2).ch == exp_class(GradedClass.omega_sum(n, 6))
    assert TensorProd([psi(n, 1), psi(n, 2)]).ch == exp_class(GradedClass.omega_sum(n))
    assert Pullback(2, psi(n, 1)).ch == pullback_eps(2, psi(n, 1).ch)


@given(st.integers(1, 4), st.data())
def test_realize_class(n, data):
    gamma = GradedClass(n, {I: data.draw(st.integers(-50, 50)) for I in subsets(n)})
    E = realize_class(n, gamma)
    assert E.rank == 2**n - 1
    assert (E.ch - gamma).in_degree_zero()


def test_realize_class_rejects_fractions():
    with pytest.raises(ValueError):
        realize_class(1, GradedClass(1, {(1,): Fraction(1, 2)}))


def test_chi_divisibility_enforced():
    with pytest.raises(ValueError):
        chi_of_multiset(1, 2, [1])
    chi = chi_of_multiset(1, 2, [1, 1, -2, 0])
    assert chi.coeffs.get((1,), 0) == 0


def test_frozen_small_cases():
    # [DERIVED] from the multiset pipeline
    ms = build_multiset(1, 1, delta_schedule(1, 2))
    assert ms.entries == [-1, 1]
    pi = assemble_pi_g(1, 1, 2, ms.entries)
    assert pi.rank == 3 and pi.realized_rank == 3
    assert pi.ch.in_degree_zero()
    opt = assemble_pi_g(1, 1, 2, ms.entries, optimize=True)
    assert opt.optimized and opt.rank == 2 and opt.ch.in_degree_zero()
    assert opt.chi == GradedClass.const(1, -2)
    ms2 = build_multiset(2, 1, delta_schedule(2, 2))
    assert len(ms2.entries) == capped_N(2, 1) == 18
    assert assemble_pi_g(2, 1, 2, ms2.entries).rank == 20


def test_pig_requires_multiplicity():
    with pytest.raises(ValueError):
        PiG(1, 2, 2, [-1, 1])


def test_triviality_preconditions():
    assert triviality_preconditions(2, 20, GradedClass.const(2, 20)).ok
    assert not triviality_preconditions(2, 1, GradedClass.const(2, 1)).ok
    assert not triviality_preconditions(1, 3, GradedClass.omega(1, 1)).ok
