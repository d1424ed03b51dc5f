import itertools
from math import gcd, prod

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group
from sympy.matrices.normalforms import smith_normal_form

from naw.groups import (
    CapExceeded, abelian_group, abelian_invariants, center, check_group_axioms, commutator_subgroup,
    direct_product, e_group, e_relations, exponent, factorize, frattini_p, heisenberg_generators,
    heisenberg_group, is_special_p_group, iso_search, lift_generator, max_order_cap, quaternion_group,
    quotient, subgroup_generated, symbol_group,
)


def presentation_order(d, j):
    """Order of <a, b, c | E(d,j) relations> by Todd-Coxeter over the trivial subgroup."""
    F, a, b, c = free_group("a b c")
    rels = [a**d * c**-j, b**d * c**-j, c**d, a * c * a**-1 * c**-1, b * c * b**-1 * c**-1,
            a**-1 * b**-1 * a * b * c**-1]
    table = FpGroup(F, rels).coset_enumeration([], strategy="coset_table", max_cosets=20000)
    table.compress()
    return len(table.table)


@pytest.mark.parametrize("d,j", [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)])
def test_e_group_is_the_presented_group(d, j):
    # [DERIVED] coset enumeration gives |presented group|; our model satisfies the
    # relations and is generated by alpha, beta, so equal orders force an isomorphism
    G = e_group(d, j)
    assert presentation_order(d, j) == G.order == d**3
    assert all(e_relations(G, (1, 0, 0), (0, 1, 0), (0, 0, 1), j, d).values())
    assert subgroup_generated(G, [(1, 0, 0), (0, 1, 0)]).order == G.order


@pytest.mark.parametrize("d", range(1, 7))
def test_e_group_axioms_and_center(d):
    for j in range(d):
        G = e_group(d, j)
        assert check_group_axioms(G) == []
        assert center(G).members == {(0, 0, c) for c in range(d)}
        assert commutator_subgroup(G).members == center(G).members


def test_e_group_rejects_bad_parameters():
    with pytest.raises(ValueError):
        e_group(3, 3)
    with pytest.raises(ValueError):
        e_group(0, 0)


def test_quaternion_and_dihedral():
    # [TRIVIAL] Q8 has one involution, D8 has five
    Q = quaternion_group()
    assert sum(1 for o in Q.element_orders.values() if o == 2) == 1
    assert iso_search(e_group(2, 1), Q) is not None
    assert iso_search(e_group(2, 0), Q) is None
    assert sum(1 for o in e_group(2, 0).element_orders.values() if o == 2) == 5


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_e0_is_heisenberg(d):
    iso = iso_search(e_group(d, 0), heisenberg_group(1, d))
    assert iso is not None
    assert all(iso(a) is not None for a in e_group(d, 0).elements)


@pytest.mark.parametrize("n,d", [(1, 2), (1, 3), (2, 2), (2, 3), (1, 4)])
def test_heisenberg_structure(n, d):
    H = heisenberg_group(n, d)
    assert H.order == d ** (2 * n + 1)
    assert check_group_axioms(H) == []
    alphas, betas, gamma = heisenberg_generators(n, d)
    assert center(H).members == {H.power(gamma, k) for k in range(d)}
    for i, a in enumerate(alphas):
        for k, b in enumerate(betas):
            assert H.commutator(a, b) == (gamma if i == k else H.identity)


def test_symbol_group_commutator_is_central_scalar():
    # [phi(1/d), phi(i/d)] acts by a fibre scalar of order d
    for d in (2, 3, 4):
        S = symbol_group(d)
        x, y = ((1, 0), 0), ((0, 1), 0)
        c = S.commutator(x, y)
        assert c[0] == (0, 0) and S.order_of(c) == d
        assert check_group_axioms(S) == []


def smith_invariants(ns):
    m = smith_normal_form(Matrix.diag(*ns), domain=ZZ)
    return tuple(sorted(abs(int(m[i, i])) for i in range(len(ns)) if abs(int(m[i, i])) > 1))


@given(st.lists(st.integers(1, 12), min_size=1, max_size=3).filter(lambda ns: prod(ns) <= 600))
def test_abelian_invariants_match_smith_form(ns):
    # [DERIVED] sympy Smith normal form as oracle
    assert abelian_invariants(abelian_group(*ns)) == smith_invariants(ns)


@given(st.integers(2, 400))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert all(p > 1 and all(p % q for q in range(2, int(p**0.5) + 1)) for p in f)
    assert prod(p**e for p, e in f.items()) == n


@given(st.integers(1, 60), st.integers(0, 200))
def test_lift_generator(m, z):
    g = lift_generator(m, z)
    z %= m
    r = m // gcd(m, z) if z else 1
    assert gcd(g, m) == 1 and (m // r) * g % m == z


@given(st.sampled_from([(2, 0), (2, 1), (3, 1), (4, 3), (5, 2)]), st.data())
def test_e_group_random_triples_associate(dj, data):
    d, j = dj
    G = e_group(d, j)
    el = st.sampled_from(G.elements)
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
    assert G.mul(x, G.inv(x)) == G.identity


def test_special_p_group_detection():
    assert is_special_p_group(e_group(3, 0), 3).special
    assert is_special_p_group(e_group(2, 1), 2).special
    assert is_special_p_group(abelian_group(2, 2, 2), 2).elementary_abelian
    assert not is_special_p_group(abelian_group(4), 2).special
    assert not is_special_p_group(e_group(4, 0), 2).special


def test_frattini_and_exponent():
    G = e_group(3, 1)
    assert frattini_p(G, 3).members == center(G).members
    assert exponent(G) == 9
    assert exponent(e_group(3, 0)) == 3


def test_quotient_by_center():
    G = e_group(4, 1)
    Q = quotient(G, center(G))
    assert Q.order == 16 and Q.is_abelian
    assert abelian_invariants(Q) == (4, 4)


def test_direct_product_and_iso_negative():
    P = direct_product(abelian_group(2), abelian_group(4))
    assert iso_search(P, abelian_group(2, 4)) is not None
    assert iso_search(P, abelian_group(8)) is None


def test_cap_env(monkeypatch):
    monkeypatch.setenv("NAW_MAX_ORDER", "10")
    assert max_order_cap() == 10
    monkeypatch.delenv("NAW_MAX_ORDER")
    assert max_order_cap() == 4096
    assert issubclass(CapExceeded, RuntimeError)


def test_order_profile_distinguishes_e_groups():
    for d in (3, 5):
        a = sorted(e_group(d, 0).element_orders.values())
        b = sorted(e_group(d, 1).element_orders.values())
        assert a != b
    assert list(itertools.islice(e_group(3, 0).elements, 1)) == [(0, 0, 0)]
