import pytest
from hypothesis import given, strategies as st

from naw.central import (
    SnmCertificate, central_product, chain_certificate, cyclic_spec, embed_left, embed_right,
    heisenberg_decomposition, in_A_md, internal_central_product_check, is_maximal_central_iso,
    make_iso, maximal_amalgamation, order_bound_check, rebuild, snm_verify,
    special_decomposition_search, CentralProductSpec,
)
from naw.groups import (
    abelian_group, e_group, heisenberg_group, iso_search, quaternion_group, subgroup_generated,
)

GAMMA = (0, 0, 1)


def cp(G1, z1, G2, z2):
    return central_product(cyclic_spec(G1, z1, G2, z2))


def test_extraspecial_32_types():
    # [DERIVED] D8*D8 = Q8*Q8 (plus type) while D8*Q8 is the other extraspecial group of order 32
    D, Q = e_group(2, 0), e_group(2, 1)
    DD, QQ, DQ = cp(D, GAMMA, D, GAMMA), cp(Q, GAMMA, Q, GAMMA), cp(D, GAMMA, Q, GAMMA)
    assert DD.order == QQ.order == DQ.order == 32
    assert iso_search(DD, QQ) is not None
    assert iso_search(DD, DQ) is None


@pytest.mark.parametrize("d", [2, 3])
def test_heisenberg_5_is_central_product(d):
    E = e_group(d, 0)
    assert iso_search(cp(E, GAMMA, E, GAMMA), heisenberg_group(2, d)) is not None


@given(st.sampled_from([(2, 0), (2, 1), (3, 0), (3, 2), (4, 1), (4, 0)]),
       st.sampled_from([2, 3, 4, 6]), st.integers(0, 5), st.integers(0, 5))
def test_central_product_order_and_center(dj, n, c, a):
    d, j = dj
    G1, G2 = e_group(d, j), abelian_group(n)
    z1, z2 = (0, 0, c % d), (a % n,)
    o1, o2 = G1.order_of(z1), G2.order_of(z2)
    if o1 != o2:
        with pytest.raises(ValueError):
            cyclic_spec(G1, z1, G2, z2)
        return
    C = cp(G1, z1, G2, z2)
    assert C.order == G1.order * G2.order // o1
    assert C.center.order == G1.center.order * G2.center.order // o1
    # the two factors commute inside C and generate it
    for g in G1.gens:
        for h in G2.gens:
            x, y = embed_left(C, g), embed_right(C, h)
            assert C.mul(x, y) == C.mul(y, x)
    assert embed_left(C, z1) == embed_right(C, z2)


def test_noncentral_amalgamation_rejected():
    E = e_group(2, 0)
    spec = CentralProductSpec(E, E, make_iso(E, [(1, 0, 0)], E, [(1, 0, 0)]))
    with pytest.raises(ValueError):
        central_product(spec)


def test_maximality():
    E4 = e_group(4, 0)
    half = cyclic_spec(E4, (0, 0, 2), E4, (0, 0, 2))
    v = is_maximal_central_iso(half)
    assert not v.ok and v.details["witness"] is not None
    assert is_maximal_central_iso(cyclic_spec(E4, GAMMA, E4, GAMMA)).ok
    A = abelian_group(2, 2)
    # Z(E(2,0)) = Z_2 is exhausted, so identifying it with one factor of A is maximal
    assert is_maximal_central_iso(cyclic_spec(e_group(2, 0), GAMMA, A, (1, 0))).ok


def test_maximal_amalgamation_is_deterministic_and_maximal():
    G1, G2 = e_group(4, 1), abelian_group(2, 4)
    phi = maximal_amalgamation(G1, G2)
    assert phi.order == 4
    again = maximal_amalgamation(G1, G2)
    assert phi.mapping == again.mapping
    assert is_maximal_central_iso(CentralProductSpec(G1, G2, phi)).ok


def test_in_A_md():
    assert in_A_md(abelian_group(2, 4), 2, 4)
    assert in_A_md(abelian_group(2, 4), 2, 2)
    assert not in_A_md(abelian_group(2, 4), 2, 8)
    assert not in_A_md(abelian_group(2, 4), 1, 4)
    assert in_A_md(abelian_group(1), 1, 1)


@pytest.mark.parametrize("n,d", [(1, 2), (1, 3), (2, 2), (1, 4)])
def test_heisenberg_decomposition(n, d):
    cert = heisenberg_decomposition(n, d)
    assert cert.evidence["internal"].ok
    v = snm_verify(heisenberg_group(n, d), cert)
    assert v.ok, v.failed()
    assert cert.factors == [0] * n and cert.abelian_part == (d,)


def test_certificate_json_roundtrip():
    cert = chain_certificate(2, [0, 1], (2, 4), (0, 2))
    back = SnmCertificate.from_json(cert.to_json())
    assert back.to_json() == cert.to_json()
    assert rebuild(back).group.order == rebuild(cert).group.order == 8 * 8 * 8 // 4


def test_snm_verify_rejects_wrong_group():
    cert = chain_certificate(2, [0], (2,), (1,))
    assert snm_verify(e_group(2, 0), cert).ok
    v = snm_verify(quaternion_group(), cert)
    assert not v.ok and not v.checks["rebuilt group isomorphic to G"]


def test_snm_verify_flags_non_maximal_amalgamation():
    cert = chain_certificate(4, [0], (2, 4), (0, 1))
    cert.amalgamations = [((0, 0, 2), (0, 2))]
    cert.d = 4
    v = snm_verify(rebuild(cert).group, cert)
    assert not v.ok


def test_malformed_certificate():
    cert = chain_certificate(2, [0], (2,), (1,))
    cert.amalgamations = []
    v = snm_verify(e_group(2, 0), cert)
    assert not v.checks["certificate well-formed"]


def test_internal_product_check_detects_noncommuting_parts():
    E = e_group(3, 0)
    a = subgroup_generated(E, [(1, 0, 0)])
    b = subgroup_generated(E, [(0, 1, 0)])
    v = internal_central_product_check(E, [a, b])
    assert not v.checks["[part0, part1] = 1"]
    assert v.checks["product = G"] is False


def test_order_bound():
    assert order_bound_check(1, 1, 3).ok
    assert not order_bound_check(2, 1, 4).ok


@pytest.mark.parametrize("S,p,branch,parts", [
    (lambda: e_group(2, 1), 2, "quotients", 1),
    (lambda: e_group(3, 0), 3, "quotients", 1),
    (lambda: abelian_group(2, 2, 2), 2, "elementary_abelian", 3),
    (lambda: abelian_group(3, 3), 3, "elementary_abelian", 2),
])
def test_special_decomposition(S, p, branch, parts):
    dec = special_decomposition_search(S(), p)
    assert dec.verdict.ok, dec.verdict.failed()
    assert dec.branch == branch and len(dec.parts) == parts


def test_special_search_rejects_non_special():
    with pytest.raises(ValueError):
        special_decomposition_search(abelian_group(4), 2)
    with pytest.raises(ValueError):
        special_decomposition_search(e_group(3, 0), 2)
