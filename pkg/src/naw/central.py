"""Central products, maximal amalgamations and the S_{n,m} certificates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .groups import (
    CapExceeded, Group, Iso, Subgroup, abelian_group, abelian_invariants,
    all_isomorphisms, all_subgroups_abelian, direct_product, e_group,
    extend_hom, greedy_generators, heisenberg_generators, heisenberg_group, is_special_p_group,
    iso_search, order_of, prime_power, quotient, subgroup_generated,
)
from .verdict import Verdict

DEFAULT_SEARCH_CAP = 3**5
DEFAULT_CENTER_CAP = 2**12


@dataclass
class CentralProductSpec:
    left: Group
    right: Group
    phi: Iso  # source: Subgroup of left, target: Subgroup of right

    @property
    def d1(self) -> Subgroup:
        return self.phi.source

    @property
    def d2(self) -> Subgroup:
        return self.phi.target

    def direct(self):
        if not hasattr(self, "_direct"):
            self._direct = direct_product(self.left, self.right)
        return self._direct

    def k_phi(self) -> Subgroup:
        P = self.direct()
        R = self.right
        return Subgroup(P, [(z, R.inv(self.phi(z))) for z in self.d1.elements])


def make_iso(G1, D1_gens, G2, images) -> Iso:
    """Isomorphism <D1_gens> -> <images> given on generators; validated."""
    m = extend_hom(G1, list(D1_gens), list(images), G2.mul, G2.identity, injective=True)
    if m is None:
        raise ValueError("generator images do not define an injective homomorphism")
    src = Subgroup(G1, m.keys(), [g for g in D1_gens if g != G1.identity])
    tgt = Subgroup(G2, m.values(), [h for h in images if h != G2.identity])
    return Iso(src, tgt, m)


def cyclic_spec(G1, z1, G2, z2) -> CentralProductSpec:
    return CentralProductSpec(G1, G2, make_iso(G1, [z1], G2, [z2]))


def central_product(spec: CentralProductSpec, name=None) -> Group:
    G1, G2 = spec.left, spec.right
    Z1, Z2 = G1.center, G2.center
    if not spec.d1.members <= Z1.members or not spec.d2.members <= Z2.members:
        raise ValueError("amalgamated subgroups must be central")
    P = spec.direct()
    K = spec.k_phi()
    Q = quotient(P, K, name=name or f"CP({G1.name},{G2.name})")
    Q.params.update({"spec": spec, "k_phi": K})
    Q.realization = "central_product"
    return Q


def embed_left(C, g):
    spec = C.params["spec"]
    return C.coset_rep[(g, spec.right.identity)]


def embed_right(C, h):
    spec = C.params["spec"]
    return C.coset_rep[(spec.left.identity, h)]


def is_maximal_central_iso(spec: CentralProductSpec, cap=DEFAULT_CENTER_CAP) -> Verdict:
    """True iff no isomorphism between central subgroups properly extends phi.

    Any proper extension restricts to one on <D1, g> for a single g, so it is
    enough to try g in Z(G1) \\ D1 against every h in Z(G2).
    """
    G1, G2 = spec.left, spec.right
    Z1, Z2 = G1.center, G2.center
    if Z1.order * Z2.order > cap:
        raise CapExceeded(f"|Z1||Z2| = {Z1.order * Z2.order} exceeds {cap}")
    D1 = spec.d1
    base_gens = list(D1.gens)
    base_imgs = [spec.phi(g) for g in base_gens]
    key = lambda g, G: (order_of(G, g), g)
    for g in sorted(Z1.members - D1.members, key=lambda g: key(g, G1)):
        for h in sorted(Z2.members, key=lambda h: key(h, G2)):
            m = extend_hom(G1, base_gens + [g], base_imgs + [h], G2.mul, G2.identity,
                           injective=True)
            if m is not None:
                return Verdict(False, {"maximal": False},
                               {"witness": (g, h), "extended_order": len(m)})
    return Verdict(True, {"maximal": True}, {"center_orders": (Z1.order, Z2.order)})


def maximal_amalgamation(G1, G2) -> Iso:
    """A deterministic isomorphism of maximal order between central subgroups."""
    Z1, Z2 = G1.center, G2.center
    subs1 = all_subgroups_abelian(G1, Z1.members)
    subs2 = all_subgroups_abelian(G2, Z2.members)
    for s1 in sorted(subs1, key=lambda s: (-len(s), sorted(s))):
        for s2 in sorted(subs2, key=lambda s: (-len(s), sorted(s))):
            if len(s1) != len(s2):
                continue
            S1 = Subgroup(G1, s1).as_group()
            S2 = Subgroup(G2, s2).as_group()
            isos = all_isomorphisms(S1, S2)
            if isos:
                m = isos[0]
                return Iso(Subgroup(G1, s1), Subgroup(G2, s2), m)
    raise AssertionError("trivial amalgamation always exists")


# -- internal central products ------------------------------------------------

def internal_central_product_check(G, parts) -> Verdict:
    checks = {}
    witness = None
    for (i, A), (k, B) in itertools.combinations(enumerate(parts), 2):
        ok = True
        for a in A.gens:
            for b in B.gens:
                if G.mul(a, b) != G.mul(b, a):
                    ok = False
                    witness = witness or (i, k, a, b)
                    break
            if not ok:
                break
        checks[f"[part{i}, part{k}] = 1"] = ok
    prod = {G.identity}
    for P in parts:
        prod = {G.mul(x, y) for x in prod for y in P.members}
    checks["product = G"] = prod == set(G.elements)
    inter = {}
    for (i, A), (k, B) in itertools.combinations(enumerate(parts), 2):
        inter[(i, k)] = A.intersect(B)
    return Verdict.of(checks, intersections=inter, witness=witness)


# -- S_{n,m} certificates -----------------------------------------------------

@dataclass
class SnmCertificate:
    n: int
    m: int
    d: int
    factors: list            # j values of the E(d, j) factors, in order
    abelian_part: tuple      # invariant factors of A
    amalgamations: list      # [(source element in H_k, target element in next factor)]
    maximality_witnesses: list = field(default_factory=list)
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        from .certificate import jsonable
        return {
            "n": self.n, "m": self.m, "d": self.d,
            "factors": [{"group": f"E({self.d},{j})", "j": j} for j in self.factors],
            "abelian_part": list(self.abelian_part),
            "amalgamations": [{"source": jsonable(s), "target": jsonable(t), "order": self.d}
                              for s, t in self.amalgamations],
            "maximality_witnesses": jsonable(self.maximality_witnesses),
        }

    @classmethod
    def from_json(cls, obj):
        from .certificate import tuplify
        return cls(obj["n"], obj["m"], obj["d"], [f["j"] for f in obj["factors"]],
                   tuple(obj["abelian_part"]),
                   [(tuplify(a["source"]), tuplify(a["target"])) for a in obj["amalgamations"]])


@dataclass
class SnmChain:
    group: Group
    e_groups: list
    abelian: Group
    stages: list     # H_1, ..., H_n (before attaching A)
    specs: list      # CentralProductSpec per amalgamation


def abelian_from_invariants(invariants):
    return abelian_group(*invariants) if invariants else abelian_group(1)


def rebuild(cert: SnmCertificate) -> SnmChain:
    if len(cert.factors) != cert.n or len(cert.amalgamations) != cert.n:
        raise ValueError("malformed certificate: need n factors and n amalgamations")
    Es = [e_group(cert.d, j) for j in cert.factors]
    A = abelian_from_invariants(cert.abelian_part)
    H = Es[0]
    stages, specs = [H], []
    for k, (src, tgt) in enumerate(cert.amalgamations):
        right = Es[k + 1] if k + 1 < cert.n else A
        if src not in H or tgt not in right:
            raise ValueError(f"amalgamation {k}: element not in group")
        spec = cyclic_spec(H, src, right, tgt)
        H = central_product(spec, name=f"H{k + 2}" if k + 1 < cert.n else "G")
        specs.append(spec)
        if k + 1 < cert.n:
            stages.append(H)
    return SnmChain(H, Es, A, stages, specs)


def chain_certificate(d, js, abelian_part, a_target) -> SnmCertificate:
    """Certificate amalgamating the centre generator of each stage with gamma of
    the next E-factor, and finally with ``a_target`` in A."""
    n = len(js)
    Es = [e_group(d, j) for j in js]
    A = abelian_from_invariants(abelian_part)
    gamma = (0, 0, 1 % d)
    H, src = Es[0], gamma
    amalg = []
    for k in range(n):
        right = Es[k + 1] if k + 1 < n else A
        tgt = gamma if k + 1 < n else tuple(a_target)
        amalg.append((src, tgt))
        C = central_product(cyclic_spec(H, src, right, tgt))
        src = embed_left(C, src)
        H = C
    m = max(len(abelian_part), 1)
    return SnmCertificate(n, m, d, list(js), tuple(abelian_part), amalg)


def in_A_md(A, m, d):
    """Minimal generating set of size m and an element of order d."""
    inv = abelian_invariants(A)
    rank = len(inv) if inv else 1  # the trivial group counts as cyclic
    expo = inv[-1] if inv else 1
    return rank == m and expo % d == 0


def snm_verify(G, cert: SnmCertificate, cap=None) -> Verdict:
    checks = {}
    checks["factors in E_d"] = all(0 <= j < cert.d for j in cert.factors) and len(cert.factors) == cert.n
    try:
        chain = rebuild(cert)
    except ValueError as exc:
        return Verdict(False, {"certificate well-formed": False}, {"error": str(exc)})
    checks["certificate well-formed"] = True
    checks["A in A_{m,d}"] = in_A_md(chain.abelian, cert.m, cert.d)
    witnesses = []
    for k, spec in enumerate(chain.specs):
        cyc = spec.d1.order == cert.d and spec.d2.order == cert.d
        checks[f"amalgamation {k} identifies cyclic subgroups of order d"] = cyc
        v = is_maximal_central_iso(spec)
        checks[f"amalgamation {k} maximal"] = v.ok
        witnesses.append(v.details.get("witness"))
    cert.maximality_witnesses = witnesses
    iso = iso_search(chain.group, G, cap=cap)
    checks["rebuilt group isomorphic to G"] = iso is not None
    return Verdict.of(checks, iso=iso, chain=chain)


def heisenberg_decomposition(n: int, d: int, cap=None) -> SnmCertificate:
    H = heisenberg_group(n, d)
    alphas, betas, gamma = heisenberg_generators(n, d)
    Eks = [subgroup_generated(H, [a, b, gamma]) for a, b in zip(alphas, betas)]
    A = subgroup_generated(H, [gamma])
    internal = internal_central_product_check(H, Eks + [A])
    E0 = e_group(d, 0)
    isos = [iso_search(Ek.as_group(f"E_{k + 1}"), E0, cap=cap) for k, Ek in enumerate(Eks)]
    checks = dict(internal.checks)
    for k, iso in enumerate(isos):
        checks[f"E_{k + 1} = E({d},0)"] = iso is not None
        checks[f"Z(E_{k + 1}) = A"] = Eks[k].as_group().center.members == A.members
    for (i, k), inter in internal.details["intersections"].items():
        checks[f"part{i} & part{k} = A"] = inter.members == A.members
    cert = chain_certificate(d, [0] * n, (d,) if d > 1 else (), (1 % d,))
    cert.evidence = {"internal": Verdict.of(checks, isos=isos), "group": H}
    return cert


def order_bound_check(n, m, r) -> Verdict:
    """|G_i| >= (p^3)^n p^m / p^n = p^(2n+m) must fit inside |S| = p^r."""
    return Verdict(2 * n + m <= r, {"2n+m <= r": 2 * n + m <= r}, {"lhs": 2 * n + m, "r": r})


# -- special p-groups ---------------------------------------------------------

@dataclass
class SpecialDecomposition:
    group: Group
    p: int
    r: int
    branch: str
    parts: list        # [(K_i subgroup, SnmCertificate, rebuilt G_i)]
    verdict: Verdict


def _abelian_candidates(p, m):
    out = [((p,) * m, [(0,) * (m - 1) + (1,)])]
    if m >= 1:
        inv = (p,) * (m - 1) + (p * p,)
        targets = [(0,) * (m - 1) + (p,)]
        if m >= 2:
            targets.append((1,) + (0,) * (m - 1))
        out.append((inv, targets))
    return out


def find_snm_certificate(Q, p, bound, cap=None):
    """Search Q = E_1 ⋏ ... ⋏ E_n ⋏ A with E_i in {E(p,0), E(p,1)} and
    A in {Z_p^m, Z_p^(m-1) x Z_p^2}."""
    pk = prime_power(Q.order)
    if pk is None or Q.order == 1:
        return None
    e = pk[1]
    if Q.is_abelian:
        return None
    for n in range(1, bound // 2 + 1):
        for m in range(1, bound - 2 * n + 1):
            for inv, targets in _abelian_candidates(p, m):
                size = 2 * n + m + (1 if inv[-1] == p * p else 0)
                if size != e:
                    continue
                for js in itertools.combinations_with_replacement((0, 1), n):
                    for tgt in targets:
                        cert = chain_certificate(p, list(js), inv, tgt)
                        chain = rebuild(cert)
                        if iso_search(chain.group, Q, cap=cap) is not None:
                            return cert
    return None


def special_decomposition_search(S, p, r=None, cap=DEFAULT_SEARCH_CAP) -> SpecialDecomposition:
    if S.order > cap:
        raise CapExceeded(f"|S| = {S.order} exceeds search cap {cap}")
    pk = prime_power(S.order)
    if pk is None or (S.order > 1 and pk[0] != p):
        raise ValueError(f"{S.name} is not a {p}-group")
    r = pk[1] if r is None else r
    sv = is_special_p_group(S, p)
    if not sv.special:
        raise ValueError(f"{S.name} is not special: {sv.reason}")
    bound = max(r, 3)
    if sv.elementary_abelian:
        return _elementary_abelian_branch(S, p, r, bound)
    Z = S.center
    found = []
    for K in all_subgroups_abelian(S, Z.members):
        Ksub = Subgroup(S, K)
        Q = quotient(S, Ksub)
        cert = find_snm_certificate(Q, p, bound)
        if cert is not None:
            found.append((Ksub, cert, Q))
    for size in range(1, len(found) + 1):
        for combo in itertools.combinations(found, size):
            inter = frozenset(S.elements)
            for K, _, _ in combo:
                inter &= K.members
            if inter == {S.identity}:
                return _finish(S, p, r, bound, "quotients", list(combo))
    return SpecialDecomposition(S, p, r, "quotients", [], Verdict(False, {"decomposition found": False},
                                                                   {"candidates": len(found)}))


def _elementary_abelian_branch(S, p, r, bound):
    basis = greedy_generators(S)
    parts = []
    for i in range(len(basis)):
        K = subgroup_generated(S, basis[:i] + basis[i + 1:])
        cert = chain_certificate(p, [0], (p,), (1,))
        parts.append((K, cert, quotient(S, K)))
    return _finish(S, p, r, bound, "elementary_abelian", parts)


def _finish(S, p, r, bound, branch, parts):
    checks = {}
    images = set()
    for s in S.elements:
        images.add(tuple(Q.coset_rep[s] for _, _, Q in parts))
    checks["diagonal embedding injective"] = len(images) == S.order
    out = []
    for i, (K, cert, Q) in enumerate(parts):
        chain = rebuild(cert)
        if branch == "elementary_abelian":
            target = e_group(p, 0)
            checks[f"S/K_{i} embeds in Z(G_{i})"] = Q.order == p == chain.group.center.order
        else:
            target = Q
        v = snm_verify(target, cert)
        checks[f"G_{i} certificate verified"] = v.ok
        checks[f"G_{i} bound 2n+m <= max(r,3)"] = order_bound_check(cert.n, cert.m, bound).ok
        out.append((K, cert, chain.group))
    return SpecialDecomposition(S, p, r, branch, out, Verdict.of(checks))
