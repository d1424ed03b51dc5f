"""Action data of groups on bundles, reduced to exact group theory.

Every datum carries a realization: each group element maps to a pair
(base, diag). ``base`` is the translation it induces on the base torus
(integers mod d, two per complex coordinate; empty for a point). When the
base part is zero the element acts fibrewise diagonally and ``diag`` lists
the scalars in Q/Z; otherwise ``diag`` is None. That is all one needs to
decide whether an element acts trivially, so kernels can be enumerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .central import CentralProductSpec, central_product, rebuild
from .exact import Torsion
from .groups import (
    Group, Iso, Subgroup, abelian_group, all_isomorphisms, all_subgroups_abelian,
    extend_hom, factorize, lift_generator, symbol_group,
)
from .verdict import Verdict

POSET_CAP = 2**10
ZERO = Torsion(0)


@dataclass
class ActionDatum:
    group: Group
    realization: dict            # g -> (base tuple, diag tuple or None)
    d: int = 1                   # base lattice Lambda_d^n, n = len(base) // 2
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        G, R = self.group, self.realization
        ker, D, lam, triv = [], [], {}, []
        for g in G.elements:
            base, diag = R[g]
            if any(base):
                continue
            ker.append(g)
            if all(x == diag[0] for x in diag):
                D.append(g)
                lam[g] = diag[0]
                if diag[0] == ZERO:
                    triv.append(g)
        self.base_kernel = Subgroup(G, ker)
        self.scalar_subgroup = Subgroup(G, D)
        self.lam = lam
        self.kernel = Subgroup(G, triv)

    @property
    def n(self):
        e = next(iter(self.realization.values()))
        return len(e[0]) // 2

    @property
    def rank(self):
        return len(self.realization[self.group.identity][1])

    @property
    def faithful(self):
        return self.kernel.order == 1

    def eta(self, g):
        return self.realization[g][0]

    def b_order(self):
        return self.group.order // self.base_kernel.order

    def zbar_order(self):
        return self.group.center.order // self.scalar_subgroup.order

    def to_json(self):
        from .certificate import jsonable
        G = self.group
        return {
            "group": G.name, "order": G.order, "rank": self.rank, "n": self.n, "d": self.d,
            "base_kernel": {"order": self.base_kernel.order, "generators": jsonable(self.base_kernel.gens)},
            "scalar_subgroup": {"order": self.scalar_subgroup.order,
                                "generators": jsonable(self.scalar_subgroup.gens)},
            "lambda": [[jsonable(g), str(self.lam[g].value)] for g in self.scalar_subgroup.elements],
            "faithful": self.faithful,
            "B_order": self.b_order(),
            "Zbar_order": self.zbar_order() if self.faithful else None,
        }


def tensor(r1, r2):
    """Realization of (g1, g2) on the external tensor product."""
    b1, s1 = r1
    b2, s2 = r2
    base = b1 + b2
    if s1 is None or s2 is None or any(base):
        return base, None
    return base, tuple(x + y for x in s1 for y in s2)


def _sym_to_realization(d, s):
    l, t = s
    return tuple(l), (None if any(l) else (Torsion(t, d * d),))


def _central_exponent(G, z):
    """c with z = gamma^c in E(d, j)."""
    a, b, c = z
    if a or b:
        raise ValueError(f"{z} is not central in {G.name}")
    return c


# -- leaves --------------------------------------------------------------------

def leaf_E_action(d, j, z=None, G=None):
    """Faithful action of E(d, j) on xi_d with z acting by mu_r, r = order of z."""
    from .groups import e_group
    G = G or e_group(d, j)
    gamma = (0, 0, 1 % d)
    z = gamma if z is None else tuple(z)
    if z not in G.center:
        raise ValueError(f"{z} is not central in {G.name}")
    c = _central_exponent(G, z)
    r = G.order_of(z)
    g = lift_generator(d, c)
    k = pow(g, -1, d) if d > 1 else 0
    S = symbol_group(d, 1)
    dd = d * d
    images = [((k % d, 0), j * k % dd), ((0, 1 % d), j * k % dd), ((0, 0), k * d % dd)]
    gens = [(1 % d, 0, 0), (0, 1 % d, 0), gamma]
    hom = extend_hom(G, gens, images, S.mul, S.identity)
    if hom is None or len(hom) != G.order:
        raise AssertionError(f"generator images do not respect the relations of {G.name}")
    real = {x: _sym_to_realization(d, s) for x, s in hom.items()}
    datum = ActionDatum(G, real, d, label=f"leaf {G.name}",
                        meta={"z": z, "r": r, "gbar": g, "k": k, "symbol_images": dict(zip("abc", images))})
    if datum.lam.get(z) != Torsion(1, r):
        raise AssertionError(f"lambda({z}) = {datum.lam.get(z)}, expected 1/{r}")
    return datum


def _prime_parts(ns, z):
    """Per prime: list of (coordinate, e, generator element, order of z there)."""
    parts = {}
    for i, n in enumerate(ns):
        for p, e in factorize(n).items():
            q = p**e
            co = n // q
            gen = [0] * len(ns)
            gen[i] = co
            # z_i's p-component has order q / gcd(q, z_i)
            zo = q // gcd(q, z[i] % q) if z[i] % q else 1
            parts.setdefault(p, []).append((q, tuple(gen), zo))
    return parts


def rearrange(A, z):
    """Decompose A = sum <f_i>, |f_i| = N_i, with z = sum c_i f_i and d_i | d_j (i <= j)."""
    ns = A.params["ns"]
    parts = _prime_parts(ns, z)
    m = max((len(v) for v in parts.values()), default=0) or 1
    cols = [[] for _ in range(m)]
    for p in sorted(parts):
        ps = sorted(parts[p], key=lambda t: t[2])
        ps = [(1, A.identity, 1)] * (m - len(ps)) + ps
        for i, entry in enumerate(ps):
            cols[i].append(entry)
    N, f = [], []
    for col in cols:
        Ni, fi = 1, A.identity
        for q, gen, _ in col:
            Ni *= q
            fi = A.mul(fi, gen)
        N.append(Ni)
        f.append(fi)
    std = abelian_group(*N)
    hom = extend_hom(std, list(std.gens) if std.order > 1 else [], [x for x, Ni in zip(f, N) if Ni > 1],
                     A.mul, A.identity, injective=True)
    if hom is None or len(hom) != A.order:
        raise AssertionError("rearranged factors do not form a basis")
    back = {v: k for k, v in hom.items()}
    c = back[tuple(z)]
    dlist = [Ni // gcd(Ni, ci) if ci else 1 for Ni, ci in zip(N, c)]
    return N, f, c, dlist


def leaf_abelian_actions(A, z):
    """(faithful action on theta^m, action on theta), z acting by mu_d on both."""
    z = tuple(z)
    if z == A.identity and A.order > 1:
        raise ValueError("z must be a nonzero element")
    d = A.order_of(z)
    N, f, c, ds = rearrange(A, z)
    m = len(N)
    e = [A.power(fi, lift_generator(Ni, ci)) for fi, Ni, ci in zip(f, N, c)]

    def vec_add(x, y):
        return tuple(a + b for a, b in zip(x, y))

    full, line = [], []
    for i in range(m):
        v = [ZERO] * m
        v[i] = Torsion(1, N[i])
        if i == m - 1:
            for jj in range(m - 1):
                v[jj] = Torsion(1 - ds[-1] // ds[jj], N[-1])
        full.append(tuple(v))
        line.append((v[-1],) if i == m - 1 else (ZERO,))
    out = []
    for imgs, lab in ((full, "faithful"), (line, "line")):
        gens = [x for x, Ni in zip(e, N) if Ni > 1]
        im = [y for y, Ni in zip(imgs, N) if Ni > 1]
        hom = extend_hom(A, gens, im, vec_add, (ZERO,) * len(imgs[0]))
        if hom is None or len(hom) != A.order:
            raise AssertionError("diagonal action is not a homomorphism")
        real = {a: ((), s) for a, s in hom.items()}
        datum = ActionDatum(A, real, 1, label=f"abelian {lab} {A.name}",
                            meta={"z": z, "d": d, "N": N, "e": e, "z_coords": c, "d_i": ds})
        if datum.lam.get(z) != Torsion(1, d):
            raise AssertionError(f"lambda({z}) = {datum.lam.get(z)}, expected 1/{d}")
        out.append(datum)
    return tuple(out)


def trivial_datum(G):
    return ActionDatum(G, {g: ((), (ZERO,)) for g in G.elements}, 1, label=f"trivial {G.name}")


# -- products ------------------------------------------------------------------

@dataclass
class BoxtimesResult:
    kernel: list          # pairs (g1, g2) from the lambda formula
    brute: list           # pairs acting trivially in the realization
    product: ActionDatum | None = None

    @property
    def agrees(self):
        return sorted(self.kernel) == sorted(self.brute)


def boxtimes_kernel(r1: ActionDatum, r2: ActionDatum, with_product=False, brute=True):
    lam1, lam2 = r1.lam, r2.lam
    by_val = {}
    for h in r2.scalar_subgroup.elements:
        by_val.setdefault(lam2[h], []).append(h)
    ker = [(g, h) for g in r1.scalar_subgroup.elements for h in by_val.get(-lam1[g], [])]
    bf = []
    if brute:
        R1, R2 = r1.realization, r2.realization
        for g in r1.group.elements:
            for h in r2.group.elements:
                base, diag = tensor(R1[g], R2[h])
                if not any(base) and all(x == ZERO for x in diag):
                    bf.append((g, h))
    prod = None
    if with_product:
        from .groups import direct_product
        P = direct_product(r1.group, r2.group)
        real = {(g, h): tensor(r1.realization[g], r2.realization[h]) for g, h in P.elements}
        prod = ActionDatum(P, real, max(r1.d, r2.d), label=f"{r1.label} x {r2.label}")
    return BoxtimesResult(sorted(ker), sorted(bf), prod)


def is_amalgamable(r1, r2, phi: Iso):
    Z1, Z2 = r1.group.center, r2.group.center
    D1, D2 = r1.scalar_subgroup.members, r2.scalar_subgroup.members
    for z, w in phi.mapping.items():
        if z not in Z1 or z not in D1 or w not in Z2 or w not in D2:
            return False
        if r1.lam[z] != r2.lam[w]:
            return False
    return True


def amalgamable_poset(r1, r2, cap=POSET_CAP):
    """Every amalgamable isomorphism, smallest domain first."""
    G1, G2 = r1.group, r2.group
    c1 = r1.group.center.members & r1.scalar_subgroup.members
    c2 = r2.group.center.members & r2.scalar_subgroup.members
    if len(c1) * len(c2) > cap:
        from .groups import CapExceeded
        raise CapExceeded(f"poset enumeration over {len(c1)}x{len(c2)} exceeds {cap}")
    out = []
    subs2 = all_subgroups_abelian(G2, c2)
    for s1 in all_subgroups_abelian(G1, c1):
        for s2 in subs2:
            if len(s1) != len(s2):
                continue
            S1 = Subgroup(G1, s1)
            S2 = Subgroup(G2, s2)
            for m in all_isomorphisms(S1.as_group(), S2.as_group(),
                                      lambda m: all(r1.lam[z] == r2.lam[w] for z, w in m.items())):
                out.append(Iso(S1, S2, m))
    return out


def poset_maxima(isos):
    return [p for p in isos if not any(q is not p and q.order > p.order and p.restricts(q) for q in isos)]


def max_amalgamable(r1, r2) -> Iso:
    """phi_bar = inv o p2 o p1^-1 on the boxtimes kernel."""
    if not (r1.faithful and r2.faithful):
        raise ValueError("max_amalgamable needs faithful actions")
    bk = boxtimes_kernel(r1, r2, brute=False).kernel
    G1, G2 = r1.group, r2.group
    m = {}
    for z, w in bk:
        if z in m:
            raise AssertionError("projection to the first factor is not injective")
        m[z] = G2.inv(w)
    return Iso(Subgroup(G1, m.keys()), Subgroup(G2, m.values()), m)


def select_partner_scalar(r1, phi: Iso):
    """(z, r): z = phi(z1) where z1 generates D_1 with lambda(z1) = 1/r."""
    D1 = phi.source
    r = D1.order
    if not r1.faithful:
        raise ValueError("partner selection needs a faithful action")
    target = Torsion(1, r)
    hits = [z for z in D1.elements if r1.lam.get(z) == target]
    if len(hits) != 1:
        raise AssertionError(f"D_1 is not cyclic with lambda onto 1/{r}")
    z1 = hits[0]
    return phi(z1), r


def central_product_action(r1, r2, phi: Iso, C: Group | None = None) -> ActionDatum:
    if not is_amalgamable(r1, r2, phi):
        raise ValueError("phi is not amalgamable for the given actions")
    if C is None:
        C = central_product(CentralProductSpec(r1.group, r2.group, phi))
    R1, R2 = r1.realization, r2.realization
    real = {c: tensor(R1[c[0]], R2[c[1]]) for c in C.elements}
    # well defined on cosets: K_phi acts trivially
    for z, w in phi.mapping.items():
        base, diag = tensor(R1[z], R2[r2.group.inv(w)])
        if any(base) or any(x != ZERO for x in diag):
            raise AssertionError("K_phi does not act trivially")
    bk = boxtimes_kernel(r1, r2, brute=False).kernel
    datum = ActionDatum(C, real, max(r1.d, r2.d), label=f"({r1.label}) * ({r2.label})",
                        meta={"phi_order": phi.order, "boxtimes_kernel_order": len(bk),
                              "faithful_by_kernel_formula": len(bk) == phi.order})
    return datum


# -- faithful actions of S_{n,m} groups ----------------------------------------

@dataclass
class SnmAction:
    faithful: ActionDatum
    line: ActionDatum
    stages: list
    verdict: Verdict


def build_snm_action(cert) -> SnmAction:
    chain = rebuild(cert)
    d, n = cert.d, cert.n
    rho = leaf_E_action(d, cert.factors[0], G=chain.e_groups[0])
    stages = [rho]
    checks = {"stage 1 faithful": rho.faithful, "stage 1 Zbar = 1": rho.zbar_order() == 1}
    for k, spec in enumerate(chain.specs[:-1]):
        z, r = select_partner_scalar(rho, spec.phi)
        leaf = leaf_E_action(d, cert.factors[k + 1], z, G=chain.e_groups[k + 1])
        C = chain.stages[k + 1]
        rho = central_product_action(rho, leaf, spec.phi, C)
        stages.append(rho)
        checks[f"stage {k + 2} faithful"] = rho.faithful
        checks[f"stage {k + 2} Zbar = 1"] = rho.faithful and rho.zbar_order() == 1
    last = chain.specs[-1]
    z, r = select_partner_scalar(rho, last.phi)
    checks["partner order = d"] = r == d
    full, line = leaf_abelian_actions(chain.abelian, z)
    G = chain.group
    rf = central_product_action(rho, full, last.phi, G)
    r1 = central_product_action(rho, line, last.phi, G)
    checks["rho_f faithful"] = rf.faithful
    checks["same base kernel"] = rf.base_kernel.members == r1.base_kernel.members
    checks["same eta"] = all(rf.eta(g) == r1.eta(g) for g in G.elements)
    image = {rf.eta(g) for g in G.elements}
    checks["eta onto Lambda_d^n"] = len(image) == d ** (2 * n)
    checks["rank rho_1 = 1"] = r1.rank == 1
    checks["rank rho_f = m"] = rf.rank == cert.m
    return SnmAction(rf, r1, stages, Verdict.of(checks))


def diagram_report(rho: ActionDatum) -> Verdict:
    G = rho.group
    checks = {
        "exact: |G| = |ker| |B|": G.order == rho.base_kernel.order * rho.b_order(),
        "D inside ker": rho.scalar_subgroup.members <= rho.base_kernel.members,
        "lambda homomorphism": all(
            rho.lam[G.mul(a, b)] == rho.lam[a] + rho.lam[b]
            for a in rho.scalar_subgroup.gens for b in rho.scalar_subgroup.elements),
    }
    if rho.faithful:
        checks["D inside Z(G)"] = rho.scalar_subgroup.members <= G.center.members
        checks["lambda injective on D"] = len(set(rho.lam.values())) == rho.scalar_subgroup.order
    return Verdict.of(checks, B_order=rho.b_order(),
                      Zbar_order=rho.zbar_order() if rho.faithful else None,
                      kernel_order=rho.kernel.order, faithful=rho.faithful)
