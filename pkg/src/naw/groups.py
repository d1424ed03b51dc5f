"""Enumerable finite groups with exact multiplication.

Elements are canonical hashable tuples; every group carries a generating
set so that centres, closures and homomorphism extension only touch
generators instead of all pairs.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, lcm

DEFAULT_ISO_CAP = 2**12


def max_order_cap(default=DEFAULT_ISO_CAP):
    env = os.environ.get("NAW_MAX_ORDER")
    return int(env) if env else default


class CapExceeded(RuntimeError):
    pass


class Group:
    def __init__(self, name, elements, mul, identity, gens, inv=None, realization=None, params=None):
        self.name = name
        self.elements = tuple(sorted(elements))
        self._mul = mul
        self.identity = identity
        self.gens = tuple(g for g in gens if g != identity)
        self._inv_fn = inv
        self._inv_cache = {}
        self.realization = realization
        self.params = params or {}
        self._element_set = frozenset(self.elements)

    def __repr__(self):
        return f"<Group {self.name} order={self.order}>"

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self._element_set

    def __iter__(self):
        return iter(self.elements)

    def mul(self, a, b):
        return self._mul(a, b)

    def prod(self, *xs):
        out = self.identity
        for x in xs:
            out = self._mul(out, x)
        return out

    def inv(self, g):
        if self._inv_fn is not None:
            return self._inv_fn(g)
        try:
            return self._inv_cache[g]
        except KeyError:
            pass
        prev, cur = self.identity, g
        while cur != self.identity:
            prev, cur = cur, self._mul(cur, g)
        self._inv_cache[g] = prev
        return prev

    def power(self, g, k):
        if k < 0:
            g, k = self.inv(g), -k
        out, base = self.identity, g
        while k:
            if k & 1:
                out = self._mul(out, base)
            base = self._mul(base, base)
            k >>= 1
        return out

    def commutator(self, g, h):
        """[g, h] = g^-1 h^-1 g h."""
        return self.prod(self.inv(g), self.inv(h), g, h)

    def conj(self, g, h):
        return self.prod(self.inv(h), g, h)

    def order_of(self, g):
        return order_of(self, g)

    @cached_property
    def element_orders(self):
        return {g: order_of(self, g) for g in self.elements}

    @cached_property
    def center(self):
        return center(self)

    @cached_property
    def is_abelian(self):
        return all(self.mul(a, b) == self.mul(b, a) for a in self.gens for b in self.gens)

    def whole(self):
        return Subgroup(self, self.elements, self.gens)

    def trivial(self):
        return Subgroup(self, (self.identity,), ())


class Subgroup:
    """Subset of a parent group closed under the group law."""

    def __init__(self, parent: Group, members, gens=None):
        self.parent = parent
        self.members = frozenset(members)
        self._gens = tuple(gens) if gens is not None else None

    @property
    def order(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return g in self.members

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def elements(self):
        return tuple(sorted(self.members))

    @property
    def gens(self):
        if self._gens is None:
            self._gens = greedy_generators(self.parent, self.elements)
        return self._gens

    def __eq__(self, other):
        if isinstance(other, Subgroup):
            return self.members == other.members
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def __le__(self, other):
        return self.members <= other.members

    def __repr__(self):
        return f"<Subgroup of {self.parent.name} order={self.order}>"

    def is_subgroup(self):
        P = self.parent
        if P.identity not in self.members:
            return False
        return all(P.mul(a, b) in self.members for a in self.members for b in self.gens) and \
            all(P.inv(a) in self.members for a in self.gens)

    def is_normal(self):
        P = self.parent
        return all(P.conj(x, g) in self.members for x in self.gens for g in P.gens)

    def intersect(self, other):
        return Subgroup(self.parent, self.members & other.members)

    def as_group(self, name=None):
        P = self.parent
        return Group(name or f"sub({P.name})", self.elements, P._mul, P.identity, self.gens,
                     inv=P.inv)


# -- generic algorithms -----------------------------------------------------

def order_of(G, g):
    k, cur = 1, g
    while cur != G.identity:
        cur = G.mul(cur, g)
        k += 1
    return k


def closure(G, gens, start=None):
    """Subgroup generated by ``gens`` (right multiplication BFS)."""
    seen = set(start) if start else {G.identity}
    queue = deque(seen)
    gens = [g for g in gens if g != G.identity]
    while queue:
        x = queue.popleft()
        for s in gens:
            y = G.mul(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def subgroup_generated(G, gens) -> Subgroup:
    return Subgroup(G, closure(G, gens), tuple(g for g in gens if g != G.identity))


def greedy_generators(G, elements=None):
    """Deterministic small generating set: high-order elements first."""
    elements = G.elements if elements is None else elements
    orders = [(-order_of(G, g), g) for g in elements if g != G.identity]
    orders.sort()
    gens, span = [], {G.identity}
    for _, g in orders:
        if g not in span:
            gens.append(g)
            span = closure(G, gens)
            if len(span) == len(elements):
                break
    return tuple(gens)


def center(G) -> Subgroup:
    members = [z for z in G.elements if all(G.mul(z, s) == G.mul(s, z) for s in G.gens)]
    return Subgroup(G, members)


def normal_closure(G, elems):
    seen = set(closure(G, elems))
    while True:
        extra = {G.conj(x, g) for x in seen for g in G.gens} - seen
        if not extra:
            return seen
        seen = closure(G, list(seen) + list(extra), start=seen | extra)


def commutator_subgroup(G) -> Subgroup:
    comms = {G.commutator(a, b) for a in G.gens for b in G.gens}
    return Subgroup(G, normal_closure(G, comms))


def prime_power(n):
    """Return (p, k) with n = p^k, or None (n = 1 gives (1, 0))."""
    if n == 1:
        return (1, 0)
    p = next(q for q in range(2, n + 1) if n % q == 0)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def frattini_p(G, p) -> Subgroup:
    """Phi(S) = [S,S] S^p, valid for p-groups."""
    pp = prime_power(G.order)
    if pp is None or (G.order > 1 and pp[0] != p):
        raise ValueError(f"{G.name} of order {G.order} is not a {p}-group")
    comm = commutator_subgroup(G)
    powers = {G.power(g, p) for g in G.elements}
    return Subgroup(G, normal_closure(G, set(comm.members) | powers))


def exponent(G):
    return lcm(*G.element_orders.values()) if G.order > 1 else 1


def order_profile(G):
    Z = G.center
    return Counter((G.element_orders[g], g in Z) for g in G.elements)


def factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_invariants(A) -> tuple:
    """Invariant factors n_1 | n_2 | ... | n_m of an abelian group, ascending."""
    if not A.is_abelian:
        raise ValueError(f"{A.name} is not abelian")
    orders = A.element_orders
    per_prime = []
    for p, e in factorize(A.order).items():
        # |A[p^k]| = p^(sum_i min(k, e_i))
        logs = [0]
        for k in range(1, e + 1):
            cnt = sum(1 for o in orders.values() if (p**k) % o == 0)
            logs.append(prime_power(cnt)[1] if cnt > 1 else 0)
        ge = [logs[k] - logs[k - 1] for k in range(1, e + 1)]  # #{i : e_i >= k}
        exps = []
        for k in range(1, e + 1):
            nxt = ge[k] if k < e else 0
            exps += [k] * (ge[k - 1] - nxt)
        per_prime.append((p, sorted(exps, reverse=True)))
    m = max((len(x) for _, x in per_prime), default=0)
    factors = []
    for i in range(m):
        n = 1
        for p, exps in per_prime:
            if i < len(exps):
                n *= p ** exps[i]
        factors.append(n)
    return tuple(sorted(factors))


# -- concrete realizations --------------------------------------------------

def e_group(d: int, j: int) -> Group:
    """E(d, j) on normal forms alpha^a beta^b gamma^c."""
    if d < 1 or not 0 <= j < d:
        raise ValueError(f"need d >= 1 and 0 <= j < d, got d={d}, j={j}")

    def mul(x, y):
        a, b, c = x
        a2, b2, c2 = y
        sa, sb = a + a2, b + b2
        return (sa % d, sb % d, (c + c2 - a2 * b + j * (sa // d + sb // d)) % d)

    elems = list(itertools.product(range(d), repeat=3))
    gens = [(1 % d, 0, 0), (0, 1 % d, 0), (0, 0, 1 % d)]
    return Group(f"E({d},{j})", elems, mul, (0, 0, 0), gens,
                 realization="E", params={"d": d, "j": j})


def e_generators(d):
    return {"alpha": (1 % d, 0, 0), "beta": (0, 1 % d, 0), "gamma": (0, 0, 1 % d)}


def heisenberg_group(n: int, d: int) -> Group:
    """H_{2n+1}(Z/d); element (a_1..a_n, b_1..b_n, c) is the unitriangular matrix."""
    if n < 1 or d < 1:
        raise ValueError("need n, d >= 1")

    def mul(x, y):
        a, b, c = x[:n], x[n:2 * n], x[2 * n]
        a2, b2, c2 = y[:n], y[n:2 * n], y[2 * n]
        dot = sum(ai * bi for ai, bi in zip(a, b2))
        return tuple((p + q) % d for p, q in zip(a, a2)) + \
            tuple((p + q) % d for p, q in zip(b, b2)) + ((c + c2 + dot) % d,)

    elems = itertools.product(range(d), repeat=2 * n + 1)
    gens = []
    for i in range(2 * n + 1):
        v = [0] * (2 * n + 1)
        v[i] = 1 % d
        gens.append(tuple(v))
    return Group(f"H({n},{d})", elems, mul, (0,) * (2 * n + 1), gens,
                 realization="H", params={"n": n, "d": d})


def heisenberg_generators(n, d):
    """alpha_k: entry (1, k+1); beta_k: entry (k+1, n+2); gamma: entry (1, n+2)."""
    def unit(i):
        v = [0] * (2 * n + 1)
        v[i] = 1 % d
        return tuple(v)
    return ([unit(k) for k in range(n)], [unit(n + k) for k in range(n)], unit(2 * n))


def symbol_group(d: int, n: int = 1) -> Group:
    """Finite model of the bundle automorphisms [phi(l) o r_2(t)].

    Element (l, t): l = 2n integers mod d, (re_k, im_k) meaning
    l_k = (re_k + i im_k)/d; t an integer mod d^2 meaning t/d^2 in Q/Z.
    """
    if d < 1 or n < 1:
        raise ValueError("need d, n >= 1")
    dd = d * d

    def mul(x, y):
        l, t = x
        l2, t2 = y
        new_l, wrap = [], []
        for u, v in zip(l, l2):
            s = u + v
            new_l.append(s % d)
            wrap.append(s // d)
        # phi(l)phi(l') = phi(l+l') r2(-d Im(l) Re(l')), in units of 1/d^2: -d*im*re'
        cross = sum(l[2 * k + 1] * l2[2 * k] for k in range(n))
        # phi(l''+lam) = phi(l'') phi(lam) r2(d Im(l'') Re(lam)); [phi(lam)] = id
        wrap_corr = sum(new_l[2 * k + 1] * wrap[2 * k] * dd for k in range(n))
        return (tuple(new_l), (t + t2 - d * cross + wrap_corr) % dd)

    elems = [(l, t) for l in itertools.product(range(d), repeat=2 * n) for t in range(dd)]
    gens = []
    for i in range(2 * n):
        v = [0] * (2 * n)
        v[i] = 1 % d
        gens.append((tuple(v), 0))
    gens.append(((0,) * (2 * n), 1 % dd))
    return Group(f"Sym({d},{n})", elems, mul, ((0,) * (2 * n), 0), gens,
                 realization="symbol", params={"d": d, "n": n})


def abelian_group(*ns: int) -> Group:
    if not ns or any(n < 1 for n in ns):
        raise ValueError("need at least one positive modulus")
    ns = tuple(ns)

    def mul(x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, ns))

    def inv(x):
        return tuple((-a) % n for a, n in zip(x, ns))

    elems = itertools.product(*(range(n) for n in ns))
    gens = []
    for i, n in enumerate(ns):
        v = [0] * len(ns)
        v[i] = 1 % n
        gens.append(tuple(v))
    return Group("A(" + ",".join(map(str, ns)) + ")", elems, mul, (0,) * len(ns), gens,
                 inv=inv, realization="abelian", params={"ns": ns})


def direct_product(G: Group, H: Group, name=None) -> Group:
    def mul(x, y):
        return (G.mul(x[0], y[0]), H.mul(x[1], y[1]))

    def inv(x):
        return (G.inv(x[0]), H.inv(x[1]))

    elems = [(g, h) for g in G.elements for h in H.elements]
    gens = [(g, H.identity) for g in G.gens] + [(G.identity, h) for h in H.gens]
    return Group(name or f"DP({G.name},{H.name})", elems, mul, (G.identity, H.identity), gens,
                 inv=inv, realization="product", params={"factors": (G, H)})


def quotient(G: Group, N: Subgroup, name=None) -> Group:
    """G/N on coset representatives (lexicographic minimum of each coset)."""
    if N.parent is not G and set(N.members) - set(G.elements):
        raise ValueError("N is not a subgroup of G")
    if not N.is_normal():
        raise ValueError("N is not normal")
    rep = {}
    reps = []
    nm = N.elements
    for g in G.elements:
        if g in rep:
            continue
        reps.append(g)
        for x in nm:
            rep[G.mul(g, x)] = g

    def mul(x, y):
        return rep[G.mul(x, y)]

    def inv(x):
        return rep[G.inv(x)]

    gens = sorted({rep[g] for g in G.gens})
    Q = Group(name or f"{G.name}/N", reps, mul, rep[G.identity], gens, inv=inv,
              realization="quotient", params={"parent": G, "kernel": N})
    Q.coset_rep = rep
    return Q


# -- homomorphism extension and isomorphism search ----------------------------

def extend_hom(G, gens, images, mul_target, identity_target, injective=False, limit=None):
    """Extend generator images to a homomorphism on <gens>.

    Returns the element map, or None on inconsistency (or non-injectivity when
    ``injective``).
    """
    phi = {G.identity: identity_target}
    used = {identity_target} if injective else None
    queue = deque([G.identity])
    pairs = [(g, h) for g, h in zip(gens, images)]
    while queue:
        x = queue.popleft()
        fx = phi[x]
        for s, hs in pairs:
            y = G.mul(x, s)
            fy = mul_target(fx, hs)
            if y in phi:
                if phi[y] != fy:
                    return None
            else:
                if injective:
                    if fy in used:
                        return None
                    used.add(fy)
                phi[y] = fy
                queue.append(y)
                if limit is not None and len(phi) > limit:
                    return None
    return phi


@dataclass
class Iso:
    source: object
    target: object
    mapping: dict = field(repr=False)

    def __call__(self, g):
        return self.mapping[g]

    @property
    def order(self):
        return len(self.mapping)

    def generator_images(self):
        gens = self.source.gens
        return [(g, self.mapping[g]) for g in gens]

    def inverse(self):
        return Iso(self.target, self.source, {v: k for k, v in self.mapping.items()})

    def restricts(self, other: "Iso"):
        """True if self is a restriction of ``other``."""
        return all(other.mapping.get(k, object()) == v for k, v in self.mapping.items())


def is_isomorphism(G, H, mapping):
    if len(mapping) != G.order or set(mapping) != set(G.elements):
        return False
    if set(mapping.values()) != set(H.elements):
        return False
    return all(mapping[G.mul(a, b)] == H.mul(mapping[a], mapping[b])
               for a in G.elements for b in G.gens)


def iso_search(G, H, cap=None, fixed=None):
    """Exhaustive isomorphism search by backtracking over generator images.

    ``fixed`` optionally prescribes images of some elements of G.
    Returns an Iso or None.
    """
    cap = max_order_cap() if cap is None else cap
    if G.order > cap or H.order > cap:
        raise CapExceeded(f"order {max(G.order, H.order)} exceeds iso cap {cap}")
    if G.order != H.order:
        return None
    if G.order == 1:
        return Iso(G, H, {G.identity: H.identity})
    if order_profile(G) != order_profile(H):
        return None
    ZG, ZH = G.center, H.center
    fixed = dict(fixed or {})
    fixed_src = list(fixed)
    rest = [g for g in greedy_generators(G) if g not in closure(G, fixed_src)]
    # drop redundant generators after the fixed ones
    gens, span = list(fixed_src), closure(G, fixed_src)
    for g in rest:
        if g not in span:
            gens.append(g)
            span = closure(G, gens)
    if len(span) != G.order:
        gens += [g for g in greedy_generators(G) if g not in gens]
    base_imgs = [fixed[g] for g in fixed_src]
    if fixed_src:
        base = extend_hom(G, fixed_src, base_imgs, H.mul, H.identity, injective=True)
        if base is None:
            return None
    classes = {}
    for h in H.elements:
        classes.setdefault((H.element_orders[h], h in ZH), []).append(h)
    free = gens[len(fixed_src):]
    cands = [classes.get((G.element_orders[g], g in ZG), []) for g in free]

    def dfs(i, imgs, current):
        if i == len(free):
            return current if len(current) == G.order else None
        taken = set(current.values())
        for h in cands[i]:
            if h in taken:
                continue
            trial = imgs + [h]
            phi = extend_hom(G, gens, base_imgs + trial, H.mul, H.identity, injective=True)
            if phi is None:
                continue
            out = dfs(i + 1, trial, phi)
            if out is not None:
                return out
        return None

    start = extend_hom(G, fixed_src, base_imgs, H.mul, H.identity, injective=True) \
        if fixed_src else {G.identity: H.identity}
    phi = dfs(0, [], start)
    if phi is None or len(phi) != G.order:
        return None
    return Iso(G, H, phi)


def all_isomorphisms(S, T, predicate=None):
    """Every isomorphism between two small groups/subgroups (given as Group)."""
    if S.order != T.order:
        return []
    gens = list(greedy_generators(S)) if S.order > 1 else []
    out = []
    orders_T = {h: order_of(T, h) for h in T.elements}

    def rec(i, imgs):
        if i == len(gens):
            phi = extend_hom(S, gens, imgs, T.mul, T.identity, injective=True)
            if phi is not None and len(phi) == S.order:
                if predicate is None or predicate(phi):
                    out.append(phi)
            return
        og = order_of(S, gens[i])
        for h in T.elements:
            if orders_T[h] == og:
                if extend_hom(S, gens[: i + 1], imgs + [h], T.mul, T.identity, injective=True) is None:
                    continue
                rec(i + 1, imgs + [h])

    rec(0, [])
    return out


def all_subgroups_abelian(G, members=None):
    """All subgroups of an abelian group (or of the abelian subgroup ``members``)."""
    members = G.elements if members is None else sorted(members)
    subs = {frozenset([G.identity])}
    cyclic = {frozenset(closure(G, [g])) for g in members}
    frontier = set(subs)
    while frontier:
        new = set()
        for s in frontier:
            for c in cyclic:
                if not c <= s:
                    j = frozenset(closure(G, list(s | c), start=s | c))
                    if j not in subs:
                        new.add(j)
        subs |= new
        frontier = new
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


# -- verification helpers -----------------------------------------------------

def check_group_axioms(G, full_associativity=False):
    """Closure, identity, inverses, and associativity.

    Associativity uses Light's test over the generating set (complete for a
    magma generated by ``gens``); ``full_associativity`` adds the cubic check.
    """
    els = G.elements
    S = set(els)
    problems = []
    if any(G.mul(G.identity, g) != g or G.mul(g, G.identity) != g for g in els):
        problems.append("identity")
    for g in els:
        h = G.inv(g)
        if h not in S or G.mul(g, h) != G.identity or G.mul(h, g) != G.identity:
            problems.append(f"inverse of {g}")
            break
    if closure(G, G.gens) != S:
        problems.append("generators do not generate")
    bad = None
    for s in G.gens:
        for x in els:
            xs = G.mul(x, s)
            if xs not in S:
                problems.append("closure")
                break
            for y in els:
                if G.mul(xs, y) != G.mul(x, G.mul(s, y)):
                    bad = (x, s, y)
                    break
            if bad:
                break
        if bad:
            problems.append(f"associativity {bad}")
            break
    if full_associativity and not bad:
        for x, y, z in itertools.product(els, repeat=3):
            if G.mul(G.mul(x, y), z) != G.mul(x, G.mul(y, z)):
                problems.append(f"associativity {(x, y, z)}")
                break
    return problems


def e_relations(G, alpha, beta, gamma, j, d):
    """The six defining relations of E(d, j) evaluated on three elements."""
    gj = G.power(gamma, j)
    e = G.identity
    return {
        "alpha^d = gamma^j": G.power(alpha, d) == gj,
        "beta^d = gamma^j": G.power(beta, d) == gj,
        "gamma^d = 1": G.power(gamma, d) == e,
        "[alpha,gamma] = 1": G.commutator(alpha, gamma) == e,
        "[beta,gamma] = 1": G.commutator(beta, gamma) == e,
        "[alpha,beta] = gamma": G.commutator(alpha, beta) == gamma,
    }


@dataclass
class SpecialVerdict:
    special: bool
    elementary_abelian: bool
    center: Subgroup
    commutator: Subgroup
    frattini: Subgroup
    reason: str = ""


def is_elementary_abelian(G, p):
    return G.is_abelian and all(o in (1, p) for o in G.element_orders.values())


def is_special_p_group(S, p) -> SpecialVerdict:
    Phi = frattini_p(S, p)
    Z = S.center
    C = commutator_subgroup(S)
    if is_elementary_abelian(S, p):
        return SpecialVerdict(True, True, Z, C, Phi, "elementary abelian")
    if not (Phi.members == Z.members == C.members):
        return SpecialVerdict(False, False, Z, C, Phi,
                              f"|Phi|={Phi.order}, |Z|={Z.order}, |[S,S]|={C.order} do not coincide")
    if not all(S.element_orders[g] in (1, p) for g in Phi.members):
        return SpecialVerdict(False, False, Z, C, Phi, "Phi(S) not elementary abelian")
    return SpecialVerdict(True, False, Z, C, Phi, "Phi = Z = [S,S] elementary abelian")


def lift_generator(m: int, z: int) -> int:
    """Smallest unit g mod m with (m/r) g = z, r the additive order of z in Z_m."""
    z %= m
    r = m // gcd(m, z) if z else 1
    for g in range(m):
        if gcd(g, m) == 1 and (m // r) * g % m == z:
            return g
    raise AssertionError(f"no generator lift for z={z} in Z_{m}")


def quaternion_group() -> Group:
    """Q_8 as the unit quaternions +-1, +-i, +-j, +-k with integer coordinates."""
    def mul(x, y):
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)

    units = []
    for i in range(4):
        for s in (1, -1):
            v = [0, 0, 0, 0]
            v[i] = s
            units.append(tuple(v))
    return Group("Q8", units, mul, (1, 0, 0, 0), [(0, 1, 0, 0), (0, 0, 1, 0)],
                 realization="quaternion")
