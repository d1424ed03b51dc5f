"""Chern characters in the square-zero ring Gamma_n and the bundles built from them.

A class is a map from subsets I of {1..n} (sorted tuples) to rationals,
standing for the monomial prod_{i in I} omega_i. omega_i^2 = 0 is built in:
products of overlapping monomials simply vanish.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import factorial

from .verdict import Verdict


def subsets(n, nonempty=True):
    for k in range(1 if nonempty else 0, n + 1):
        yield from itertools.combinations(range(1, n + 1), k)


class GradedClass:
    __slots__ = ("n", "coeffs")

    def __init__(self, n, coeffs=None):
        self.n = n
        out = {}
        for I, c in (coeffs or {}).items():
            I = tuple(sorted(I))
            if len(set(I)) != len(I) or any(not 1 <= i <= n for i in I):
                raise ValueError(f"bad monomial {I} for n={n}")
            c = Fraction(c)
            if c:
                out[I] = out.get(I, 0) + c
        self.coeffs = {I: c for I, c in out.items() if c}

    @classmethod
    def const(cls, n, c):
        return cls(n, {(): c})

    @classmethod
    def omega(cls, n, *idx):
        return cls(n, {tuple(idx): 1})

    @classmethod
    def omega_sum(cls, n, scale=1):
        return cls(n, {(k,): scale for k in range(1, n + 1)})

    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"mismatched n: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, GradedClass):
            other = GradedClass.const(self.n, other)
        self._check(other)
        c = dict(self.coeffs)
        for I, v in other.coeffs.items():
            c[I] = c.get(I, 0) + v
        return GradedClass(self.n, c)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.n, {I: -v for I, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GradedClass):
            return graded_mul(self, other)
        return GradedClass(self.n, {I: v * other for I, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __pow__(self, k):
        out = GradedClass.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedClass):
            other = GradedClass.const(self.n, other)
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.coeffs.items()))))

    def __getitem__(self, I):
        return self.coeffs.get(tuple(sorted(I)), Fraction(0))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for I in sorted(self.coeffs, key=lambda I: (len(I), I)):
            mono = "*".join(f"w{i}" for i in I)
            parts.append(f"{self.coeffs[I]}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def degree(self, k):
        return GradedClass(self.n, {I: v for I, v in self.coeffs.items() if len(I) == k})

    def higher(self):
        return GradedClass(self.n, {I: v for I, v in self.coeffs.items() if I})

    def constant(self):
        return self.coeffs.get((), Fraction(0))

    def in_degree_zero(self):
        return all(not I for I in self.coeffs)

    def is_integral(self):
        return all(v.denominator == 1 for v in self.coeffs.values())

    def to_json(self):
        return [[list(I), str(self.coeffs[I])] for I in sorted(self.coeffs, key=lambda I: (len(I), I))]


def graded_mul(x: GradedClass, y: GradedClass) -> GradedClass:
    x._check(y)
    out = {}
    for I, a in x.coeffs.items():
        sI = set(I)
        for J, b in y.coeffs.items():
            if sI.isdisjoint(J):
                K = tuple(sorted(I + J))
                out[K] = out.get(K, 0) + a * b
    return GradedClass(x.n, out)


def exp_class(c: GradedClass) -> GradedClass:
    """Truncated exponential of a degree-1 class: sum over I of prod_{i in I} a_i."""
    if any(len(I) != 1 for I in c.coeffs):
        raise ValueError("exp_class needs a pure degree-1 class")
    a = {I[0]: v for I, v in c.coeffs.items()}
    out = {}
    for I in subsets(c.n, nonempty=False):
        v = Fraction(1)
        for i in I:
            v *= a.get(i, 0)
            if not v:
                break
        if v:
            out[I] = v
    return GradedClass(c.n, out)


def pullback_eps(d, x: GradedClass) -> GradedClass:
    """Multiplication by d on each torus factor: degree k scales by d^(2k)."""
    return GradedClass(x.n, {I: v * d ** (2 * len(I)) for I, v in x.coeffs.items()})


# -- the square-free exponent identity ----------------------------------------

def _below(J, n):
    """K with K superset of J and max K = max J."""
    m = J[-1]
    free = [i for i in range(1, m) if i not in J]
    for k in range(len(free) + 1):
        for extra in itertools.combinations(free, k):
            yield tuple(sorted(J + extra))


def lemma46_solve(n, f, modulus=None):
    """Exponents g[J] (a tuple aligned with J) solving the square-free identity."""
    red = (lambda v: v % modulus) if modulus else (lambda v: v)
    g = {}
    for J in subsets(n):
        h = 1 - 2 ** (n - J[-1])
        for K in _below(J, n):
            h += (-1) ** (len(K) - len(J)) * f.get(K, 0)
        g[J] = tuple(red(1) for _ in J[:-1]) + (red(h),)
    return g


def expand_lhs(n, g, modulus=None):
    """Coefficients of sum_J prod_{j in J} (1 + g_J(j) x_j)."""
    out = Counter()
    for J, vals in g.items():
        for k in range(len(J) + 1):
            for idx in itertools.combinations(range(len(J)), k):
                v = 1
                for i in idx:
                    v *= vals[i]
                out[tuple(J[i] for i in idx)] += v
    if modulus:
        out = Counter({I: v % modulus for I, v in out.items()})
    return out


def lemma46_verify(n, f, g, modulus=None) -> Verdict:
    lhs = expand_lhs(n, g, modulus)
    red = (lambda v: v % modulus) if modulus else (lambda v: v)
    bad = None
    if red(lhs.get((), 0)) != red(2**n - 1):
        bad = ()
    else:
        for I in subsets(n):
            if red(lhs.get(I, 0)) != red(f.get(I, 0)):
                bad = I
                break
    ok = bad is None
    return Verdict(ok, {"identity holds": ok},
                   {} if ok else {"subset": bad, "lhs": lhs.get(bad, 0), "rhs": f.get(bad, 2**n - 1)})


# -- bundle expressions -------------------------------------------------------------

class BundleExpr:
    kind = "?"

    def __init__(self, n):
        self.n = n
        self._ch = None

    @property
    def ch(self) -> GradedClass:
        if self._ch is None:
            self._ch = self._compute_ch()
        return self._ch

    def __add__(self, other):
        return DirectSum([self, other])

    def __mul__(self, other):
        return TensorProd([self, other])


class Line(BundleExpr):
    kind = "line"

    def __init__(self, c1: GradedClass, name=""):
        super().__init__(c1.n)
        if any(len(I) != 1 for I in c1.coeffs):
            raise ValueError("first Chern class must be of degree 1")
        self.c1, self.name = c1, name

    rank = 1

    def power(self, a):
        return Line(self.c1 * a, f"{self.name}^{a}" if self.name else "")

    def _compute_ch(self):
        return exp_class(self.c1)

    def to_json(self):
        return {"op": "line", "name": self.name, "c1": self.c1.to_json()}


class Trivial(BundleExpr):
    kind = "trivial"

    def __init__(self, n, rank=1):
        super().__init__(n)
        self.rank = rank

    def _compute_ch(self):
        return GradedClass.const(self.n, self.rank)

    def to_json(self):
        return {"op": "trivial", "rank": self.rank}


class DirectSum(BundleExpr):
    kind = "sum"

    def __init__(self, items):
        items = list(items)
        super().__init__(items[0].n if items else 0)
        self.items = items
        self.rank = sum(x.rank for x in items)

    def _compute_ch(self):
        out = GradedClass(self.n)
        for x in self.items:
            out = out + x.ch
        return out

    def to_json(self):
        return {"op": "sum", "items": [x.to_json() for x in self.items]}


class TensorProd(BundleExpr):
    kind = "tensor"

    def __init__(self, items):
        items = list(items)
        super().__init__(items[0].n)
        self.items = items
        r = 1
        for x in items:
            r *= x.rank
        self.rank = r

    def _compute_ch(self):
        out = GradedClass.const(self.n, 1)
        for x in self.items:
            out = out * x.ch
        return out

    def to_json(self):
        return {"op": "tensor", "items": [x.to_json() for x in self.items]}


class Pullback(BundleExpr):
    kind = "pullback"

    def __init__(self, d, item):
        super().__init__(item.n)
        self.d, self.item = d, item
        self.rank = item.rank

    def _compute_ch(self):
        return pullback_eps(self.d, self.item.ch)

    def to_json(self):
        return {"op": "pullback", "d": self.d, "item": self.item.to_json()}


def psi(n, k):
    return Line(GradedClass.omega(n, k), f"psi_{k}")


def realize_class(n, gamma: GradedClass) -> BundleExpr:
    """Bundle of rank 2^n - 1 whose ch differs from gamma only in degree 0."""
    if gamma.n != n:
        raise ValueError("class lives in a different ring")
    hi = gamma.higher()
    if not hi.is_integral():
        raise ValueError("realize_class needs integral coefficients in positive degree")
    f = {I: int(v) for I, v in hi.coeffs.items()}
    g = lemma46_solve(n, f)
    summands = []
    for J in subsets(n):
        summands.append(TensorProd([psi(n, j).power(a) for j, a in zip(J, g[J])]))
    out = DirectSum(summands)
    out.meta = {"g": g, "reduced_rank_claim": n, "realized_rank": out.rank}
    return out


# -- bundle assembly ------------------------------------------------------------------

def chi_of_multiset(n, d, A, delta=None, check=True) -> GradedClass:
    """-ch of the sum of pi_1^a over a in A, with c_1(pi_1) = delta * sum omega_k."""
    delta = d if delta is None else delta
    c = GradedClass.omega_sum(n, delta)
    chi = GradedClass(n)
    for a, mult in Counter(A).items():
        chi = chi - exp_class(c * a) * mult
    if check:
        for I, v in chi.coeffs.items():
            if v % d ** (2 * len(I)):
                raise ValueError(f"coefficient {v} of {I} is not divisible by d^{2 * len(I)}")
    return chi


def divide_eps(d, x: GradedClass) -> GradedClass:
    return GradedClass(x.n, {I: v / d ** (2 * len(I)) for I, v in x.coeffs.items()})


class PiG:
    """pi_G = pi_chi + pi_f + sum_{b in B} pi_1^b together with its audit trail."""

    def __init__(self, n, m, d, A, delta=None, optimize=False):
        A = list(A)
        if Counter(A)[1] < m:
            raise ValueError(f"multiset contains 1 only {Counter(A)[1]} times, need {m}")
        self.n, self.m, self.d, self.A = n, m, d, sorted(A)
        self.delta = d if delta is None else delta
        self.chi = chi_of_multiset(n, d, A, self.delta)
        self.gamma = divide_eps(d, self.chi)
        pi_1 = Line(GradedClass.omega_sum(n, self.delta), "pi_1")
        B = Counter(A)
        B[1] -= m
        self.B = sorted(B.elements())
        self.pi_f = DirectSum([pi_1] * m)
        rest = [pi_1.power(b) for b in self.B]
        self.chi_vanishes = not self.chi.higher().coeffs
        self.pi_gamma = None
        parts = [self.pi_f] + rest
        if not (optimize and self.chi_vanishes):
            self.pi_gamma = realize_class(n, self.gamma)
            self.pi_chi = Pullback(d, self.pi_gamma)
            parts = [self.pi_chi] + parts
        else:
            self.pi_chi = None
        self.bundle = DirectSum(parts)
        self.optimized = self.pi_chi is None

    @property
    def realized_rank(self):
        return self.bundle.rank

    @property
    def rank(self):
        """Rank with pi_chi counted at its reduced rank n (when present)."""
        return len(self.A) + (0 if self.optimized else self.n)

    @property
    def ch(self):
        return self.bundle.ch

    def verdict(self):
        checks = {
            "chi in sum d^(2k) Gamma^k": all(v.denominator == 1 for v in self.gamma.coeffs.values()),
            "ch(pi_G) in degree 0": self.ch.in_degree_zero(),
            "multiplicity of 1 >= m": Counter(self.A)[1] >= self.m,
        }
        if self.pi_chi is not None:
            checks["ch(pi_chi) - chi in degree 0"] = (self.pi_chi.ch - self.chi).in_degree_zero()
        return Verdict.of(checks, rank=self.rank, realized_rank=self.realized_rank)

    def to_json(self):
        return {
            "n": self.n, "m": self.m, "d": self.d, "delta": self.delta,
            "A": multiset_json(self.A), "B": multiset_json(self.B),
            "chi": self.chi.to_json(), "gamma": self.gamma.to_json(),
            "ch": self.ch.to_json(), "rank": self.rank, "realized_rank": self.realized_rank,
            "optimized": self.optimized,
            "lemma46_g": ([[list(J), list(v)] for J, v in sorted(self.pi_gamma.meta["g"].items())]
                          if self.pi_gamma is not None else None),
        }


def multiset_json(A):
    return [[a, c] for a, c in sorted(Counter(A).items())]


def assemble_pi_g(n, m, d, A, delta=None, optimize=False) -> PiG:
    return PiG(n, m, d, A, delta, optimize)


def triviality_preconditions(n, r, ch: GradedClass) -> Verdict:
    checks = {"rank >= n": r >= n, "ch in degree 0": ch.in_degree_zero()}
    return Verdict.of(checks, k0_rank=2 ** (2 * n - 1), rank=r)


def sum_omega_power_identity(n, k):
    """(sum omega_i)^k == k! * e_k."""
    lhs = GradedClass.omega_sum(n) ** k
    ek = GradedClass(n, {I: 1 for I in itertools.combinations(range(1, n + 1), k)})
    return lhs == ek * factorial(k)
