"""Exact scalar and symbolic arithmetic.

Roots of unity used as fibre scalars live additively in Q/Z (``Torsion``).
Matrix entries live in ``LaurentPoly``: Laurent polynomials in two formal
variables tau, theta whose coefficients are ``Cyclotomic`` field elements.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
import cmath

EXPONENT_LIMIT = 2**31


class Torsion:
    """Element a/q of Q/Z, always stored reduced with 0 <= a/q < 1."""

    __slots__ = ("value",)

    def __init__(self, value=0, den=None):
        v = Fraction(value) if den is None else Fraction(value, den)
        self.value = v - (v.numerator // v.denominator)

    @property
    def num(self):
        return self.value.numerator

    @property
    def den(self):
        return self.value.denominator

    def order(self):
        return self.den

    def __add__(self, other):
        return Torsion(self.value + Torsion._coerce(other).value)

    __radd__ = __add__

    def __neg__(self):
        return Torsion(-self.value)

    def __sub__(self, other):
        return Torsion(self.value - Torsion._coerce(other).value)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Torsion(self.value * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Torsion):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == Torsion(other).value
        return NotImplemented

    def __hash__(self):
        return hash(("qz", self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Torsion({self.num}/{self.den})"

    def __str__(self):
        return f"{self.num}/{self.den}"

    @staticmethod
    def _coerce(x):
        return x if isinstance(x, Torsion) else Torsion(x)

    def to_cyclotomic(self, q=None):
        """The root of unity exp(2 pi i a/q) inside the field of conductor ``q``."""
        q = self.den if q is None else q
        if q % self.den:
            raise ValueError(f"denominator {self.den} does not divide conductor {q}")
        return Cyclotomic.zeta(q, self.num * (q // self.den))


def torsion_add(x: Torsion, y: Torsion) -> Torsion:
    return x + y


@lru_cache(maxsize=None)
def cyclotomic_polynomial(q: int) -> tuple:
    """Integer coefficients of Phi_q, lowest degree first."""
    if q < 1:
        raise ValueError("q must be positive")
    num = [-1] + [0] * (q - 1) + [1]  # x^q - 1
    for e in range(1, q):
        if q % e == 0:
            num = _divide_exact(num, list(cyclotomic_polynomial(e)))
    return tuple(num)


def _divide_exact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        out[i] = c
        if c:
            for k, dk in enumerate(den):
                num[i + k] -= c * dk
    if any(num[: len(den) - 1]):
        raise ArithmeticError("nonzero remainder")
    return out


@lru_cache(maxsize=None)
def _power_table(q):
    # x^k mod Phi_q as sparse {exponent: int} for 0 <= k < q
    phi = cyclotomic_polynomial(q)
    deg = len(phi) - 1
    table = []
    cur = {0: 1}
    for _ in range(q):
        table.append(dict(cur))
        nxt = {e + 1: c for e, c in cur.items()}
        top = nxt.pop(deg, 0)
        if top:
            for k in range(deg):
                if phi[k]:
                    nxt[k] = nxt.get(k, 0) - top * phi[k]
        cur = {e: c for e, c in nxt.items() if c}
    return table


class Cyclotomic:
    """Element of Q(zeta_q), reduced modulo Phi_q.

    ``coeffs`` is a sparse mapping exponent -> Fraction with exponents below
    deg Phi_q, so equality is structural.
    """

    __slots__ = ("q", "coeffs", "_hash")

    def __init__(self, q: int, coeffs=None):
        self.q = q
        self.coeffs = {}
        self._hash = None
        if coeffs:
            table = _power_table(q)
            acc = {}
            for e, c in coeffs.items():
                c = Fraction(c)
                if not c:
                    continue
                for k, v in table[e % q].items():
                    acc[k] = acc.get(k, 0) + c * v
            self.coeffs = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, q, coeffs):
        obj = cls.__new__(cls)
        obj.q = q
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q, c):
        c = Fraction(c)
        return cls._raw(q, {0: c} if c else {})

    @classmethod
    def zeta(cls, q, k=1):
        return cls(q, {k % q: 1})

    @property
    def degree(self):
        return len(cyclotomic_polynomial(self.q)) - 1

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.rational(self.q, other)
        if not isinstance(other, Cyclotomic):
            raise TypeError(f"cannot combine Cyclotomic with {type(other).__name__}")
        if other.q != self.q:
            raise ValueError(f"conductor mismatch: {self.q} vs {other.q}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Cyclotomic._raw(self.q, out)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.q, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Cyclotomic._raw(self.q, {})
            return Cyclotomic._raw(self.q, {k: v * other for k, v in self.coeffs.items()})
        other = self._check(other)
        if len(self.coeffs) == 1 and 0 in self.coeffs:
            return other * self.coeffs[0]
        if len(other.coeffs) == 1 and 0 in other.coeffs:
            return self * other.coeffs[0]
        table = _power_table(self.q)
        acc = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                ab = a * b
                for k, v in table[(i + j) % self.q].items():
                    acc[k] = acc.get(k, 0) + ab * v
        return Cyclotomic._raw(self.q, {k: v for k, v in acc.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.rational(self.q, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._check(other).inverse()

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero")
        if len(self.coeffs) == 1:
            (k, v), = self.coeffs.items()
            # monomial: c x^k with x^q = 1
            return Cyclotomic(self.q, {(-k) % self.q: 1 / v})
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.q)]
        a = [self.coeffs.get(i, Fraction(0)) for i in range(self.degree)]
        s = _poly_inverse_mod(a, phi)
        return Cyclotomic(self.q, {i: c for i, c in enumerate(s) if c})

    def conjugate(self):
        """Complex conjugation, zeta -> zeta^-1."""
        return Cyclotomic(self.q, {(-k) % self.q: v for k, v in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def is_rational(self):
        return not self.coeffs or set(self.coeffs) == {0}

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(self.q, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.q, frozenset(self.coeffs.items())))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def to_complex(self):
        return sum(complex(v) * cmath.exp(2j * cmath.pi * k / self.q)
                   for k, v in self.coeffs.items()) + 0j

    def coefficient_list(self):
        return [self.coeffs.get(i, Fraction(0)) for i in range(self.degree)]

    def to_json(self):
        return [str(c) for c in self.coefficient_list()]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            parts.append(f"{v}" if k == 0 else f"{v}*z{self.q}^{k}")
        return " + ".join(parts)


def _poly_divmod(a, b):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        while a and not a[-1]:
            a.pop()
    return q, a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and not out[-1]:
        out.pop()
    return out


def _poly_inverse_mod(a, m):
    # extended Euclid over Q: find s with s*a = 1 mod m
    r0, r1 = list(m), list(a)
    while r1 and not r1[-1]:
        r1.pop()
    s0, s1 = [], [Fraction(1)]
    while r1 and len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element not invertible")
    c = r1[0]
    return [x / c for x in s1]


def _check_exponent(e):
    if not -EXPONENT_LIMIT < e < EXPONENT_LIMIT:
        raise OverflowError(f"Laurent exponent {e} out of range")
    return e


class LaurentPoly:
    """Laurent polynomial in tau, theta over Q(zeta_q).

    ``terms`` maps (e_tau, e_theta) -> nonzero Cyclotomic.
    """

    __slots__ = ("q", "terms")

    def __init__(self, q: int, terms=None):
        self.q = q
        self.terms = {}
        for mono, c in (terms or {}).items():
            if not isinstance(c, Cyclotomic):
                c = Cyclotomic.rational(q, c)
            elif c.q != q:
                raise ValueError("coefficient conductor mismatch")
            if c:
                self.terms[(_check_exponent(mono[0]), _check_exponent(mono[1]))] = c

    @classmethod
    def const(cls, q, c):
        return cls(q, {(0, 0): c})

    @classmethod
    def monomial(cls, q, e_tau=0, e_theta=0, c=1):
        return cls(q, {(e_tau, e_theta): c})

    @classmethod
    def tau(cls, q):
        return cls.monomial(q, 1, 0)

    @classmethod
    def theta(cls, q):
        return cls.monomial(q, 0, 1)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.q != self.q:
                raise ValueError(f"conductor mismatch: {self.q} vs {other.q}")
            return other
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return LaurentPoly.const(self.q, other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out[m] + c if m in out else c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly._from_clean(self.q, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._from_clean(self.q, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                m = (_check_exponent(a1 + a2), _check_exponent(b1 + b2))
                p = c1 * c2
                out[m] = out[m] + p if m in out else p
        return LaurentPoly._from_clean(self.q, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentPoly.const(self.q, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @classmethod
    def _from_clean(cls, q, terms):
        obj = cls.__new__(cls)
        obj.q = q
        obj.terms = terms
        return obj

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def inverse(self):
        if not self.is_monomial():
            raise ValueError("only monomials are units in the Laurent ring")
        (a, b), c = next(iter(self.terms.items()))
        return LaurentPoly(self.q, {(-a, -b): c.inverse()})

    def substitute(self, sub_tau: "LaurentPoly", sub_theta: "LaurentPoly") -> "LaurentPoly":
        return laurent_substitute(self, sub_tau, sub_theta)

    def star(self):
        """tau -> 1/tau, theta -> 1/theta, coefficients conjugated."""
        return LaurentPoly._from_clean(
            self.q, {(-a, -b): c.conjugate() for (a, b), c in self.terms.items()})

    def evaluate(self, tau: complex, theta: complex) -> complex:
        return sum(c.to_complex() * tau**a * theta**b for (a, b), c in self.terms.items()) + 0j

    def degree_range(self, var):
        es = [m[var] for m in self.terms]
        return (min(es), max(es)) if es else (0, 0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = LaurentPoly.const(self.q, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.q == other.q and self.terms == other.terms

    def __hash__(self):
        return hash((self.q, frozenset(self.terms.items())))

    def to_json(self):
        return [[[a, b], self.terms[(a, b)].to_json()] for a, b in sorted(self.terms)]

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for a, b in sorted(self.terms):
            out.append(f"({self.terms[(a, b)]!r})*t^{a}*h^{b}")
        return " + ".join(out)


def laurent_substitute(p: LaurentPoly, sub_tau: LaurentPoly, sub_theta: LaurentPoly) -> LaurentPoly:
    """Ring homomorphism tau -> sub_tau, theta -> sub_theta.

    Negative exponents need the corresponding substitute to be a unit
    (a monomial); anything else raises ValueError.
    """
    lo_t, _ = p.degree_range(0)
    lo_h, _ = p.degree_range(1)
    if lo_t < 0 and not sub_tau.is_monomial():
        raise ValueError("tau occurs with a negative exponent; substitute must be a unit monomial")
    if lo_h < 0 and not sub_theta.is_monomial():
        raise ValueError("theta occurs with a negative exponent; substitute must be a unit monomial")
    pow_t, pow_h = {}, {}

    def power(cache, base, e):
        if e not in cache:
            cache[e] = base ** e
        return cache[e]

    out = LaurentPoly(p.q)
    for (a, b), c in p.terms.items():
        out = out + power(pow_t, sub_tau, a) * power(pow_h, sub_theta, b) * c
    return out


class LaurentMat2:
    """2x2 matrix ((a, b), (c, d)) of LaurentPoly entries."""

    __slots__ = ("q", "entries")

    def __init__(self, q, a, b, c, d):
        self.q = q
        self.entries = tuple(x if isinstance(x, LaurentPoly) else LaurentPoly.const(q, x)
                             for x in (a, b, c, d))

    @classmethod
    def identity(cls, q):
        return cls(q, 1, 0, 0, 1)

    @classmethod
    def diag(cls, q, x, y):
        return cls(q, x, 0, 0, y)

    def __mul__(self, other):
        if isinstance(other, LaurentMat2):
            a, b, c, d = self.entries
            e, f, g, h = other.entries
            return LaurentMat2(self.q, a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return LaurentMat2(self.q, *(x * other for x in self.entries))

    def __rmul__(self, other):
        return LaurentMat2(self.q, *(other * x for x in self.entries))

    def __add__(self, other):
        return LaurentMat2(self.q, *(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return LaurentMat2(self.q, *(x - y for x, y in zip(self.entries, other.entries)))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentMat2.identity(self.q)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def det(self):
        return mat2_det(self)

    def adjugate(self):
        a, b, c, d = self.entries
        return LaurentMat2(self.q, d, -b, -c, a)

    def inverse(self):
        """Exact inverse; requires a unit (monomial) determinant."""
        return self.adjugate() * self.det().inverse()

    def star(self):
        return star(self)

    def substitute(self, sub_tau, sub_theta):
        return LaurentMat2(self.q, *(laurent_substitute(x, sub_tau, sub_theta) for x in self.entries))

    def evaluate(self, tau, theta):
        a, b, c, d = (x.evaluate(tau, theta) for x in self.entries)
        return ((a, b), (c, d))

    def is_zero(self):
        return all(x.is_zero() for x in self.entries)

    def __eq__(self, other):
        if not isinstance(other, LaurentMat2):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_json(self):
        a, b, c, d = self.entries
        return [[a.to_json(), b.to_json()], [c.to_json(), d.to_json()]]

    def __repr__(self):
        a, b, c, d = self.entries
        return f"[[{a!r}, {b!r}], [{c!r}, {d!r}]]"


def star(m: LaurentMat2) -> LaurentMat2:
    """Formal conjugate transpose; agrees with the Hermitian adjoint on |tau| = |theta| = 1."""
    a, b, c, d = m.entries
    return LaurentMat2(m.q, a.star(), c.star(), b.star(), d.star())


def mat2_det(m: LaurentMat2) -> LaurentPoly:
    a, b, c, d = m.entries
    return a * d - b * c


def common_conductor(*qs):
    out = 1
    for q in qs:
        out = out * q // gcd(out, q)
    return out
