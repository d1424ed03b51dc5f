"""The explicit E(d, j) action on T^2 x SU(2): exact matrices, relations and sampling."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import Cyclotomic, LaurentMat2, LaurentPoly, common_conductor, mat2_det, star
from .verdict import Verdict

REGIONS = ("[0, pi/d)", "[pi/d, 2pi/d)", "[2pi/d, 3pi/d)", "[3pi/d, 2pi)")


@dataclass
class GhysMatrices:
    d: int
    j: int
    q: int
    T: LaurentMat2
    M: LaurentMat2
    Q: LaurentMat2
    P1: LaurentMat2
    P2: LaurentMat2

    def mu(self, n, k=1):
        """mu_n^k = exp(2 pi i k / n) in the working field."""
        if self.q % n:
            raise ValueError(f"mu_{n} is not in Q(zeta_{self.q})")
        return Cyclotomic.zeta(self.q, (self.q // n) * k)

    @property
    def Qinv(self):
        return self.Q.inverse()


def build_matrices(d, j, prefactor_power=None) -> GhysMatrices:
    """T, M and Q over Q(zeta_q), q = lcm(d^2, 2d); Q exactly as printed.

    ``prefactor_power`` replaces the 2d in 1/(4 theta^(2d)); only the audit uses it.
    """
    if d < 2 or not 0 <= j < d:
        raise ValueError("need d >= 2 and 0 <= j < d")
    q = common_conductor(d * d, 2 * d)
    tau = LaurentPoly.tau(q)
    th = LaurentPoly.theta(q)
    td = th**d
    T = LaurentMat2.diag(q, tau, tau**-1)
    mu = Cyclotomic.zeta(q, q // (d * d))
    M = LaurentMat2.diag(q, LaurentPoly.const(q, mu), LaurentPoly.const(q, mu.inverse()))
    P1 = LaurentMat2(q, tau**d * (td + 1), td - 1, tau**d * (td - 1), td + 1)
    P2 = LaurentMat2(q, td + 1, tau**-d * (td - 1), td - 1, tau**-d * (td + 1))
    e = 2 * d if prefactor_power is None else prefactor_power
    pre = LaurentPoly.monomial(q, 0, -e, Fraction(1, 4))
    Q = (P1 * P2) * pre
    return GhysMatrices(d, j, q, T, M, Q, P1, P2)


def _subs(g, tau_scale=None, theta=None, theta_scale=None):
    q = g.q
    st = LaurentPoly.tau(q) * (tau_scale if tau_scale is not None else 1)
    if theta is not None:
        sh = LaurentPoly.const(q, theta)
    else:
        sh = LaurentPoly.theta(q) * (theta_scale if theta_scale is not None else 1)
    return st, sh


def verify_relations(g: GhysMatrices) -> Verdict:
    d = g.d
    I = LaurentMat2.identity(g.q)
    Q, T, M = g.Q, g.T, g.M
    rels = {
        "Q(mu_d tau, theta) = Q": (Q.substitute(*_subs(g, tau_scale=g.mu(d))), Q),
        "Q(tau, mu_d theta) = Q": (Q.substitute(*_subs(g, theta_scale=g.mu(d))), Q),
        "Q(tau, 1) = T^d": (Q.substitute(*_subs(g, theta=1)), T**d),
        "Q(tau, mu_2d) = 1": (Q.substitute(*_subs(g, theta=g.mu(2 * d))), I),
        "T(mu_d tau) = M^d T": (T.substitute(*_subs(g, tau_scale=g.mu(d))), M**d * T),
    }
    checks = {name: lhs == rhs for name, (lhs, rhs) in rels.items()}
    diffs = {name: (lhs - rhs) for name, (lhs, rhs) in rels.items() if lhs != rhs}
    return Verdict.of(checks, differences=diffs)


def analyze_unitarity(g: GhysMatrices) -> dict:
    q, d = g.q, g.d
    one = LaurentPoly.const(q, 1)
    I = LaurentMat2.identity(q)
    detQ = mat2_det(g.Q)
    expected = LaurentPoly.monomial(q, 0, -2 * d)
    alt = build_matrices(d, g.j, prefactor_power=d)
    alt_at = alt.Q.substitute(*_subs(alt, theta=alt.mu(2 * d)))
    return {
        "det_T": mat2_det(g.T) == one,
        "det_M": mat2_det(g.M) == one,
        "det_Q": detQ,
        "det_Q_is_theta^-2d": detQ == expected,
        "det_Q_is_1": detQ == one,
        "Q_star_Q_is_identity": star(g.Q) * g.Q == I,
        "special_unitary_claim_consistent": detQ == one,
        "alternative_prefactor_theta^-d": {
            "det_is_1": mat2_det(alt.Q) == one,
            "Q(tau, mu_2d)": alt_at,
            "Q(tau, mu_2d) = 1": alt_at == I,
            "Q(tau, mu_2d) = -1": alt_at == I * -1,
        },
        "M_order": _mat_order(g.M, d * d * 2),
        "M^d_order": _mat_order(g.M**d, d * d),
    }


def _mat_order(X, limit):
    I = LaurentMat2.identity(X.q)
    P = X
    for k in range(1, limit + 1):
        if P == I:
            return k
        P = P * X
    return None


def region_of(u, d):
    """Region index for arg(theta) = u * pi / d, u in [0, 2d)."""
    if not 0 <= u < 2 * d:
        raise ValueError("angle out of range")
    return 0 if u < 1 else 1 if u < 2 else 2 if u < 3 else 3


def region_bounds(d):
    """Half-open intervals, in units of pi/d."""
    return [(0, 1), (1, 2), (2, 3), (3, 2 * d)]


def emit_region_table(g: GhysMatrices) -> list:
    d, j = g.d, g.j
    T, M, Q, Qi = g.T, g.M, g.Q, g.Qinv
    Mj, Md = M**j, M**d
    Ti = T**-1
    Td1 = T ** (d - 1)
    return [
        {"region": REGIONS[0], "A": Mj, "B": Q * Ti * M, "C": Md},
        {"region": REGIONS[1], "A": Mj, "B": Td1 * M, "C": Md},
        {"region": REGIONS[2], "A": Q * Mj * Qi, "B": Td1 * M * Qi, "C": Q * Md * Qi},
        {"region": REGIONS[3], "A": Mj, "B": Ti * M, "C": Md},
    ]


def regions_partition(d):
    b = region_bounds(d)
    return b[0][0] == 0 and b[-1][1] == 2 * d and all(b[i][1] == b[i + 1][0] for i in range(3)) \
        and all(lo < hi for lo, hi in b)


# -- numeric sampling -----------------------------------------------------------------

class _NumericTable:
    def __init__(self, g):
        self.g = g
        self.table = emit_region_table(g)
        self.d = g.d

    def mat(self, name, tau, u):
        r = region_of(u, self.d)
        theta = cmath.exp(1j * np.pi * u / self.d)
        return np.array(self.table[r][name].evaluate(tau, theta))

    def act(self, gen, state):
        tau, u, S = state
        d = self.d
        mu = cmath.exp(2j * np.pi / d)
        if gen == "a":
            return (mu * tau, u, self.mat("A", tau, u) @ S)
        if gen == "b":
            return (tau, (u + 2) % (2 * d), self.mat("B", tau, u) @ S)
        return (tau, u, self.mat("C", tau, u) @ S)

    def word(self, w, state):
        """Apply the word right to left, as composition of maps."""
        for gen in reversed(w):
            state = self.act(gen, state)
        return state


def _distance(x, y, d):
    tau1, u1, S1 = x
    tau2, u2, S2 = y
    th1 = cmath.exp(1j * np.pi * u1 / d)
    th2 = cmath.exp(1j * np.pi * u2 / d)
    return abs(tau1 - tau2) + abs(th1 - th2) + float(np.max(np.abs(S1 - S2)))


def random_su2(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    Qm, R = np.linalg.qr(z)
    Qm = Qm * (np.diag(R) / np.abs(np.diag(R)))
    return Qm / np.sqrt(np.linalg.det(Qm))


def numeric_action_check(d, j, samples=100, tol=1e-9, seed=0, g=None) -> dict:
    g = g or build_matrices(d, j)
    nt = _NumericTable(g)
    rng = np.random.default_rng(seed)
    points = []
    for u in (0, 1, 2, 3):
        points.append((complex(cmath.exp(2j * np.pi * rng.random())), float(u), random_su2(rng)))
    for _ in range(samples):
        points.append((complex(cmath.exp(2j * np.pi * rng.random())), float(rng.random() * 2 * d),
                       random_su2(rng)))
    rels = {
        "rho(alpha)^d = rho(gamma)^j": ("a" * d, "c" * j),
        "rho(beta)^d = rho(gamma)^j": ("b" * d, "c" * j),
        "rho(beta)^d = rho(gamma)": ("b" * d, "c"),
        "rho(gamma)^d = id": ("c" * d, ""),
        "rho(alpha) rho(gamma) = rho(gamma) rho(alpha)": ("ac", "ca"),
        "rho(beta) rho(gamma) = rho(gamma) rho(beta)": ("bc", "cb"),
        "rho(alpha) rho(beta) = rho(beta) rho(alpha) rho(gamma)": ("ab", "bac"),
    }
    report = {}
    for name, (lhs, rhs) in rels.items():
        worst, bad = 0.0, []
        for i, p in enumerate(points):
            dev = _distance(nt.word(lhs, p), nt.word(rhs, p), d)
            worst = max(worst, dev)
            if dev > tol:
                bad.append({"index": i, "arg_theta_over_pi_d": p[1], "deviation": dev})
        report[name] = {"max_deviation": worst, "within_tol": worst <= tol,
                        "violations": len(bad), "first_violations": bad[:5]}
    return {"d": d, "j": j, "samples": len(points), "boundary_points": 4, "tol": tol,
            "seed": seed, "relations": report}
