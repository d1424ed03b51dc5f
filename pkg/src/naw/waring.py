"""Sums of k-th powers modulo q and the product multisets with controlled power sums."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod

import numpy as np

from .verdict import Verdict


def power_sum(A, k):
    return sum(a**k for a in A)


def kth_power_residues(k, q):
    return sorted({pow(x, k, q) for x in range(q)})


def residue_bfs(k, q):
    """dist[r]: fewest k-th powers summing to r mod q. Plain BFS, for small q."""
    powers = kth_power_residues(k, q)
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for r in frontier:
            for p in powers:
                s = (r + p) % q
                if s not in dist:
                    dist[s] = dist[r] + 1
                    nxt.append(s)
        frontier = nxt
    return dist


@lru_cache(maxsize=64)
def _levels(k, q, stop):
    """Array of distances (-1 = not reached yet) grown until ``stop`` is reached.

    Each level is a cyclic convolution of the reachable set with the set of
    k-th power residues, done by FFT; counts are small integers so rounding
    is safe.
    """
    dist = np.full(q, -1, dtype=np.int16)
    dist[0] = 0
    P = np.zeros(q)
    P[kth_power_residues(k, q)] = 1.0
    fP = np.fft.rfft(P)
    cur = np.zeros(q)
    cur[0] = 1.0
    t = 0
    while dist[stop] < 0:
        t += 1
        nxt = np.fft.irfft(np.fft.rfft(cur) * fP, n=q) > 0.5
        new = nxt & (dist < 0)
        if not new.any():
            raise AssertionError(f"residue {stop} unreachable mod {q}")
        dist[new] = t
        cur = nxt.astype(float)
    return dist


def min_powers_for_neg1(k, q):
    """(M, witness): fewest k-th powers of 0..q-1 summing to -1 mod q.

    The witness lists the bases; at each step the smallest base that stays on
    a shortest path is taken.
    """
    if k < 1 or q < 2:
        raise ValueError("need k >= 1 and q >= 2")
    target = q - 1
    dist = _levels(k, q, target)
    M = int(dist[target])
    witness = []
    r = target
    while r:
        for x in range(q):
            prev = (r - pow(x, k, q)) % q
            if 0 <= dist[prev] == dist[r] - 1:
                witness.append(x)
                r = prev
                break
    if power_sum(witness, k) % q != target or len(witness) != M:
        raise AssertionError("witness reconstruction failed")
    return M, witness


def hl_bound_check(k, q) -> Verdict:
    M, _ = min_powers_for_neg1(k, q)
    return Verdict(M <= 4 * k, {"M <= 4k": M <= 4 * k}, {"M": M, "bound": 4 * k})


def M_cap(k):
    return 4 * k


def capped_N(n, m):
    return (m + 1) * prod(M_cap(k) + 1 for k in range(2, n + 1))


def rank_R(n, m):
    return capped_N(n, m) + n


def delta_schedule(n, d, mode="paper"):
    if d < 1:
        raise ValueError("need d >= 1")
    if mode == "paper":
        return [d ** (2 * k) * factorial(k) for k in range(1, n + 1)]
    if mode == "remark53":
        return [d**k for k in range(1, n + 1)]
    raise ValueError(f"unknown delta mode {mode!r}")


def multiset_product(*As):
    out = [1]
    for A in As:
        out = [x * a for x in out for a in A]
    return out


@dataclass
class WaringMultiset:
    n: int
    m: int
    deltas: list
    entries: list
    factors: list = field(default_factory=list)   # A_1, ..., A_n
    witnesses: dict = field(default_factory=dict)

    @property
    def power_sums(self):
        return [power_sum(self.entries, k) for k in range(1, self.n + 1)]

    def verify(self) -> Verdict:
        A = self.entries
        checks = {
            "cardinality = N(n,m)": len(A) == capped_N(self.n, self.m),
            "multiplicity of 1 >= m": Counter(A)[1] >= self.m,
        }
        for k, dk in enumerate(self.deltas, start=1):
            checks[f"delta_{k} | p_{k}"] = power_sum(A, k) % dk == 0
        return Verdict.of(checks, power_sums=self.power_sums)

    def to_json(self):
        return {
            "n": self.n, "m": self.m, "deltas": list(self.deltas),
            "entries": [[a, c] for a, c in sorted(Counter(self.entries).items())],
            "factors": [[[a, c] for a, c in sorted(Counter(F).items())] for F in self.factors],
            "power_sums": [str(p) for p in self.power_sums],
            "witnesses": {str(k): v for k, v in sorted(self.witnesses.items())},
        }


def build_multiset(n, m, deltas) -> WaringMultiset:
    deltas = list(deltas)
    if len(deltas) != n:
        raise ValueError(f"need {n} deltas, got {len(deltas)}")
    if any(dk == 0 for dk in deltas):
        raise ValueError("deltas must be nonzero")
    factors = [[1] * m + [-m]]
    witnesses = {}
    for k in range(2, n + 1):
        q = abs(deltas[k - 1])
        if q == 1:
            B = [0] * M_cap(k)
            witnesses[k] = {"modulus": 1, "M": 0, "witness": []}
        else:
            M, w = min_powers_for_neg1(k, q)
            if M > M_cap(k):
                raise AssertionError(f"M_{k} = {M} exceeds 4k for modulus {q}")
            B = w + [0] * (M_cap(k) - M)
            witnesses[k] = {"modulus": q, "M": M, "witness": w}
        factors.append([1] + B)
    A = multiset_product(*factors)
    out = WaringMultiset(n, m, deltas, sorted(A), factors, witnesses)
    v = out.verify()
    if not v:
        raise AssertionError(f"multiset checks failed: {v.failed()}")
    return out


# -- manifold bookkeeping ------------------------------------------------------------

def manifold_report(I, r) -> Verdict:
    I = sorted(set(tuple(p) for p in I))
    if not I:
        raise ValueError("I must be nonempty")
    if r < 1:
        raise ValueError("need r >= 1")
    factors = []
    checks = {}
    for n, m in I:
        R = rank_R(n, m)
        factors.append({"n": n, "m": m, "N": capped_N(n, m), "R": R,
                        "torus_dim": 2 * n, "unitary_dim": R * R, "dim": 2 * n + R * R,
                        "su_alternative": f"T^{2 * n} x SU({R + 1})"})
        checks[f"R({n},{m}) >= n"] = R >= n
        if m == 1:
            bound = 5**n * factorial(n)
            checks[f"R({n},1) <= 5^n n!"] = R <= bound
    dim = sum(f["dim"] for f in factors)
    # special p-groups of order p^r: pairs with 2n + m <= max(r, 3); concrete
    # target T^(r^2+r) x U(5^r floor(r/2)!)^r
    rr = max(r, 3)
    family = {"torus_dim": r * r + r, "unitary_rank": 5**r * factorial(r // 2), "copies": r}
    return Verdict.of(checks, factors=factors, dim=dim, power=r, total_dim=dim * r,
                      special_family_bound=rr, special_family_example=family)
