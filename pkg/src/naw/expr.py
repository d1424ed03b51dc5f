"""Group expressions: E(d,j), H(n,d), A(n1,...), DP(x,y,...), CP(x,y).

Parsed with the ``ast`` module; only these calls with integer arguments are
accepted. CP uses a maximal amalgamation chosen deterministically.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

from .central import (
    SnmCertificate, central_product, embed_left, find_snm_certificate, maximal_amalgamation,
    CentralProductSpec,
)
from .groups import abelian_group, abelian_invariants, direct_product, e_group, heisenberg_group, prime_power

NAMES = {"E", "H", "A", "DP", "CP"}


class ExprError(ValueError):
    pass


@dataclass
class Node:
    op: str
    args: tuple

    def __str__(self):
        return f"{self.op}(" + ",".join(str(a) for a in self.args) + ")"


def parse(text: str) -> Node:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExprError(f"cannot parse {text!r}: {exc.msg}") from None
    return _node(tree.body)


def _node(x):
    if not isinstance(x, ast.Call) or not isinstance(x.func, ast.Name) or x.func.id not in NAMES:
        raise ExprError(f"expected one of {sorted(NAMES)}, got {ast.unparse(x)!r}")
    if x.keywords:
        raise ExprError("keyword arguments are not allowed")
    op = x.func.id
    if op in ("E", "H", "A"):
        vals = []
        for a in x.args:
            if not (isinstance(a, ast.Constant) and type(a.value) is int):
                raise ExprError(f"{op} takes integer arguments")
            vals.append(a.value)
        want = {"E": 2, "H": 2}.get(op)
        if want and len(vals) != want:
            raise ExprError(f"{op} takes {want} arguments")
        if op == "A" and not vals:
            raise ExprError("A needs at least one modulus")
        return Node(op, tuple(vals))
    kids = tuple(_node(a) for a in x.args)
    if op == "CP" and len(kids) != 2:
        raise ExprError("CP takes two groups")
    if op == "DP" and len(kids) < 2:
        raise ExprError("DP takes at least two groups")
    return Node(op, kids)


def build(node: Node):
    op, a = node.op, node.args
    if op == "E":
        return e_group(*a)
    if op == "H":
        return heisenberg_group(*a)
    if op == "A":
        return abelian_group(*a)
    if op == "DP":
        G = build(a[0])
        for k in a[1:]:
            G = direct_product(G, build(k))
        G.name = str(node)
        return G
    left, right = build(a[0]), build(a[1])
    phi = maximal_amalgamation(left, right)
    C = central_product(CentralProductSpec(left, right, phi), name=str(node))
    return C


def evaluate(text):
    node = parse(text)
    return node, build(node)


def _chain(node):
    """Flatten CP(CP(E, E), A) into ([E nodes], tail node or None)."""
    if node.op == "E":
        return [node], None
    if node.op == "CP":
        left, right = node.args
        es, tail = _chain(left)
        if tail is not None or right.op not in ("E", "A"):
            raise ExprError("not a chain")
        if right.op == "E":
            return es + [right], None
        return es, right
    raise ExprError("not a chain")


def certificate_for(node, G, cap=None):
    """An S_{n,m} certificate for the group of ``node``: read off a CP chain when
    possible, otherwise searched among E(p,0), E(p,1) products for p-groups."""
    try:
        es, tail = _chain(node)
    except ExprError:
        es = None
    if es:
        ds = {e.args[0] for e in es}
        if len(ds) == 1:
            d = ds.pop()
            js = [e.args[1] for e in es]
            A = build(tail) if tail else abelian_group(d)
            inv = abelian_invariants(A) if tail else (d,)
            H = build(es[0])
            gamma = (0, 0, 1 % d)
            src = gamma
            amalg = []
            parts = [build(e) for e in es[1:]] + [A]
            ok = True
            for R in parts:
                phi = maximal_amalgamation(H, R)
                if src not in phi.mapping or phi.source.order != d:
                    ok = False
                    break
                amalg.append((src, phi(src)))
                C = central_product(CentralProductSpec(H, R, phi))
                src = embed_left(C, src)
                H = C
            if ok:
                # the certificate rebuilds A from invariant factors; map the target along
                if tail:
                    amalg[-1] = (amalg[-1][0], _to_invariant_coords(A, inv, amalg[-1][1]))
                return SnmCertificate(len(es), max(len(inv), 1), d, js, tuple(inv), amalg)
    pk = prime_power(G.order)
    if pk is None or G.order == 1:
        return None
    return find_snm_certificate(G, pk[0], max(pk[1], 3), cap=cap)


def _to_invariant_coords(A, inv, z):
    """Image of z under some isomorphism A -> abelian_group(*inv) (order preserved)."""
    from .groups import iso_search
    std = abelian_group(*inv) if inv else abelian_group(1)
    iso = iso_search(A, std)
    return iso(z)
