"""naw: certificate-emitting command line front end.

Every command prints (or writes with --out) one JSON certificate and exits
0 when no check failed, 1 when some check failed, 2 on bad input, a cap
overflow, or when nothing conclusive was checked.
"""

from __future__ import annotations

import argparse
import ast
import sys

from . import __version__
from .certificate import INCONCLUSIVE, Certificate, error_certificate, jsonable
from .groups import (
    CapExceeded, center, check_group_axioms, e_group, e_relations, exponent, heisenberg_group,
    iso_search, max_order_cap, quaternion_group,
)


class UsageError(ValueError):
    pass


def group_summary(G):
    Z = G.center
    return {
        "name": G.name, "order": G.order, "generators": jsonable(G.gens),
        "center": {"order": Z.order, "generators": jsonable(Z.gens)},
        "exponent": exponent(G), "abelian": G.is_abelian,
    }


def _cap_guard(order, what):
    cap = max_order_cap()
    if order > cap:
        raise CapExceeded(f"{what} has order {order} > cap {cap} (set NAW_MAX_ORDER to raise it)")


def _iso_json(iso):
    if iso is None:
        return None
    return {"generator_images": [[jsonable(g), jsonable(h)] for g, h in iso.generator_images()]}


# -- commands --------------------------------------------------------------------------

def cmd_egroup(args, cert):
    d, j = args.d, args.j
    if d < 1 or not 0 <= j < d:
        raise UsageError("need d >= 1 and 0 <= j < d")
    _cap_guard(d**3, f"E({d},{j})")
    G = e_group(d, j)
    cert.artifacts["group"] = group_summary(G)
    cert.check("order = d^3", G.order == d**3, {"order": G.order})
    if not args.verify:
        return
    problems = check_group_axioms(G)
    cert.check("group axioms", not problems, {"problems": problems})
    a, b, c = (1 % d, 0, 0), (0, 1 % d, 0), (0, 0, 1 % d)
    for name, ok in e_relations(G, a, b, c, j, d).items():
        cert.check(name, ok)
    Z = center(G)
    gamma_sub = {G.power(c, k) for k in range(d)}
    cert.check("Z(G) = <gamma>", Z.members == gamma_sub, {"center_order": Z.order})
    cert.check("gamma has order d", G.order_of(c) == d)
    if j == 0:
        iso = iso_search(G, heisenberg_group(1, d))
        cert.check(f"E({d},0) = H_3(Z/{d})", iso is not None, {"iso": _iso_json(iso)})
    if d == 2:
        iso = iso_search(G, quaternion_group())
        cert.artifacts["isomorphic_to_Q8"] = iso is not None
        if j == 1:
            cert.check("E(2,1) = Q8", iso is not None, {"iso": _iso_json(iso)})


def cmd_heisenberg(args, cert):
    from .central import heisenberg_decomposition, snm_verify
    n, d = args.n, args.d
    if n < 1 or d < 1:
        raise UsageError("need n >= 1 and d >= 1")
    _cap_guard(d ** (2 * n + 1), f"H_{2 * n + 1}(Z/{d})")
    H = heisenberg_group(n, d)
    cert.artifacts["group"] = group_summary(H)
    cert.check("order = d^(2n+1)", H.order == d ** (2 * n + 1))
    if not args.decompose:
        return
    sc = heisenberg_decomposition(n, d)
    cert.add_verdict("internal", sc.evidence["internal"])
    v = snm_verify(H, sc)
    cert.add_verdict("snm", v)
    cert.artifacts["snm_certificate"] = sc.to_json()
    cert.artifacts["factors"] = len(sc.factors)
    cert.artifacts["iso_to_rebuilt"] = _iso_json(v.details["iso"].inverse() if v.details["iso"] else None)


def _parse_z(text):
    if text is None:
        return None
    try:
        vals = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad --z {text!r}: expected comma-separated integers") from None
    return vals


def cmd_action(args, cert):
    from .actions import build_snm_action, diagram_report, leaf_E_action, leaf_abelian_actions
    from .central import snm_verify
    from .expr import build, certificate_for, parse
    node = parse(args.expr)
    cert.inputs["parsed"] = str(node)
    z = _parse_z(args.z)
    G = build(node)
    _cap_guard(G.order, str(node))
    cert.artifacts["group"] = group_summary(G)
    reports = {}
    if node.op == "E":
        d, _ = node.args
        zz = None if z is None else (0, 0) + z[-1:]
        rho = leaf_E_action(*node.args, z=zz, G=G)
        reports["leaf"] = rho
        cert.check("leaf faithful", rho.faithful)
        cert.check("B = Lambda_d (|B| = d^2)", rho.b_order() == d * d, {"B_order": rho.b_order()})
        cert.check("Zbar = 1", rho.zbar_order() == 1)
    elif node.op == "A":
        if z is None:
            top = max(G.element_orders.values())
            z = min(g for g in G.elements if G.element_orders[g] == top)
        if len(z) != len(G.identity):
            raise UsageError(f"--z needs {len(G.identity)} coordinates")
        z = tuple(x % n for x, n in zip(z, node.args))
        full, line = leaf_abelian_actions(G, z)
        reports["rho_f"], reports["rho_1"] = full, line
        cert.inputs["z"] = z
        cert.check("rho_f faithful", full.faithful, {"kernel_order": full.kernel.order})
        cert.check("rho_f diagonal (trivial base)", full.base_kernel.order == G.order)
        cert.check("rank rho_1 = 1", line.rank == 1)
    else:
        if z is not None:
            raise UsageError("--z applies only to E(d,j) and A(...) leaves")
        sc = certificate_for(node, G)
        if sc is None:
            cert.check("S_{n,m} certificate found", INCONCLUSIVE, {"reason": "no certificate for this expression"})
            return
        v = snm_verify(G, sc)
        cert.add_verdict("snm", v)
        cert.artifacts["snm_certificate"] = sc.to_json()
        if not v.ok:
            return
        act = build_snm_action(sc)
        cert.add_verdict("action", act.verdict)
        reports["rho_f"], reports["rho_1"] = act.faithful, act.line
        cert.artifacts["stages"] = [s.to_json() for s in act.stages]
    for name, rho in reports.items():
        dr = diagram_report(rho)
        cert.add_verdict(f"diagram {name}", dr)
        cert.artifacts[name] = rho.to_json()


def cmd_bundle(args, cert):
    from .chern import assemble_pi_g, triviality_preconditions
    from .waring import build_multiset, delta_schedule
    n, m, d = args.n, args.m, args.d
    if not 1 <= n <= 4 or m < 1 or d < 1:
        raise UsageError("need 1 <= n <= 4, m >= 1, d >= 1")
    deltas = delta_schedule(n, d, args.delta_mode)
    try:
        ms = build_multiset(n, m, deltas)
        pi = assemble_pi_g(n, m, d, ms.entries, optimize=args.optimize)
    except (AssertionError, ValueError) as exc:
        # a divisibility failure here means the construction itself is broken
        cert.check("construction", False, {"error": str(exc)})
        return
    cert.add_verdict("multiset", ms.verify())
    cert.add_verdict("pi_G", pi.verdict())
    cert.add_verdict("triviality", triviality_preconditions(n, pi.rank, pi.ch))
    cert.artifacts["deltas"] = deltas
    cert.artifacts["multiset"] = ms.to_json()
    cert.artifacts["pi_G"] = pi.to_json()
    cert.artifacts["rank"] = pi.rank


def parse_pairs(text):
    pairs = []
    for chunk in (text or "").split(";"):
        if not chunk.strip():
            continue
        try:
            p = ast.literal_eval(chunk.strip())
        except (ValueError, SyntaxError):
            raise UsageError(f"cannot parse pair {chunk!r}") from None
        if not (isinstance(p, tuple) and len(p) == 2 and all(type(x) is int and x >= 1 for x in p)):
            raise UsageError(f"expected a pair of positive integers, got {chunk!r}")
        pairs.append(p)
    if not pairs:
        raise UsageError("--I must list at least one pair (n,m)")
    return pairs


def cmd_manifold(args, cert):
    from .waring import manifold_report
    I = parse_pairs(args.I)
    cert.inputs["I"] = sorted(set(I))
    v = manifold_report(I, args.r)
    cert.add_verdict("", v)
    cert.artifacts.update(v.details)
    cert.artifacts["manifold"] = " x ".join(f"(T^{f['torus_dim']} x U({f['R']}))" for f in v.details["factors"])
    if args.r > 1:
        cert.artifacts["manifold"] = f"[{cert.artifacts['manifold']}]^{args.r}"


def cmd_ghys(args, cert):
    from .ghys import analyze_unitarity, build_matrices, emit_region_table, numeric_action_check, \
        regions_partition, verify_relations
    d, j = args.d, args.j
    if d < 2 or not 0 <= j < d:
        raise UsageError("need d >= 2 and 0 <= j < d")
    g = build_matrices(d, j)
    cert.add_verdict("symbolic", verify_relations(g))
    cert.check("regions partition the circle", regions_partition(d))
    audit = analyze_unitarity(g)
    cert.check("det Q = theta^-2d", audit["det_Q_is_theta^-2d"])
    cert.check("Q unitary", audit["Q_star_Q_is_identity"])
    cert.artifacts["det_audit"] = audit
    cert.artifacts["matrices"] = {"q": g.q, "T": g.T, "M": g.M, "Q": g.Q, "P1": g.P1, "P2": g.P2}
    cert.artifacts["regions"] = emit_region_table(g)
    if args.numeric_samples > 0:
        rep = numeric_action_check(d, j, args.numeric_samples, args.tol, args.seed, g=g)
        for name, r in rep["relations"].items():
            if name == "rho(beta)^d = rho(gamma)":
                continue  # diagnostic only, kept in the artifact
            cert.check(f"numeric: {name}", r["within_tol"], {"max_deviation": r["max_deviation"]})
        cert.artifacts["numeric"] = rep


def cmd_waring(args, cert):
    from .waring import hl_bound_check, min_powers_for_neg1, residue_bfs
    k, q = args.k, args.modulus
    if k < 1 or q < 2:
        raise UsageError("need k >= 1 and modulus >= 2")
    M, w = min_powers_for_neg1(k, q)
    cert.artifacts.update({"M": M, "witness": w, "power_sum": sum(x**k for x in w)})
    cert.check("witness sums to -1", sum(x**k for x in w) % q == q - 1)
    cert.add_verdict("", hl_bound_check(k, q))
    if q <= 5000:
        cert.check("minimal (BFS)", residue_bfs(k, q)[q - 1] == M)


def cmd_special(args, cert):
    from .central import special_decomposition_search
    from .expr import build, parse
    node = parse(args.expr)
    cert.inputs["parsed"] = str(node)
    S = build(node)
    dec = special_decomposition_search(S, args.p)
    cert.artifacts["group"] = group_summary(S)
    cert.artifacts["branch"] = dec.branch
    cert.artifacts["r"] = dec.r
    cert.artifacts["parts"] = [
        {"K_generators": jsonable(K.gens), "K_order": K.order, "snm_certificate": sc.to_json(),
         "G_order": Gi.order}
        for K, sc, Gi in dec.parts
    ]
    cert.add_verdict("", dec.verdict)


COMMANDS = {
    "egroup": cmd_egroup, "heisenberg": cmd_heisenberg, "action": cmd_action, "bundle": cmd_bundle,
    "manifold": cmd_manifold, "ghys": cmd_ghys, "waring": cmd_waring, "special": cmd_special,
}


def build_parser():
    p = argparse.ArgumentParser(prog="naw", description="Exact checks for group actions on bundles.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--out", help="write the certificate here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = add("egroup", "construct E(d,j)")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--verify", action="store_true")

    sp = add("heisenberg", "construct H_{2n+1}(Z/d)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--decompose", action="store_true")

    sp = add("action", "faithful action for a group expression")
    sp.add_argument("expr")
    sp.add_argument("--z", help="central element, e.g. 1,2 for A(2,4) or 1 for E(d,j)")

    sp = add("bundle", "multiset and bundle with trivial Chern character")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--delta-mode", choices=["paper", "remark53"], default="paper")
    sp.add_argument("--optimize", action="store_true", help="drop pi_chi when chi has no higher part")

    sp = add("manifold", "dimensions of the target manifold")
    sp.add_argument("--I", default="", help='pairs like "(1,1);(2,1)"')
    sp.add_argument("--r", type=int, default=1)

    sp = add("ghys", "matrix relations of the SU(2) action")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--numeric-samples", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--emit-cert", dest="emit_cert", help="same as --out")

    sp = add("waring", "fewest k-th powers summing to -1 mod q")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--modulus", type=int, required=True)

    sp = add("special", "decompose a special p-group")
    sp.add_argument("expr")
    sp.add_argument("--p", type=int, required=True)
    return p


def run(argv=None):
    """Parse, run, and return (certificate, exit code)."""
    from .expr import ExprError
    args = build_parser().parse_args(argv)
    inputs = {k: v for k, v in vars(args).items() if k not in ("command", "out", "seed", "emit_cert")}
    cert = Certificate(args.command, inputs, args.seed)
    try:
        COMMANDS[args.command](args, cert)
    except (UsageError, ExprError, CapExceeded, ValueError) as exc:
        cert = error_certificate(args.command, inputs, f"{type(exc).__name__}: {exc}", args.seed)
        return cert, 2, args
    return cert, cert.exit_code(), args


def main(argv=None):
    cert, code, args = run(argv)
    out = args.out or getattr(args, "emit_cert", None)
    if out:
        cert.write(out)
        print(f"{args.command}: {cert.to_json()['status']} ({len(cert.checks)} checks) -> {out}")
    else:
        sys.stdout.write(cert.dumps())
    if code == 2 and "error" in cert.artifacts:
        print(cert.artifacts["error"], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
