"""Command line front end.

Exit status: 0 when everything checked out (or an analysis finished), 1 when a
verification or feasibility check failed, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis, generators
from .field import FieldError
from .graph import (
    Instance,
    InstanceError,
    count_edge_disjoint_paths,
    count_vertex_disjoint_paths,
    cut_set,
    load_instance,
    node_key,
    normalize_terminals,
    prune_unreachable,
    save_instance,
    tight_set_cut,
)
from .lincode import CodeError, export_code, import_code, verify_code
from .nonsecure import check_feasibility, construct
from .nonsecure import to_dot as keycast_dot
from .secure import check_conditions, construct_secure
from .secure import to_dot as secure_dot
from .secure import verify_secure

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _ids(xs) -> str:
    return "{" + ", ".join(str(x) for x in sorted(xs, key=node_key)) + "}"


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


# --- subcommands ------------------------------------------------------------------


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "fig3":
        inst = generators.gen_fig3(args.ell)
    elif fam == "fig4":
        inst = generators.gen_fig4(args.ell)
    elif fam == "secure-tight":
        inst = generators.gen_secure_tight()
    else:
        inst = generators.gen_random_dag(
            args.seed, args.nodes, args.edge_prob, args.ell, args.terminals_per_set
        )
    save_instance(inst, args.out)
    print(f"wrote {fam} instance to {args.out}: {len(inst.nodes)} nodes, "
          f"{len(inst.edges)} edges, {inst.num_sets} terminal sets")
    return EXIT_OK


def cmd_analyze(args) -> int:
    raw = load_instance(args.instance)
    lines = []
    payload: dict = {}
    try:
        pruned = prune_unreachable(raw)
    except InstanceError as exc:
        _emit(args, {"error": str(exc)}, f"instance infeasible: {exc}")
        return EXIT_OK

    plain = Instance(pruned.nodes, pruned.edges, pruned.source, pruned.terminal_sets)
    norm = normalize_terminals(plain)
    lines.append(f"instance: {len(raw.nodes)} nodes, {len(raw.edges)} edges, "
                 f"{raw.num_sets} terminal sets, secrecy mode {raw.secrecy_mode}")
    if norm is not plain:
        lines.append(f"normalised terminals: {len(norm.nodes) - len(plain.nodes)} auxiliary node(s) added")
    cuts = {}
    for j in range(1, norm.num_sets + 1):
        c = cut_set(norm, j)
        t = tight_set_cut(norm, j, c)
        cuts[j] = {"cut": sorted(c), "tight": sorted(t)}
        lines.append(f"  C_{j} = {_ids(c)}   T_{j} = {_ids(t)}")
    payload["sets"] = cuts

    conn = {}
    lines.append("connectivity from the source (edge-disjoint / vertex-disjoint paths):")
    for v in pruned.nodes_in_order:
        if v == pruned.source:
            continue
        ed, vd = count_edge_disjoint_paths(pruned, v), count_vertex_disjoint_paths(pruned, v)
        conn[str(v)] = [ed, vd]
        tag = " (terminal)" if v in pruned.terminals else ""
        lines.append(f"  {v}: {ed} / {vd}{tag}")
    payload["connectivity"] = conn

    feas = check_feasibility(norm)
    if feas:
        lines.append("keycast: FEASIBLE")
    else:
        i, j, d = feas.witness
        lines.append(f"keycast: INFEASIBLE (C_{j} cuts terminal {d} of D_{i} off the source)")
    payload["keycast"] = {"feasible": feas.feasible, "witness": feas.witness}

    cond = check_conditions(pruned)
    lines.append("secure: PASS" if cond else f"secure: FAIL ({cond.reason})")
    payload["secure"] = {"ok": cond.ok, "node": cond.node, "reason": cond.reason}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_construct(args) -> int:
    inst = load_instance(args.instance)
    if args.mode == "keycast":
        res = construct(inst, exhaustive=args.exhaustive)
        if res.code is None:
            i, j, d = res.feasibility.witness
            print(f"keycast: INFEASIBLE, C_{j} separates terminal {d} of D_{i}; no code written",
                  file=sys.stderr)
            return EXIT_FAIL
        dot = keycast_dot(res.instance, res.coloring) if args.dot else None
    else:
        res = construct_secure(inst, exhaustive=args.exhaustive)
        if res.code is None:
            print(f"secure: conditions fail at node {res.conditions.node} "
                  f"({res.conditions.reason}); no code written", file=sys.stderr)
            return EXIT_FAIL
        dot = secure_dot(res.instance, res.coloring) if args.dot else None
    if not res.report.ok:
        bad = res.report.first_failure
        print(f"verification failed: {bad.name}; no code written", file=sys.stderr)
        return EXIT_FAIL
    export_code(res.code, args.out)
    if dot is not None:
        with open(args.dot, "w") as fh:
            fh.write(dot)
    n = res.report.counts()
    summary = {
        "mode": args.mode,
        "rate": res.rate,
        "field": res.code.field.to_json(),
        "keys": {str(i): list(v) for i, v in res.code.keys.items()},
        "checks": n,
        "code": str(args.out),
    }
    text = (f"{args.mode}: verified rate-{res.rate} code over GF(2^{res.code.field.k}) "
            f"written to {args.out} ({n['PASS']} checks passed)")
    _emit(args, summary, text)
    return EXIT_OK


def _match_instance(inst: Instance, code) -> Instance:
    """Bring the instance into the shape the code was built for."""
    inst = prune_unreachable(inst)
    if set(code.edge_msgs) - set(inst.edge_by_id):
        inst = normalize_terminals(inst)
    return inst


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    code = import_code(args.code)
    inst = _match_instance(inst, code)
    if inst.secrecy_mode == "node_eavesdropper":
        report = verify_secure(inst, code, exhaustive=args.exhaustive)
    else:
        report = verify_code(inst, code, exhaustive=args.exhaustive)
    bad = report.first_failure
    text = report.to_text(verbose=args.verbose)
    if bad is not None:
        text = f"FAIL: first failing check: {bad.name}\n" + text
    else:
        text = "PASS\n" + text
    _emit(args, report.to_json(), text)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_plotkin(args) -> int:
    if args.M < 2 or args.n < 1 or not 0 < args.w <= 1:
        raise UsageError("need M >= 2, n >= 1 and 0 < w <= 1")
    bound = analysis.plotkin_bound(args.M, args.n, args.w)
    payload = {"n": args.n, "M": args.M, "w": str(args.w), "bound": str(bound)}
    lines = [f"n={args.n} M={args.M} w={args.w}",
             f"bound n*w*(2-w)*(1+1/(M-1)) = {bound}"]
    status = EXIT_OK
    if args.eps is not None:
        M, cb = analysis.corollary1_bound(args.n, args.w, args.eps)
        payload["relaxed"] = {"eps": str(args.eps), "M": M, "bound": str(cb)}
        lines.append(f"relaxed bound (eps={args.eps}): M={M}, bound n(2w-w^2)+eps*n = {cb}")
    if args.exhaustive:
        chk = analysis.verify_plotkin_exhaustive(args.n, args.M, args.w)
        verdict = "PASS" if chk.ok else "FAIL"
        payload["exhaustive"] = {"ok": chk.ok, "codebooks": chk.codebooks,
                                 "worst": chk.worst, "violation": chk.violation}
        lines.append(f"exhaustive: {chk.checked} codebooks, largest min support union "
                     f"{chk.worst} <= {bound}: {verdict}")
        if not chk.ok:
            lines.append(f"violating codebook: {chk.violation}")
            status = EXIT_FAIL
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_gap(args) -> int:
    if args.eps <= 0:
        raise UsageError("eps must be positive")
    if args.setting == "nonsecure":
        rep = analysis.sr_gap_report_nonsecure(args.eps)
    else:
        rep = analysis.sr_gap_report_secure(args.eps)
    _emit(args, analysis.jsonable(rep), analysis.format_report(rep))
    return EXIT_OK if rep["verified"] else EXIT_FAIL


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="keycast", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated instance")
    g.add_argument("family", choices=["fig3", "fig4", "secure-tight", "random"])
    g.add_argument("--ell", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--nodes", type=int, default=10)
    g.add_argument("--edge-prob", type=float, default=0.4)
    g.add_argument("--terminals-per-set", type=int, default=1)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="cut sets, connectivity and feasibility verdicts")
    a.add_argument("instance")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("construct", help="build and verify a code")
    c.add_argument("instance")
    c.add_argument("--mode", choices=["keycast", "secure"], default="keycast")
    c.add_argument("-o", "--out", required=True)
    c.add_argument("--dot")
    c.add_argument("--exhaustive", action="store_true")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="verify a code file against an instance")
    v.add_argument("instance")
    v.add_argument("code")
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--verbose", "-v", action="store_true")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plotkin", help="support-union bound for weight-capped codes")
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--M", type=int, required=True)
    pl.add_argument("--w", type=_fraction, required=True)
    pl.add_argument("--eps", type=_fraction)
    pl.add_argument("--exhaustive", action="store_true")
    pl.add_argument("--json", action="store_true")
    pl.set_defaults(func=cmd_plotkin)

    gp = sub.add_parser("gap", help="key-cast rate versus the source-reconstruction bound")
    gp.add_argument("setting", choices=["nonsecure", "secure"])
    gp.add_argument("--eps", type=_fraction, required=True)
    gp.add_argument("--json", action="store_true")
    gp.set_defaults(func=cmd_gap)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, InstanceError, CodeError, FieldError, ValueError, TypeError, OSError) as exc:
        print(f"keycast: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
