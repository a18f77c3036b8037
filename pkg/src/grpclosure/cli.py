"""Command-line front end.

Exit codes: 0 ok, 1 group error, 2 parse error, 3 bound exceeded,
4 not subnormal, 5 additivity violated, 6 a claimed property failed.
"""

from __future__ import annotations

import argparse
import random
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

from . import abelian as ab
from .closure import (
    ClosureOperatorId,
    apply,
    audit_operator,
    equivalence_1_2,
    is_additive_on,
    is_normal_valued,
    shipped_operators,
)
from .errors import (
    AdditivityViolated,
    GroupError,
    NotAHomomorphism,
    NotSubnormal,
    OrderBoundExceeded,
    ParseError,
    QuantifierCheckInfeasible,
)
from .group import DEFAULT_LATTICE_BOUND, DEFAULT_ORDER_BOUND, all_subgroups, homomorphism, is_normal, join
from .named import load_group, named_group, select_corpus
from .report import (
    dumps,
    join_dot,
    join_json,
    lattice_dot,
    series_dot,
    series_json,
    subgroup_json,
    to_jsonable,
)
from .subnormal import is_subnormal, join_experiment, normal_closure_series, subnormal_subgroups

EXIT_OK, EXIT_GROUP, EXIT_PARSE, EXIT_BOUND, EXIT_NOT_SUBNORMAL, EXIT_ADDITIVITY, EXIT_DISCREPANCY = range(7)

AXIOMS = ("extension", "monotone", "continuity")


class Output:
    """What a command produced: a JSON-able payload plus text and DOT renderings."""

    def __init__(self, payload: dict, text: str, dot: str | None = None, discrepancy: bool = False):
        self.payload = payload
        self.text = text
        self.dot = dot
        self.discrepancy = discrepancy


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def parse_subgroup(G, spec: str):
    """Generators separated by ``;``; ``()`` or an empty string is the trivial group."""
    parts = [p.strip() for p in spec.split(";") if p.strip()]
    return G.subgroup(parts)


def _sub_text(H) -> str:
    gens = ", ".join(str(g) for g in H.generators) or "()"
    return f"order {H.order} <{gens}>"


# -- permutation-group commands --------------------------------------------------

def cmd_closure(args) -> Output:
    G = load_group(args.group, args.order_bound)
    H = parse_subgroup(G, args.sub)
    op = ClosureOperatorId.parse(args.op)
    val = apply(op, G, H)
    payload = {"command": "closure", "group": G.name, "operator": str(op), "subgroup": subgroup_json(H),
               "closure": subgroup_json(val), "normal": is_normal(val), "is_whole": val.is_whole(),
               "is_trivial": val.is_trivial()}
    text = f"{op.label}_{G.name}({_sub_text(H)}) = {_sub_text(val)}; normal in G: {is_normal(val)}"
    return Output(payload, text)


def cmd_series(args) -> Output:
    G = load_group(args.group, args.order_bound)
    H = parse_subgroup(G, args.sub)
    s = normal_closure_series(G, H)
    payload = {"command": args.command, "group": G.name, **series_json(s)}
    lines = []
    for i, K in enumerate(s.chain):
        tick = ""
        if i:
            tick = " (normal in previous)" if is_normal(K, s.chain[i - 1]) else " (NOT normal in previous)"
        lines.append(f"H_{i}: {_sub_text(K)}{tick}")
    orders = " > ".join(str(K.order) for K in s.chain)
    lines.append(f"chain {orders}")
    lines.append(f"defect {s.defect}" if s.subnormal else "not subnormal")
    if args.command == "defect":
        lines = lines[-1:]
    return Output(payload, "\n".join(lines), series_dot(s))


def cmd_join(args) -> Output:
    G = load_group(args.group, args.order_bound)
    H = parse_subgroup(G, args.h)
    K = parse_subgroup(G, args.k)
    op = ClosureOperatorId.parse(args.op)
    exp = join_experiment(G, H, K, op, full_grid=args.full_grid, bound=args.lattice_bound)
    payload = {"command": "join", **join_json(exp)}
    m, n = exp.defects
    lines = [f"defects m={m} n={n}; T = {_sub_text(exp.T)}",
             f"grid entries computed: {len(exp.grid)}",
             f"closure {op.label}_T(T) = {_sub_text(exp.closure)}"]
    for st in exp.steps:
        lines.append(f"  {st.smaller.order} in {st.larger.order}: {'normal' if st.normal else 'NOT normal'}")
    lines.append(f"chain verified: {exp.chain_verified}")
    lines.append(f"verdict: {'subnormal' if exp.verdict else 'not subnormal'}"
                 + (f", defect {exp.closure_defect}" if exp.verdict else ""))
    return Output(payload, "\n".join(lines), join_dot(exp),
                  discrepancy=not (exp.verdict and exp.chain_verified))


def cmd_lattice(args) -> Output:
    G = load_group(args.group, args.order_bound)
    subs = all_subgroups(G, args.lattice_bound)
    payload = {"command": "lattice", "group": G.name,
               "subgroups": [dict(subgroup_json(H), normal=is_normal(H)) for H in subs]}
    text = "\n".join(f"{_sub_text(H)}{' normal' if is_normal(H) else ''}" for H in subs)
    return Output(payload, text, lattice_dot(G, args.lattice_bound))


# -- audit ---------------------------------------------------------------------------

def _random_homs(G, count: int, rng: random.Random):
    """Valid endomorphisms found by guessing generator images."""
    out = []
    attempts = 0
    while len(out) < count and attempts < 20 * count:
        attempts += 1
        imgs = {g: rng.choice(G.elements) for g in G.generators}
        try:
            out.append(homomorphism(G, G, imgs, name=f"random endomorphism {attempts}"))
        except NotAHomomorphism:
            continue
    return out


def audit_group(name: str, ops: list[str], bound: int, wielandt: bool, random_homs: int, seed: int) -> dict:
    """Everything recorded for one corpus group; plain data so workers can return it."""
    G = named_group(name)
    if G.order > bound:
        raise OrderBoundExceeded(G.order, bound, "lattice of group")
    homs = _random_homs(G, random_homs, random.Random(f"{seed}:{name}")) if random_homs else []
    entry = {"group": G.name, "order": G.order, "subgroups": len(all_subgroups(G, bound)), "operators": {}}
    flags = []
    for key in ops:
        op = ClosureOperatorId.parse(key)
        rep = audit_operator(op, G, homs, bound=bound)
        eq = equivalence_1_2(op, G, bound)
        normal_valued = is_normal_valued(op, G, bound)[0]
        additive = is_additive_on(op, G, bound)[0]
        row = to_jsonable(rep.checks)
        failed_axioms = [a for a in AXIOMS if not rep.checks[a].holds]
        remark = normal_valued and not additive
        entry["operators"][str(op)] = {
            "checks": row,
            "equivalence_applicable": eq.applicable,
            "equivalence_discrepancy": eq.paper_discrepancy,
            "normal_valued_not_additive": remark,
        }
        for a in failed_axioms:
            flags.append(f"{op} {a}")
        if eq.paper_discrepancy:
            flags.append(f"{op} additive/sup-closed mismatch")
        if remark:
            flags.append(f"{op} normal-valued but not additive")
    if wielandt:
        subs = subnormal_subgroups(G, bound)
        pairs = viol = 0
        for i, H in enumerate(subs):
            for K in subs[i:]:
                pairs += 1
                if not is_subnormal(G, join(H, K))[0]:
                    viol += 1
        entry["wielandt"] = {"subnormal_subgroups": len(subs), "pairs": pairs, "violations": viol}
        if viol:
            flags.append(f"{viol} non-subnormal joins")
    entry["discrepancies"] = flags
    return entry


def _corpus_equivalence(entries: list[dict], ops: list[str]) -> dict:
    """The equivalence read over the whole corpus instead of group by group."""
    out = {}
    for op in ops:
        def every(check):
            return all(e["operators"][op]["checks"][check]["holds"] for e in entries)
        idem, add, sup = every("idempotent"), every("additive"), every("closed_class_sup_closed")
        out[op] = {"idempotent": idem, "additive": add, "sup_closed": sup,
                   "discrepancy": idem and add != sup}
    return out


def cmd_audit(args) -> Output:
    # resolve the corpus in the parent so bad selectors fail before any work
    corpus = select_corpus(args.corpus, args.lattice_bound)
    ops = [str(ClosureOperatorId.parse(o)) for o in args.ops.split(",") if o.strip()] if args.ops \
        else [str(o) for o in shipped_operators()]
    names = [G.name for G in corpus]
    job = (ops, args.lattice_bound, args.wielandt, args.random_homs, args.seed)
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(audit_group, n, *job) for n in names]
            entries = [f.result() for f in futures]
    else:
        entries = [audit_group(n, *job) for n in names]
    flagged = [e for e in entries if e["discrepancies"]]
    summary = {"groups": len(entries), "operators": ops, "groups_with_discrepancies": len(flagged),
               "discrepancy_count": sum(len(e["discrepancies"]) for e in entries)}
    summary["equivalence_over_corpus"] = _corpus_equivalence(entries, ops)
    if args.wielandt:
        summary["wielandt_pairs"] = sum(e["wielandt"]["pairs"] for e in entries)
        summary["wielandt_violations"] = sum(e["wielandt"]["violations"] for e in entries)
    payload = {"command": "audit", "corpus": args.corpus, "seed": args.seed, "groups": entries,
               "summary": summary, "paper_discrepancy": bool(flagged)}
    lines = [f"{len(entries)} groups, operators {', '.join(ops)}"]
    for e in entries:
        status = "ok" if not e["discrepancies"] else "; ".join(e["discrepancies"])
        lines.append(f"{e['group']:<14} order {e['order']:>3}  {e['subgroups']:>3} subgroups  {status}")
    if args.wielandt:
        lines.append(f"wielandt: {summary['wielandt_pairs']} subnormal pairs, "
                     f"{summary['wielandt_violations']} violations")
    lines.append(f"discrepancies: {summary['discrepancy_count']}")
    return Output(payload, "\n".join(lines), discrepancy=bool(flagged))


# -- abelian -------------------------------------------------------------------------

def _abelian_pair(args):
    G = ab.parse_group(args.g)
    rows = ab.parse_matrix(args.h) if args.h else []
    for v in rows:
        if len(v) != G.rank:
            raise ParseError(f"generator {v} does not match {G.rank} coordinates")
    return G, ab.AbelianSubgroup(G, [tuple(r) for r in rows]), ab.SubcategoryA.parse(args.cat)


def cmd_abelian(args) -> Output:
    sub = args.abelian_command
    if sub == "hom":
        Q, A = ab.parse_group(args.q), ab.parse_group(args.a)
        hg = ab.hom_group(Q, A)
        payload = {"command": "abelian hom", "Q": Q, "A": A, "hom": list(hg.invariant_factors),
                   "zero": hg.is_zero}
        return Output(payload, f"Hom({Q}, {A}) = {hg.as_group()}  {list(hg.invariant_factors)}")
    if sub == "epi":
        dom, cod = ab.parse_group(args.dom), ab.parse_group(args.cod)
        f = ab.AbelianMap(dom, cod, tuple(tuple(r) for r in ab.parse_matrix(args.map)))
        cat = ab.SubcategoryA.parse(args.cat)
        v = ab.epi_test(f, cat)
        payload = {"command": "abelian epi", "domain": dom, "codomain": cod, "category": str(cat),
                   "is_epi": v.is_epi, "is_surjective": v.is_surjective, "image_closed": v.image_closed}
        return Output(payload, f"epi={str(v.is_epi).lower()} surjective={str(v.is_surjective).lower()} "
                               f"image_closed={str(v.image_closed).lower()}")
    G, H, cat = _abelian_pair(args)
    Q, _ = ab.quotient_group(G, H)
    base = {"command": f"abelian {sub}", "G": G, "H": H, "category": str(cat), "quotient": Q}
    if sub == "dense":
        d = ab.is_dense(G, H, cat)
        return Output(dict(base, dense=d), f"dense: {str(d).lower()}  (G/H = {Q})")
    if sub == "closure":
        c = ab.a_closure(G, H, cat)
        return Output(dict(base, closure=c, is_whole=c.is_whole()), f"closure: {c}  whole: {c.is_whole()}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", QuantifierCheckInfeasible)
        chk = ab.closedness_check(G, H, cat)
    notes = [str(w.message) for w in caught]
    payload = dict(base, closed=chk.closed, quantifier=chk.quantifier, agrees=chk.agrees, notes=notes)
    text = f"closed: {str(chk.closed).lower()}"
    if chk.quantifier is not None:
        text += f"  subgroup quantifier: {str(chk.quantifier).lower()}"
    return Output(payload, text, discrepancy=not chk.agrees)


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--order-bound", type=_positive, default=DEFAULT_ORDER_BOUND)
    common.add_argument("--lattice-bound", type=_positive, default=DEFAULT_LATTICE_BOUND)
    common.add_argument("--jobs", type=_positive, default=1)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="grpclosure", description="Closure operators on subgroups.")
    sp = p.add_subparsers(dest="command", required=True)

    c = sp.add_parser("closure", parents=[common], help="apply a closure operator")
    c.add_argument("--group", required=True, help="group file, inline JSON or name")
    c.add_argument("--sub", required=True, help="generators separated by ';'")
    c.add_argument("--op", default="c", help="c, c1, c2:<r>, c3:<r>, c3!:<r>")

    for name in ("series", "defect"):
        s = sp.add_parser(name, parents=[common], help="normal-closure series and defect")
        s.add_argument("--group", required=True)
        s.add_argument("--sub", required=True)

    j = sp.add_parser("join", parents=[common], help="join of two subnormal subgroups")
    j.add_argument("--group", required=True)
    j.add_argument("--h", required=True)
    j.add_argument("--k", required=True)
    j.add_argument("--op", default="c")
    j.add_argument("--full-grid", action="store_true")

    a = sp.add_parser("audit", parents=[common], help="axiom and additivity audit over a corpus")
    a.add_argument("--corpus", default="order<=24")
    a.add_argument("--ops", default="", help="comma-separated operator list (default: all shipped)")
    a.add_argument("--wielandt", action="store_true", help="also sweep joins of subnormal pairs")
    a.add_argument("--random-homs", type=int, default=0, help="random endomorphisms per group")

    lat = sp.add_parser("lattice", parents=[common], help="subgroup lattice")
    lat.add_argument("--group", required=True)

    abp = sp.add_parser("abelian", help="finitely generated abelian groups")
    asp = abp.add_subparsers(dest="abelian_command", required=True)
    h = asp.add_parser("hom", parents=[common])
    h.add_argument("--q", required=True)
    h.add_argument("--a", required=True)
    for name in ("dense", "closed", "closure"):
        x = asp.add_parser(name, parents=[common])
        x.add_argument("--g", required=True, help='invariant factors, e.g. "[0,4]"')
        x.add_argument("--h", default="[]", help='generator rows, e.g. "[[2,0]]"')
        x.add_argument("--cat", required=True, help="torsionfree, reduced, free or group:[...]")
    e = asp.add_parser("epi", parents=[common])
    e.add_argument("--map", required=True)
    e.add_argument("--dom", required=True)
    e.add_argument("--cod", required=True)
    e.add_argument("--cat", required=True)
    return p


COMMANDS = {"closure": cmd_closure, "series": cmd_series, "defect": cmd_series, "join": cmd_join,
            "audit": cmd_audit, "lattice": cmd_lattice, "abelian": cmd_abelian}


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return dumps(out.payload)
    if fmt == "dot":
        if out.dot is None:
            raise ParseError("this command has no DOT output")
        return out.dot
    return out.text + "\n"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
        sys.stdout.write(render(out, args.format))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OrderBoundExceeded as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except NotSubnormal as exc:
        print(f"not subnormal: {exc}", file=sys.stderr)
        return EXIT_NOT_SUBNORMAL
    except AdditivityViolated as exc:
        print(f"additivity violated: {exc}", file=sys.stderr)
        return EXIT_ADDITIVITY
    except (GroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GROUP
    return EXIT_DISCREPANCY if out.discrepancy else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
