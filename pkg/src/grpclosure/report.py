"""Serialising results: canonical JSON, DOT graphs and plain text."""

from __future__ import annotations

import json
from typing import Any

from .abelian import AbelianSubgroup, FgAbelianGroup
from .closure import AuditReport, Check, ClosureOperatorId
from .group import FiniteGroup, Homomorphism, Subgroup, all_subgroups, is_normal
from .subnormal import JoinExperiment, SubnormalSeries


def subgroup_json(H: Subgroup) -> dict:
    return {"order": H.order, "generators": [str(g) for g in H.generators]}


def hom_json(f: Homomorphism) -> dict:
    return {
        "name": f.name,
        "domain": f.domain.name,
        "codomain": f.codomain.name,
        "images": [[str(g), str(img)] for g, img in f.generator_images.items()],
    }


def to_jsonable(obj: Any) -> Any:
    """Recursively turn library objects into plain JSON values."""
    if isinstance(obj, Subgroup):
        return subgroup_json(obj)
    if isinstance(obj, Homomorphism):
        return hom_json(obj)
    if isinstance(obj, FiniteGroup):
        return {"name": obj.name, "order": obj.order, "degree": obj.degree}
    if isinstance(obj, ClosureOperatorId):
        return str(obj)
    if isinstance(obj, Check):
        return {"holds": obj.holds, "counterexample": to_jsonable(obj.counterexample)}
    if isinstance(obj, AuditReport):
        return {"operator": str(obj.operator), "group": obj.group,
                "checks": {k: to_jsonable(v) for k, v in obj.checks.items()}}
    if isinstance(obj, FgAbelianGroup):
        return list(obj.invariant_factors)
    if isinstance(obj, AbelianSubgroup):
        return [list(g) for g in obj.generators]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def series_json(s: SubnormalSeries) -> dict:
    chain = s.chain
    return {
        "target": subgroup_json(s.target),
        "chain": [subgroup_json(H) for H in chain],
        "normal_steps": [is_normal(b, a) for a, b in zip(chain, chain[1:])],
        "stabilized": s.stabilized,
        "subnormal": s.subnormal,
        "defect": s.defect,
    }


def join_json(exp: JoinExperiment) -> dict:
    m, n = exp.defects
    return {
        "group": exp.G.name,
        "operator": str(exp.operator),
        "H": subgroup_json(exp.H),
        "K": subgroup_json(exp.K),
        "defects": [m, n],
        "T": subgroup_json(exp.T),
        "grid": {f"{i},{j}": subgroup_json(S) for (i, j), S in sorted(exp.grid.items())},
        "closure": subgroup_json(exp.closure),
        "chain": [subgroup_json(S) for S in exp.closure_chain],
        "steps_normal": [s.normal for s in exp.steps],
        "chain_verified": exp.chain_verified,
        "subnormal": exp.verdict,
        "closure_defect": exp.closure_defect,
    }


# -- DOT -----------------------------------------------------------------------

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label(H: Subgroup) -> str:
    gens = ", ".join(str(g) for g in H.generators) or "()"
    return f"{H.order}: <{gens}>"


def chain_dot(name: str, chain: list[Subgroup], normal: list[bool]) -> str:
    """Chain drawn top-down; solid edges are verified normal inclusions."""
    lines = [f"digraph {_quote(name)} {{", "  rankdir=TB;"]
    for i, H in enumerate(chain):
        lines.append(f"  n{i} [label={_quote(_label(H))}];")
    for i, ok in enumerate(normal):
        style = "solid" if ok else "dashed"
        lines.append(f"  n{i} -> n{i + 1} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def series_dot(s: SubnormalSeries) -> str:
    chain = s.chain
    return chain_dot("series", chain, [is_normal(b, a) for a, b in zip(chain, chain[1:])])


def join_dot(exp: JoinExperiment) -> str:
    # the closure chain runs upward from c_T(T); draw it from the top
    chain = list(reversed(exp.closure_chain))
    steps = [s.normal for s in reversed(exp.steps)]
    return chain_dot("join", chain, steps)


def lattice_dot(G: FiniteGroup, bound: int) -> str:
    """Hasse diagram of the subgroup lattice; normal subgroups drawn as boxes."""
    subs = all_subgroups(G, bound)
    lines = [f"digraph {_quote(G.name)} {{", "  rankdir=BT;"]
    for i, H in enumerate(subs):
        shape = "box" if is_normal(H) else "ellipse"
        lines.append(f"  n{i} [label={_quote(_label(H))}, shape={shape}];")
    for i, H in enumerate(subs):
        above = [j for j, K in enumerate(subs) if H < K]
        for j in above:
            K = subs[j]
            # cover relation: nothing strictly between
            if not any(H < subs[k] < K for k in above if k != j):
                lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
