"""Named groups, group definition files and the built-in corpus."""

from __future__ import annotations

import json
import re
from functools import lru_cache
from pathlib import Path

from .errors import DegreeMismatch, GroupError, ParseError
from .group import DEFAULT_ORDER_BOUND, FiniteGroup, direct_product, generate_group
from .perm import Permutation

_NAME_RE = re.compile(r"^(?:([CDSA])(\d+)|(Q8)|(trivial))$")


def _cycle(n: int) -> Permutation:
    return Permutation([(i + 1) % n for i in range(n)])


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    gens = [_cycle(n)] if n > 1 else []
    return generate_group(gens, degree=n, name=f"C{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n."""
    if n < 1:
        raise GroupError("dihedral group needs n >= 1")
    if n == 1:
        gens, deg = [Permutation([1, 0])], 2
    elif n == 2:
        gens, deg = [Permutation.parse("(1 2)(3 4)", 4), Permutation.parse("(1 3)(2 4)", 4)], 4
    else:
        gens, deg = [_cycle(n), Permutation([(-i) % n for i in range(n)])], n
    return generate_group(gens, degree=deg, name=f"D{n}")


def symmetric_group(n: int, order_bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
    if n < 1:
        raise GroupError("symmetric group needs n >= 1")
    gens = [Permutation.from_cycles([[0, 1]], n), _cycle(n)] if n > 1 else []
    return generate_group(gens, degree=n, order_bound=order_bound, name=f"S{n}")


def alternating_group(n: int, order_bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
    if n < 1:
        raise GroupError("alternating group needs n >= 1")
    gens = [Permutation.from_cycles([[0, 1, k]], n) for k in range(2, n)]
    return generate_group(gens, degree=n, order_bound=order_bound, name=f"A{n}")


def quaternion_group() -> FiniteGroup:
    i = Permutation.parse("(1 2 3 4)(5 6 7 8)", 8)
    j = Permutation.parse("(1 5 3 7)(2 8 4 6)", 8)
    return generate_group([i, j], name="Q8")


def _factor(name: str, order_bound: int) -> FiniteGroup:
    m = _NAME_RE.match(name)
    if not m:
        raise GroupError(f"unknown group name {name!r}")
    if m.group(3):
        return quaternion_group()
    if m.group(4):
        return cyclic_group(1)
    family, n = m.group(1), int(m.group(2))
    if family == "C":
        return cyclic_group(n)
    if family == "D":
        return dihedral_group(n)
    if family == "S":
        return symmetric_group(n, order_bound)
    return alternating_group(n, order_bound)


def named_group(name: str, order_bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
    """Look up ``Cn``, ``Dn`` (order 2n), ``Sn``, ``An``, ``Q8`` or a product ``D4xC2``."""
    return _named(name.strip().replace("×", "x").replace("*", "x"), order_bound)


@lru_cache(maxsize=512)
def _named(name: str, order_bound: int) -> FiniteGroup:
    parts = name.split("x") if name != "trivial" else [name]
    G = _factor(parts[0], order_bound)
    for p in parts[1:]:
        G = direct_product(G, _factor(p, order_bound))
    G.name = name
    return G


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse_group_definition(text: str, order_bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
    """Parse a JSON group definition (``perm`` or ``named`` type)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "type" not in data:
        raise ParseError("group definition must be an object with a 'type' key")
    kind = data["type"]
    if kind == "named":
        return named_group(str(data.get("name", "")), order_bound)
    if kind != "perm":
        raise ParseError(f"unknown group type {kind!r}", *_line_col(text, text.find(str(kind))))
    degree = data.get("degree")
    if not isinstance(degree, int) or degree < 1:
        raise ParseError("'degree' must be a positive integer", *_line_col(text, text.find('"degree"')))
    gens = []
    for g in data.get("generators", []):
        try:
            gens.append(Permutation.parse(g, degree))
        except ParseError as exc:
            start = text.find(json.dumps(g))
            line, col = _line_col(text, max(start, 0) + 1)
            raise ParseError(str(exc).rsplit(" (line", 1)[0], line, col + exc.column - 1) from None
        except DegreeMismatch:
            raise
    return generate_group(gens, degree=degree, order_bound=order_bound,
                          name=data.get("name") or "<perm group>")


def load_group(spec: str, order_bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
    """Accept a path to a definition file, inline JSON, or a group name."""
    path = Path(spec)
    if path.suffix == ".json" or path.is_file():
        if path.is_file():
            return parse_group_definition(path.read_text(), order_bound)
        m = _NAME_RE.match(path.stem)
        if path.suffix == ".json" and (m or "x" in path.stem):
            # S3.json that does not exist on disk still names S3
            return named_group(path.stem, order_bound)
        raise GroupError(f"no such group file: {spec}")
    if spec.lstrip().startswith("{"):
        return parse_group_definition(spec, order_bound)
    return named_group(spec, order_bound)


# -- corpus ----------------------------------------------------------------

def _base_names(max_order: int) -> list[str]:
    names = ["trivial"]
    names += [f"C{n}" for n in range(2, max_order + 1)]
    names += [f"D{n}" for n in range(2, max_order // 2 + 1)]
    names += [n for n, o in (("S3", 6), ("S4", 24), ("S5", 120), ("A4", 12), ("A5", 60), ("Q8", 8))
              if o <= max_order]
    return names


def _order_of(name: str) -> int:
    from math import factorial
    total = 1
    for part in name.split("x"):
        if part == "trivial":
            continue
        if part == "Q8":
            total *= 8
            continue
        fam, n = part[0], int(part[1:])
        total *= {"C": n, "D": 2 * n, "S": factorial(n), "A": max(factorial(n) // 2, 1)}[fam]
    return total


def catalogue_names(max_order: int) -> list[str]:
    """Named groups plus pairwise direct products of them, up to ``max_order``.

    Sorted by (order, name).  Isomorphic entries (say C6 and C2xC3) are kept:
    they are different permutation realisations.
    """
    base = _base_names(max_order)
    nontrivial = [b for b in base if b != "trivial"]
    names = list(base)
    for i, a in enumerate(nontrivial):
        for b in nontrivial[i:]:
            if _order_of(a) * _order_of(b) <= max_order:
                names.append(f"{a}x{b}")
    return sorted(names, key=lambda n: (_order_of(n), n))


_TERM_RE = re.compile(r"^order\s*(<=|<|==|=|>=|>)\s*(\d+)$")


def select_corpus(selector: str, lattice_bound: int = 96) -> list[FiniteGroup]:
    """Resolve ``"order<=24"``, ``"trivial"``, ``"S3,D4"`` or combinations.

    Order terms filter; name terms choose explicit groups.  Without name
    terms the catalogue up to the tightest upper bound (default the lattice
    bound) is used.
    """
    names: list[str] = []
    filters = []
    upper = lattice_bound
    for term in (t.strip() for t in selector.split(",")):
        if not term:
            continue
        m = _TERM_RE.match(term)
        if m:
            op, k = m.group(1), int(m.group(2))
            filters.append((op, k))
            if op == "<=":
                upper = min(upper, k)
            elif op == "<":
                upper = min(upper, k - 1)
            elif op in ("=", "=="):
                upper = min(upper, k)
        elif term in ("all", "catalogue"):
            continue
        else:
            names.append(term)
    if not names:
        names = catalogue_names(upper)
    cmp = {"<=": lambda a, b: a <= b, "<": lambda a, b: a < b, "=": lambda a, b: a == b,
           "==": lambda a, b: a == b, ">=": lambda a, b: a >= b, ">": lambda a, b: a > b}
    groups = [named_group(n) for n in names]
    groups = [G for G in groups if all(cmp[op](G.order, k) for op, k in filters)]
    return sorted(groups, key=lambda G: (G.order, G.name))
