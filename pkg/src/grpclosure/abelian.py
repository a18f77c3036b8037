"""Finitely generated abelian groups, Hom groups and regular closures.

A group is a direct sum of cyclic coordinates ``Z/d`` (``d = 0`` meaning
``Z``).  Subgroups are given by generator vectors; everything is decided
exactly with Smith normal forms.

The closure of H in G relative to a class of groups is the preimage of the
reject of G/H, the intersection of the kernels of all maps from G/H into
the class.
"""

from __future__ import annotations

import itertools
import warnings
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from math import gcd, lcm, prod
from typing import Sequence

from .errors import CodomainNotInSubcategory, OrderBoundExceeded, ParseError, QuantifierCheckInfeasible
from .snf import snf_with_inverse

Vector = tuple[int, ...]

BRUTE_FORCE_BOUND = 1000


def _parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad {what}: {exc.msg}", exc.lineno, exc.colno) from None


def parse_int_list(text: str) -> list[int]:
    data = _parse_json(text, "integer list")
    if not isinstance(data, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in data):
        raise ParseError(f"expected a list of integers, got {text!r}")
    return data


def parse_matrix(text: str) -> list[list[int]]:
    data = _parse_json(text, "matrix")
    if not isinstance(data, list) or not all(
            isinstance(r, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in r) for r in data):
        raise ParseError(f"expected a list of integer rows, got {text!r}")
    return data


def parse_group(text: str) -> "FgAbelianGroup":
    try:
        return FgAbelianGroup(tuple(parse_int_list(text)))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z/d_1 + ... + Z/d_k`` with 0 for an infinite cyclic summand.

    Nonzero factors must form a divisibility chain in the order given; zeros
    may sit anywhere (``[0, 4]`` is Z + Z/4).  Factors equal to 1 are rejected.
    """

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if any(d < 0 or d == 1 for d in f):
            raise ValueError(f"invariant factors must be 0 or >= 2, got {list(f)}")
        nz = [d for d in f if d]
        if any(b % a for a, b in zip(nz, nz[1:])):
            raise ValueError(f"nonzero invariant factors must divide each other in turn: {list(f)}")

    @classmethod
    def from_cyclic(cls, orders: Sequence[int]) -> FgAbelianGroup:
        """Normalise any list of cyclic orders (1s allowed) to invariant factors."""
        k = len(orders)
        diag = [[orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
        D = snf_with_inverse(diag)[0] if k else []
        ds = [D[i][i] for i in range(k)]
        return cls(tuple(d for d in ds if d != 1))

    @property
    def rank(self) -> int:
        """Number of coordinates."""
        return len(self.invariant_factors)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def is_finite(self) -> bool:
        return all(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def is_torsion_free(self) -> bool:
        return not any(self.invariant_factors)

    @property
    def order(self) -> int | None:
        return prod(self.invariant_factors) if self.is_finite else None

    @property
    def presentation_matrix(self) -> list[list[int]]:
        """Square matrix whose cokernel is the group."""
        k = self.rank
        return [[d if i == j else 0 for j in range(k)] for i, d in enumerate(self.invariant_factors)]

    @property
    def relations(self) -> list[list[int]]:
        k = self.rank
        return [[d if i == j else 0 for j in range(k)] for i, d in enumerate(self.invariant_factors) if d]

    def reduce(self, v: Sequence[int]) -> Vector:
        if len(v) != self.rank:
            raise ValueError(f"vector {list(v)} has length {len(v)}, group has {self.rank} coordinates")
        return tuple(x % d if d else x for x, d in zip(v, self.invariant_factors))

    def zero(self) -> Vector:
        return (0,) * self.rank

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return self.reduce([a + b for a, b in zip(u, v)])

    def elements(self) -> list[Vector]:
        if not self.is_finite:
            raise ValueError("infinite group has no element list")
        return list(itertools.product(*(range(d) for d in self.invariant_factors)))

    def whole(self) -> AbelianSubgroup:
        k = self.rank
        return AbelianSubgroup(self, [tuple(int(i == j) for j in range(k)) for i in range(k)])

    def zero_subgroup(self) -> AbelianSubgroup:
        return AbelianSubgroup(self, [])

    def isomorphic(self, other: FgAbelianGroup) -> bool:
        return FgAbelianGroup.from_cyclic(self.invariant_factors) == FgAbelianGroup.from_cyclic(other.invariant_factors)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        parts = []
        free = self.free_rank
        if free:
            parts.append("Z" if free == 1 else f"Z^{free}")
        parts += [f"Z/{d}" for d in self.invariant_factors if d]
        return " + ".join(parts)


@dataclass(frozen=True, eq=False)
class AbelianSubgroup:
    ambient: FgAbelianGroup
    generators: tuple[Vector, ...] = ()

    def __post_init__(self):
        gens = tuple(self.ambient.reduce(g) for g in self.generators)
        zero = self.ambient.zero()
        object.__setattr__(self, "generators", tuple(g for g in gens if g != zero))

    def lattice_rows(self) -> list[list[int]]:
        """Rows spanning the preimage of this subgroup in Z^k."""
        return self.ambient.relations + [list(g) for g in self.generators]

    @cached_property
    def _snf(self):
        rows = self.lattice_rows()
        if not rows:
            return None
        D, U, V, Vi = snf_with_inverse(rows)
        return D, V

    def __contains__(self, v: Sequence[int]) -> bool:
        v = self.ambient.reduce(v)
        if self._snf is None:
            return not any(v)
        D, V = self._snf
        k = self.ambient.rank
        w = [sum(v[i] * V[i][j] for i in range(k)) for j in range(k)]
        diag = [D[i][i] if i < len(D) else 0 for i in range(k)]
        return all((x == 0) if d == 0 else x % d == 0 for x, d in zip(w, diag))

    def __le__(self, other: AbelianSubgroup) -> bool:
        return all(g in other for g in self.generators)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AbelianSubgroup) and self.ambient == other.ambient
                and self <= other and other <= self)

    def __hash__(self) -> int:
        return hash(self.ambient)

    def is_whole(self) -> bool:
        return self.ambient.whole() <= self

    def element_set(self) -> frozenset:
        """All elements, for a finite ambient group."""
        if not self.ambient.is_finite:
            raise ValueError("infinite group has no element list")
        return frozenset(_span(self.ambient, self.generators))

    def is_zero(self) -> bool:
        return not self.generators

    def __str__(self) -> str:
        return "<" + ", ".join(str(list(g)) for g in self.generators) + ">"


@dataclass(frozen=True)
class Projection:
    """G -> G/H in the quotient's invariant-factor coordinates."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    V: tuple[tuple[int, ...], ...]
    Vinv: tuple[tuple[int, ...], ...]
    kept: tuple[int, ...]

    def __call__(self, v: Sequence[int]) -> Vector:
        k = self.source.rank
        w = [sum(v[i] * self.V[i][j] for i in range(k)) for j in range(k)]
        return self.target.reduce([w[j] for j in self.kept])

    def lift(self, y: Sequence[int]) -> Vector:
        k = self.source.rank
        z = [0] * k
        for pos, val in zip(self.kept, y):
            z[pos] = val
        return self.source.reduce([sum(z[i] * self.Vinv[i][j] for i in range(k)) for j in range(k)])

    def image(self, H: AbelianSubgroup) -> AbelianSubgroup:
        return AbelianSubgroup(self.target, [self(g) for g in H.generators])

    def preimage(self, S: AbelianSubgroup, kernel: AbelianSubgroup) -> AbelianSubgroup:
        return AbelianSubgroup(self.source, list(kernel.generators) + [self.lift(s) for s in S.generators])


def quotient_group(G: FgAbelianGroup, H: AbelianSubgroup) -> tuple[FgAbelianGroup, Projection]:
    k = G.rank
    rows = H.lattice_rows()
    if not rows:
        ident = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        return G, Projection(G, G, ident, ident, tuple(range(k)))
    D, _, V, Vi = snf_with_inverse(rows)
    diag = [D[i][i] if i < len(D) else 0 for i in range(k)]
    kept = tuple(i for i, d in enumerate(diag) if d != 1)
    Q = FgAbelianGroup(tuple(diag[i] for i in kept))
    return Q, Projection(G, Q, tuple(map(tuple, V)), tuple(map(tuple, Vi)), kept)


def _hom_cyclic(q: int, a: int) -> int:
    # Hom(Z/q, Z/a) as a cyclic order, 0 meaning Z and 1 meaning zero
    if q == 0:
        return a
    if a == 0:
        return 1
    return gcd(q, a)


@dataclass(frozen=True)
class HomGroup:
    invariant_factors: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not self.invariant_factors

    def as_group(self) -> FgAbelianGroup:
        return FgAbelianGroup(self.invariant_factors)


def hom_group(Q: FgAbelianGroup, A: FgAbelianGroup) -> HomGroup:
    cyc = [_hom_cyclic(q, a) for q in Q.invariant_factors for a in A.invariant_factors]
    return HomGroup(FgAbelianGroup.from_cyclic(cyc).invariant_factors)


@dataclass(frozen=True)
class SubcategoryA:
    kind: str
    group: FgAbelianGroup | None = None

    KINDS = ("torsionfree", "reduced", "free", "group")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown subcategory {self.kind!r}")
        if (self.kind == "group") != (self.group is not None):
            raise ValueError("a single-group subcategory needs exactly one group")

    @classmethod
    def parse(cls, text: str) -> SubcategoryA:
        """``torsionfree``, ``reduced``, ``free`` or ``group:[2,4]``."""
        t = text.strip().lower().replace("-", "").replace("_", "")
        if t.startswith("group:"):
            return cls("group", parse_group(text.split(":", 1)[1]))
        if t not in cls.KINDS or t == "group":
            raise ParseError(f"unknown subcategory {text!r}")
        return cls(t)

    def contains(self, T: FgAbelianGroup) -> bool:
        if self.kind in ("torsionfree", "free"):
            return T.is_torsion_free
        if self.kind == "reduced":
            return True  # a f.g. abelian group has no divisible part
        return T.isomorphic(self.group)

    def __str__(self) -> str:
        return f"group:{list(self.group.invariant_factors)}" if self.group is not None else self.kind


TorsionFree = SubcategoryA("torsionfree")
Reduced = SubcategoryA("reduced")
Free = SubcategoryA("free")


def SingleGroup(A: FgAbelianGroup | Sequence[int]) -> SubcategoryA:
    if not isinstance(A, FgAbelianGroup):
        A = FgAbelianGroup(tuple(A))
    return SubcategoryA("group", A)


def reject(Q: FgAbelianGroup, cat: SubcategoryA) -> AbelianSubgroup:
    """Intersection of kernels of all maps Q -> (objects of cat), by formula.

    The reject splits over the cyclic summands of Q.  For Z/q into Z/a the
    kernels meet in gcd(q, a) Z/q; Z/q -> Z is zero; Z -> Z/a leaves aZ and
    Z -> Z is injective.  Meeting over the summands of A takes an lcm.
    """
    k = Q.rank
    unit = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    if cat.kind in ("torsionfree", "free"):
        return AbelianSubgroup(Q, [unit[i] for i, q in enumerate(Q.invariant_factors) if q])
    if cat.kind == "reduced":
        return Q.zero_subgroup()
    gens = []
    for i, q in enumerate(Q.invariant_factors):
        parts = [(gcd(q, a) if a else 1) if q else a for a in cat.group.invariant_factors]
        d = reduce(lcm, parts, 1)
        gens.append(tuple(d if j == i else 0 for j in range(k)))
    return AbelianSubgroup(Q, gens)


def a_closure(G: FgAbelianGroup, H: AbelianSubgroup, cat: SubcategoryA) -> AbelianSubgroup:
    Q, pi = quotient_group(G, H)
    return pi.preimage(reject(Q, cat), H)


def is_dense(G: FgAbelianGroup, H: AbelianSubgroup, cat: SubcategoryA) -> bool:
    Q, _ = quotient_group(G, H)
    if cat.kind in ("torsionfree", "free"):
        return Q.is_finite
    if cat.kind == "reduced":
        return Q.is_trivial
    return hom_group(Q, cat.group).is_zero


def is_closed(G: FgAbelianGroup, H: AbelianSubgroup, cat: SubcategoryA) -> bool:
    return a_closure(G, H, cat) == H


@dataclass
class ClosedCheck:
    """Closedness by the reject, next to the literal subgroup quantifier.

    ``quantifier`` is None when the quotient is too big or infinite.
    """

    closed: bool
    quantifier: bool | None

    @property
    def agrees(self) -> bool:
        return self.quantifier is None or self.quantifier == self.closed


def closedness_check(G: FgAbelianGroup, H: AbelianSubgroup, cat: SubcategoryA) -> ClosedCheck:
    return ClosedCheck(is_closed(G, H, cat), closed_by_quantifier(G, H, cat))


def _finite_subgroups(Q: FgAbelianGroup, limit: int = 4096) -> list[frozenset] | None:
    """All subgroups of a finite Q as element sets, or None past ``limit``."""
    f = Q.invariant_factors
    cyclic = {frozenset(_span(Q, [x])) for x in Q.elements()}
    seen = set(cyclic)
    todo = list(cyclic)
    while todo:
        S = todo.pop()
        for Cg in cyclic:
            if Cg <= S:
                continue
            T = frozenset(tuple((a + b) % d for a, b, d in zip(s, c, f)) for s in S for c in Cg)
            if T not in seen:
                seen.add(T)
                todo.append(T)
                if len(seen) > limit:
                    return None
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def closed_by_quantifier(G: FgAbelianGroup, H: AbelianSubgroup, cat: SubcategoryA) -> bool | None:
    """Every nonzero subgroup of G/H has a nonzero map into the class.

    Enumerates the subgroups of G/H when it is finite of order at most 1000.
    Returns None (with a :class:`QuantifierCheckInfeasible` warning) when the
    enumeration is not possible.
    """
    Q, _ = quotient_group(G, H)
    if not Q.is_finite:
        warnings.warn("G/H is infinite; subgroup quantifier not enumerated", QuantifierCheckInfeasible)
        return None
    if Q.order > BRUTE_FORCE_BOUND:
        warnings.warn(f"|G/H| = {Q.order} is past the enumeration bound", QuantifierCheckInfeasible)
        return None
    subs = _finite_subgroups(Q)
    if subs is None:
        # a subgroup with no map into A contains a cyclic one with none, so
        # cyclic subgroups decide the quantifier as well
        subs = list({frozenset(_span(Q, [x])) for x in Q.elements()})
    tors = prod(a for a in cat.group.invariant_factors if a) if cat.kind == "group" else 1
    for S in subs:
        if len(S) == 1:
            continue
        if cat.kind in ("torsionfree", "free"):
            return False  # a finite nonzero group maps to no torsion-free group
        # a finite S has a nonzero map into A iff some prime divides both |S| and |tors A|
        if cat.kind == "group" and gcd(len(S), tors) == 1:
            return False
    return True


@dataclass(frozen=True)
class AbelianMap:
    """Homomorphism given by the images of the domain's unit vectors (rows)."""

    domain: FgAbelianGroup
    codomain: FgAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", M)
        if len(M) != self.domain.rank or any(len(r) != self.codomain.rank for r in M):
            raise ValueError(f"matrix must be {self.domain.rank} x {self.codomain.rank}")
        for d, row in zip(self.domain.invariant_factors, M):
            if d and any(self.codomain.reduce([d * x for x in row])):
                raise ValueError(f"row {list(row)} times {d} is not zero in the codomain")

    def __call__(self, v: Sequence[int]) -> Vector:
        k = self.codomain.rank
        return self.codomain.reduce([sum(v[i] * self.matrix[i][j] for i in range(len(v)))
                                     for j in range(k)])

    def image(self) -> AbelianSubgroup:
        return AbelianSubgroup(self.codomain, list(self.matrix))


@dataclass
class EpiVerdict:
    is_epi: bool
    is_surjective: bool
    image_closed: bool


def epi_test(f: AbelianMap, cat: SubcategoryA) -> EpiVerdict:
    """Epimorphy inside the class (dense image) against plain surjectivity."""
    T = f.codomain
    if cat.kind != "group" and not cat.contains(T):
        raise CodomainNotInSubcategory(f"{T} is not an object of {cat}")
    img = f.image()
    clo = a_closure(T, img, cat)
    return EpiVerdict(is_epi=clo.is_whole(), is_surjective=img.is_whole(), image_closed=clo == img)


# -- brute force ---------------------------------------------------------------

def _hom_count(Q: FgAbelianGroup, A: FgAbelianGroup) -> int:
    return prod(gcd(q, a) for q in Q.invariant_factors for a in A.invariant_factors)


def reject_bruteforce(Q: FgAbelianGroup, A: FgAbelianGroup, max_homs: int = 64,
                      bound: int = BRUTE_FORCE_BOUND) -> AbelianSubgroup:
    """Reject of finite Q in finite A from explicit element-level enumeration.

    See :func:`reject_elements_bruteforce`; the element set is returned as a
    subgroup with a greedily chosen generating set.
    """
    members = reject_elements_bruteforce(Q, A, max_homs, bound)
    gens, span = [], {Q.zero()}
    for x in sorted(members):
        if x not in span:
            gens.append(x)
            span = _span(Q, gens)
    return AbelianSubgroup(Q, gens)


def reject_elements_bruteforce(Q: FgAbelianGroup, A: FgAbelianGroup, max_homs: int = 64,
                               bound: int = BRUTE_FORCE_BOUND) -> frozenset:
    """Elements of Q killed by every homomorphism Q -> A.

    When |Hom(Q, A)| <= ``max_homs`` every homomorphism is listed (all
    choices of unit-vector images of the right orders) and kernels are
    intersected.  Otherwise the homomorphisms supported on a single cyclic
    summand of Q are listed instead; every hom is a sum of those, so the
    kernels meet in the same subgroup.  Nothing here uses gcd rules.
    """
    for X in (Q, A):
        if not X.is_finite:
            raise ValueError("brute-force reject needs finite groups")
        if X.order > bound:
            raise OrderBoundExceeded(X.order, bound)
    fa = A.invariant_factors
    cands = [_killed_by(A, q) for q in Q.invariant_factors]
    q_elems = Q.elements()
    if _hom_count(Q, A) <= max_homs:
        survivors = q_elems
        for imgs in itertools.product(*cands):
            survivors = [x for x in survivors
                         if all(sum(c * a[j] for c, a in zip(x, imgs)) % d == 0 for j, d in enumerate(fa))]
            if len(survivors) == 1:
                break  # only zero is left
        return frozenset(survivors)
    allowed = [{t for t in range(q) if all(t * v % d == 0 for a in cs for v, d in zip(a, fa))}
               for q, cs in zip(Q.invariant_factors, cands)]
    return frozenset(x for x in q_elems if all(c in s for c, s in zip(x, allowed)))


@lru_cache(maxsize=4096)
def _killed_by(A: FgAbelianGroup, q: int) -> tuple[Vector, ...]:
    """Elements a of A with q a = 0: the possible images of a generator of order q."""
    return tuple(a for a in A.elements() if all(q * v % d == 0 for v, d in zip(a, A.invariant_factors)))


def _span(Q: FgAbelianGroup, gens) -> set:
    f = Q.invariant_factors
    out = {Q.zero()}
    frontier = list(out)
    for x in frontier:
        for g in gens:
            y = tuple((a + b) % d for a, b, d in zip(x, g, f))
            if y not in out:
                out.add(y)
                frontier.append(y)
    return out
