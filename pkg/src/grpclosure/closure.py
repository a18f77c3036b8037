"""The four closure operators on subgroups and auditors for their axioms.

Operators, for H <= G and a preradical r:

* ``c``   normal closure of H in G
* ``c1``  [G, G] . H
* ``c2``  H . r(G)
* ``c3``  pi^-1(r(G / c_G(H))) with pi the projection onto G / c_G(H)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import (
    CodomainNotSimple,
    LiteralReadingUndefined,
    MissingPreradical,
    ParentMismatch,
    ParseError,
    ZeroHomomorphism,
)
from .group import (
    DEFAULT_LATTICE_BOUND,
    FiniteGroup,
    Homomorphism,
    Subgroup,
    all_subgroups,
    center,
    commutator_subgroup,
    identity_map,
    is_normal,
    is_simple,
    join,
    normal_closure,
    normal_subgroups,
    quotient,
    socle,
)


@dataclass(frozen=True)
class Preradical:
    """A normal-subgroup valued rule G -> r(G)."""

    name: str
    rule: Callable[[FiniteGroup], Subgroup] = field(compare=False, repr=False)

    def __call__(self, G: FiniteGroup) -> Subgroup:
        key = ("preradical", self.name)
        R = G._cache.get(key)
        if R is None:
            R = self.rule(G)
            if not is_normal(R):
                raise ValueError(f"preradical {self.name} gave a non-normal subgroup of {G.name}")
            G._cache[key] = R
        return R


CENTER = Preradical("center", center)
DERIVED = Preradical("derived", commutator_subgroup)
SOCLE = Preradical("socle", socle)
PRERADICALS = {p.name: p for p in (CENTER, DERIVED, SOCLE)}


def check_naturality(r: Preradical, homs: Iterable[Homomorphism]) -> tuple[bool, Homomorphism | None]:
    """f(r(D)) <= r(C) for every f: D -> C; returns the first failing map."""
    for f in homs:
        if not f.image(r(f.domain)) <= r(f.codomain):
            return False, f
    return True, None


class Kind(enum.Enum):
    C = "c"
    CPRIME = "c1"
    CDOUBLE = "c2"
    CTRIPLE = "c3"


_PRIMES = {Kind.C: "c", Kind.CPRIME: "c'", Kind.CDOUBLE: "c''", Kind.CTRIPLE: "c'''"}


@dataclass(frozen=True)
class ClosureOperatorId:
    kind: Kind
    preradical: Preradical | None = None
    literal: bool = False

    def __post_init__(self):
        needs = self.kind in (Kind.CDOUBLE, Kind.CTRIPLE)
        if needs and self.preradical is None:
            raise MissingPreradical(f"{self.kind.value} needs a preradical")
        if not needs and self.preradical is not None:
            raise ValueError(f"{self.kind.value} takes no preradical")
        if self.literal and self.kind is not Kind.CTRIPLE:
            raise ValueError("the literal flag only applies to c3")
        s = self.kind.value + ("!" if self.literal else "")
        object.__setattr__(self, "_key", f"{s}:{self.preradical.name}" if self.preradical else s)

    @classmethod
    def parse(cls, text: str) -> ClosureOperatorId:
        """``c``, ``c1``, ``c2:center``, ``c3:derived`` (``c3!:socle`` = literal)."""
        head, _, rad = text.strip().partition(":")
        literal = head.endswith("!")
        head = head.rstrip("!")
        try:
            kind = Kind(head)
        except ValueError:
            raise ParseError(f"unknown operator {text!r}") from None
        pre = None
        if rad:
            if rad not in PRERADICALS:
                raise ParseError(f"unknown preradical {rad!r}")
            pre = PRERADICALS[rad]
        return cls(kind, pre, literal)

    def __str__(self) -> str:
        return self._key

    @property
    def label(self) -> str:
        p = f"[{self.preradical.name}]" if self.preradical else ""
        return _PRIMES[self.kind] + p


C = ClosureOperatorId(Kind.C)
CPRIME = ClosureOperatorId(Kind.CPRIME)


def c2(r: Preradical) -> ClosureOperatorId:
    return ClosureOperatorId(Kind.CDOUBLE, r)


def c3(r: Preradical) -> ClosureOperatorId:
    return ClosureOperatorId(Kind.CTRIPLE, r)


def shipped_operators() -> list[ClosureOperatorId]:
    ops = [C, CPRIME]
    ops += [c2(r) for r in PRERADICALS.values()]
    ops += [c3(r) for r in PRERADICALS.values()]
    return ops


def apply(op: ClosureOperatorId, G: FiniteGroup, H: Subgroup) -> Subgroup:
    if H.parent != G:
        raise ParentMismatch(f"subgroup does not live in {G.name}")
    key = ("apply", op._key, H.mask)
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    kind = op.kind
    if kind is Kind.C:
        out = normal_closure(H)
    elif kind is Kind.CPRIME:
        out = join(commutator_subgroup(G), H)
    elif kind is Kind.CDOUBLE:
        out = join(H, op.preradical(G))
    else:
        out = _triple(op, G, normal_closure(H))
    G._cache[key] = out
    return out


def _triple(op: ClosureOperatorId, G: FiniteGroup, N: Subgroup) -> Subgroup:
    key = ("triple", str(op), N.mask)
    hit = G._cache.get(key)
    if hit is None:
        if op.literal:
            R = op.preradical(G)
            if not N <= R:
                raise LiteralReadingUndefined(
                    f"c_G(H) is not inside {op.preradical.name}({G.name}), so r(G)/c_G(H) is undefined")
            # pi^-1(r(G)/N) is r(G) itself once N <= r(G)
            hit = R
        else:
            Q, pi = quotient(G, N)
            hit = pi.preimage(op.preradical(Q))
        G._cache[key] = hit
    return hit


# -- auditing ----------------------------------------------------------------

@dataclass
class Check:
    holds: bool
    counterexample: dict | None = None


@dataclass
class AuditReport:
    operator: ClosureOperatorId
    group: str
    checks: dict[str, Check] = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks.values())


def auto_homomorphisms(G: FiniteGroup, bound: int = DEFAULT_LATTICE_BOUND) -> list[Homomorphism]:
    """Identity, projections onto every quotient, inclusions of every proper subgroup."""
    homs = [identity_map(G)]
    for N in normal_subgroups(G, bound):
        if not N.is_trivial():
            homs.append(quotient(G, N)[1])
    for K in all_subgroups(G, bound):
        if not K.is_whole():
            homs.append(K.as_group()[1])
    return homs


def _lattice(D: FiniteGroup, bound: int) -> list[Subgroup]:
    # subgroups of an inclusion domain are read off the ambient lattice
    src = D._cache.get("included_from")
    if src is not None and "lattice" not in D._cache and "lattice" in src[0]._cache:
        G, K = src
        pos = {g: k for k, g in enumerate(K.indices)}
        subs = [D.sub(sum(1 << pos[i] for i in H.indices))
                for H in all_subgroups(G, bound) if H.mask & ~K.mask == 0]
        D._cache["lattice"] = sorted(subs, key=Subgroup.sort_key)
    return all_subgroups(D, bound)


def _pairwise_le(op, G, subs):
    vals = [apply(op, G, H) for H in subs]
    for i, H in enumerate(subs):
        for j, K in enumerate(subs):
            if H.mask & ~K.mask == 0 and vals[i].mask & ~vals[j].mask:
                return Check(False, {"H": H, "K": K})
    return Check(True)


def check_extension(op, G, bound=DEFAULT_LATTICE_BOUND) -> Check:
    for H in all_subgroups(G, bound):
        if not H <= apply(op, G, H):
            return Check(False, {"H": H})
    return Check(True)


def check_monotone(op, G, bound=DEFAULT_LATTICE_BOUND) -> Check:
    return _pairwise_le(op, G, all_subgroups(G, bound))


def check_continuity(op, homs: Sequence[Homomorphism], bound=DEFAULT_LATTICE_BOUND) -> Check:
    for f in homs:
        D, T = f.domain, f.codomain
        for H in _lattice(D, bound):
            if not f.image(apply(op, D, H)) <= apply(op, T, f.image(H)):
                return Check(False, {"hom": f, "H": H})
    return Check(True)


def _tag_inclusions(G: FiniteGroup, bound: int) -> None:
    for K in all_subgroups(G, bound):
        D = K.as_group()[0]
        D._cache.setdefault("included_from", (G, K))


def audit_axioms(op: ClosureOperatorId, G: FiniteGroup, homs: Sequence[Homomorphism] = (),
                 auto: bool = True, bound: int = DEFAULT_LATTICE_BOUND) -> AuditReport:
    """Extension, monotonicity and continuity, with first counterexamples."""
    report = AuditReport(op, G.name)
    report.checks["extension"] = check_extension(op, G, bound)
    report.checks["monotone"] = check_monotone(op, G, bound)
    homs = list(homs)
    if auto:
        _tag_inclusions(G, bound)
        homs += auto_homomorphisms(G, bound)
    report.checks["continuity"] = check_continuity(op, homs, bound)
    return report


def _memo(name):
    # per-group memo; the verdicts are pure functions of (op, G)
    def deco(fn):
        def wrapper(op, G, bound=DEFAULT_LATTICE_BOUND):
            key = (name, str(op))
            if key not in G._cache:
                G._cache[key] = fn(op, G, bound)
            return G._cache[key]
        wrapper.__name__ = fn.__name__
        wrapper.__doc__ = fn.__doc__
        return wrapper
    return deco


@_memo("idempotent")
def is_idempotent_on(op, G, bound=DEFAULT_LATTICE_BOUND) -> tuple[bool, Subgroup | None]:
    for H in all_subgroups(G, bound):
        once = apply(op, G, H)
        if apply(op, G, once) != once:
            return False, H
    return True, None


@_memo("additive")
def is_additive_on(op, G, bound=DEFAULT_LATTICE_BOUND) -> tuple[bool, tuple[Subgroup, Subgroup] | None]:
    subs = all_subgroups(G, bound)
    vals = [apply(op, G, H) for H in subs]
    for i, H in enumerate(subs):
        for j in range(i, len(subs)):
            K = subs[j]
            if apply(op, G, join(H, K)) != join(vals[i], vals[j]):
                return False, (H, K)
    return True, None


def closed_subgroups(op, G, bound=DEFAULT_LATTICE_BOUND) -> list[Subgroup]:
    return [H for H in all_subgroups(G, bound) if apply(op, G, H) == H]


@_memo("sup_closed")
def closed_class_sup_closed(op, G, bound=DEFAULT_LATTICE_BOUND) -> tuple[bool, tuple[Subgroup, Subgroup] | None]:
    closed = closed_subgroups(op, G, bound)
    for i, H in enumerate(closed):
        for K in closed[i:]:
            T = join(H, K)
            if apply(op, G, T) != T:
                return False, (H, K)
    return True, None


@_memo("normal_valued")
def is_normal_valued(op, G, bound=DEFAULT_LATTICE_BOUND) -> tuple[bool, Subgroup | None]:
    for H in all_subgroups(G, bound):
        if not is_normal(apply(op, G, H)):
            return False, H
    return True, None


@dataclass
class EquivalenceVerdict:
    operator: ClosureOperatorId
    group: str
    idempotent: bool
    additive: bool
    sup_closed: bool
    additive_witness: tuple | None = None
    sup_closed_witness: tuple | None = None

    @property
    def applicable(self) -> bool:
        return self.idempotent

    @property
    def consistent(self) -> bool:
        return self.additive == self.sup_closed

    @property
    def paper_discrepancy(self) -> bool:
        return self.applicable and not self.consistent


def equivalence_1_2(op, G, bound=DEFAULT_LATTICE_BOUND) -> EquivalenceVerdict:
    """Additivity against sup-closure of the closed class, for one group.

    Only an idempotent operator is covered by the equivalence, so a mismatch
    on a non-idempotent one is reported but not flagged.
    """
    idem, _ = is_idempotent_on(op, G, bound)
    add, aw = is_additive_on(op, G, bound)
    sup, sw = closed_class_sup_closed(op, G, bound)
    return EquivalenceVerdict(op, G.name, idem, add, sup, aw, sw)


def audit_operator(op: ClosureOperatorId, G: FiniteGroup, homs: Sequence[Homomorphism] = (),
                   auto: bool = True, bound: int = DEFAULT_LATTICE_BOUND) -> AuditReport:
    """All seven checks: the three axioms plus idempotency, additivity, sup-closure, normality."""
    report = audit_axioms(op, G, homs, auto, bound)
    ok, w = is_idempotent_on(op, G, bound)
    report.checks["idempotent"] = Check(ok, None if ok else {"H": w})
    ok, w = is_additive_on(op, G, bound)
    report.checks["additive"] = Check(ok, None if ok else {"H": w[0], "K": w[1]})
    ok, w = closed_class_sup_closed(op, G, bound)
    report.checks["closed_class_sup_closed"] = Check(ok, None if ok else {"H": w[0], "K": w[1]})
    ok, w = is_normal_valued(op, G, bound)
    report.checks["normal_valued"] = Check(ok, None if ok else {"H": w})
    return report


def replay(report: AuditReport) -> dict[str, bool]:
    """Re-verify every recorded counterexample; True means it is a real violation."""
    op = report.operator
    out = {}
    for name, chk in report.checks.items():
        w = chk.counterexample
        if w is None:
            continue
        H = w["H"]
        G = H.parent
        if name == "extension":
            out[name] = not H <= apply(op, G, H)
        elif name == "monotone":
            K = w["K"]
            out[name] = H <= K and not apply(op, G, H) <= apply(op, G, K)
        elif name == "continuity":
            f = w["hom"]
            out[name] = not f.image(apply(op, f.domain, H)) <= apply(op, f.codomain, f.image(H))
        elif name == "idempotent":
            once = apply(op, G, H)
            out[name] = apply(op, G, once) != once
        elif name == "additive":
            K = w["K"]
            out[name] = apply(op, G, join(H, K)) != join(apply(op, G, H), apply(op, G, K))
        elif name == "closed_class_sup_closed":
            K = w["K"]
            T = join(H, K)
            out[name] = apply(op, G, H) == H and apply(op, G, K) == K and apply(op, G, T) != T
        elif name == "normal_valued":
            out[name] = not is_normal(apply(op, G, H))
    return out


# -- simple codomains -----------------------------------------------------------

def literal_inner_criterion(f: Homomorphism) -> bool:
    """Whether c_{f(G)}(K) = f(G) for every nontrivial K <= f(G).

    This only says that f(G) is simple; it does not see the codomain.
    """
    I, _ = f.image().as_group()
    return all(normal_closure(K).is_whole() for K in all_subgroups(I) if not K.is_trivial())


def simple_image_onto_test(f: Homomorphism) -> bool:
    """Surjectivity of a nonzero map into a simple group, decided by closure.

    The image is onto exactly when it is c-closed (normal) in the codomain:
    a simple group has no normal subgroups besides 1 and itself.
    """
    if not is_simple(f.codomain):
        raise CodomainNotSimple(f"{f.codomain.name} is not simple")
    if f.is_trivial():
        raise ZeroHomomorphism("the zero homomorphism has no image to test")
    img = f.image()
    return apply(C, f.codomain, img) == img


# -- compositions -------------------------------------------------------------------

COMPOSITIONS_CLAIMED_NORMAL = (("c", "c2"), ("c1", "c2"), ("c3", "c2"))
COMPOSITIONS_NOT_CLAIMED = (("c2", "c"), ("c2", "c1"), ("c2", "c3"))


def composition_normality_table(G: FiniteGroup, H: Subgroup, r: Preradical = CENTER) -> dict:
    """Normality of the six outer-after-inner compositions for a single H."""
    ops = {"c": C, "c1": CPRIME, "c2": c2(r), "c3": c3(r)}
    rows = []
    for outer, inner in COMPOSITIONS_CLAIMED_NORMAL + COMPOSITIONS_NOT_CLAIMED:
        val = apply(ops[outer], G, apply(ops[inner], G, H))
        rows.append({
            "outer": outer,
            "inner": inner,
            "claimed_normal": (outer, inner) in COMPOSITIONS_CLAIMED_NORMAL,
            "normal": is_normal(val),
            "value": val,
        })
    violations = [r_ for r_ in rows if r_["claimed_normal"] and not r_["normal"]]
    return {"group": G.name, "H": H, "preradical": r.name, "rows": rows,
            "violations": violations, "paper_discrepancy": bool(violations)}
