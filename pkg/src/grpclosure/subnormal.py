"""Normal-closure series, subnormality, defects and the join experiment."""

from __future__ import annotations

from dataclasses import dataclass, field

from .closure import C, ClosureOperatorId, apply, is_additive_on, is_idempotent_on
from .errors import AdditivityViolated, NotSubnormal, OrderBoundExceeded, ParentMismatch, WielandtViolation
from .group import (
    DEFAULT_LATTICE_BOUND,
    FiniteGroup,
    Subgroup,
    all_subgroups,
    is_normal,
    join,
    normal_closure,
)


@dataclass
class SubnormalSeries:
    """H_0 = G, H_{i+1} = c_{H_i}(H), up to the first repeat."""

    target: Subgroup
    chain: list[Subgroup]
    stabilized: bool
    defect: int | None

    @property
    def subnormal(self) -> bool:
        return self.defect is not None

    def term(self, i: int) -> Subgroup:
        """H_i, constant after the chain stabilises."""
        return self.chain[min(i, len(self.chain) - 1)]


def normal_closure_series(G: FiniteGroup, H: Subgroup, max_steps: int | None = None) -> SubnormalSeries:
    if H.parent != G:
        raise ParentMismatch(f"subgroup does not live in {G.name}")
    if max_steps is None:
        key = ("series", H.mask)
        if key not in G._cache:
            G._cache[key] = normal_closure_series(G, H, G.order)
        return G._cache[key]
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    chain = [G.whole]
    stabilized = False
    for _ in range(max_steps):
        nxt = normal_closure(H, within=chain[-1])
        if nxt == chain[-1]:
            stabilized = True
            break
        chain.append(nxt)
    else:
        stabilized = normal_closure(H, within=chain[-1]) == chain[-1]
    defect = len(chain) - 1 if chain[-1] == H else None
    return SubnormalSeries(H, chain, stabilized, defect)


def is_subnormal(G: FiniteGroup, H: Subgroup) -> tuple[bool, int | None]:
    s = normal_closure_series(G, H)
    return s.subnormal, s.defect


def oracle_subnormal(G: FiniteGroup, H: Subgroup, bound: int = DEFAULT_LATTICE_BOUND) -> bool:
    """Search the lattice for a chain of normal inclusions from H up to G.

    Never computes a normal closure: only the enumerated lattice and
    conjugation tests are used.
    """
    if G.order > bound:
        raise OrderBoundExceeded(G.order, bound, "lattice of group")
    if H.parent != G:
        raise ParentMismatch(f"subgroup does not live in {G.name}")
    above = [K for K in all_subgroups(G, bound) if H.mask & ~K.mask == 0]
    memo: dict[int, bool] = {}

    def reach(K: Subgroup) -> bool:
        # is H subnormal in K?
        if K.mask == H.mask:
            return True
        hit = memo.get(K.mask)
        if hit is None:
            hit = any(M.mask != K.mask and M.mask & ~K.mask == 0 and is_normal(M, K) and reach(M)
                      for M in above)
            memo[K.mask] = hit
        return hit

    return reach(G.whole)


def shortest_normal_chain(G: FiniteGroup, H: Subgroup, bound: int = DEFAULT_LATTICE_BOUND) -> int | None:
    """Breadth-first search for the fewest steps G = K_0 |> K_1 |> ... |> K_m = H."""
    above = [K for K in all_subgroups(G, bound) if H.mask & ~K.mask == 0]
    level = {G.whole.mask: G.whole}
    seen = set(level)
    depth = 0
    while level:
        if H.mask in level:
            return depth
        nxt = {}
        for K in level.values():
            for M in above:
                if M.mask not in seen and M.mask & ~K.mask == 0 and is_normal(M, K):
                    nxt[M.mask] = M
        seen.update(nxt)
        level = nxt
        depth += 1
    return None


@dataclass
class ChainStep:
    smaller: Subgroup
    larger: Subgroup
    normal: bool


@dataclass
class JoinExperiment:
    G: FiniteGroup
    H: Subgroup
    K: Subgroup
    operator: ClosureOperatorId
    T: Subgroup
    series_H: SubnormalSeries
    series_K: SubnormalSeries
    grid: dict[tuple[int, int], Subgroup]
    closure: Subgroup
    closure_chain: list[Subgroup]
    steps: list[ChainStep] = field(default_factory=list)
    verdict: bool = False
    closure_defect: int | None = None

    @property
    def defects(self) -> tuple[int, int]:
        return self.series_H.defect, self.series_K.defect

    @property
    def chain_verified(self) -> bool:
        return all(s.normal for s in self.steps)


def join_experiment(G: FiniteGroup, H: Subgroup, K: Subgroup, op: ClosureOperatorId = C,
                    full_grid: bool = False, bound: int = DEFAULT_LATTICE_BOUND) -> JoinExperiment:
    """Build T_{m,n} = <H_m, K_n> and check the chain of joins step by step.

    The chain runs through J_k = <H_k, K_k> for k = max(m, n) down to 0,
    each series held constant once it reaches its target.  Every claimed
    normal inclusion is tested rather than assumed.
    """
    sH = normal_closure_series(G, H)
    sK = normal_closure_series(G, K)
    for s in (sH, sK):
        if not s.subnormal:
            raise NotSubnormal(f"{s.target!r} is not subnormal in {G.name}", s.target)
    idem, w = is_idempotent_on(op, G, bound)
    if not idem:
        raise AdditivityViolated(f"{op} is not idempotent on {G.name}", w)
    add, w = is_additive_on(op, G, bound)
    if not add:
        raise AdditivityViolated(f"{op} is not additive on {G.name}", w)
    m, n = sH.defect, sK.defect
    grid: dict[tuple[int, int], Subgroup] = {}

    def T_at(i, j):
        if (i, j) not in grid:
            grid[(i, j)] = join(sH.term(i), sK.term(j))
        return grid[(i, j)]

    if full_grid:
        for i in range(m + 1):
            for j in range(n + 1):
                T_at(i, j)
    T = join(H, K)
    top = max(m, n)
    Tmn = T_at(m, n)
    Dg, inc = Tmn.as_group()
    local_T = inc.preimage(T)
    closure = inc.image(apply(op, Dg, local_T))
    chain = [closure] + [T_at(min(k, m), min(k, n)) for k in range(top, -1, -1)]
    steps = [ChainStep(a, b, is_normal(a, b)) for a, b in zip(chain, chain[1:])]
    sub, d = is_subnormal(G, closure)
    return JoinExperiment(G, H, K, op, T, sH, sK, grid, closure, chain, steps, sub, d)


@dataclass
class WielandtReport:
    groups: int = 0
    pairs: int = 0
    per_group: dict[str, int] = field(default_factory=dict)
    violations: list = field(default_factory=list)


def subnormal_subgroups(G: FiniteGroup, bound: int = DEFAULT_LATTICE_BOUND) -> list[Subgroup]:
    return [H for H in all_subgroups(G, bound) if is_subnormal(G, H)[0]]


def wielandt_sweep(corpus, bound: int = DEFAULT_LATTICE_BOUND, abort: bool = True) -> WielandtReport:
    """Check that joins of subnormal pairs are subnormal across a corpus.

    A violation raises :class:`WielandtViolation` carrying ``(G, H, K)``
    unless ``abort`` is false, in which case it is only collected.
    """
    rep = WielandtReport()
    for G in corpus:
        if G.order > bound:
            raise OrderBoundExceeded(G.order, bound, "lattice of group")
        subs = subnormal_subgroups(G, bound)
        count = 0
        for i, H in enumerate(subs):
            for K in subs[i:]:
                count += 1
                if not is_subnormal(G, join(H, K))[0]:
                    if abort:
                        raise WielandtViolation(f"<H, K> not subnormal in {G.name}", (G, H, K))
                    rep.violations.append((G, H, K))
        rep.groups += 1
        rep.pairs += count
        rep.per_group[G.name] = count
    return rep
