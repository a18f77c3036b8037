"""Finite permutation groups with dense element enumeration.

Elements of a :class:`FiniteGroup` are kept in lexicographic order of their
image tuples and addressed by index.  A :class:`Subgroup` is a bitmask over
those indices, so inclusion, equality and hashing are integer operations.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import (
    DegreeMismatch,
    ElementNotInGroup,
    NotAHomomorphism,
    NotASubgroupOf,
    NotNormal,
    OrderBoundExceeded,
    ParentMismatch,
)
from .perm import Permutation

DEFAULT_ORDER_BOUND = 10_000
DEFAULT_LATTICE_BOUND = 96

# full multiplication tables are only materialised up to this order
_TABLE_BOUND = 400


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class FiniteGroup:
    """A finite permutation group with all of its elements listed.

    Instances are treated as immutable.  Derived data (multiplication table,
    lattice, quotients) is memoised in ``_cache``.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation],
                 elements: Sequence[Permutation], name: str | None = None):
        self.degree = degree
        self.elements: tuple[Permutation, ...] = tuple(sorted(elements))
        self._index = {p: i for i, p in enumerate(self.elements)}
        self.generators: tuple[Permutation, ...] = tuple(generators)
        self.identity = Permutation.identity(degree)
        self.name = name or f"<group of order {len(self.elements)}>"
        self._images = [p.images for p in self.elements]
        self._tindex = {t: i for i, t in enumerate(self._images)}
        self.e = self._index[self.identity]
        self._table: list[list[int]] | None = None
        self._inv: list[int] | None = None
        self._cache: dict = {}
        self.gen_idx: tuple[int, ...] = tuple(
            dict.fromkeys(self._index[g] for g in self.generators if not g.is_identity()))

    # -- element arithmetic on indices ---------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, p: Permutation) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise ElementNotInGroup(f"{p} is not an element of {self.name}") from None

    def _product(self, i: int, j: int) -> int:
        q = self._images[j]
        return self._tindex[tuple(q[k] for k in self._images[i])]

    @property
    def table(self) -> list[list[int]] | None:
        if self._table is None and self.order <= _TABLE_BOUND:
            n = self.order
            self._table = [[self._product(i, j) for j in range(n)] for i in range(n)]
        return self._table

    def mul(self, i: int, j: int) -> int:
        t = self._table if self._table is not None else self.table
        return t[i][j] if t is not None else self._product(i, j)

    def inv(self, i: int) -> int:
        if self._inv is None:
            self._inv = [self._index[p.inverse()] for p in self.elements]
        return self._inv[i]

    def conj(self, x: int, g: int) -> int:
        """g^-1 x g"""
        return self.mul(self.mul(self.inv(g), x), g)

    def commutator(self, x: int, y: int) -> int:
        """x y x^-1 y^-1"""
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    def element_order(self, i: int) -> int:
        k, x, e = 1, i, self.e
        while x != e:
            x = self.mul(x, i)
            k += 1
        return k

    def is_abelian(self) -> bool:
        g = self.gen_idx
        return all(self.mul(a, b) == self.mul(b, a) for a in g for b in g)

    # -- subgroups -------------------------------------------------------

    def close(self, gens: Iterable[int], base: Subgroup | None = None) -> int:
        """Mask of the subgroup generated by element indices ``gens``.

        With ``base`` the result is <base, gens>; elements already in ``base``
        are only multiplied by the new generators.
        """
        e = self.e
        gens = [g for g in dict.fromkeys(gens) if g != e]
        mul = self.mul
        if base is None:
            mask, elems, start = 1 << e, [e], 0
        else:
            gens = [g for g in gens if not (base.mask >> g) & 1]
            mask, elems = base.mask, list(base.indices)
            start = len(elems)
            for x in elems[:start]:
                for g in gens:
                    y = mul(x, g)
                    if not (mask >> y) & 1:
                        mask |= 1 << y
                        elems.append(y)
            gens = list(base.gen_idx) + gens
        i = start
        while i < len(elems):
            x = elems[i]
            i += 1
            for g in gens:
                y = mul(x, g)
                if not (mask >> y) & 1:
                    mask |= 1 << y
                    elems.append(y)
        return mask

    def sub(self, mask: int, gens: Sequence[int] | None = None) -> Subgroup:
        return Subgroup(self, mask, gens)

    @property
    def whole(self) -> Subgroup:
        s = self._cache.get("whole")
        if s is None:
            s = self._cache["whole"] = Subgroup(self, (1 << self.order) - 1, self.gen_idx)
        return s

    @property
    def trivial(self) -> Subgroup:
        return Subgroup(self, 1 << self.e, ())

    def subgroup(self, perms: Iterable[Permutation | str]) -> Subgroup:
        """Subgroup generated by permutations (or cycle strings)."""
        seed = [Permutation.parse(p, self.degree) if isinstance(p, str) else p for p in perms]
        return subgroup_generated(self, seed)

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p) -> bool:
        return p in self._index

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return isinstance(other, FiniteGroup) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, self.order, self.elements[-1]))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order}, degree={self.degree})"


class Subgroup:
    """A subgroup of ``parent`` given by the mask of its element indices."""

    __slots__ = ("parent", "mask", "_gens", "_indices", "_canon")

    def __init__(self, parent: FiniteGroup, mask: int, gens: Sequence[int] | None = None):
        self.parent = parent
        self.mask = mask
        self._gens = tuple(gens) if gens is not None else None
        self._indices: tuple[int, ...] | None = None
        self._canon: tuple[int, ...] | None = None

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @property
    def indices(self) -> tuple[int, ...]:
        if self._indices is None:
            self._indices = tuple(_bits(self.mask))
        return self._indices

    @property
    def elements(self) -> tuple[Permutation, ...]:
        els = self.parent.elements
        return tuple(els[i] for i in self.indices)

    @property
    def canonical_gens(self) -> tuple[int, ...]:
        """Greedy generating set: smallest element not yet generated, repeatedly.

        Depends only on the element set, so it is stable across computations.
        """
        if self._canon is None:
            G = self.parent
            gens: list[int] = []
            span = 1 << G.e
            for i in self.indices:
                if not (span >> i) & 1:
                    gens.append(i)
                    span = G.close(gens)
                    if span == self.mask:
                        break
            self._canon = tuple(gens)
        return self._canon

    @property
    def gen_idx(self) -> tuple[int, ...]:
        return self._gens if self._gens is not None else self.canonical_gens

    @property
    def generators(self) -> tuple[Permutation, ...]:
        els = self.parent.elements
        return tuple(els[i] for i in self.canonical_gens)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def as_group(self) -> tuple[FiniteGroup, Homomorphism]:
        """This subgroup as a group in its own right, with the inclusion map."""
        key = ("as_group", self.mask)
        hit = self.parent._cache.get(key)
        if hit is None:
            G = self.parent
            gens = [G.elements[i] for i in self.canonical_gens]
            K = FiniteGroup(G.degree, gens, self.elements,
                            name=f"{G.name}>{describe(self)}")
            inc = Homomorphism(K, G, tuple(G.index(p) for p in K.elements),
                                         name=f"inclusion {describe(self)}")
            hit = G._cache[key] = (K, inc)
        return hit

    def __contains__(self, item) -> bool:
        if isinstance(item, Permutation):
            i = self.parent._index.get(item)
            return i is not None and bool((self.mask >> i) & 1)
        return bool((self.mask >> item) & 1)

    def _check_parent(self, other: Subgroup) -> None:
        if not same_parent(self, other):
            raise ParentMismatch("subgroups live in different groups")

    def __le__(self, other: Subgroup) -> bool:
        self._check_parent(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: Subgroup) -> bool:
        return other <= self

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.mask == other.mask
                and same_parent(self, other))

    def __hash__(self) -> int:
        return hash((self.parent.order, self.mask))

    def sort_key(self) -> tuple:
        return (self.order, self.indices)

    def __repr__(self) -> str:
        return f"Subgroup({describe(self)}, order={self.order})"


def same_parent(a: Subgroup, b: Subgroup) -> bool:
    return a.parent is b.parent or a.parent == b.parent


def describe(H: Subgroup) -> str:
    """Generator notation like ``<(1 2), (1 2 3)>``."""
    return "<" + ", ".join(str(p) for p in H.generators) + ">"


class Homomorphism:
    """A group homomorphism stored as a total map on element indices."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup,
                 full_map: Sequence[int], name: str = ""):
        self.domain = domain
        self.codomain = codomain
        self.full_map = tuple(full_map)
        self.name = name
        self.generator_images = {g: codomain.elements[self.full_map[domain.index(g)]]
                                 for g in domain.generators}

    def __call__(self, p: Permutation) -> Permutation:
        return self.codomain.elements[self.full_map[self.domain.index(p)]]

    def image(self, H: Subgroup | None = None) -> Subgroup:
        H = self.domain.whole if H is None else H
        if H.parent != self.domain:
            raise ParentMismatch("subgroup is not in the domain")
        fm = self.full_map
        mask = 0
        for i in H.indices:
            mask |= 1 << fm[i]
        return self.codomain.sub(mask)

    def preimage(self, S: Subgroup) -> Subgroup:
        if S.parent != self.codomain:
            raise ParentMismatch("subgroup is not in the codomain")
        mask = 0
        sm = S.mask
        for i, j in enumerate(self.full_map):
            if (sm >> j) & 1:
                mask |= 1 << i
        return self.domain.sub(mask)

    def kernel(self) -> Subgroup:
        return self.preimage(self.codomain.trivial)

    def is_injective(self) -> bool:
        return self.kernel().is_trivial()

    def is_surjective(self) -> bool:
        return self.image().is_whole()

    def is_trivial(self) -> bool:
        return self.image().is_trivial()

    def __repr__(self) -> str:
        return f"Homomorphism({self.name or '?'}: {self.domain.name} -> {self.codomain.name})"


# -- construction --------------------------------------------------------

def generate_group(gens: Sequence[Permutation], degree: int | None = None,
                   order_bound: int = DEFAULT_ORDER_BOUND, name: str | None = None) -> FiniteGroup:
    """Close ``gens`` under composition; raises once the bound is passed."""
    gens = list(gens)
    degrees = {g.degree for g in gens}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) > 1:
        raise DegreeMismatch(f"generators have degrees {sorted(degrees)}")
    deg = degrees.pop() if degrees else 1
    ident = tuple(range(deg))
    gimg = [g.images for g in gens if not g.is_identity()]
    seen = {ident}
    frontier = [ident]
    for x in frontier:
        for q in gimg:
            y = tuple(q[k] for k in x)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
                if len(seen) > order_bound:
                    raise OrderBoundExceeded(len(seen), order_bound)
    return FiniteGroup(deg, gens, [Permutation(t) for t in seen], name=name)


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str | None = None) -> FiniteGroup:
    d = A.degree
    def shift(q):
        return tuple(k + d for k in q)
    elements = [Permutation(a.images + shift(b.images)) for a in A.elements for b in B.elements]
    idB = tuple(range(d, d + B.degree))
    idA = tuple(range(d))
    gens = [Permutation(g.images + idB) for g in A.generators]
    gens += [Permutation(idA + shift(g.images)) for g in B.generators]
    return FiniteGroup(d + B.degree, gens, elements, name=name or f"{A.name}x{B.name}")


def subgroup_generated(G: FiniteGroup, seed: Iterable[Permutation | int]) -> Subgroup:
    idx = [G.index(s) if isinstance(s, Permutation) else s for s in seed]
    for i in idx:
        if not 0 <= i < G.order:
            raise ElementNotInGroup(f"index {i} outside {G.name}")
    gens = [i for i in dict.fromkeys(idx) if i != G.e]
    return G.sub(G.close(gens), gens)


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    if not same_parent(H, K):
        raise ParentMismatch("join of subgroups of different groups")
    if H.mask & ~K.mask == 0:
        return K
    if K.mask & ~H.mask == 0:
        return H
    G = H.parent
    new = tuple(g for g in K.gen_idx if not (H.mask >> g) & 1)
    return G.sub(G.close(new, base=H), H.gen_idx + new)


def meet(H: Subgroup, K: Subgroup) -> Subgroup:
    if not same_parent(H, K):
        raise ParentMismatch("meet of subgroups of different groups")
    return H.parent.sub(H.mask & K.mask)


def _ambient(X: FiniteGroup | Subgroup) -> Subgroup:
    return X.whole if isinstance(X, FiniteGroup) else X


def normal_closure(H: Subgroup, within: FiniteGroup | Subgroup | None = None) -> Subgroup:
    """Least subgroup normal in ``within`` (default the parent) containing H."""
    A = H.parent.whole if within is None else _ambient(within)
    if not same_parent(H, A):
        raise ParentMismatch("ambient subgroup lives in another group")
    if H.mask & ~A.mask:
        raise NotASubgroupOf("H is not contained in the ambient subgroup")
    G = H.parent
    gens = list(H.gen_idx)
    mask = H.mask
    pending = list(gens)
    agens = A.gen_idx
    while pending:
        n = pending.pop()
        for a in agens:
            c = G.conj(n, a)
            if not (mask >> c) & 1:
                gens.append(c)
                pending.append(c)
                mask = G.close(gens)
    return G.sub(mask, gens)


def is_normal(H: Subgroup, K: Subgroup | FiniteGroup | None = None) -> bool:
    """True iff H is normalised by every element of K (default: the parent)."""
    K = H.parent.whole if K is None else _ambient(K)
    if not same_parent(H, K):
        raise ParentMismatch("subgroups live in different groups")
    if H.mask & ~K.mask:
        raise NotASubgroupOf("H is not contained in K")
    G = H.parent
    m = H.mask
    return all((m >> G.conj(h, k)) & 1 for k in K.gen_idx for h in H.gen_idx)


def commutator_subgroup(G: FiniteGroup) -> Subgroup:
    """[G, G], as the normal closure of commutators of generators."""
    hit = G._cache.get("derived")
    if hit is None:
        g = G.gen_idx
        comms = {G.commutator(a, b) for a in g for b in g} - {G.e}
        seed = subgroup_generated(G, sorted(comms))
        hit = G._cache["derived"] = normal_closure(seed)
    return hit


def center(G: FiniteGroup) -> Subgroup:
    hit = G._cache.get("center")
    if hit is None:
        g = G.gen_idx
        mask = 0
        for z in range(G.order):
            if all(G.mul(z, a) == G.mul(a, z) for a in g):
                mask |= 1 << z
        hit = G._cache["center"] = G.sub(mask)
    return hit


def element_normal_closures(G: FiniteGroup) -> dict[int, Subgroup]:
    """Normal closure of each non-identity cyclic subgroup, keyed by mask."""
    hit = G._cache.get("ncl")
    if hit is None:
        hit = {}
        done = 1 << G.e
        for x in range(G.order):
            if (done >> x) & 1:
                continue
            # conjugates of x share one normal closure
            cls = [x]
            done |= 1 << x
            for y in cls:
                for g in G.gen_idx:
                    z = G.conj(y, g)
                    if not (done >> z) & 1:
                        done |= 1 << z
                        cls.append(z)
            N = normal_closure(G.sub(G.close([x]), (x,)))
            hit.setdefault(N.mask, N)
        G._cache["ncl"] = hit
    return hit


def minimal_normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    ncls = list(element_normal_closures(G).values())
    return sorted((N for N in ncls if not any(M.mask != N.mask and M.mask & ~N.mask == 0
                                              for M in ncls)),
                  key=Subgroup.sort_key)


def socle(G: FiniteGroup) -> Subgroup:
    hit = G._cache.get("socle")
    if hit is None:
        S = G.trivial
        for N in minimal_normal_subgroups(G):
            S = join(S, N)
        hit = G._cache["socle"] = S
    return hit


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, Homomorphism]:
    """G/N acting on the right cosets of N by right multiplication."""
    if N.parent != G:
        raise ParentMismatch("N is not a subgroup of G")
    key = ("quotient", N.mask)
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    if not is_normal(N):
        raise NotNormal(f"{describe(N)} is not normal in {G.name}")
    coset_of = [-1] * G.order
    reps: list[int] = []
    nidx = N.indices
    for x in range(G.order):
        if coset_of[x] < 0:
            c = len(reps)
            reps.append(x)
            for n in nidx:
                coset_of[G.mul(n, x)] = c
    k = len(reps)
    perms = [Permutation([coset_of[G.mul(r, reps[c])] for r in reps]) for c in range(k)]
    # perms[c] sends coset j (rep r_j) to the coset of r_j * rep_c
    gens = [perms[coset_of[g]] for g in G.gen_idx]
    Q = FiniteGroup(k, gens, perms, name=f"{G.name}/{describe(N)}")
    qidx = [Q.index(p) for p in perms]
    pi = Homomorphism(G, Q, tuple(qidx[coset_of[x]] for x in range(G.order)),
                                name=f"projection mod {describe(N)}")
    hit = G._cache[key] = (Q, pi)
    return hit


def preimage(f: Homomorphism, S: Subgroup) -> Subgroup:
    return f.preimage(S)


def all_subgroups(G: FiniteGroup, bound: int = DEFAULT_LATTICE_BOUND) -> list[Subgroup]:
    """Every subgroup exactly once, sorted by (order, element indices).

    Seeds with the cyclic subgroups and closes under joins with them; every
    subgroup is a join of cyclic subgroups, so nothing is missed.
    """
    if G.order > bound:
        raise OrderBoundExceeded(G.order, bound, "lattice of group")
    hit = G._cache.get("lattice")
    if hit is not None:
        return hit
    cyclic: dict[int, int] = {}
    for x in range(G.order):
        cyclic.setdefault(G.close([x]), x)
    found: dict[int, tuple[int, ...]] = {m: ((g,) if g != G.e else ()) for m, g in cyclic.items()}
    todo = list(found)
    cyc = list(cyclic.items())
    while todo:
        m = todo.pop()
        gens = found[m]
        for cm, g in cyc:
            if cm & ~m == 0:
                continue
            new_gens = gens + (g,)
            nm = G.close(new_gens)
            if nm not in found:
                found[nm] = new_gens
                todo.append(nm)
    subs = sorted((G.sub(m, gs) for m, gs in found.items()), key=Subgroup.sort_key)
    G._cache["lattice"] = subs
    return subs


def normal_subgroups(G: FiniteGroup, bound: int = DEFAULT_LATTICE_BOUND) -> list[Subgroup]:
    return [H for H in all_subgroups(G, bound) if is_normal(H)]


def is_simple(G: FiniteGroup, bound: int = DEFAULT_LATTICE_BOUND) -> bool:
    if G.order > bound:
        raise OrderBoundExceeded(G.order, bound, "lattice of group")
    if G.order == 1:
        return False
    return all(N.is_whole() for N in element_normal_closures(G).values())


def homomorphism(domain: FiniteGroup, codomain: FiniteGroup,
                 generator_images: Mapping[Permutation, Permutation], name: str = "") -> Homomorphism:
    """Extend ``generator_images`` multiplicatively and verify it on all pairs.

    Raises :class:`NotAHomomorphism` with the first offending pair ``(a, b)``.
    """
    src = [(domain.index(k), codomain.index(v)) for k, v in generator_images.items()]
    fmap = {domain.e: codomain.e}
    order = [domain.e]
    for x in order:
        for s, t in src:
            y = domain.mul(x, s)
            fy = codomain.mul(fmap[x], t)
            if y not in fmap:
                fmap[y] = fy
                order.append(y)
            elif fmap[y] != fy:
                a, b = domain.elements[x], domain.elements[s]
                raise NotAHomomorphism(f"f({a}*{b}) is ambiguous", witness=(a, b))
    if len(fmap) != domain.order:
        raise NotAHomomorphism("generator_images keys do not generate the domain")
    full = [fmap[i] for i in range(domain.order)]
    for a in range(domain.order):
        fa = full[a]
        for b in range(domain.order):
            if full[domain.mul(a, b)] != codomain.mul(fa, full[b]):
                pa, pb = domain.elements[a], domain.elements[b]
                raise NotAHomomorphism(f"f({pa}*{pb}) != f({pa})*f({pb})", witness=(pa, pb))
    return Homomorphism(domain, codomain, full, name)


def identity_map(G: FiniteGroup) -> Homomorphism:
    return Homomorphism(G, G, tuple(range(G.order)), name="identity")
