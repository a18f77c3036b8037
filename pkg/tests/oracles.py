"""Naive reference implementations used only by the tests.

Everything here works on plain sets of Permutations and never calls the
library's closure, lattice or normal-closure code.
"""

from itertools import combinations


def elements(G):
    return list(G.elements)


def identity_of(G):
    return next(p for p in G.elements if p.is_identity())


def is_subgroup_set(S):
    return all(a * b in S for a in S for b in S)


def subgroups_by_subsets(G):
    """Every subset containing the identity that is closed under products."""
    e = identity_of(G)
    rest = [p for p in G.elements if p != e]
    out = []
    n = len(G.elements)
    for k in range(len(rest) + 1):
        if n % (k + 1):
            continue  # Lagrange prunes without changing the answer
        for combo in combinations(rest, k):
            S = frozenset(combo) | {e}
            if is_subgroup_set(S):
                out.append(S)
    return out


def span(gens, e):
    S = {e}
    frontier = [e]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g
            if y not in S:
                S.add(y)
                frontier.append(y)
    return frozenset(S)


def normal_sets(G, subs):
    els = elements(G)
    return [S for S in subs if all(g.inverse() * s * g in S for s in S for g in els)]


def normal_closure_oracle(G, H, subs):
    """Intersection of all normal subgroups containing H."""
    out = frozenset(G.elements)
    for N in normal_sets(G, subs):
        if H <= N:
            out &= N
    return out


def center_oracle(G):
    els = elements(G)
    return frozenset(z for z in els if all(z * g == g * z for g in els))


def derived_oracle(G):
    els = elements(G)
    comms = {a * b * a.inverse() * b.inverse() for a in els for b in els}
    return span(list(comms), identity_of(G))


def as_set(H):
    return frozenset(H.elements)
