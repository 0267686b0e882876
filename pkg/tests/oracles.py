"""Independent brute-force oracles: plain tuples and sets, no library internals."""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Sequence

Perm = tuple[int, ...]


def compose(a: Perm, b: Perm) -> Perm:
    """Apply a first, then b."""
    return tuple(b[x] for x in a)


def invert(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def closure(gens: Sequence[Perm], degree: int) -> set[Perm]:
    ident = tuple(range(degree))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_block(block: frozenset[int], gens: Sequence[Perm]) -> bool:
    """A set is a block iff its images under the group are equal or disjoint."""
    seen = {block}
    queue = deque([block])
    while queue:
        b = queue.popleft()
        for g in gens:
            c = frozenset(g[x] for x in b)
            if c != block and c & block:
                return False
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return True


def nontrivial_blocks(gens: Sequence[Perm], degree: int) -> list[frozenset[int]]:
    """Every nontrivial block containing point 0, by subset enumeration."""
    out = []
    for k in range(2, degree):
        if degree % k:
            continue
        for rest in itertools.combinations(range(1, degree), k - 1):
            b = frozenset((0,) + rest)
            if is_block(b, gens):
                out.append(b)
    return out


def is_transitive(gens: Sequence[Perm], degree: int) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in gens:
            if g[x] not in seen:
                seen.add(g[x])
                queue.append(g[x])
    return len(seen) == degree


def brute_primitive(gens: Sequence[Perm], degree: int) -> bool:
    return is_transitive(gens, degree) and not nontrivial_blocks(gens, degree)


def brute_biprimitive(gens: Sequence[Perm], degree: int) -> bool:
    if not is_transitive(gens, degree):
        return False
    sizes = {len(b) for b in nontrivial_blocks(gens, degree)}
    return sizes == {degree // 2} if degree % 2 == 0 else False


def s_arcs(adj: Sequence[Sequence[int]], s: int) -> list[tuple[int, ...]]:
    arcs = [(v,) for v in range(len(adj))]
    for _ in range(s):
        nxt = []
        for a in arcs:
            for u in adj[a[-1]]:
                if len(a) >= 2 and u == a[-2]:
                    continue
                nxt.append(a + (u,))
        arcs = nxt
    return arcs


def arc_orbit_size(start: tuple[int, ...], gens: Sequence[Perm]) -> int:
    seen = {start}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = tuple(g[x] for x in a)
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return len(seen)


def brute_arc_transitivity(adj: Sequence[Sequence[int]], gens: Sequence[Perm], max_s: int) -> list[bool]:
    """Flag per s in 0..max_s: is the group transitive on s-arcs."""
    flags = []
    for s in range(max_s + 1):
        arcs = s_arcs(adj, s)
        flags.append(arc_orbit_size(arcs[0], gens) == len(arcs))
    return flags


def right_cosets(H: set[Perm], G: Iterable[Perm]) -> list[frozenset[Perm]]:
    done: set[Perm] = set()
    out = []
    for g in sorted(G):
        if g in done:
            continue
        c = frozenset(compose(h, g) for h in H)
        done |= c
        out.append(c)
    return out


def brute_maximal(G: set[Perm], H: set[Perm], degree: int) -> bool:
    """H < G is maximal iff <H, g> = G for one g from every coset Hg other than H."""
    hgens = sorted(H)
    for c in right_cosets(H, G):
        g = min(c)
        if g in H:
            continue
        if len(closure(hgens + [g], degree)) != len(G):
            return False
    return True


def all_subgroups_two_generated(G: set[Perm], degree: int) -> set[frozenset[Perm]]:
    """Closures of all pairs; complete for groups whose subgroups are all 2-generated."""
    elts = sorted(G)
    subs = set()
    for i, a in enumerate(elts):
        for b in elts[i:]:
            subs.add(frozenset(closure([a, b], degree)))
    return subs


def conjugacy_classes_of_subgroups(G: set[Perm], subs: set[frozenset[Perm]]) -> int:
    remaining = set(subs)
    classes = 0
    while remaining:
        S = remaining.pop()
        for x in G:
            xi = invert(x)
            remaining.discard(frozenset(compose(compose(xi, s), x) for s in S))
        classes += 1
    return classes
