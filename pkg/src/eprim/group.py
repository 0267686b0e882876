"""Permutation groups via base and strong generating set.

Construction is randomized Schreier-Sims followed by deterministic Sims
verification of every Schreier generator, unless an exact upper bound on the
order is known (e.g. for an image of a group of known order), in which case
reaching that order certifies the chain.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .perm import Permutation, point_dtype

logger = logging.getLogger(__name__)

__all__ = [
    "PermGroup",
    "BlockSystem",
    "CosetAction",
    "IndexCapExceeded",
    "NotASubgroup",
    "bsgs",
    "membership",
    "stabilizer",
    "minimal_block_system",
    "is_primitive",
    "is_biprimitive",
    "is_normalized",
    "normal_closure",
    "coset_action",
    "is_maximal",
    "intersection",
    "orbits_of",
    "DEFAULT_INDEX_CAP",
]

DEFAULT_INDEX_CAP = 2_000_000
# seed for the randomized phase of Schreier-Sims; results never depend on it
DEFAULT_SEED = 0
# explicit transversal elements are memoised up to this many stored points per level
_MEMO_BUDGET = 40_000_000


class IndexCapExceeded(ValueError):
    def __init__(self, index: int, cap: int):
        super().__init__(f"coset index {index} exceeds cap {cap}")
        self.index = index
        self.cap = cap


class NotASubgroup(ValueError):
    pass


def _check_degrees(perms: Iterable[Permutation], degree: int) -> None:
    for p in perms:
        if p.degree != degree:
            raise ValueError(f"degree mismatch: expected {degree}, got {p.degree}")


class _Transversal:
    """Orbit of one base point with a Schreier tree and memoised coset representatives."""

    def __init__(self, point: int, degree: int):
        self.point = point
        self.degree = degree
        self.gens: list[Permutation] = []
        self._gen_lists: list[list[int]] = []
        self._gen_inv: list[Permutation] = []
        self.orbit: list[int] = [point]
        self.tree: dict[int, tuple[int, int]] = {point: (-1, -1)}
        ident = Permutation.identity(degree)
        self._fwd: dict[int, Permutation] = {point: ident}
        self._inv: dict[int, Permutation] = {point: ident}
        self._memo_cap = max(64, _MEMO_BUDGET // max(degree, 1))
        self._orbit_arr: np.ndarray | None = None

    def add_generator(self, g: Permutation) -> None:
        self.gens.append(g)
        self._gen_lists.append(list(g.images))
        self._gen_inv.append(g.inverse())
        self._extend()

    def _extend(self) -> None:
        tree = self.tree
        orbit = self.orbit
        i = 0
        while i < len(orbit):
            p = orbit[i]
            for k, img in enumerate(self._gen_lists):
                q = img[p]
                if q not in tree:
                    tree[q] = (p, k)
                    orbit.append(q)
            i += 1
        self._orbit_arr = None

    def __contains__(self, p: int) -> bool:
        return p in self.tree

    def __len__(self) -> int:
        return len(self.orbit)

    @property
    def orbit_array(self) -> np.ndarray:
        if self._orbit_arr is None:
            self._orbit_arr = np.array(self.orbit, dtype=np.int64)
        return self._orbit_arr

    def element(self, p: int) -> Permutation:
        """Representative u with u(point) == p."""
        u = self._fwd.get(p)
        if u is not None:
            return u
        path = []
        q = p
        while q not in self._fwd:
            parent, k = self.tree[q]
            path.append(k)
            q = parent
        u = self._fwd[q]
        for k in reversed(path):
            u = u * self.gens[k]
            q = self._gen_lists[k][q]
            if len(self._fwd) < self._memo_cap:
                self._fwd[q] = u
        return u

    def inverse_element(self, p: int) -> Permutation:
        u = self._inv.get(p)
        if u is not None:
            return u
        if p in self._fwd or len(self._inv) < self._memo_cap:
            u = self.element(p).inverse()
            if len(self._inv) < self._memo_cap:
                self._inv[p] = u
            return u
        # walk the tree: u_p^-1 = s^-1 * u_parent^-1
        parent, k = self.tree[p]
        return self._gen_inv[k] * self.inverse_element(parent)


class _Chain:
    """Mutable stabilizer chain used while building a group."""

    def __init__(self, degree: int, base: Sequence[int] = ()):
        self.degree = degree
        self.identity = Permutation.identity(degree)
        self.levels: list[_Transversal] = []
        seen = set()
        for b in base:
            if b in seen or not 0 <= b < degree:
                raise ValueError(f"invalid base point {b}")
            seen.add(b)
            self.levels.append(_Transversal(b, degree))

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl)
        return n

    def sift(self, x: Permutation, start: int = 0) -> tuple[Permutation, int]:
        """Strip x through levels start..; return residue and the level where it stopped."""
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            p = x(lvl.point)
            if p not in lvl.tree:
                return x, i
            if p != lvl.point:
                x = x * lvl.inverse_element(p)
        return x, len(self.levels)

    def add(self, h: Permutation, level: int) -> None:
        """Add residue h, which fixes the base points before ``level``."""
        if level == len(self.levels):
            moved = h.support()
            base = {lvl.point for lvl in self.levels}
            point = next(p for p in moved if p not in base)
            self.levels.append(_Transversal(point, self.degree))
        for i in range(level + 1):
            self.levels[i].add_generator(h)

    def random_phase(self, gens: Sequence[Permutation], rng: random.Random,
                     order_bound: int | None, patience: int) -> None:
        if not gens:
            return
        pool = list(gens) * max(1, (10 + len(gens) - 1) // len(gens))
        pool = pool[:max(10, len(gens))]
        acc = self.identity
        def step():
            nonlocal acc
            i, j = rng.sample(range(len(pool)), 2)
            if rng.random() < 0.5:
                pool[i] = pool[i] * pool[j]
            else:
                pool[i] = pool[j] * pool[i]
            acc = acc * pool[i]
            return acc
        for _ in range(30):
            step()
        for g in gens:
            h, lvl = self.sift(g)
            if not h.is_identity():
                self.add(h, lvl)
        streak = 0
        while streak < patience:
            if order_bound is not None and self.order() >= order_bound:
                return
            h, lvl = self.sift(step())
            if h.is_identity():
                streak += 1
            else:
                self.add(h, lvl)
                streak = 0

    def verify(self) -> None:
        """Sims verification: every Schreier generator sifts below its level."""
        checked: list[set[tuple[int, int]]] = [set() for _ in self.levels]
        i = len(self.levels) - 1
        while i >= 0:
            while len(checked) < len(self.levels):
                checked.append(set())
            lvl = self.levels[i]
            done = checked[i]
            restart = None
            for p in list(lvl.orbit):
                for k, img in enumerate(lvl._gen_lists):
                    if (p, k) in done:
                        continue
                    q = img[p]
                    if lvl.tree.get(q) == (p, k):
                        done.add((p, k))
                        continue
                    g = lvl.element(p) * lvl.gens[k] * lvl.inverse_element(q)
                    h, j = self.sift(g, i + 1)
                    if h.is_identity():
                        done.add((p, k))
                        continue
                    self.add(h, j)
                    restart = j
                    break
                if restart is not None:
                    break
            if restart is None:
                i -= 1
            else:
                i = min(restart, len(self.levels) - 1)


class PermGroup:
    """A permutation group with a verified base and strong generating set."""

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None, *,
                 base: Sequence[int] = (), order_bound: int | None = None, seed: int | None = None,
                 _levels: list[_Transversal] | None = None):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree is required for a group without generators")
            degree = gens[0].degree
        _check_degrees(gens, degree)
        self.degree = degree
        self.generators = gens
        self.identity = Permutation.identity(degree)
        if _levels is not None:
            chain = _Chain(degree)
            chain.levels = _levels
        else:
            chain = _Chain(degree, base)
            nontrivial = [g for g in gens if not g.is_identity()]
            rng = random.Random(DEFAULT_SEED if seed is None else seed)
            chain.random_phase(nontrivial, rng, order_bound, patience=25)
            if order_bound is None or chain.order() != order_bound:
                chain.verify()
            if order_bound is not None and chain.order() > order_bound:
                raise ValueError(f"group order {chain.order()} exceeds stated bound {order_bound}")
        self._chain = chain
        self.order = chain.order()

    # -- chain data -----------------------------------------------------
    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lvl.point for lvl in self._chain.levels)

    @property
    def strong_generators(self) -> list[Permutation]:
        out, seen = [], set()
        for lvl in self._chain.levels:
            for g in lvl.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out

    @property
    def basic_orbits(self) -> list[list[int]]:
        return [list(lvl.orbit) for lvl in self._chain.levels]

    def transversal_element(self, level: int, point: int) -> Permutation:
        return self._chain.levels[level].element(point)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<PermGroup degree={self.degree} order={self.order}>"

    # -- membership -----------------------------------------------------
    def sift(self, x: Permutation) -> Permutation:
        return self._chain.sift(x)[0]

    def __contains__(self, x: Permutation) -> bool:
        if x.degree != self.degree:
            raise ValueError(f"degree mismatch: {x.degree} vs {self.degree}")
        h, lvl = self._chain.sift(x)
        return lvl == len(self._chain.levels) and h.is_identity()

    def contains(self, x: Permutation) -> bool:
        return x in self

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(g in other for g in self.generators)

    def is_trivial(self) -> bool:
        return self.order == 1

    # -- orbits ---------------------------------------------------------
    def orbit(self, point: int) -> list[int]:
        return _orbit([g.images for g in self.generators], point)

    def orbits(self) -> list[list[int]]:
        return orbits_of(self.generators, self.degree)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    # -- elements -------------------------------------------------------
    def element_array(self, cap: int = 10**6) -> np.ndarray:
        """All elements as rows of a 2-D image table (identity first)."""
        if self.order > cap:
            raise IndexCapExceeded(self.order, cap)
        dt = point_dtype(self.degree)
        elts = np.arange(self.degree, dtype=dt)[None, :]
        for lvl in reversed(self._chain.levels):
            reps = np.stack([lvl.element(p).array for p in lvl.orbit])
            # g = h * u: (h*u)(q) = u(h(q))
            elts = np.concatenate([u[elts] for u in reps], axis=0)
        return elts

    def elements(self, cap: int = 10**6) -> list[Permutation]:
        return [Permutation._wrap(row) for row in self.element_array(cap)]

    def random_element(self, rng: random.Random) -> Permutation:
        x = self.identity
        for lvl in reversed(self._chain.levels):
            x = x * lvl.element(rng.choice(lvl.orbit))
        return x

    def stabilizer(self, points: Sequence[int]) -> "PermGroup":
        return stabilizer(self, points)

    def with_base(self, base: Sequence[int]) -> "PermGroup":
        """Same group, chain rebuilt so that its base starts with ``base``."""
        return PermGroup(self.generators, self.degree, base=base, order_bound=self.order)

    def _tail(self, level: int) -> "PermGroup":
        levels = self._chain.levels[level:]
        gens = []
        seen = set()
        for lvl in levels:
            for g in lvl.gens:
                if g not in seen:
                    seen.add(g)
                    gens.append(g)
        return PermGroup(gens, self.degree, _levels=list(levels))


def bsgs(generators: Sequence[Permutation], degree: int | None = None, *,
         base: Sequence[int] = (), order_bound: int | None = None,
         seed: int | None = None) -> PermGroup:
    """Build a verified stabilizer chain for the group generated by ``generators``."""
    return PermGroup(generators, degree, base=base, order_bound=order_bound, seed=seed)


def membership(G: PermGroup, x: Permutation) -> bool:
    return x in G


def stabilizer(G: PermGroup, points: Sequence[int]) -> PermGroup:
    """Pointwise stabilizer of ``points`` (in order), via a change of base."""
    points = list(points)
    for p in points:
        if not 0 <= p < G.degree:
            raise ValueError(f"point {p} out of range")
    if not points:
        return G
    if G.base[:len(points)] == tuple(points):
        return G._tail(len(points))
    H = G.with_base(points)
    return H._tail(len(points))


def _orbit(gen_lists: Sequence[Sequence[int]], point: int) -> list[int]:
    seen = {point}
    orbit = [point]
    i = 0
    while i < len(orbit):
        p = orbit[i]
        for img in gen_lists:
            q = img[p]
            if q not in seen:
                seen.add(q)
                orbit.append(q)
        i += 1
    return orbit


def orbits_of(gens: Sequence[Permutation], degree: int) -> list[list[int]]:
    """Orbits as sorted lists, ordered by smallest element."""
    lists = [g.images for g in gens]
    seen = [False] * degree
    out = []
    for p in range(degree):
        if not seen[p]:
            orb = _orbit(lists, p)
            for q in orb:
                seen[q] = True
            out.append(sorted(orb))
    return out


# -- blocks -----------------------------------------------------------------

@dataclass(frozen=True)
class BlockSystem:
    degree: int
    block_of: tuple[int, ...]
    block_count: int

    @property
    def block_size(self) -> int:
        return self.degree // self.block_count

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for p, b in enumerate(self.block_of):
            out[b].append(p)
        return out

    def is_trivial(self) -> bool:
        return self.block_count in (1, self.degree)

    def is_invariant(self, gens: Iterable[Permutation]) -> bool:
        for g in gens:
            img = g.images
            mapping: dict[int, int] = {}
            for p, b in enumerate(self.block_of):
                c = self.block_of[img[p]]
                if mapping.setdefault(b, c) != c:
                    return False
        return True

    def __str__(self) -> str:
        return " ".join("{" + ",".join(str(p + 1) for p in b) + "}" for b in self.blocks())


def _minimal_blocks(gen_lists: Sequence[Sequence[int]], n: int, alpha: int, beta: int) -> BlockSystem:
    # Atkinson's algorithm with union-find
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    queue = []
    if alpha != beta:
        a, b = find(alpha), find(beta)
        if a != b:
            parent[b] = a
            queue.append((alpha, beta))
    while queue:
        x, y = queue.pop()
        for img in gen_lists:
            u, v = find(img[x]), find(img[y])
            if u != v:
                if u > v:
                    u, v = v, u
                parent[v] = u
                queue.append((u, v))
    labels: dict[int, int] = {}
    block_of = []
    for p in range(n):
        r = find(p)
        if r not in labels:
            labels[r] = len(labels)
        block_of.append(labels[r])
    return BlockSystem(n, tuple(block_of), len(labels))


def minimal_block_system(G: PermGroup, alpha: int, beta: int) -> BlockSystem:
    """Finest G-invariant partition with alpha and beta in one block."""
    if not G.is_transitive():
        raise ValueError("minimal_block_system requires a transitive group")
    return _minimal_blocks([g.images for g in G.generators], G.degree, alpha, beta)


def _suborbit_reps(G: PermGroup) -> tuple[int, list[int]]:
    alpha = G.base[0] if G.base else 0
    stab = stabilizer(G, [alpha])
    reps = [orb[0] for orb in orbits_of(stab.generators, G.degree)] if stab.generators else list(range(G.degree))
    return alpha, [b for b in reps if b != alpha]


def primitivity_witness(G: PermGroup):
    """None if G is primitive; otherwise a nontrivial BlockSystem, or the orbit list if intransitive."""
    if not G.is_transitive():
        return G.orbits()
    if G.degree <= 2:
        return None
    lists = [g.images for g in G.generators]
    alpha, reps = _suborbit_reps(G)
    for beta in reps:
        bs = _minimal_blocks(lists, G.degree, alpha, beta)
        if bs.block_count > 1:
            return bs
    return None


def is_primitive(G: PermGroup, witness: bool = False):
    """Primitivity test; with ``witness=True`` returns ``(flag, witness)``."""
    w = primitivity_witness(G)
    return (w is None, w) if witness else w is None


def is_biprimitive(G: PermGroup) -> bool:
    """Transitive, imprimitive, and every nontrivial block system has exactly two blocks."""
    if G.degree < 2 or not G.is_transitive():
        return False
    lists = [g.images for g in G.generators]
    alpha, reps = _suborbit_reps(G)
    imprimitive = False
    for beta in reps:
        bs = _minimal_blocks(lists, G.degree, alpha, beta)
        if bs.block_count == 1:
            continue
        if bs.block_count != 2:
            return False
        imprimitive = True
    return imprimitive


# -- normality ----------------------------------------------------------------

def is_normalized(S: PermGroup, x: Permutation) -> bool:
    """True iff x normalizes S."""
    if x.degree != S.degree:
        raise ValueError("degree mismatch")
    return all(s.conjugate(x) in S for s in S.strong_generators)


def normal_closure(G: PermGroup, S: PermGroup) -> PermGroup:
    """Smallest normal subgroup of G containing S."""
    if G.degree != S.degree:
        raise ValueError("degree mismatch")
    gens = [g for g in S.generators if not g.is_identity()]
    N = PermGroup(gens, G.degree)
    changed = True
    while changed:
        changed = False
        for n in list(N.generators):
            for g in G.generators:
                c = n.conjugate(g)
                if c not in N:
                    gens.append(c)
                    N = PermGroup(gens, G.degree)
                    changed = True
    return N


# -- coset actions ------------------------------------------------------------

class CosetAction:
    """Action of ``parent`` on the right cosets of ``subgroup``.

    Coset 0 is the subgroup itself; the others are numbered in breadth-first
    discovery order using the parent's generators in their given order. Two
    cosets are identified through the lexicographically least element of the
    coset, measured by its images of the parent's base.
    """

    def __init__(self, parent: PermGroup, subgroup: PermGroup, cap: int = DEFAULT_INDEX_CAP,
                 seed: int | None = None):
        if parent.degree != subgroup.degree:
            raise ValueError("degree mismatch")
        for h in subgroup.generators:
            if h not in parent:
                raise NotASubgroup(f"subgroup generator {h} is not in the parent group")
        if parent.order % subgroup.order:
            raise NotASubgroup("subgroup order does not divide the group order")
        index = parent.order // subgroup.order
        if index > cap:
            raise IndexCapExceeded(index, cap)
        self.parent = parent
        self.subgroup = subgroup
        self.degree = index
        base = parent.base
        if subgroup.base == base:
            hchain = subgroup
        else:
            hchain = PermGroup(subgroup.generators, subgroup.degree, base=base,
                               order_bound=subgroup.order, seed=seed)
        self._levels = hchain._chain.levels[:len(base)]
        self._base_arr = np.array(base, dtype=np.int64)
        self._explore()
        self.image = PermGroup(self.generator_images, index, order_bound=parent.order, seed=seed)
        self.faithful = self.image.order == parent.order

    def key(self, x: Permutation) -> bytes:
        cur = x.array
        for lvl in self._levels:
            if len(lvl.orbit) == 1:
                continue
            orb = lvl.orbit_array
            j = int(cur[orb].argmin())
            p = int(orb[j])
            if p != lvl.point:
                cur = cur[lvl.element(p).array]
        return cur[self._base_arr].tobytes()

    def _explore(self) -> None:
        gens = self.parent.generators
        n = self.degree
        images = [np.empty(n, dtype=np.int64) for _ in gens]
        ident = self.parent.identity
        self._index = {self.key(ident): 0}
        self._tree: list[tuple[int, int]] = [(-1, -1)]
        reps: dict[int, Permutation] = {0: ident}
        i = 0
        while i < len(self._tree):
            x = reps.pop(i)
            for k, s in enumerate(gens):
                y = x * s
                kk = self.key(y)
                j = self._index.get(kk)
                if j is None:
                    j = len(self._tree)
                    self._index[kk] = j
                    self._tree.append((i, k))
                    reps[j] = y
                images[k][i] = j
            i += 1
        if len(self._tree) != n:
            raise RuntimeError(f"found {len(self._tree)} cosets, expected {n}")
        self.generator_images = [Permutation._wrap(a.astype(point_dtype(n))) for a in images]

    def coset_of(self, x: Permutation) -> int:
        """Index of the coset Hx."""
        return self._index[self.key(x)]

    def representative(self, i: int) -> Permutation:
        path = []
        while i > 0:
            i, k = self._tree[i]
            path.append(k)
        x = self.parent.identity
        for k in reversed(path):
            x = x * self.parent.generators[k]
        return x

    def transversal(self) -> list[Permutation]:
        reps = [self.parent.identity]
        for parent, k in self._tree[1:]:
            reps.append(reps[parent] * self.parent.generators[k])
        return reps

    def schreier_tree(self) -> list[tuple[int, int]]:
        """(parent coset, generator index) for every coset; (-1, -1) for coset 0."""
        return list(self._tree)

    def image_of(self, x: Permutation) -> Permutation:
        """Permutation of the cosets induced by an arbitrary element of the parent."""
        return Permutation._wrap(np.array([self.coset_of(r * x) for r in self.transversal()],
                                          dtype=point_dtype(self.degree)))


def coset_action(G: PermGroup, H: PermGroup, cap: int = DEFAULT_INDEX_CAP) -> CosetAction:
    return CosetAction(G, H, cap)


def is_maximal(G: PermGroup, H: PermGroup, cap: int = DEFAULT_INDEX_CAP) -> bool:
    """H is maximal in G iff G acts primitively on the cosets of H."""
    if H.order == G.order:
        raise ValueError("is_maximal requires a proper subgroup")
    ca = CosetAction(G, H, cap)
    return is_primitive(ca.image)


def intersection(A: PermGroup, B: PermGroup, cap: int = 10**6) -> PermGroup:
    """A ∩ B by scanning the elements of the smaller group."""
    if A.degree != B.degree:
        raise ValueError("degree mismatch")
    small, big = (A, B) if A.order <= B.order else (B, A)
    if small.order > cap:
        raise IndexCapExceeded(small.order, cap)
    if all(g in big for g in small.generators):
        return small
    gens: list[Permutation] = []
    K = PermGroup([], small.degree)
    for row in small.element_array(cap):
        x = Permutation._wrap(row)
        if x in big and x not in K:
            gens.append(x)
            K = PermGroup(gens, small.degree)
    return K
