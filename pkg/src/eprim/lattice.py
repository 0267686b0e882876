"""Subgroup quadruples (G, E, A, H) and their verification."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Iterable, Sequence

import numpy as np

from .group import (
    DEFAULT_INDEX_CAP,
    IndexCapExceeded,
    PermGroup,
    coset_action,
    intersection,
    is_maximal,
    is_normalized,
    is_primitive,
    normal_closure,
)
from .perm import Permutation

__all__ = [
    "Lattice",
    "CheckRecord",
    "VerificationReport",
    "SubgroupLattice",
    "index_two_subgroups",
    "enumerate_subgroups",
    "find_lattices",
    "verify_lattice",
    "check_reduction",
    "conjugating_element",
    "distinct_up_to_isomorphism",
    "DEFAULT_ORDER_CAP",
]

DEFAULT_ORDER_CAP = 10_000


@dataclass
class Lattice:
    G: PermGroup
    E: PermGroup
    A: PermGroup
    H: PermGroup
    name: str = ""
    S_label: str | None = None
    expected: dict[str, Any] = field(default_factory=dict)
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def valency(self) -> int:
        return self.H.order // self.A.order

    @property
    def vertex_count(self) -> int:
        return self.G.order // self.H.order

    def orders(self) -> tuple[int, int, int]:
        return (self.E.order, self.A.order, self.H.order)

    def summary(self) -> dict[str, Any]:
        d = {"name": self.name, "G_order": self.G.order, "E_order": self.E.order,
             "A_order": self.A.order, "H_order": self.H.order,
             "vertices": self.vertex_count, "valency": self.valency}
        d.update(self.notes)
        return d


@dataclass
class CheckRecord:
    name: str
    passed: bool
    detail: str = ""
    mandatory: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "mandatory": self.mandatory}


@dataclass
class VerificationReport:
    subject: str
    records: list[CheckRecord] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def add(self, name: str, passed: bool, detail: str = "", mandatory: bool = True) -> bool:
        self.records.append(CheckRecord(name, bool(passed), detail, mandatory))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records if r.mandatory)

    def record(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.mandatory and not r.passed]

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        d = {"subject": self.subject, "verdict": "PASS" if self.passed else "FAIL",
             "records": [r.to_dict() for r in self.records], "values": self.values}
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


def _subgroup(gens: Iterable[Permutation], degree: int) -> PermGroup:
    return PermGroup([g for g in gens if not g.is_identity()], degree)


# -- index two ----------------------------------------------------------------

def index_two_subgroups(E: PermGroup) -> list[PermGroup]:
    """All subgroups of index 2, as kernels of homomorphisms onto C2."""
    gens = [g for g in E.generators if not g.is_identity()]
    seeds = [g * g for g in gens]
    seeds += [a.commutator(b) for a, b in itertools.combinations(gens, 2)]
    N = normal_closure(E, _subgroup(seeds, E.degree))
    # greedy basis of the elementary abelian quotient E/N
    basis: list[Permutation] = []
    span = N
    for g in gens:
        if g not in span:
            basis.append(g)
            span = _subgroup(list(N.generators) + basis, E.degree)
    k = len(basis)
    if 2 ** k * N.order != E.order:
        raise RuntimeError("quotient by squares and commutators is not elementary abelian")
    out = []
    for f in range(1, 2 ** k):
        ones = [b for i, b in enumerate(basis) if f >> i & 1]
        zeros = [b for i, b in enumerate(basis) if not f >> i & 1]
        t = ones[0]
        kgens = list(N.generators) + zeros + [b * t for b in ones[1:]] + [t * t]
        K = _subgroup(kgens, E.degree)
        if 2 * K.order != E.order:
            raise RuntimeError("kernel has wrong order")
        out.append(K)
    return out


# -- element tables and subgroup enumeration ----------------------------------

class _ElementTable:
    """All elements of a small group with a multiplication table."""

    def __init__(self, G: PermGroup, cap: int):
        if G.order > cap:
            raise IndexCapExceeded(G.order, cap)
        self.group = G
        self.arr = G.element_array(cap).astype(np.int64)
        m, n = self.arr.shape
        self.m = m
        rng = np.random.default_rng(20240101)
        while True:
            self._w = rng.integers(1, 1 << 62, size=n, dtype=np.int64)
            codes = self.arr @ self._w
            self._order = np.argsort(codes, kind="stable")
            self._sorted = codes[self._order]
            if np.all(np.diff(self._sorted) != 0):
                break
        dt = np.int16 if m < 1 << 15 else np.int32
        self.mult = np.empty((m, m), dtype=dt)
        for j in range(m):
            # e_i * e_j = e_j[e_i]
            self.mult[:, j] = self.index_rows(self.arr[j][self.arr])
        self.inv = np.argmax(self.mult == 0, axis=1)
        self._nbytes = (m + 7) // 8

    def index_rows(self, rows: np.ndarray) -> np.ndarray:
        codes = rows @ self._w
        pos = np.searchsorted(self._sorted, codes)
        pos[pos >= self.m] = 0
        idx = self._order[pos]
        if not np.array_equal(self.arr[idx], rows):
            raise ValueError("row is not an element of the group")
        return idx

    def index(self, x: Permutation) -> int:
        return int(self.index_rows(x.array.astype(np.int64)[None, :])[0])

    def perm(self, i: int) -> Permutation:
        return Permutation(self.arr[i])

    def mask(self, idx: np.ndarray) -> int:
        bits = np.zeros(self.m, dtype=bool)
        bits[idx] = True
        return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")

    def masks(self, bits: np.ndarray) -> list[int]:
        packed = np.packbits(bits, axis=1, bitorder="little")
        return [int.from_bytes(row.tobytes(), "little") for row in packed]

    def members(self, mask: int) -> np.ndarray:
        raw = np.frombuffer(mask.to_bytes(self._nbytes, "little"), dtype=np.uint8)
        return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:self.m])

    def closure(self, gens: Sequence[int], start: np.ndarray | None = None) -> np.ndarray:
        have = np.zeros(self.m, dtype=bool)
        have[0] = True
        frontier = np.array([0])
        if start is not None:
            have[start] = True
            frontier = np.asarray(start)
        g = np.asarray(list(gens), dtype=np.int64)
        while frontier.size and g.size:
            prod = np.unique(self.mult[np.ix_(frontier, g)].ravel())
            new = prod[~have[prod]]
            have[new] = True
            frontier = new
        return np.flatnonzero(have)

    def conjugate_masks(self, idx: np.ndarray, by: np.ndarray | None = None) -> list[int]:
        """Masks of x^-1 S x for every x (columns of ``by``, default the group itself)."""
        if by is None:
            m = self.m
            xs = np.arange(m)
            img = self.mult[self.mult[self.inv[xs][None, :], idx[:, None]], xs[None, :]]
        else:
            img = by[idx, :]
        k = img.shape[1]
        bits = np.zeros((k, self.m), dtype=bool)
        bits[np.broadcast_to(np.arange(k)[None, :], img.shape), img] = True
        return self.masks(bits)

    def generators_of(self, mask: int) -> list[int]:
        elts = self.members(mask)
        gens: list[int] = []
        have = np.zeros(self.m, dtype=bool)
        have[0] = True
        count = 1
        for e in elts[1:]:
            if count == len(elts):
                break
            if not have[e]:
                gens.append(int(e))
                got = self.closure(gens)
                have[got] = True
                count = len(got)
        return gens

    def group_of(self, gens: Sequence[int]) -> PermGroup:
        return _subgroup([self.perm(i) for i in gens], self.group.degree)


@dataclass
class _Class:
    rep: int
    gens: list[int]
    order: int
    conjugates: list[int]
    core: int


class SubgroupLattice:
    """Conjugacy classes of subgroups of a small group, with every member recorded."""

    def __init__(self, G: PermGroup, order_cap: int = DEFAULT_ORDER_CAP):
        self.G = G
        self.table = t = _ElementTable(G, order_cap)
        self.classes: list[_Class] = []
        self.known: dict[int, int] = {}
        elt_orders = self._element_orders()
        cyclic: dict[int, int] = {}
        for i in range(1, t.m):
            o = int(elt_orders[i])
            if _is_prime_power(o):
                mk = t.mask(t.closure([i]))
                cyclic.setdefault(mk, i)
        self._cyclic = sorted(cyclic.items(), key=lambda kv: kv[1])
        self._register(t.mask(np.array([0])), [])
        queue = [0]
        while queue:
            c = self.classes[queue.pop()]
            start = t.members(c.rep)
            for zmask, z in self._cyclic:
                if zmask & c.rep == zmask:
                    continue
                gens = c.gens + [z]
                mk = t.mask(t.closure(gens, start))
                if mk not in self.known:
                    queue.append(self._register(mk, gens))
        order = sorted(range(len(self.classes)), key=lambda i: (self.classes[i].order, i))
        self.classes = [self.classes[i] for i in order]
        self.known = {mk: new for new, c in enumerate(self.classes) for mk in c.conjugates}

    def _element_orders(self) -> np.ndarray:
        t = self.table
        orders = np.ones(t.m, dtype=np.int64)
        cur = np.arange(t.m)
        k = 1
        pending = cur != 0
        while pending.any():
            k += 1
            cur = t.mult[cur, np.arange(t.m)]
            hit = pending & (cur == 0)
            orders[hit] = k
            pending &= ~hit
        return orders

    def _register(self, mask: int, gens: list[int]) -> int:
        t = self.table
        idx = t.members(mask)
        conj = sorted(set(t.conjugate_masks(idx)))
        core = reduce(lambda a, b: a & b, conj)
        cid = len(self.classes)
        self.classes.append(_Class(mask, list(gens), len(idx), conj, core))
        for mk in conj:
            self.known[mk] = cid
        return cid

    def __len__(self) -> int:
        return len(self.classes)

    def total(self) -> int:
        return sum(len(c.conjugates) for c in self.classes)

    def representatives(self) -> list[PermGroup]:
        return [self.table.group_of(c.gens) for c in self.classes]

    def group(self, mask: int) -> PermGroup:
        return self.table.group_of(self.table.generators_of(mask))


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True


def enumerate_subgroups(G: PermGroup, order_cap: int = DEFAULT_ORDER_CAP) -> list[PermGroup]:
    """One representative per conjugacy class of subgroups, sorted by order."""
    return SubgroupLattice(G, order_cap).representatives()


# -- lattice search ------------------------------------------------------------

def find_lattices(G: PermGroup, overgroup: PermGroup | None = None,
                  order_cap: int = DEFAULT_ORDER_CAP, flag_isomorphic: bool = True,
                  sublattice: SubgroupLattice | None = None) -> list[Lattice]:
    """All (G, E, A, H) up to conjugacy in ``overgroup`` (default G)."""
    sl = sublattice or SubgroupLattice(G, order_cap)
    t = sl.table
    conj_by = None
    if overgroup is not None:
        if overgroup.degree != G.degree or not G.is_subgroup_of(overgroup):
            raise ValueError("overgroup must contain G")
        if not all(is_normalized(G, x) for x in overgroup.generators):
            raise ValueError("G is not normal in the overgroup")
        xs = overgroup.element_array(order_cap * 4).astype(np.int64)
        cols = []
        for x in xs:
            xinv = np.argsort(x)
            cols.append(t.index_rows(x[t.arr[:, xinv]]))
        conj_by = np.stack(cols, axis=1)

    def orbit_key(masks: Sequence[int]) -> tuple[int, ...]:
        per = [t.conjugate_masks(t.members(mk), conj_by) for mk in masks]
        return min(zip(*per))

    full = (1 << t.m) - 1
    identity = 1
    all_subgroups = sorted(sl.known.items(), key=lambda kv: (sl.classes[kv[1]].order, kv[0]))
    found: dict[tuple[int, ...], tuple[int, int, int]] = {}
    for c in sl.classes:
        if c.rep == full or c.order == 1:
            continue
        E = t.group_of(c.gens)
        if not is_maximal(G, E):
            continue
        for A in index_two_subgroups(E):
            amask = t.mask(np.array(sorted({t.index(x) for x in _elements(A)})))
            for hmask, cid in all_subgroups:
                if hmask == amask or hmask & amask != amask:
                    continue
                if hmask == c.rep or hmask == full:
                    continue
                if sl.classes[cid].core != identity:
                    continue
                key = orbit_key((c.rep, amask, hmask))
                found.setdefault(key, (c.rep, amask, hmask))

    out = []
    for key in sorted(found, key=lambda k: (_popcount(k[0]), _popcount(k[1]), _popcount(k[2]), k)):
        em, am, hm = found[key]
        L = Lattice(G, sl.group(em), sl.group(am), sl.group(hm))
        d = L.valency
        L.notes = {"H_larger_than_E": L.H.order > L.E.order,
                   "arc_condition_divides": L.H.order % (d * (d - 1)) == 0 if d > 1 else False}
        out.append(L)
    for i, L in enumerate(out):
        L.name = f"lattice{i + 1}"
    if overgroup is None and flag_isomorphic:
        _flag_isomorphic(out)
    return out


def _elements(A: PermGroup) -> list[Permutation]:
    return A.elements()


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _flag_isomorphic(lats: list[Lattice]) -> None:
    from .cosetgraph import build_from_lattice
    from .graphprops import isomorphic

    graphs = {}
    for i, L in enumerate(lats):
        L.notes["possible_aut_conjugates"] = []
    for i, j in itertools.combinations(range(len(lats)), 2):
        Li, Lj = lats[i], lats[j]
        if Li.orders() != Lj.orders():
            continue
        for k in (i, j):
            if k not in graphs:
                graphs[k] = build_from_lattice(lats[k])
        if isomorphic(graphs[i], graphs[j])[0]:
            Li.notes["possible_aut_conjugates"].append(Lj.name)
            Lj.notes["possible_aut_conjugates"].append(Li.name)


def distinct_up_to_isomorphism(lats: list[Lattice]) -> list[Lattice]:
    """Drop lattices flagged as isomorphic to an earlier one."""
    keep, dropped = [], set()
    for L in lats:
        if L.name in dropped:
            continue
        keep.append(L)
        dropped.update(L.notes.get("possible_aut_conjugates", []))
    return keep


def conjugating_element(L1: Lattice, L2: Lattice, X: PermGroup,
                        cap: int = 10**5) -> Permutation | None:
    """Some x in X with (E1, A1, H1)^x = (E2, A2, H2), or None."""
    if L1.orders() != L2.orders():
        return None
    pairs = ((L1.E, L2.E), (L1.A, L2.A), (L1.H, L2.H))
    for x in X.elements(cap):
        if all(all(s.conjugate(x) in Y for s in Z.generators) for Z, Y in pairs):
            return x
    return None


# -- verification --------------------------------------------------------------

def _same_group(X: PermGroup, Y: PermGroup) -> bool:
    return X.order == Y.order and X.is_subgroup_of(Y)


def verify_lattice(L: Lattice, cap: int = DEFAULT_INDEX_CAP) -> VerificationReport:
    """Check every condition on (G, E, A, H) and record the outcome of each."""
    t0 = time.perf_counter()
    G, E, A, H = L.G, L.E, L.A, L.H
    rep = VerificationReport(L.name or "lattice")
    ok_e = rep.add("E <= G", E.is_subgroup_of(G))
    ok_a = rep.add("A <= E", A.is_subgroup_of(E))
    rep.add("A <= H", A.is_subgroup_of(H))
    ok_h = rep.add("H <= G", H.is_subgroup_of(G))
    idx = E.order // A.order if ok_a else None
    rep.add("|E:A| = 2", ok_a and E.order == 2 * A.order, f"|E:A| = {E.order}/{A.order}")
    rep.add("A < H", A.is_subgroup_of(H) and H.order > A.order, f"|A| = {A.order}, |H| = {H.order}")
    rep.add("H != E", not _same_group(H, E))
    if ok_e and E.order < G.order:
        try:
            rep.add("E maximal in G", is_maximal(G, E, cap), f"|G:E| = {G.order // E.order}")
        except IndexCapExceeded as exc:
            rep.add("E maximal in G", False, str(exc))
    else:
        rep.add("E maximal in G", False, "E is not a proper subgroup of G")
    if ok_h:
        try:
            ca = coset_action(G, H, cap)
            rep.add("H corefree", ca.faithful,
                    f"coset action of degree {ca.degree} has image order {ca.image.order}")
        except IndexCapExceeded as exc:
            rep.add("H corefree", False, str(exc))
    else:
        rep.add("H corefree", False, "H is not a subgroup of G")
    d = H.order // A.order if H.order % A.order == 0 else None
    rep.add("|H| > |E|", H.order > E.order, f"|H| = {H.order}, |E| = {E.order}", mandatory=False)
    if d is not None and d > 1:
        rep.add("d(d-1) divides |H|", H.order % (d * (d - 1)) == 0, f"d = {d}", mandatory=False)
    rep.values.update({"G_order": G.order, "E_order": E.order, "A_order": A.order,
                       "H_order": H.order, "index_E_A": idx, "valency": d,
                       "vertices": G.order // H.order if G.order % H.order == 0 else None})
    rep.seconds = time.perf_counter() - t0
    return rep


def check_reduction(L: Lattice, G1: PermGroup, cap: int = 10**6) -> VerificationReport:
    """Edge-primitivity of a subgroup G1 via maximality of E n G1 in G1."""
    t0 = time.perf_counter()
    rep = VerificationReport(f"{L.name or 'lattice'} restricted to subgroup of order {G1.order}")
    if not rep.add("G1 <= G", G1.is_subgroup_of(L.G)):
        rep.seconds = time.perf_counter() - t0
        return rep
    EG1 = intersection(L.E, G1, cap)
    rep.values["E_cap_G1_order"] = EG1.order
    if EG1.order == G1.order:
        rep.add("E n G1 maximal in G1", False, "G1 is contained in E")
        rep.values["conclusion"] = "no conclusion"
        rep.seconds = time.perf_counter() - t0
        return rep
    maximal = is_maximal(G1, EG1)
    rep.add("E n G1 maximal in G1", maximal, f"|E n G1| = {EG1.order}", mandatory=False)
    if maximal:
        from .cosetgraph import build_from_lattice
        from .graphprops import is_edge_primitive

        graph = build_from_lattice(L)
        ca = graph.coset_action
        images = [ca.image_of(g) for g in G1.generators]
        sub = graph.with_action(images)
        prim = is_edge_primitive(sub)
        rep.add("G1 edge-primitive", prim, "primitivity of the induced edge action")
        rep.values["conclusion"] = "G1 edge-primitive" if prim else "G1 not edge-primitive"
    else:
        rep.values["conclusion"] = "no conclusion"
    rep.seconds = time.perf_counter() - t0
    return rep
