"""Finite groups as multiplication tables, subgroups and coset actions.

Elements are indices ``0..order-1`` with 0 the identity.  Groups built from
generators are closed breadth-first, so the element order is determined by
the generators and their order.  Cosets are left cosets ``gH`` with ``G``
acting by left translation.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

GROUP_ORDER_BOUND = 10000
SUBGROUP_ORDER_BOUND = 120


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, table, labels: Sequence[str] | None = None, name: str = "",
                 check: bool = True, generators: Sequence[int] | None = None):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or n < 1:
            raise GroupError("multiplication table must be a nonempty square matrix")
        if table.min() < 0 or table.max() >= n:
            raise GroupError("table entries out of range")
        self.table = table
        self.table.setflags(write=False)
        self.order = n
        self.name = name
        self.labels = tuple(labels) if labels is not None else None
        if check:
            self._check()
        inv = np.empty(n, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        self.inverse = inv
        self.inverse.setflags(write=False)
        self._generators = tuple(int(g) for g in generators) if generators else None

    def _check(self):
        t = self.table
        n = self.order
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise GroupError("element 0 is not a two-sided identity")
        if not all(np.array_equal(np.sort(row), ar) for row in t):
            raise GroupError("table rows are not permutations (not a group)")
        if np.count_nonzero(t == 0) != n:
            raise GroupError("inverses are not unique")
        # associativity over all triples: t[t[a,b],c] == t[a,t[b,c]]
        lhs = t[t[:, :, None], ar[None, None, :]]
        rhs = t[ar[:, None, None], t[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise GroupError("table is not associative")

    def __repr__(self):
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        return int(self.table[self.table[g, h], self.inverse[g]])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        r = 0
        for _ in range(k):
            r = self.mul(r, a)
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A generating set: the construction generators, else a greedy choice."""
        if self._generators:
            return self._generators
        gens: list[int] = []
        span = np.zeros(self.order, dtype=bool)
        span[0] = True
        for g in range(1, self.order):
            if not span[g]:
                gens.append(g)
                span[sorted(closure(self, gens))] = True
        return tuple(gens)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def element_orders(self) -> np.ndarray:
        return np.array([self.element_order(a) for a in range(self.order)], dtype=np.int64)

    def conjugacy_classes(self) -> list[list[int]]:
        seen = np.zeros(self.order, dtype=bool)
        out = []
        for a in range(self.order):
            if not seen[a]:
                cls = sorted({self.conj(g, a) for g in range(self.order)})
                seen[cls] = True
                out.append(cls)
        return out


# --------------------------------------------------------------------------
# construction

def closure(G: FiniteGroup, gens: Iterable[int]) -> frozenset[int]:
    """Subgroup generated by ``gens`` (as a set of element indices)."""
    gens = [int(g) for g in gens]
    elems = {0}
    frontier = [0]
    t = G.table
    while frontier:
        new = []
        for x in frontier:
            for s in gens:
                y = int(t[x, s])
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return frozenset(elems)


def group_from_closure(gens: Sequence[Hashable], mul: Callable, identity: Hashable,
                       name: str = "", labels: Callable | None = None,
                       bound: int = GROUP_ORDER_BOUND) -> FiniteGroup:
    """Close generators breadth-first under ``mul`` and tabulate.

    Element k is the k-th element discovered; the queue processes elements in
    discovery order and right-multiplies by generators in the given order.
    """
    index = {identity: 0}
    elems = [identity]
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = mul(x, s)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
                if len(elems) > bound:
                    raise GroupError(f"group order exceeds bound {bound}")
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[mul(a, b)]
    gen_idx = [index[s] for s in gens if index[s] != 0]
    lab = [labels(e) for e in elems] if labels else None
    return FiniteGroup(table, labels=lab, name=name, check=False, generators=gen_idx or None)


def perm_compose(a: tuple, b: tuple) -> tuple:
    """(a*b)(i) = a(b(i)): apply b first."""
    return tuple(a[i] for i in b)


def parse_cycles(text: str, degree: int | None = None) -> tuple:
    """Parse cycle notation like ``(1 2)(3 4 5)`` (1-based points)."""
    text = text.strip()
    cycles = re.findall(r"\(([^()]*)\)", text)
    if not cycles and text not in ("", "()"):
        raise GroupError(f"malformed cycle notation: {text!r}")
    pts = []
    for c in cycles:
        items = [int(x) for x in re.split(r"[,\s]+", c.strip()) if x]
        pts.append(items)
    deg = max([max(c) for c in pts if c] + [degree or 0, 1])
    perm = list(range(deg))
    used: set[int] = set()
    for c in pts:
        if len(set(c)) != len(c) or min(c, default=1) < 1:
            raise GroupError(f"malformed cycle {c}")
        if used & set(c):
            raise GroupError(f"cycles must be disjoint: {text!r}")
        used |= set(c)
        for i, a in enumerate(c):
            perm[a - 1] = c[(i + 1) % len(c)] - 1
    return tuple(perm)


def format_cycles(perm: Sequence[int]) -> str:
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(out) or "()"


def from_permutations(gens: Sequence[Sequence[int]], name: str = "",
                      bound: int = GROUP_ORDER_BOUND) -> FiniteGroup:
    deg = max([len(g) for g in gens] + [1])
    gens = [tuple(g) + tuple(range(len(g), deg)) for g in gens]
    ident = tuple(range(deg))
    for g in gens:
        if sorted(g) != list(ident):
            raise GroupError(f"generator {g} is not a permutation")
    return group_from_closure(gens, perm_compose, ident, name=name,
                              labels=format_cycles, bound=bound)


def from_table(table, name: str = "") -> FiniteGroup:
    return FiniteGroup(table, name=name, check=True)


def _dicyclic(n: int, name: str) -> FiniteGroup:
    """Dic_n of order 4n: pairs (k, e) = a^k x^e with x^2 = a^n, x a x^-1 = a^-1."""
    m = 2 * n

    def mul(u, v):
        k1, e1 = u
        k2, e2 = v
        if e1 == 0:
            return ((k1 + k2) % m, e2)
        if e2 == 0:
            return ((k1 - k2) % m, 1)
        return ((k1 - k2 + n) % m, 0)

    return group_from_closure([(1, 0), (0, 1)], mul, (0, 0), name=name,
                              labels=lambda u: f"a^{u[0]}" + ("x" if u[1] else ""))


def _sl2_3() -> FiniteGroup:
    def mul(a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) % 3 for j in range(2))
                     for i in range(2))
    s = ((0, 2), (1, 0))
    t = ((1, 1), (0, 1))
    return group_from_closure([s, t], mul, ((1, 0), (0, 1)), name="SL(2,3)",
                              labels=lambda a: str([list(r) for r in a]))


def named_group(desc: str) -> FiniteGroup:
    """Named families: ``C n``, ``D n`` (order 2n), ``S n``, ``A n``, ``Dic n``,
    ``Q8``, ``V4``, ``SL23``; spaces optional (``S3`` == ``S 3``)."""
    s = desc.strip().replace(" ", "")
    m = re.fullmatch(r"(C|D|S|A|Dic)(\d+)", s)
    if s == "Q8":
        return _dicyclic(2, "Q8")
    if s == "V4":
        return from_permutations([parse_cycles("(1 2)(3 4)"), parse_cycles("(1 3)(2 4)")], name="V4")
    if s in ("SL23", "SL(2,3)"):
        return _sl2_3()
    if not m:
        raise GroupError(f"unknown group name {desc!r}")
    fam, n = m.group(1), int(m.group(2))
    name = f"{fam}{n}"
    if n < 1:
        raise GroupError(f"bad parameter in {desc!r}")
    if fam == "C":
        if n == 1:
            return FiniteGroup([[0]], name="C1", labels=["()"])
        return from_permutations([tuple(list(range(1, n)) + [0])], name=name)
    if fam == "D":
        if n == 1:
            return named_group("C2")
        if n == 2:
            G = named_group("V4")
            G.name = "D2"
            return G
        rot = tuple(list(range(1, n)) + [0])
        ref = tuple((n - i) % n for i in range(n))
        return from_permutations([rot, ref], name=name)
    if fam == "S":
        if n <= 1:
            return FiniteGroup([[0]], name=name, labels=["()"])
        if n == 2:
            return from_permutations([(1, 0)], name=name)
        return from_permutations([parse_cycles("(1 2)", n), tuple(list(range(1, n)) + [0])], name=name)
    if fam == "A":
        if n <= 2:
            return FiniteGroup([[0]], name=name, labels=["()"])
        if n == 3:
            return from_permutations([parse_cycles("(1 2 3)")], name=name)
        long = parse_cycles("(" + " ".join(str(i) for i in (range(1, n + 1) if n % 2 else range(2, n + 1))) + ")", n)
        return from_permutations([parse_cycles("(1 2 3)", n), long], name=name)
    if fam == "Dic":
        return _dicyclic(n, name)
    raise GroupError(f"unknown group name {desc!r}")  # pragma: no cover


def build_group(desc) -> FiniteGroup:
    """Build from a name (str), a list of permutation generators, or a table.

    ``desc`` may be a string (a name, or ``gens: ...``/``table: ...`` text),
    a dict with one of the keys ``named``, ``gens``, ``table``, or an
    already-built :class:`FiniteGroup`.
    """
    if isinstance(desc, FiniteGroup):
        return desc
    if isinstance(desc, dict):
        if "named" in desc:
            return named_group(desc["named"])
        if "gens" in desc:
            gens = desc["gens"]
            perms = [parse_cycles(g) if isinstance(g, str) else tuple(g) for g in gens]
            deg = max(len(p) for p in perms)
            perms = [tuple(p) + tuple(range(len(p), deg)) for p in perms]
            return from_permutations(perms, name=desc.get("name", ""))
        if "table" in desc:
            return from_table(desc["table"], name=desc.get("name", ""))
        raise GroupError(f"unrecognised group desc {desc!r}")
    if isinstance(desc, str):
        from .io import parse_group_text
        if "\n" in desc or ":" in desc:
            return parse_group_text(desc)
        return named_group(desc)
    raise GroupError(f"unrecognised group desc {desc!r}")


# --------------------------------------------------------------------------
# subgroups

_ABSTRACT_CACHE: dict = {}


@dataclass(frozen=True, eq=False)
class SubgroupRef:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        if 0 not in self.elements:
            raise GroupError("subgroup must contain the identity")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        return (isinstance(other, SubgroupRef) and other.parent is self.parent
                and other.elements == self.elements)

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __contains__(self, g):
        return int(g) in self.elementset

    @cached_property
    def elementset(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def as_group(self) -> FiniteGroup:
        """Abstract group on 0..|H|-1; local index i is ``elements[i]``.

        Cached per (parent, elements) so that equal subgroup references share
        one abstract group (and therefore one Burnside ring, one catalog of
        modules, ...).
        """
        key = (id(self.parent), self.elements)
        hit = _ABSTRACT_CACHE.get(key)
        if hit is not None and hit[0] is self.parent:
            return hit[1]
        if len(self.elements) == self.parent.order:
            grp = self.parent
        else:
            grp = self._build_abstract()
        _ABSTRACT_CACHE[key] = (self.parent, grp)
        return grp

    def _build_abstract(self) -> FiniteGroup:
        elems = np.array(self.elements, dtype=np.int64)
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[elems] = np.arange(len(elems))
        table = pos[self.parent.table[np.ix_(elems, elems)]]
        labels = [self.parent.labels[e] for e in elems] if self.parent.labels else None
        name = f"{self.parent.name}[{len(elems)}]" if self.parent.name else ""
        return FiniteGroup(table, labels=labels, name=name, check=False)

    def local_index(self, g: int) -> int:
        return self.elements.index(int(g))

    def is_normal(self) -> bool:
        G = self.parent
        return all(frozenset(G.conj(g, h) for h in self.elements) == self.elementset
                   for g in G.generators)

    def conjugate(self, g: int) -> "SubgroupRef":
        G = self.parent
        return SubgroupRef(G, tuple(sorted(G.conj(g, h) for h in self.elements)))


def make_subgroup(G: FiniteGroup, elements: Iterable[int]) -> SubgroupRef:
    el = tuple(sorted(set(int(e) for e in elements)))
    if 0 not in el:
        raise GroupError("subgroup must contain the identity")
    t = G.table
    s = set(el)
    for a in el:
        if int(G.inverse[a]) not in s:
            raise GroupError("not closed under inverses")
        for b in el:
            if int(t[a, b]) not in s:
                raise GroupError("not closed under multiplication")
    return SubgroupRef(G, el)


def trivial_subgroup(G: FiniteGroup) -> SubgroupRef:
    return SubgroupRef(G, (0,))


def whole_group(G: FiniteGroup) -> SubgroupRef:
    return SubgroupRef(G, tuple(range(G.order)))


def _join(G: FiniteGroup, H: frozenset, C: frozenset) -> frozenset:
    """Subgroup generated by two subgroups: iterate products to a fixed point."""
    elems = np.array(sorted(H | C), dtype=np.int64)
    t = G.table
    while True:
        prod = np.unique(t[np.ix_(elems, elems)])
        if prod.size == elems.size:
            return frozenset(int(x) for x in prod)
        elems = prod


_SUBGROUP_CACHE: dict[int, tuple] = {}


def all_subgroups(G: FiniteGroup, bound: int = SUBGROUP_ORDER_BOUND) -> list[SubgroupRef]:
    """Every subgroup, sorted by (order, element tuple), via cyclic extension."""
    key = id(G)
    hit = _SUBGROUP_CACHE.get(key)
    if hit is not None and hit[0] is G:
        return hit[1]
    if G.order > bound:
        raise GroupError(f"subgroup enumeration bound {bound} exceeded (|G| = {G.order})")
    cyclic = {closure(G, [g]) for g in range(G.order)}
    subs = set(cyclic)
    frontier = list(subs)
    cyc = sorted(cyclic, key=lambda s: (len(s), sorted(s)))
    while frontier:
        new = []
        for H in frontier:
            for C in cyc:
                if not C <= H:
                    K = _join(G, H, C)
                    if K not in subs:
                        subs.add(K)
                        new.append(K)
        frontier = new
    out = sorted((SubgroupRef(G, tuple(sorted(s))) for s in subs),
                 key=lambda s: (s.order, s.elements))
    _SUBGROUP_CACHE[key] = (G, out)
    return out


@dataclass(frozen=True)
class SubgroupClass:
    representative: SubgroupRef
    members: tuple[SubgroupRef, ...]

    @property
    def order(self) -> int:
        return self.representative.order

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class SubgroupClassTable:
    group: FiniteGroup
    classes: tuple[SubgroupClass, ...]
    _lookup: dict = field(repr=False, default_factory=dict)

    @property
    def h(self) -> int:
        return len(self.classes)

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, i) -> SubgroupClass:
        return self.classes[i]

    def index_of(self, H) -> int:
        """Class index of a subgroup (SubgroupRef or element collection)."""
        els = H.elements if isinstance(H, SubgroupRef) else tuple(sorted(set(int(e) for e in H)))
        return self._lookup[els]

    @property
    def representatives(self) -> list[SubgroupRef]:
        return [c.representative for c in self.classes]


_CLASS_CACHE: dict[int, tuple] = {}


def subgroup_classes(G: FiniteGroup, bound: int = SUBGROUP_ORDER_BOUND) -> SubgroupClassTable:
    """Conjugacy classes of subgroups; representative = least element tuple."""
    hit = _CLASS_CACHE.get(id(G))
    if hit is not None and hit[0] is G:
        return hit[1]
    subs = all_subgroups(G, bound)
    t, inv = G.table, G.inverse
    seen = {}
    classes = []
    for H in subs:  # sorted, so the first member met is the least representative
        if H.elements in seen:
            continue
        els = np.array(H.elements, dtype=np.int64)
        conj = {tuple(sorted(t[t[g, els], inv[g]].tolist())) for g in range(G.order)}
        members = tuple(sorted((SubgroupRef(G, c) for c in conj),
                               key=lambda s: s.elements))
        cls = SubgroupClass(members[0], members)
        for mem in members:
            seen[mem.elements] = len(classes)
        classes.append(cls)
    order = sorted(range(len(classes)), key=lambda i: (classes[i].order, classes[i].representative.elements))
    classes = [classes[i] for i in order]
    lookup = {}
    for i, c in enumerate(classes):
        for mem in c.members:
            lookup[mem.elements] = i
    table = SubgroupClassTable(G, tuple(classes), lookup)
    _CLASS_CACHE[id(G)] = (G, table)
    return table


def sylow2(G: FiniteGroup) -> SubgroupRef:
    n = G.order
    v = 1
    while n % 2 == 0:
        n //= 2
        v *= 2
    for H in all_subgroups(G):
        if H.order == v:
            return H
    raise GroupError("no Sylow 2-subgroup found")  # pragma: no cover


def derived_subgroup(G: FiniteGroup, H: SubgroupRef | None = None) -> SubgroupRef:
    els = H.elements if H is not None else tuple(range(G.order))
    t, inv = G.table, G.inverse
    comms = {int(t[t[a, b], t[inv[a], inv[b]]]) for a in els for b in els}
    return SubgroupRef(G, tuple(sorted(closure(G, comms))))


def is_solvable(G: FiniteGroup) -> bool:
    H = whole_group(G)
    while H.order > 1:
        D = derived_subgroup(G, H)
        if D.order == H.order:
            return False
        H = D
    return True


def normalizer(G: FiniteGroup, H: SubgroupRef) -> SubgroupRef:
    return SubgroupRef(G, tuple(g for g in range(G.order) if H.conjugate(g) == H))


# --------------------------------------------------------------------------
# G-sets

@dataclass(frozen=True, eq=False)
class GSet:
    """Finite G-set: ``action[g, x]`` is the image of point x under g."""

    group: FiniteGroup
    action: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.action, dtype=np.int64)
        object.__setattr__(self, "action", a)
        if a.ndim != 2 or a.shape[0] != self.group.order:
            raise GroupError("action array must have one row per group element")

    @property
    def size(self) -> int:
        return int(self.action.shape[1])

    def validate(self):
        a, t = self.action, self.group.table
        if not np.array_equal(a[0], np.arange(self.size)):
            raise GroupError("identity does not act trivially")
        # a[g*h, x] == a[g, a[h, x]]
        lhs = a[t]  # (g, h, x) -> a[t[g,h], x]
        rhs = a[np.arange(self.group.order)[:, None, None], a[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise GroupError("action is not a homomorphism")
        return self

    def fixed_points(self, elements: Iterable[int]) -> int:
        els = np.asarray(list(elements), dtype=np.int64)
        fixed = np.all(self.action[els] == np.arange(self.size)[None, :], axis=0)
        return int(np.count_nonzero(fixed))

    def orbits(self) -> list[list[int]]:
        seen = np.zeros(self.size, dtype=bool)
        out = []
        for x in range(self.size):
            if not seen[x]:
                orb = sorted(set(self.action[:, x].tolist()))
                seen[orb] = True
                out.append(orb)
        return out

    def stabilizer(self, x: int) -> SubgroupRef:
        return SubgroupRef(self.group, tuple(int(g) for g in np.flatnonzero(self.action[:, x] == x)))

    def restrict(self, S: SubgroupRef) -> "GSet":
        if S.parent is not self.group:
            raise GroupError("subgroup of a different group")
        return GSet(S.as_group, self.action[list(S.elements)])

    def disjoint_union(self, other: "GSet") -> "GSet":
        return GSet(self.group, np.concatenate([self.action, other.action + self.size], axis=1))

    def product(self, other: "GSet") -> "GSet":
        a = self.action[:, :, None] * other.size + other.action[:, None, :]
        return GSet(self.group, a.reshape(self.group.order, -1))


def coset_representatives(G: FiniteGroup, H: SubgroupRef) -> list[int]:
    """Least element of each left coset gH, in increasing order."""
    els = np.array(H.elements, dtype=np.int64)
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    for g in range(G.order):
        if not seen[g]:
            reps.append(g)
            seen[G.table[g, els]] = True
    return reps


def coset_action(G: FiniteGroup, H: SubgroupRef) -> GSet:
    if H.parent is not G:
        raise GroupError("H is not a subgroup of G")
    els = np.array(H.elements, dtype=np.int64)
    reps = coset_representatives(G, H)
    which = np.empty(G.order, dtype=np.int64)
    for i, r in enumerate(reps):
        which[G.table[r, els]] = i
    reps_arr = np.array(reps, dtype=np.int64)
    action = which[G.table[:, reps_arr]]
    return GSet(G, action)


def regular_gset(G: FiniteGroup) -> GSet:
    return coset_action(G, trivial_subgroup(G))


# --------------------------------------------------------------------------
# catalog

CATALOG_NAMES = ("C1", "C2", "C3", "C4", "V4", "C5", "S3", "C6", "D4", "Q8", "D5",
                 "A4", "D6", "Dic3", "S4", "SL23", "A5")

_NAMED_CACHE: dict[str, FiniteGroup] = {}


def catalog_group(name: str) -> FiniteGroup:
    """Cached named group (so identity-keyed caches are shared)."""
    key = name.replace(" ", "")
    if key not in _NAMED_CACHE:
        G = named_group(key)
        G.name = key
        _NAMED_CACHE[key] = G
    return _NAMED_CACHE[key]


def catalog(max_order: int | None = None, solvable_only: bool = False) -> list[FiniteGroup]:
    out = []
    for name in CATALOG_NAMES:
        G = catalog_group(name)
        if max_order is not None and G.order > max_order:
            continue
        if solvable_only and not is_solvable(G):
            continue
        out.append(G)
    return out
