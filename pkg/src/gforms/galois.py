"""G-Galois algebras over finite prime fields, trace forms, self-dual normal bases.

Over F_q a G-Galois algebra is determined by a Frobenius element g of G (up
to conjugacy).  The model used here is

    L = { f : G -> F_{q^d} | f(g x) = f(x)^q for all x },   d = order of g,

with pointwise operations and G acting by (h.f)(x) = f(x h).  A function in L
is determined by its values on representatives of the right cosets <g>x, and
the F_q-basis is f_{j,i} with f(x_j) = t^i (t the generator of F_{q^d} over
F_q), extended along the coset by Frobenius and zero elsewhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .field import FIELD_BOUND, FieldError, GF, make_field
from .forms import (DEFAULT_BUDGET, EquivariantSpace, ModuleRep, module_isomorphism,
                    permutation_module, regular_form)
from .groups import FiniteGroup, regular_gset


class GaloisError(ValueError):
    pass


@dataclass(eq=False)
class GaloisAlgebra:
    field: GF                 # base field F_q (prime)
    group: FiniteGroup
    frobenius: int            # the element g
    ext: GF                   # F_{q^d}
    coset_reps: tuple         # representatives x_j of the right cosets <g> x
    values: np.ndarray        # (|G|, |G|): values[b, x] = f_b(x) as ext codes
    struct: np.ndarray        # structure constants on the basis f_b
    action: np.ndarray        # (|G|, |G|, |G|) matrices of h acting on coordinates
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.group.order

    @property
    def degree(self) -> int:
        return self.ext.m

    def coords(self, vals) -> np.ndarray:
        """F_q-coordinates of a function given by its ext values on G."""
        d = self.degree
        vals = np.asarray(vals, dtype=np.int64)
        out = np.zeros(self.dim, dtype=np.int64)
        for j, x in enumerate(self.coset_reps):
            out[j * d:(j + 1) * d] = self.ext.digits(int(vals[x]))
        return out

    def to_values(self, coords) -> np.ndarray:
        K = self.ext
        acc = np.zeros(self.dim, dtype=np.int64)
        for c, row in zip(coords, self.values):
            c = int(c)
            if c:
                acc = K.add(acc, K.mul(row, c))
        return acc

    def module(self) -> ModuleRep:
        return ModuleRep(self.field, self.group, self.action)

    def mul(self, x, y) -> np.ndarray:
        return self.coords(self.ext.mul(self.to_values(x), self.to_values(y)))

    def unit(self) -> np.ndarray:
        return self.coords(np.ones(self.dim, dtype=np.int64))


def _right_coset_reps(G: FiniteGroup, g: int) -> list[int]:
    cyc = [0]
    while True:
        nxt = int(G.table[cyc[-1], g])
        if nxt == 0:
            break
        cyc.append(nxt)
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    for x in range(G.order):
        if not seen[x]:
            reps.append(x)
            seen[G.table[cyc, x]] = True
    return reps, cyc


def galois_algebra(G: FiniteGroup, q: int, g: int, check: bool = True) -> GaloisAlgebra:
    F = make_field(q)
    if not F.is_prime:
        raise GaloisError("Galois algebras are built over prime fields")  # pragma: no cover
    d = G.element_order(g)
    if q ** d > FIELD_BOUND:
        raise FieldError(f"q^d = {q}^{d} exceeds the field bound {FIELD_BOUND}")
    K = make_field(q, d)
    reps, cyc = _right_coset_reps(G, g)
    n = G.order
    values = np.zeros((n, n), dtype=np.int64)
    powers = [q ** i for i in range(d)]          # codes of t^i are q^i (i < d)
    for j, x in enumerate(reps):
        for i, t in enumerate(powers):
            b = j * d + i
            v = t
            for k, gk in enumerate(cyc):       # f(g^k x) = f(x)^(q^k)
                values[b, int(G.table[gk, x])] = K.frobenius(v, k) if k else v
    L = GaloisAlgebra(F, G, int(g), K, tuple(reps), values,
                      np.zeros((n, n, n), dtype=np.int64), np.zeros((n, n, n), dtype=np.int64))
    for a in range(n):
        for b in range(n):
            L.struct[a, b] = L.coords(K.mul(values[a], values[b]))
    for h in range(n):
        perm = G.table[:, h]                    # x -> x h
        for b in range(n):
            L.action[h, :, b] = L.coords(values[b][perm])
    if check:
        validate_galois(L)
    return L


def validate_galois(L: GaloisAlgebra, budget: int = DEFAULT_BUDGET) -> GaloisAlgebra:
    F, G, n = L.field, L.group, L.dim
    K = L.ext
    g = L.frobenius
    for b in range(n):   # carrier condition f(g x) = f(x)^q
        if not np.array_equal(L.values[b][G.table[g]], K.frobenius(L.values[b], 1)):
            raise GaloisError("basis function violates the Frobenius condition")
    if not np.array_equal(L.struct, L.struct.transpose(1, 0, 2)):
        raise GaloisError("algebra is not commutative")
    if la.det(F, trace_gram(L)) == 0:
        raise GaloisError("trace form is singular (algebra not etale)")
    M = L.module()
    M.validate()
    for h in G.generators:   # automorphisms: h(b_a b_b) = h(b_a) h(b_b)
        A = L.action[h]
        for a in range(n):
            for b in range(n):
                lhs = la.matmul(F, A, L.struct[a, b][:, None])[:, 0]
                rhs = L.mul(A[:, a], A[:, b])
                if not np.array_equal(lhs, rhs):
                    raise GaloisError("group does not act by algebra automorphisms")
    reg = permutation_module(regular_gset(G), F)
    if module_isomorphism(M, reg, budget) is None:
        raise GaloisError("algebra is not free of rank one over F_q[G]")
    return L


def trace_gram(L: GaloisAlgebra) -> np.ndarray:
    """Gram[a, b] = trace of multiplication by b_a b_b."""
    F, n = L.field, L.dim
    t = np.array([int(sum(int(L.struct[i, k, k]) for k in range(n)) % F.p) for i in range(n)],
                 dtype=np.int64)
    return la.matmul(F, L.struct.reshape(n * n, n), t[:, None]).reshape(n, n)


def trace_form(L: GaloisAlgebra) -> EquivariantSpace:
    hit = L._cache.get("trace_form")
    if hit is None:
        hit = EquivariantSpace(L.field, L.group, 1, trace_gram(L), L.action)
        L._cache["trace_form"] = hit
    return hit


def delta_condition(L: GaloisAlgebra, x) -> bool:
    """q_L(g x, h x) = delta_{g,h} for all g, h."""
    F = L.field
    X = np.stack([la.matmul(F, L.action[g], np.asarray(x, dtype=np.int64)[:, None])[:, 0]
                  for g in range(L.dim)], axis=1)
    return np.array_equal(la.matmul_chain(F, X.T, trace_gram(L), X), la.identity(L.dim))


def sdnb_search(L: GaloisAlgebra, budget: int = DEFAULT_BUDGET, backend: str = "exhaustive"):
    """An element x whose G-orbit is orthonormal for the trace form, or None.

    Split algebras (Frobenius element = identity) are tried first with the
    indicator of the identity element.  Otherwise an equivariant isometry phi
    from the regular permutation form to the trace form is searched and
    x = phi(delta_identity).
    """
    from .isometry import is_isometric
    if L.frobenius == 0:
        vals = np.zeros(L.dim, dtype=np.int64)
        vals[0] = 1
        x = L.coords(vals)
        if delta_condition(L, x):
            return x
    P = regular_form(L.group, L.field)
    v = is_isometric(P, trace_form(L), backend, budget)
    if not v.isometric:
        return None
    x = v.witness[:, 0].copy()
    if not delta_condition(L, x):  # pragma: no cover
        raise GaloisError("isometry witness does not give a self-dual normal basis")
    return x
