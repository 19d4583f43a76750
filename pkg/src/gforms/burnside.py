"""Burnside rings: table of marks, ghost arithmetic, induction and restriction.

Basis elements ``b_{G/K}`` are indexed by conjugacy classes of subgroups in
:func:`~gforms.groups.subgroup_classes` order (by order, then least element
tuple), which makes the mark matrix upper triangular.  All arithmetic is on
Python integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from math import lcm, prod

import numpy as np

from . import intlin
from .groups import (FiniteGroup, GSet, SubgroupRef, coset_action, is_solvable,
                     subgroup_classes, sylow2, whole_group)
from .polys import to_string
from .report import CheckReport, timed


class BurnsideError(ArithmeticError):
    pass


class BurnsideRing:
    """Burn(G) with its mark table ``marks[i][j] = |(G/K_j)^{H_i}|``."""

    def __init__(self, G: FiniteGroup):
        self.group = G
        self.classes = subgroup_classes(G)
        h = self.classes.h
        self.h = h
        self.basis_gsets = [coset_action(G, c.representative) for c in self.classes]
        marks = [[0] * h for _ in range(h)]
        for i, c in enumerate(self.classes):
            H = c.representative.elements
            for j, X in enumerate(self.basis_gsets):
                marks[i][j] = X.fixed_points(H)
        self.marks = marks
        self._check_marks()

    def _check_marks(self):
        h, M = self.h, self.marks
        G = self.group
        for j, c in enumerate(self.classes):
            if M[0][j] != G.order // c.order:
                raise BurnsideError("first row of the mark table is not the index row")
        for i in range(h):
            if M[i][i] <= 0:
                raise BurnsideError("zero diagonal mark")
            for j in range(i):
                if M[i][j] != 0:
                    raise BurnsideError("mark table is not upper triangular")

    def __repr__(self):
        return f"BurnsideRing({self.group!r}, h={self.h})"

    # elements -----------------------------------------------------------
    def element(self, coeffs) -> "BurnsideElement":
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.h:
            raise ValueError(f"expected {self.h} coefficients, got {len(coeffs)}")
        return BurnsideElement(self, coeffs)

    def basis(self, j: int) -> "BurnsideElement":
        c = [0] * self.h
        c[j] = 1
        return self.element(c)

    def zero(self) -> "BurnsideElement":
        return self.element([0] * self.h)

    def one(self) -> "BurnsideElement":
        return self.basis(self.h - 1)

    def scalar(self, n: int) -> "BurnsideElement":
        return n * self.one()

    def ghost(self, coeffs) -> tuple[int, ...]:
        M = self.marks
        return tuple(sum(M[i][j] * coeffs[j] for j in range(i, self.h)) for i in range(self.h))

    def from_ghost(self, ghost) -> "BurnsideElement":
        """Pull a ghost vector back through the mark matrix (must be integral)."""
        c = self.pullback(ghost)
        if c is None:
            raise BurnsideError(f"ghost vector {tuple(ghost)} is not in the image of the marks map")
        return self.element(c)

    def pullback(self, ghost):
        """Integer coefficients with the given ghost vector, or None."""
        M, h = self.marks, self.h
        c = [0] * h
        for i in range(h - 1, -1, -1):
            rest = ghost[i] - sum(M[i][j] * c[j] for j in range(i + 1, h))
            if rest % M[i][i]:
                return None
            c[i] = rest // M[i][i]
        return c

    def basis_label(self, j: int) -> str:
        G = self.group
        K = self.classes[j].representative
        gname = G.name or "G"
        return f"b[{gname}/K{j}(|K|={K.order})]"

    @cached_property
    def inverse_marks_scaled(self):
        """(W, L) with W integral and W / L the inverse of the mark matrix."""
        h = self.h
        inv = [[Fraction(0)] * h for _ in range(h)]
        for col in range(h):
            e = [int(i == col) for i in range(h)]
            x = [Fraction(0)] * h
            for i in range(h - 1, -1, -1):
                rest = e[i] - sum(self.marks[i][j] * x[j] for j in range(i + 1, h))
                x[i] = Fraction(rest, self.marks[i][i])
            for i in range(h):
                inv[i][col] = x[i]
        L = lcm(*[f.denominator for row in inv for f in row])
        W = [[int(f * L) for f in row] for row in inv]
        return W, L


@dataclass(frozen=True)
class BurnsideElement:
    ring: BurnsideRing
    coeffs: tuple[int, ...]

    @property
    def group(self) -> FiniteGroup:
        return self.ring.group

    def _same(self, other):
        if not isinstance(other, BurnsideElement) or other.ring is not self.ring:
            raise BurnsideError("elements of different Burnside rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other)
        self._same(other)
        return BurnsideElement(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return BurnsideElement(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, BurnsideElement) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return BurnsideElement(self.ring, tuple(int(other) * a for a in self.coeffs))
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other)
        return isinstance(other, BurnsideElement) and other.ring is self.ring and other.coeffs == self.coeffs

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def ghost(self) -> tuple[int, ...]:
        return self.ring.ghost(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*{self.ring.basis_label(j)}" for j, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


_RINGS: dict[int, tuple] = {}


def burnside_ring(G: FiniteGroup) -> BurnsideRing:
    hit = _RINGS.get(id(G))
    if hit is not None and hit[0] is G:
        return hit[1]
    R = BurnsideRing(G)
    _RINGS[id(G)] = (G, R)
    return R


# --------------------------------------------------------------------------
# operations

def decompose_gset(X: GSet) -> BurnsideElement:
    ring = burnside_ring(X.group)
    c = [0] * ring.h
    for orb in X.orbits():
        stab = X.stabilizer(orb[0])
        c[ring.classes.index_of(stab)] += 1
    return ring.element(c)


def marks_of(x: BurnsideElement) -> tuple[int, ...]:
    return x.ghost()


def mul(x: BurnsideElement, y: BurnsideElement) -> BurnsideElement:
    x._same(y)
    gx, gy = x.ghost(), y.ghost()
    return x.ring.from_ghost([a * b for a, b in zip(gx, gy)])


def poly_mul_int(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return out


def evaluate(f, x: BurnsideElement) -> BurnsideElement:
    """f(x) for an integer polynomial f (ascending coefficients)."""
    acc = x.ring.zero()
    for c in reversed(list(f)):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class SpectralData:
    element: BurnsideElement
    ghost: tuple[int, ...]
    char_poly: tuple[int, ...]
    norm: int

    def to_json(self) -> dict:
        return {"coeffs": list(self.element.coeffs), "ghost": list(self.ghost),
                "char_poly": to_string(self.char_poly), "char_poly_coeffs": list(self.char_poly),
                "norm": self.norm}


def spectral(x: BurnsideElement) -> SpectralData:
    ghost = x.ghost()
    P = [1]
    for f in ghost:
        P = poly_mul_int(P, [-f, 1])
    N = prod(ghost)
    if not evaluate(P, x).is_zero():
        raise BurnsideError("characteristic polynomial does not annihilate x")
    h = len(ghost)
    if (-1) ** h * P[0] != N:
        raise BurnsideError("norm does not match the constant term")
    return SpectralData(x, ghost, tuple(P), N)


def division_polynomial(x: BurnsideElement, p_group_prime: int | None = None,
                        gset_size: int | None = None):
    """(F, N) with t*F(t) = N - (-1)^h P_x(t); verifies x*F(x) = N.

    When ``p_group_prime`` and ``gset_size`` are supplied (G a p-group and
    x = b_X with |X| prime to p) the returned N is asserted prime to p.
    """
    sd = spectral(x)
    P, N = list(sd.char_poly), sd.norm
    h = len(P) - 1
    sign = (-1) ** h
    rhs = [N - sign * P[0]] + [-sign * c for c in P[1:]]
    if rhs[0] != 0:
        raise BurnsideError("N - (-1)^h P(t) has a nonzero constant term")
    F = rhs[1:]
    if x * evaluate(F, x) != x.ring.scalar(N):
        raise BurnsideError("x * F(x) != N(x)")
    if p_group_prime is not None and gset_size is not None and gset_size % p_group_prime:
        if N % p_group_prime == 0:
            raise BurnsideError(f"N = {N} divisible by {p_group_prime}")
    return tuple(F), N


def _check_sub(S: SubgroupRef, G: FiniteGroup | None = None):
    if G is not None and S.parent is not G:
        raise BurnsideError("S is not a subgroup of the given group")


def balanced_product(S: SubgroupRef, Y: GSet) -> GSet:
    """G x_S Y built literally as the S-orbits of G x Y.

    S acts on G x Y by s.(g, y) = (g s^-1, s y); G acts on orbits by left
    multiplication on the first factor.
    """
    G = S.parent
    n, m = G.order, Y.size
    s_global = np.array(S.elements, dtype=np.int64)
    s_local_inv = np.array([S.local_index(G.inv(s)) for s in S.elements], dtype=np.int64)
    g = np.arange(n)[:, None]
    y = np.arange(m)[None, :]
    flat = g * m + y
    label = flat.copy()
    for k, s in enumerate(s_global):
        # (g s, s^-1 y)
        gs = G.table[np.arange(n), s][:, None]
        ys = Y.action[s_local_inv[k]][None, :]
        label = np.minimum(label, gs * m + ys)
    label = label.reshape(-1)
    reps, point_of = np.unique(label, return_inverse=True)
    # action: h.(g, y) = (h g, y)
    rep_g, rep_y = reps // m, reps % m
    hg = G.table[:, rep_g]                  # (|G|, npoints)
    images = label[(hg * m + rep_y[None, :]).reshape(-1)].reshape(n, -1)
    action = np.searchsorted(reps, images)
    return GSet(G, action)


def induce(S: SubgroupRef, x: BurnsideElement) -> BurnsideElement:
    A = burnside_ring(S.as_group)
    if x.ring is not A:
        raise BurnsideError("x is not an element of Burn(S)")
    B = burnside_ring(S.parent)
    out = B.zero()
    for j, c in enumerate(x.coeffs):
        if c:
            out = out + c * _induced_basis(S, j)
    return out


_IND_CACHE: dict = {}


def _induced_basis(S: SubgroupRef, j: int) -> BurnsideElement:
    key = (id(S.parent), S.elements, j)
    hit = _IND_CACHE.get(key)
    if hit is not None and hit[0] is S.parent:
        return hit[1]
    A = burnside_ring(S.as_group)
    val = decompose_gset(balanced_product(S, A.basis_gsets[j]))
    _IND_CACHE[key] = (S.parent, val)
    return val


def restrict(S: SubgroupRef, y: BurnsideElement) -> BurnsideElement:
    B = burnside_ring(S.parent)
    if y.ring is not B:
        raise BurnsideError("y is not an element of Burn(G)")
    A = burnside_ring(S.as_group)
    out = A.zero()
    for j, c in enumerate(y.coeffs):
        if c:
            out = out + c * decompose_gset(B.basis_gsets[j].restrict(S))
    return out


def induce_matrix(S: SubgroupRef):
    """Integer matrix of Ind (columns = images of basis elements of Burn(S))."""
    A = burnside_ring(S.as_group)
    cols = [induce(S, A.basis(j)).coeffs for j in range(A.h)]
    return intlin.transpose(cols, burnside_ring(S.parent).h)


def restrict_matrix(S: SubgroupRef):
    B = burnside_ring(S.parent)
    cols = [restrict(S, B.basis(j)).coeffs for j in range(B.h)]
    return intlin.transpose(cols, burnside_ring(S.as_group).h)


def _killed_by(gens, ambient: int, n: int) -> tuple[bool, dict]:
    torsion, free = intlin.cokernel_invariants(gens, ambient)
    ok = free == 0 and all(n % d == 0 for d in torsion)
    return ok, {"torsion": torsion, "free_rank": free}


def _sum_map_checks(kernel_basis, image_gens, ambient: int, n: int):
    """Kernel and cokernel of Ker (+) Im -> Z^ambient killed by n."""
    k_rank = len(kernel_basis)
    im_rank = intlin.lattice_rank(image_gens) if image_gens else 0
    total = intlin.lattice_rank(kernel_basis + image_gens) if (kernel_basis or image_gens) else 0
    kernel_zero = (k_rank + im_rank == total)
    coker_ok, coker = _killed_by(kernel_basis + image_gens, ambient, n)
    return kernel_zero and coker_ok, {"kernel_rank": k_rank, "image_rank": im_rank,
                                      "intersection_rank": k_rank + im_rank - total,
                                      "cokernel": coker}


def projection_suite(G: FiniteGroup, S: SubgroupRef | None = None) -> CheckReport:
    """Run the projection-formula identities for (Burn(S), Burn(G), Ind, Res)."""
    if S is None:
        S = sylow2(G)
    _check_sub(S, G)
    rep = CheckReport("projection_suite", {"group": G.name, "subgroup_order": S.order})
    with timed(rep):
        A = burnside_ring(S.as_group)
        B = burnside_ring(G)
        i = lambda a: induce(S, a)
        r = lambda b: restrict(S, b)

        def check(name, ok, **wit):
            rep.record(bool(ok), {"identity": name, **wit})

        # i(r(y) x) = y i(x) on all basis pairs
        for yj in range(B.h):
            y = B.basis(yj)
            ry = r(y)
            for xj in range(A.h):
                x = A.basis(xj)
                check("i(r(y)x) = y.i(x)", i(ry * x) == y * i(x), x=list(x.coeffs), y=list(y.coeffs))
        Q = i(A.one())
        q = r(Q)
        F, n = division_polynomial(q)
        check("q.F(q) = n", q * evaluate(F, q) == A.scalar(n), n=n)
        index = G.order // S.order
        is_sylow2 = S.order & (S.order - 1) == 0 and index % 2 == 1
        if is_sylow2:
            check("n odd for a 2-Sylow subgroup", n % 2 == 1, n=n)
        R = lambda a: r(i(a))
        Fq = evaluate(F, q)
        for yj in range(B.h):
            y = B.basis(yj)
            check("i(r(y)) = Q.y", i(r(y)) == Q * y, y=list(y.coeffs))
        for aj in range(A.h):
            a = A.basis(aj)
            Ra = R(a)
            check("n.i(a) = i(F(q).R(a))", n * i(a) == i(Fq * Ra), a=list(a.coeffs))
            check("R^2(a) = q.R(a)", R(Ra) == q * Ra, a=list(a.coeffs))
            # constructive decomposition n.a = y + z, y in Im R, z in Ker R
            yv = R(Fq * a)
            z = n * a - yv
            check("n.a in Ker(R) + Im(R)", R(z).is_zero(), a=list(a.coeffs))
        I = induce_matrix(S)
        Rm = intlin.matmul(restrict_matrix(S), I)
        ker_i = intlin.integer_kernel(I, A.h)
        ker_R = intlin.integer_kernel(Rm, A.h)
        check("Ker(i) = Ker(R) as lattices", intlin.lattice_equal(ker_i, ker_R),
              ker_i=ker_i, ker_R=ker_R)
        ok1, info1 = _sum_map_checks(ker_R, intlin.transpose(Rm), A.h, n)
        check("Ker(R)+Im(R) -> A killed by n", ok1, **info1)
        rmat = restrict_matrix(S)
        ker_r = intlin.integer_kernel(rmat, B.h)
        ok2, info2 = _sum_map_checks(ker_r, intlin.transpose(I), B.h, n)
        check("Ker(r)+Im(i) -> B killed by n", ok2, **info2)
        rep.data = {"Q": list(Q.coeffs), "q": list(q.coeffs), "q_ghost": list(q.ghost()),
                    "F": to_string(F), "F_coeffs": list(F), "n": n,
                    "ker_i_rank": len(ker_i), "h_G": B.h, "h_S": A.h}
    return rep


def spec_connected(G: FiniteGroup, bound: int = 20):
    """(connected, witness): witness is a nontrivial idempotent or None."""
    ring = burnside_ring(G)
    h = ring.h
    if h > bound:
        raise BurnsideError(f"h = {h} exceeds enumeration bound {bound}")
    W, L = ring.inverse_marks_scaled
    big = max((abs(w) for row in W for w in row), default=0) * h >= (1 << 62)
    if not big:
        Wa = np.array(W, dtype=np.int64)
        ghosts = ((np.arange(1 << h)[:, None] >> np.arange(h)[None, :]) & 1).astype(np.int64)
        coeffs = ghosts @ Wa.T
        integral = np.all(coeffs % L == 0, axis=1)
        idx = [int(k) for k in np.flatnonzero(integral)]
    else:  # pragma: no cover - not reached for catalog groups
        idx = [k for k in range(1 << h) if ring.pullback([(k >> j) & 1 for j in range(h)]) is not None]
    nontrivial = [k for k in idx if k not in (0, (1 << h) - 1)]
    if not nontrivial:
        return True, None
    k = nontrivial[0]
    e = ring.from_ghost([(k >> j) & 1 for j in range(h)])
    if e * e != e:
        raise BurnsideError("idempotent witness failed e^2 = e")
    return False, e


def mark_table_csv(G: FiniteGroup) -> str:
    ring = burnside_ring(G)
    head = ["class"] + [f"b{j}" for j in range(ring.h)]
    lines = [",".join(head)]
    for i, row in enumerate(ring.marks):
        lines.append(",".join([f"H{i}"] + [str(v) for v in row]))
    return "\n".join(lines) + "\n"
