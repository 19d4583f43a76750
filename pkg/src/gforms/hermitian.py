"""Hermitian elements of algebras with involution and their classes.

For an algebra (E, sigma) and eps = +-1, the hermitian elements are the units
z with sigma(z) = eps z; z and z' are equivalent when z' = sigma(e) z e for a
unit e.  Classes are computed two ways:

* exhaustively, by orbit enumeration (small algebras only);
* structurally: reduce modulo the Jacobson radical (classes do not change),
  split the semisimple quotient into sigma-stable components, and read off
  complete invariants per component (one class for exchange pairs and
  unitary factors; a discriminant square class for factors whose hermitian
  elements are symmetric bilinear forms; one class for alternating ones).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import linalg as la
from .algebra import Algebra, StructuralError, algebra_from_matrices, quotient_algebra
from .forms import DEFAULT_BUDGET, EquivariantSpace, UndecidedError, hom_basis
from .kernels import batch_alg_mul, batch_invertible, field_tables, hermitian_orbits
from .meataxe import radical_of_matrix_algebra

SCAN_LIMIT = 3 ** 6


# --------------------------------------------------------------------------
# endomorphism algebras of forms

def endomorphism_algebra(X: EquivariantSpace) -> Algebra:
    """End_G(M) with the adjoint involution tau(e) = B^-1 e^T B."""
    hit = X._cache.get("endo")
    if hit is not None:
        return hit
    F = X.field
    M = X.module
    basis = hom_basis(M, M)
    B, Bi = X.gram, X.gram_inverse
    tau = lambda e: la.matmul_chain(F, Bi, np.ascontiguousarray(e.T), B)
    E = algebra_from_matrices(F, basis, tau, name="End", check=basis.shape[0] <= 24)
    X._cache["endo"] = E
    return E


def element_coords(E: Algebra, mat) -> np.ndarray:
    """Coordinates of a matrix in an algebra built by algebra_from_matrices."""
    return E._cache["coords"](np.asarray(mat, dtype=np.int64))


# --------------------------------------------------------------------------
# exhaustive classes

@dataclass
class HermitianClassSet:
    algebra: Algebra
    epsilon: int
    elements: np.ndarray      # all hermitian elements, sorted by code
    codes: np.ndarray
    labels: np.ndarray        # class id per element
    reps: np.ndarray          # least element of each class

    @property
    def count(self) -> int:
        return int(self.reps.shape[0])

    def orbit_sizes(self) -> list[int]:
        return [int(c) for c in np.bincount(self.labels, minlength=self.count)]

    def class_of(self, z) -> int:
        c = self.algebra.code(z)
        i = int(np.searchsorted(self.codes, c))
        if i >= len(self.codes) or self.codes[i] != c:
            raise ValueError("not a hermitian element")
        return int(self.labels[i])

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "classes": self.count,
                "representatives": [[int(v) for v in r] for r in self.reps],
                "orbit_sizes": self.orbit_sizes(), "method": "exhaustive"}


def _all_vectors(F, basis: np.ndarray) -> np.ndarray:
    """Every F-combination of the rows of ``basis`` (q^k rows)."""
    k = basis.shape[0]
    n = basis.shape[1]
    total = F.q ** k
    idx = np.arange(total, dtype=np.int64)
    digits = (idx[:, None] // (F.q ** np.arange(k, dtype=np.int64))[None, :]) % F.q
    out = np.zeros((total, n), dtype=np.int64)
    for j in range(k):
        out = F.add(out, F.mul(digits[:, j, None], basis[j][None, :]))
    return out


def _left_mats(E: Algebra, X: np.ndarray) -> np.ndarray:
    """Left multiplication matrices of many elements: (N, n, n)."""
    F, n = E.field, E.n
    flat = la.matmul(F, X, E.struct.reshape(n, n * n))
    return flat.reshape(-1, n, n)


def units_of(E: Algebra, budget: int = DEFAULT_BUDGET, impl=None) -> np.ndarray:
    F, n = E.field, E.n
    if F.q ** n > budget:
        raise UndecidedError(f"unit enumeration needs q^{n} > budget {budget}")
    allv = _all_vectors(F, la.identity(n))
    ok = batch_invertible(F, _left_mats(E, allv), impl)
    return allv[ok]


def hermitian_elements(E: Algebra, eps: int, budget: int = DEFAULT_BUDGET, impl=None) -> np.ndarray:
    F = E.field
    H = E.hermitian_subspace(eps)
    if F.q ** H.shape[0] > budget:
        raise UndecidedError(f"hermitian enumeration needs q^{H.shape[0]} > budget {budget}")
    allh = _all_vectors(F, H) if H.shape[0] else np.zeros((1, E.n), dtype=np.int64)
    ok = batch_invertible(F, _left_mats(E, allh), impl) if E.n else np.ones(1, dtype=bool)
    herm = allh[ok]
    codes = E.codes(herm) if herm.size else np.zeros(0, dtype=np.int64)
    order = np.argsort(codes, kind="stable")
    return herm[order]


def class_set_exhaustive(E: Algebra, eps: int, budget: int = DEFAULT_BUDGET,
                         impl=None) -> HermitianClassSet:
    """Orbits of the hermitian elements under z -> sigma(e) z e, by enumeration."""
    F = E.field
    herm = hermitian_elements(E, eps, budget, impl)
    codes = E.codes(herm) if herm.shape[0] else np.zeros(0, dtype=np.int64)
    if herm.shape[0] == 0:
        empty = np.zeros((0, E.n), dtype=np.int64)
        return HermitianClassSet(E, eps, empty, codes, np.zeros(0, dtype=np.int64), empty)
    units = units_of(E, budget, impl)
    sunits = la.matmul(F, units, E.sigma)
    labels, ncls = hermitian_orbits(F, codes, herm, units, sunits, E.struct, impl)
    first = np.array([int(np.flatnonzero(labels == c)[0]) for c in range(ncls)], dtype=np.int64)
    return HermitianClassSet(E, eps, herm, codes, labels, herm[first])


# --------------------------------------------------------------------------
# radical

def _span_products(E: Algebra, A: np.ndarray, B: np.ndarray):
    F = E.field
    add, mul, _, _ = field_tables(F)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return la.row_basis(F, np.zeros((0, E.n), dtype=np.int64), E.n)
    x = np.repeat(A, B.shape[0], axis=0)
    y = np.tile(B, (A.shape[0], 1))
    return la.row_basis(F, batch_alg_mul(x, y, E.struct, add, mul), E.n)


def verify_radical(E: Algebra, J: np.ndarray, piv) -> int:
    """Check J is a sigma-stable two-sided nilpotent ideal; return its nilpotency index."""
    F = E.field
    if J.shape[0] == 0:
        return 1
    I = la.identity(E.n)
    for side in (_span_products(E, I, J)[0], _span_products(E, J, I)[0],
                 la.matmul(F, J, E.sigma)):
        for v in side:
            if not la.in_span(F, J, piv, v):
                raise StructuralError("radical candidate is not a sigma-stable ideal")
    P = J
    for k in range(2, E.n + 2):
        P, _ = _span_products(E, P, J)
        if P.shape[0] == 0:
            return k
    raise StructuralError("radical candidate is not nilpotent")


def jacobson_radical(E: Algebra, method: str = "meataxe", budget: int = SCAN_LIMIT, impl=None):
    """RREF basis (rows, pivots) of the Jacobson radical.

    ``meataxe``: elements acting as zero on all composition factors of a
    faithful module.  ``scan``: the invertibility criterion
    J = {x : 1 - y x is a unit for all y}, by enumeration (q^n <= budget).
    """
    hit = E._cache.get(("radical", method))
    if hit is not None:
        return hit
    F, n = E.field, E.n
    if n == 0:
        out = (np.zeros((0, 0), dtype=np.int64), [])
    elif method == "meataxe":
        mats = E.faithful_mats()
        gens = [E.element_matrix(g) for g in E.generators]
        R = radical_of_matrix_algebra(F, mats, gens)
        out = la.row_basis(F, R, n)
    elif method == "scan":
        if F.q ** n > budget:
            raise UndecidedError(f"radical scan needs q^{n} > budget {budget}")
        allv = _all_vectors(F, la.identity(n))
        members = []
        for x in allv:
            yx = la.matmul(F, allv, E.right_matrix(x))
            one_minus = F.sub(E.unit[None, :], yx)
            if np.all(batch_invertible(F, _left_mats(E, one_minus), impl)):
                members.append(x)
        members = np.array(members)
        basis, piv = la.row_basis(F, members, n)
        if F.q ** basis.shape[0] != len(members):
            raise StructuralError("radical scan did not produce a subspace")
        out = (basis, piv)
    else:
        raise ValueError(f"unknown radical method {method!r}")
    verify_radical(E, *out)
    E._cache[("radical", method)] = out
    return out


# --------------------------------------------------------------------------
# reduction modulo the radical

@dataclass
class RadicalReduction:
    algebra: Algebra
    radical: np.ndarray
    radical_pivots: list
    quotient: Algebra
    proj: object
    lift: object

    def half(self):
        return self.algebra.field.sinv(2)

    def lift_class(self, vbar, eps: int) -> np.ndarray:
        """Hermitian lift w = (v + eps sigma(v)) / 2 of a hermitian element of the quotient."""
        E = self.algebra
        v = self.lift(np.asarray(vbar, dtype=np.int64))
        w = E.add(v, E.scale(eps % E.field.p, E.sig(v)))
        w = E.scale(self.half(), w)
        if not E.is_unit(w):
            raise StructuralError("lifted element is not a unit")
        return w

    def equivalence_chain(self, z, z2, eps: int):
        """Unit e with sigma(e) z e = z2 for hermitian z, z2 agreeing mod the radical.

        Returns (e, factors) where e is the product of the (1 + b) factors with
        b = z_k^-1 r_k / 2; each step moves the difference r_k into a higher
        power of the radical.
        """
        E = self.algebra
        F = E.field
        z = np.asarray(z, dtype=np.int64)
        z2 = np.asarray(z2, dtype=np.int64)
        if np.any(self.proj(E.sub(z2, z))):
            raise ValueError("elements differ modulo the radical")
        e = E.unit.copy()
        cur = z
        factors = []
        half = self.half()
        for _ in range(E.n + 2):
            r = E.sub(z2, cur)
            if not np.any(r):
                return e, factors
            b = E.scale(half, E.mul(E.inverse(cur), r))
            f = E.add(E.unit, b)
            factors.append(f)
            cur = E.mul(E.mul(E.sig(f), cur), f)
            e = E.mul(e, f)
        raise StructuralError("radical chain did not terminate")


def reduce_mod_radical(E: Algebra, method: str = "meataxe") -> RadicalReduction:
    hit = E._cache.get(("reduction", method))
    if hit is not None:
        return hit
    J, piv = jacobson_radical(E, method)
    Abar, proj, lift = quotient_algebra(E, J, piv)
    red = RadicalReduction(E, J, list(piv), Abar, proj, lift)
    E._cache[("reduction", method)] = red
    return red


# --------------------------------------------------------------------------
# semisimple splitting

@dataclass
class Component:
    kind: str                 # swap | unitary | orthogonal | symplectic
    idempotent: np.ndarray    # central idempotent of the sigma-stable component
    dim: int
    center_dim: int
    m: int                    # matrix size over the center (per factor for swap pairs)
    primitive: np.ndarray | None = None
    left_ideal: np.ndarray | None = None   # RREF basis of A_c f

    def to_json(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "center_dim": self.center_dim, "m": self.m,
                "idempotent": [int(v) for v in self.idempotent]}


def _rng_candidates(F, basis: np.ndarray, count: int, seed: int):
    k = basis.shape[0]
    for i in range(k):
        yield basis[i]
    rng = np.random.default_rng(seed)
    for _ in range(count):
        c = rng.integers(0, F.q, size=k)
        yield la.matmul(F, c[None, :], basis)[0]


def central_primitive_idempotents(A: Algebra, tries: int = 512) -> list[np.ndarray]:
    F = A.field
    Z = A.center
    atoms = []
    stack = [A.unit.copy()]
    while stack:
        e = stack.pop()
        eZ, _ = la.row_basis(F, la.matmul(F, Z, A.left_matrix(e)), A.n)
        k = eZ.shape[0]
        if k == 1:
            atoms.append(e)
            continue
        done = False
        for x in _rng_candidates(F, eZ, tries, 11):
            f, mu = A.split_idempotent(x, e)
            if f is not None:
                stack += [f, A.sub(e, f)]
                done = True
                break
            if len(mu) - 1 == k:   # irreducible of full degree: eZ is a field
                atoms.append(e)
                done = True
                break
        if not done:
            raise StructuralError("center splitting scan exhausted")
    atoms.sort(key=lambda v: tuple(int(c) for c in v))
    return atoms


def primitive_idempotent(A: Algebra, e: np.ndarray, s: int, tries: int = 512) -> np.ndarray:
    """A primitive idempotent below e in a simple component with center of degree s."""
    F = A.field
    for _ in range(A.n + 1):
        corner, _ = la.row_basis(F, la.matmul(F, A.right_matrix(e), A.left_matrix(e)), A.n)
        if corner.shape[0] == s:
            return e
        for x in _rng_candidates(F, corner, tries, 13):
            f, _ = A.split_idempotent(x, e)
            if f is not None:
                e = f
                break
        else:
            raise StructuralError("primitive idempotent scan exhausted")
    raise StructuralError("primitive idempotent descent did not terminate")  # pragma: no cover


def split_semisimple(A: Algebra) -> list[Component]:
    """Sigma-stable components of a semisimple algebra with involution."""
    hit = A._cache.get("components")
    if hit is not None:
        return hit
    F = A.field
    atoms = central_primitive_idempotents(A)
    keys = [tuple(int(c) for c in a) for a in atoms]
    used = set()
    comps = []
    Z = A.center
    for a, key in zip(atoms, keys):
        if key in used:
            continue
        sa = A.sig(a)
        skey = tuple(int(c) for c in sa)
        if skey not in keys:
            raise StructuralError("involution does not permute central idempotents")
        Ac, _ = la.row_basis(F, la.matmul(F, la.identity(A.n), A.left_matrix(a)), A.n)
        eZ, _ = la.row_basis(F, la.matmul(F, Z, A.left_matrix(a)), A.n)
        D, s = Ac.shape[0], eZ.shape[0]
        m = isqrt(D // s)
        if m * m * s != D:
            raise StructuralError("component dimension is not s*m^2")
        if skey != key:
            used |= {key, skey}
            comps.append(Component("swap", A.add(a, sa), 2 * D, s, m))
            continue
        used.add(key)
        moved = np.any(la.matmul(F, eZ, A.sigma) != eZ) and \
            any(not np.array_equal(A.sig(z), z) for z in eZ)
        if moved:
            kind = "unitary"
        else:
            S = A.hermitian_subspace(1)
            sym, _ = la.row_basis(F, la.matmul(F, S, A.left_matrix(a)), A.n)
            ds = sym.shape[0]
            if ds == s * m * (m + 1) // 2:
                kind = "orthogonal"
            elif ds == s * m * (m - 1) // 2:
                kind = "symplectic"
            else:
                raise StructuralError(f"symmetric part of dimension {ds} fits no involution type")
        f = primitive_idempotent(A, a, s)
        V, _ = la.row_basis(F, la.matmul(F, Ac, A.right_matrix(f)), A.n)
        if V.shape[0] != m * s:
            raise StructuralError("minimal left ideal has unexpected dimension")
        comps.append(Component(kind, a, D, s, m, f, V))
    A._cache["components"] = comps
    return comps


# --------------------------------------------------------------------------
# structural classification

def _symmetric_type(kind: str, eps: int) -> bool:
    return (kind == "orthogonal" and eps == 1) or (kind == "symplectic" and eps == -1)


def component_class_count(c: Component, eps: int) -> int:
    if c.kind in ("swap", "unitary"):
        return 1
    if _symmetric_type(c.kind, eps):
        return 2
    return 1 if c.m % 2 == 0 else 0


def _restricted_det(A: Algebra, z, rows: np.ndarray) -> int:
    F = A.field
    _, piv = la.row_basis(F, rows, A.n)
    img = la.matmul(F, rows, A.left_matrix(z))
    M = la.coords_in(F, rows, piv, img)
    return la.det(F, M)


def discriminant_class(A: Algebra, c: Component, z) -> int:
    """Square class (0 square, 1 non-square) of det of left multiplication on A_c f."""
    F = A.field
    zc = A.mul(c.idempotent, z)
    rows, _ = la.row_basis(F, c.left_ideal, A.n)
    d = _restricted_det(A, zc, rows)
    if d == 0:
        raise StructuralError("component of a hermitian element is not a unit")
    cls = F.square_class(d)
    if c.m % 2 == 1:
        Ac, _ = la.row_basis(F, la.matmul(F, la.identity(A.n), A.left_matrix(c.idempotent)), A.n)
        d2 = _restricted_det(A, zc, Ac)
        if F.square_class(d2) != cls:
            raise StructuralError("reduced-norm cross-check disagrees with the matrix model")
    return int(cls)


@dataclass
class StructuralClassSet:
    algebra: Algebra
    epsilon: int
    components: list = field(default_factory=list)

    @property
    def counts(self) -> list[int]:
        return [component_class_count(c, self.epsilon) for c in self.components]

    @property
    def count(self) -> int:
        out = 1
        for k in self.counts:
            out *= k
        return out

    def invariant(self, z) -> tuple:
        A = self.algebra
        z = np.asarray(z, dtype=np.int64)
        if not np.array_equal(A.sig(z), A.scale(self.epsilon % A.field.p, z)) or not A.is_unit(z):
            raise ValueError("not a hermitian element")
        return tuple(discriminant_class(A, c, z) if _symmetric_type(c.kind, self.epsilon) else 0
                     for c in self.components)

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "classes": self.count, "method": "structural",
                "components": [dict(c.to_json(), classes=k) for c, k in zip(self.components, self.counts)]}


def classify_classes_structural(Abar: Algebra, eps: int) -> StructuralClassSet:
    return StructuralClassSet(Abar, eps, split_semisimple(Abar))


def transporter_search(A: Algebra, z1, z2, span: np.ndarray | None = None,
                       budget: int = DEFAULT_BUDGET, chunk: int = 1 << 14):
    """First unit e in span (default: all of A) with sigma(e) z1 e = z2, or None."""
    F = A.field
    add, mul, _, _ = field_tables(F)
    span = la.identity(A.n) if span is None else span
    k = span.shape[0]
    if F.q ** k > budget:
        raise UndecidedError(f"transporter search needs q^{k} > budget {budget}")
    z1 = np.asarray(z1, dtype=np.int64)
    z2 = np.asarray(z2, dtype=np.int64)
    total = F.q ** k
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // (F.q ** np.arange(k, dtype=np.int64))[None, :]) % F.q
        es = la.matmul(F, digits, span)
        t = batch_alg_mul(la.matmul(F, es, A.sigma), z1[None, :], A.struct, add, mul)
        w = batch_alg_mul(t, es, A.struct, add, mul)
        hit = np.flatnonzero(np.all(w == z2[None, :], axis=1))
        if hit.size:
            return es[int(hit[0])]
    return None


@dataclass
class ClassDecision:
    same: bool
    rung: int                 # 1 invariants, 2 in-factor search, 3 whole-algebra search
    details: dict


def same_class(E: Algebra, eps: int, z1, z2, budget: int = DEFAULT_BUDGET,
               method: str = "meataxe") -> ClassDecision:
    """Decide whether hermitian elements z1, z2 of E are equivalent."""
    try:
        red = reduce_mod_radical(E, method)
        cs = classify_classes_structural(red.quotient, eps)
        i1 = cs.invariant(red.proj(z1))
        i2 = cs.invariant(red.proj(z2))
        return ClassDecision(i1 == i2, 1, {"invariants": [list(i1), list(i2)],
                                           "components": [c.kind for c in cs.components],
                                           "radical_dim": int(red.radical.shape[0])})
    except StructuralError as exc:
        reason = str(exc)
    # rung 2: component-wise transporter search in the semisimple quotient
    try:
        red = reduce_mod_radical(E, method)
        Abar = red.quotient
        comps = split_semisimple(Abar)
        y1, y2 = red.proj(z1), red.proj(z2)
        F = Abar.field
        ok = True
        for c in comps:
            Ac, _ = la.row_basis(F, la.matmul(F, la.identity(Abar.n), Abar.left_matrix(c.idempotent)), Abar.n)
            w1, w2 = Abar.mul(c.idempotent, y1), Abar.mul(c.idempotent, y2)
            A_loc = _corner_algebra(Abar, c.idempotent, Ac)
            e = transporter_search(A_loc[0], A_loc[1](w1), A_loc[1](w2), budget=budget)
            if e is None:
                ok = False
                break
        return ClassDecision(ok, 2, {"fallback_reason": reason})
    except (StructuralError, UndecidedError):
        pass
    e = transporter_search(E, z1, z2, budget=budget)
    return ClassDecision(e is not None, 3, {"fallback_reason": reason})


def _corner_algebra(A: Algebra, e, rows: np.ndarray):
    """The ideal A e (e central idempotent) as an algebra with unit e."""
    F = A.field
    _, piv = la.row_basis(F, rows, A.n)
    k = rows.shape[0]
    coords = lambda v: la.coords_in(F, rows, piv, v)
    struct = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        Li = A.left_matrix(rows[i])
        struct[i] = coords(la.matmul(F, rows, Li))
    sigma = coords(la.matmul(F, rows, A.sigma))
    sub = Algebra(F, struct, coords(e), sigma, check=False)
    return sub, coords


# --------------------------------------------------------------------------
# diagonal map into matrix algebras

def matrix_ring(E: Algebra, n: int) -> Algebra:
    """M_n(E) with sigma_n(E_ab x) = E_ba sigma(x); basis index (a*n + b)*dim + i."""
    k = E.n
    N = n * n * k
    struct = np.zeros((N, N, N), dtype=np.int64)
    sigma = np.zeros((N, N), dtype=np.int64)
    unit = np.zeros(N, dtype=np.int64)
    idx = lambda a, b, i: (a * n + b) * k + i
    for a in range(n):
        unit[idx(a, a, 0):idx(a, a, 0) + k] = E.unit
        for b in range(n):
            for i in range(k):
                sigma[idx(a, b, i), idx(b, a, 0):idx(b, a, 0) + k] = E.sigma[i]
                for d in range(n):
                    for j in range(k):
                        struct[idx(a, b, i), idx(b, d, j), idx(a, d, 0):idx(a, d, 0) + k] = E.struct[i, j]
    return Algebra(E.field, struct, unit, sigma, name=f"M_{n}({E.name or 'E'})", check=N <= 24)


def diagonal_embed(E: Algebra, u, n: int):
    """(E_n, u_n) with u_n the n x n diagonal matrix with entries u."""
    En = matrix_ring(E, n)
    k = E.n
    un = np.zeros(En.n, dtype=np.int64)
    for a in range(n):
        s = (a * n + a) * k
        un[s:s + k] = u
    return En, un
