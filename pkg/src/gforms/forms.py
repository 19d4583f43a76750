"""G-equivariant epsilon-symmetric bilinear spaces over finite fields.

A space is a Gram matrix ``B`` (``B.T == eps * B``, nonsingular) together with
a representation ``rep[g]`` of the group by matrices acting on column
vectors, with ``rep[g].T @ B @ rep[g] == B``.  Module-theoretic notions
(dual, bidual, Hom spaces) are matrix transposes, inverses and nullspaces.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .field import GF, make_field, subfield_embedding
from .groups import (FiniteGroup, GSet, SubgroupRef, coset_representatives,
                     regular_gset)


class FormError(ValueError):
    pass


class UndecidedError(RuntimeError):
    """A decision procedure could not certify an answer within its budget."""


DEFAULT_BUDGET = 1 << 24


# --------------------------------------------------------------------------
# modules

@dataclass(frozen=True, eq=False)
class ModuleRep:
    field: GF
    group: FiniteGroup
    rep: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        rep = np.asarray(self.rep, dtype=np.int64)
        if rep.ndim != 3 or rep.shape[0] != self.group.order or rep.shape[1] != rep.shape[2]:
            raise FormError("rep must have shape (|G|, d, d)")
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)

    @property
    def dim(self) -> int:
        return int(self.rep.shape[1])

    def validate(self) -> "ModuleRep":
        F, G, rep = self.field, self.group, self.rep
        d = self.dim
        if not np.array_equal(rep[0], la.identity(d)):
            raise FormError("identity does not act as the identity matrix")
        for s in G.generators:
            prod = _stack_matmul(F, rep, rep[s])
            if not np.array_equal(prod, rep[G.table[:, s]]):
                raise FormError("rep is not a homomorphism")
        return self

    @classmethod
    def from_generators(cls, F: GF, G: FiniteGroup, images: dict[int, np.ndarray]) -> "ModuleRep":
        """Extend matrices given on a generating set to the whole group."""
        mats = {int(k): np.asarray(v, dtype=np.int64) for k, v in images.items()}
        if not mats:
            raise FormError("no generator images given")
        d = next(iter(mats.values())).shape[0]
        rep = np.zeros((G.order, d, d), dtype=np.int64)
        known = np.zeros(G.order, dtype=bool)
        rep[0] = la.identity(d)
        known[0] = True
        frontier = [0]
        while frontier:
            new = []
            for x in frontier:
                for s, M in mats.items():
                    y = int(G.table[x, s])
                    if not known[y]:
                        rep[y] = la.matmul(F, rep[x], M)
                        known[y] = True
                        new.append(y)
            frontier = new
        if not known.all():
            raise FormError("given elements do not generate the group")
        mod = cls(F, G, rep)
        for s, M in mats.items():
            if not np.array_equal(rep[s], M % F.q if F.is_prime else M):
                raise FormError("generator images are inconsistent with the group law")
        for s, M in mats.items():
            prod = _stack_matmul(F, rep, M)
            if not np.array_equal(prod, rep[G.table[:, s]]):
                raise FormError("generator images do not satisfy the group relations")
        return mod

    @cached_property
    def dual(self) -> "ModuleRep":
        """Contragredient: g acts by rep(g^-1)^T."""
        inv = self.group.inverse
        return ModuleRep(self.field, self.group, np.ascontiguousarray(self.rep[inv].transpose(0, 2, 1)))

    def generator_images(self) -> dict[int, np.ndarray]:
        return {int(s): self.rep[s] for s in self.group.generators}


def _stack_matmul(F: GF, stack, M):
    if F.is_prime:
        return (stack @ M) % F.p
    return np.stack([la.matmul(F, A, M) for A in stack]) if len(stack) else stack


def trivial_module(F: GF, G: FiniteGroup, d: int = 1) -> ModuleRep:
    return ModuleRep(F, G, np.broadcast_to(la.identity(d), (G.order, d, d)).copy())


def direct_sum_modules(*mods: ModuleRep) -> ModuleRep:
    F, G = mods[0].field, mods[0].group
    rep = np.stack([la.block_diag(*[M.rep[g] for M in mods]) for g in range(G.order)])
    return ModuleRep(F, G, rep)


def permutation_module(X: GSet, F: GF) -> ModuleRep:
    n = X.size
    rep = np.zeros((X.group.order, n, n), dtype=np.int64)
    g = np.arange(X.group.order)[:, None]
    x = np.arange(n)[None, :]
    rep[g, X.action, x] = 1
    return ModuleRep(F, X.group, rep)


def change_basis_module(M: ModuleRep, P: np.ndarray) -> ModuleRep:
    """Module with rep P^-1 rho P (P's columns are the new basis)."""
    F = M.field
    Pi = la.inverse(F, P)
    rep = np.stack([la.matmul(F, la.matmul(F, Pi, A), P) for A in M.rep])
    return ModuleRep(F, M.group, rep)


def hom_basis(M: ModuleRep, N: ModuleRep) -> np.ndarray:
    """Basis of Hom_G(M, N) as an array (k, dN, dM).

    The basis is the RREF basis of the solution space in column-major
    coordinates ``phi[r, c] -> c * dN + r``.
    """
    key = id(N)
    hit = M._cache.get(("hom", key))
    if hit is not None and hit[0] is N:
        return hit[1]
    F = M.field
    if M.group is not N.group or M.field is not N.field:
        raise FormError("modules over different groups or fields")
    dM, dN = M.dim, N.dim
    if dM == 0 or dN == 0:
        out = np.zeros((0, dN, dM), dtype=np.int64)
    else:
        eqs = []
        IM = la.identity(dM)
        IN = la.identity(dN)
        for s in M.group.generators:
            A = la.kron(F, IM, N.rep[s])
            B = la.kron(F, M.rep[s].T, IN)
            eqs.append(F.sub(A, B))
        if eqs:
            ns = la.nullspace(F, np.concatenate(eqs, axis=0))
        else:
            ns = la.identity(dM * dN)
        out = np.ascontiguousarray(ns.reshape(-1, dM, dN).transpose(0, 2, 1))
    M._cache[("hom", key)] = (N, out)
    return out


def combine(F: GF, basis: np.ndarray, coeffs) -> np.ndarray:
    out = np.zeros(basis.shape[1:], dtype=np.int64)
    for c, Bm in zip(coeffs, basis):
        c = int(c)
        if c:
            out = F.add(out, F.mul(c, Bm))
    return out


def module_isomorphism(M: ModuleRep, N: ModuleRep, budget: int = DEFAULT_BUDGET,
                       tries: int = 64, seed: int = 0):
    """An invertible phi in Hom_G(M, N), or None when the modules differ.

    Seeded random combinations of the Hom basis are tried first (an
    isomorphism, when it exists, is hit with probability bounded below by a
    constant per try over a field of size >= 3).  A negative answer is
    certified either by dimension counts of Hom spaces or by exhaustive
    enumeration within ``budget``; otherwise :class:`UndecidedError` is raised.
    """
    F = M.field
    if M.dim != N.dim:
        return None
    d = M.dim
    if d == 0:
        return np.zeros((0, 0), dtype=np.int64)
    H = hom_basis(M, N)
    k = H.shape[0]
    if k == 0:
        return None
    rng = np.random.default_rng(seed)
    for t in range(tries):
        if t < k:
            c = np.zeros(k, dtype=np.int64)
            c[t] = 1
        else:
            c = rng.integers(0, F.q, size=k)
        phi = combine(F, H, c)
        if la.is_invertible(F, phi):
            return phi
    dMM = hom_basis(M, M).shape[0]
    dNN = hom_basis(N, N).shape[0]
    dNM = hom_basis(N, M).shape[0]
    if len({dMM, dNN, k, dNM}) > 1:
        return None
    if F.q ** k > budget:
        raise UndecidedError(f"module isomorphism undecided: q^{k} exceeds budget {budget}")
    from .kernels import batch_invertible
    chunk = 1 << 14
    total = F.q ** k
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // (F.q ** np.arange(k - 1, -1, -1, dtype=np.int64))[None, :]) % F.q
        mats = np.zeros((idx.size, d, d), dtype=np.int64)
        for j in range(k):
            mats = F.add(mats, F.mul(digits[:, j, None, None], H[j][None]))
        ok = batch_invertible(F, mats)
        if ok.any():
            return mats[int(np.flatnonzero(ok)[0])]
    return None


# --------------------------------------------------------------------------
# spaces

@dataclass(frozen=True, eq=False)
class EquivariantSpace:
    field: GF
    group: FiniteGroup
    epsilon: int
    gram: np.ndarray
    rep: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        gram = np.asarray(self.gram, dtype=np.int64)
        rep = np.asarray(self.rep, dtype=np.int64)
        gram.setflags(write=False)
        object.__setattr__(self, "gram", gram)
        if self.epsilon not in (1, -1):
            raise FormError("epsilon must be +1 or -1")
        d = gram.shape[0] if gram.ndim == 2 else -1
        if gram.shape != (d, d):
            raise FormError("Gram matrix must be square")
        if rep.shape != (self.group.order, d, d):
            raise FormError(f"rep shape {rep.shape} does not match (|G|, d, d) = {(self.group.order, d, d)}")
        mod = ModuleRep(self.field, self.group, rep)
        object.__setattr__(self, "rep", mod.rep)
        object.__setattr__(self, "module", mod)
        if self.check:
            self.validate()

    @property
    def dim(self) -> int:
        return int(self.gram.shape[0])

    def validate(self) -> "EquivariantSpace":
        F, B, eps = self.field, self.gram, self.epsilon
        if not np.array_equal(B.T, F.mul(B, eps % F.p)):
            raise FormError("Gram matrix is not epsilon-symmetric")
        if self.dim and la.det(F, B) == 0:
            raise FormError("Gram matrix is singular")
        self.module.validate()
        for s in self.group.generators:
            R = self.rep[s]
            if not np.array_equal(la.matmul(F, la.matmul(F, R.T, B), R), B):
                raise FormError("form is not invariant under the group")
        return self

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        return la.inverse(self.field, self.gram)

    def same_frame(self, other: "EquivariantSpace") -> bool:
        return (self.field is other.field and self.group is other.group
                and self.epsilon == other.epsilon)

    def with_gram(self, gram) -> "EquivariantSpace":
        return EquivariantSpace(self.field, self.group, self.epsilon, gram, self.rep)


def space_from_module(M: ModuleRep, eps: int, gram) -> EquivariantSpace:
    return EquivariantSpace(M.field, M.group, eps, gram, M.rep)


def plain_space(F: GF, gram, eps: int = 1, group: FiniteGroup | None = None) -> EquivariantSpace:
    """Space with trivial action (of the trivial group by default)."""
    from .groups import catalog_group
    G = group or catalog_group("C1")
    gram = np.asarray(gram, dtype=np.int64)
    d = gram.shape[0]
    rep = np.broadcast_to(la.identity(d), (G.order, d, d)).copy()
    return EquivariantSpace(F, G, eps, gram, rep)


def diagonal_form(F: GF, entries, group: FiniteGroup | None = None) -> EquivariantSpace:
    """<a_1, ..., a_n> with trivial action."""
    return plain_space(F, np.diag(np.asarray(entries, dtype=np.int64) % F.q if F.is_prime else entries), 1, group)


def zero_space(F: GF, G: FiniteGroup, eps: int = 1) -> EquivariantSpace:
    return EquivariantSpace(F, G, eps, np.zeros((0, 0), dtype=np.int64),
                            np.zeros((G.order, 0, 0), dtype=np.int64))


def orthogonal_sum(X: EquivariantSpace, Y: EquivariantSpace) -> EquivariantSpace:
    if not X.same_frame(Y):
        raise FormError("orthogonal sum needs the same field, group and epsilon")
    G = X.group
    rep = np.stack([la.block_diag(X.rep[g], Y.rep[g]) for g in range(G.order)])
    return EquivariantSpace(X.field, G, X.epsilon, la.block_diag(X.gram, Y.gram), rep)


def n_fold(X: EquivariantSpace, n: int) -> EquivariantSpace:
    """n copies of X (n >= 1)."""
    if n < 1:
        raise FormError("n must be positive")
    out = X
    for _ in range(n - 1):
        out = orthogonal_sum(out, X)
    return out


def scale_form(X: EquivariantSpace, lam: int) -> EquivariantSpace:
    if lam % X.field.q == 0 and X.field.is_prime:
        raise FormError("scaling by zero")
    return X.with_gram(X.field.mul(X.gram, lam))


def tensor_scalar_form(V, X: EquivariantSpace) -> EquivariantSpace:
    """V (x) X for a plain symmetric nonsingular Gram V (matrix or plain space)."""
    F = X.field
    Vg = V.gram if isinstance(V, EquivariantSpace) else np.asarray(V, dtype=np.int64)
    if isinstance(V, EquivariantSpace) and V.epsilon != 1:
        raise FormError("the scalar form must be symmetric")
    if not np.array_equal(Vg, Vg.T) or (Vg.shape[0] and la.det(F, Vg) == 0):
        raise FormError("scalar form must be symmetric and nonsingular")
    n = Vg.shape[0]
    In = la.identity(n)
    rep = np.stack([la.kron(F, In, X.rep[g]) for g in range(X.group.order)])
    return EquivariantSpace(F, X.group, X.epsilon, la.kron(F, Vg, X.gram), rep)


def hyperbolic(N: ModuleRep, eps: int) -> EquivariantSpace:
    F = N.field
    d = N.dim
    rep = np.stack([la.block_diag(N.rep[g], N.dual.rep[g]) for g in range(N.group.order)])
    gram = np.zeros((2 * d, 2 * d), dtype=np.int64)
    gram[:d, d:] = la.identity(d)
    gram[d:, :d] = F.mul(la.identity(d), eps % F.p)
    return EquivariantSpace(F, N.group, eps, gram, rep)


def negate(X: EquivariantSpace) -> EquivariantSpace:
    return scale_form(X, X.field.p - 1)


def induce_space(S: SubgroupRef, X: EquivariantSpace) -> EquivariantSpace:
    """Ind_S^G X on the basis (left coset representative r_i, basis vector e_j).

    g r_i = r_k s with s in S, so g maps block i to block k through rho_X(s).
    """
    G = S.parent
    if X.group is not S.as_group:
        raise FormError("X must be a space over the abstract group of S")
    F = X.field
    d = X.dim
    reps = coset_representatives(G, S)
    m = len(reps)
    coset_of = np.empty(G.order, dtype=np.int64)
    els = np.array(S.elements, dtype=np.int64)
    for i, r in enumerate(reps):
        coset_of[G.table[r, els]] = i
    local = np.full(G.order, -1, dtype=np.int64)
    local[els] = np.arange(len(els))
    rep = np.zeros((G.order, m * d, m * d), dtype=np.int64)
    for g in range(G.order):
        for i, r in enumerate(reps):
            gr = int(G.table[g, r])
            k = int(coset_of[gr])
            s = int(G.table[G.inverse[reps[k]], gr])
            rep[g, k * d:(k + 1) * d, i * d:(i + 1) * d] = X.rep[local[s]]
    gram = la.block_diag(*([X.gram] * m))
    return EquivariantSpace(F, G, X.epsilon, gram, rep)


def restrict_space(X: EquivariantSpace, S: SubgroupRef) -> EquivariantSpace:
    if S.parent is not X.group:
        raise FormError("S is not a subgroup of the space's group")
    rep = X.rep[list(S.elements)]
    return EquivariantSpace(X.field, S.as_group, X.epsilon, X.gram, rep)


def restrict_module(M: ModuleRep, S: SubgroupRef) -> ModuleRep:
    return ModuleRep(M.field, S.as_group, M.rep[list(S.elements)])


def permutation_form(X: GSet, F: GF) -> EquivariantSpace:
    M = permutation_module(X, F)
    return EquivariantSpace(F, X.group, 1, la.identity(X.size), M.rep)


def regular_form(G: FiniteGroup, F: GF) -> EquivariantSpace:
    return permutation_form(regular_gset(G), F)


def extend_scalars(X: EquivariantSpace, m: int) -> EquivariantSpace:
    """The same matrices read in F_{p^(a*m)} where X lives over F_{p^a}."""
    F = X.field
    if m == 1:
        return X
    K = make_field(F.p, F.m * m)
    emb = subfield_embedding(F, K)
    return EquivariantSpace(K, X.group, X.epsilon, emb[X.gram], emb[X.rep])


def extend_module(M: ModuleRep, K: GF) -> ModuleRep:
    emb = subfield_embedding(M.field, K)
    return ModuleRep(K, M.group, emb[M.rep])


def transfer_gram_plain(K: GF, a: int) -> np.ndarray:
    """Gram of z -> Tr(a z^2) on the F_p-basis 1, x, ..., x^(m-1) of K."""
    m, p = K.m, K.p
    basis = np.array([p ** t for t in range(m)], dtype=np.int64)
    prods = K.mul(K.mul(basis[:, None], basis[None, :]), a)
    return K.trace(prods)


def scharlau_transfer(X: EquivariantSpace, a: int) -> EquivariantSpace:
    """Transfer along s(z) = Tr_{K/F_p}(a z) from K = X.field down to F_p.

    Basis of the transferred space: x^t e_j at index j*m + t.
    """
    K = X.field
    if a == 0:
        raise FormError("the linear form s must be nonzero")
    m, p = K.m, K.p
    k = make_field(p, 1)
    d = X.dim
    beta = np.array([p ** t for t in range(m)], dtype=np.int64)
    # Gram: s(beta_t * beta_u * B[j, l])
    bb = K.mul(beta[:, None], beta[None, :])                       # (m, m)
    vals = K.mul(K.mul(bb[None, :, None, :], X.gram[:, None, :, None]), a)  # (d, m, d, m)
    gram = K.trace(vals).reshape(d * m, d * m)
    # rep: coefficient of beta_t in beta_u * rho[j, l]
    prod = K.mul(beta[None, None, None, :], X.rep[:, :, :, None])  # (G, d, d, m) index u last
    digs = K.digits(prod)                                           # (G, d, d, m_u, m_t)
    rep = digs.transpose(0, 1, 4, 2, 3).reshape(X.group.order, d * m, d * m)
    return EquivariantSpace(k, X.group, X.epsilon, gram, rep)


def diagonalize_symmetric(F: GF, B):
    """(P, diag) with P B P^T = diag(diag) for a symmetric matrix B."""
    B = la.asmat(B)
    n = B.shape[0]
    P = la.identity(n)
    diag = []
    for c in range(n):
        if B[c, c] == 0:
            # bring a nonzero diagonal entry into position, or make one
            k = next((i for i in range(c + 1, n) if B[i, i] != 0), None)
            if k is not None:
                B[[c, k]] = B[[k, c]]
                B[:, [c, k]] = B[:, [k, c]]
                P[[c, k]] = P[[k, c]]
            else:
                k = next((i for i in range(c + 1, n) if B[c, i] != 0), None)
                if k is None:
                    raise FormError("singular symmetric form")
                # row/col c += row/col k gives diagonal 2 B[c,k] != 0
                B[c] = F.add(B[c], B[k])
                B[:, c] = F.add(B[:, c], B[:, k])
                P[c] = F.add(P[c], P[k])
        piv = int(B[c, c])
        iv = F.sinv(piv)
        for i in range(c + 1, n):
            if B[i, c]:
                f = F.smul(int(B[i, c]), iv)
                B[i] = F.sub(B[i], F.mul(f, B[c]))
                B[:, i] = F.sub(B[:, i], F.mul(f, B[:, c]))
                P[i] = F.sub(P[i], F.mul(f, P[c]))
        diag.append(piv)
    return P, diag


def witt_class_plain(F: GF, V) -> tuple[int, int]:
    """(rank mod 2, square class of the signed discriminant) of a plain form.

    Square class 0 means square, 1 non-square.
    """
    B = V.gram if isinstance(V, EquivariantSpace) else np.asarray(V, dtype=np.int64)
    if not np.array_equal(B, B.T):
        raise FormError("plain form must be symmetric")
    d = B.shape[0]
    if d == 0:
        return 0, 0
    P, diag = diagonalize_symmetric(F, B)
    D = la.matmul(F, la.matmul(F, P, B), P.T)
    if not np.array_equal(D, np.diag(diag)):
        raise FormError("diagonalization check failed")  # pragma: no cover
    disc = 1
    for x in diag:
        disc = F.smul(disc, x)
    if (d * (d - 1) // 2) % 2:
        disc = F.sneg(disc)
    return d % 2, F.square_class(disc)


def scharlau_section(q: int, m: int):
    """First twist a (by code) whose form Tr(a z^2) on F_{q^m} is Witt-equivalent to <1>."""
    if m % 2 == 0:
        raise FormError("m must be odd")
    K = make_field(q, m)
    k = make_field(q, 1)
    target = witt_class_plain(k, np.array([[1]]))
    for a in range(1, K.q):
        G = transfer_gram_plain(K, a)
        if la.det(k, G) == 0:  # pragma: no cover - Tr form of a field is nondegenerate
            continue
        if witt_class_plain(k, G) == target:
            return a, G
    raise FormError("no section found")  # pragma: no cover


def dual_of_dual_is_identity(M: ModuleRep) -> bool:
    return np.array_equal(M.dual.dual.rep, M.rep)
