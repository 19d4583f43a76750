"""Finite-dimensional algebras with involution, by structure constants.

Elements are coordinate row vectors x over the basis b_0..b_{n-1}; the
product is ``(x y)_k = sum_ij x_i y_j struct[i, j, k]`` and the involution is
``sigma(x) = x @ sigma``.  When the algebra comes with a faithful matrix
representation (``mats[i]`` is the matrix of b_i) it is kept alongside, which
lets radical computations work on a small module instead of the regular one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from . import polys
from .field import GF


class AlgebraError(ValueError):
    pass


class StructuralError(RuntimeError):
    """A structural step could not complete (the caller may fall back)."""


@dataclass(eq=False)
class Algebra:
    field: GF
    struct: np.ndarray
    unit: np.ndarray
    sigma: np.ndarray
    mats: np.ndarray | None = None
    name: str = ""
    check: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.struct = np.ascontiguousarray(self.struct, dtype=np.int64)
        self.unit = np.asarray(self.unit, dtype=np.int64)
        self.sigma = np.asarray(self.sigma, dtype=np.int64)
        n = self.n
        if self.struct.shape != (n, n, n) or self.unit.shape != (n,) or self.sigma.shape != (n, n):
            raise AlgebraError("inconsistent algebra data shapes")
        if self.check:
            self.validate()

    @property
    def n(self) -> int:
        return int(self.struct.shape[0])

    @property
    def q(self) -> int:
        return self.field.q

    def __repr__(self):
        return f"Algebra(dim={self.n}, {self.field!r}{', ' + self.name if self.name else ''})"

    # arithmetic ----------------------------------------------------------
    def basis_vec(self, i: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.n, dtype=np.int64)

    def left_matrix(self, x) -> np.ndarray:
        """M with y @ M = x * y."""
        n = self.n
        return la.matmul(self.field, np.asarray(x, dtype=np.int64)[None, :],
                         self.struct.reshape(n, n * n)).reshape(n, n)

    def right_matrix(self, y) -> np.ndarray:
        """M with x @ M = x * y."""
        n = self.n
        t = la.matmul(self.field, np.asarray(y, dtype=np.int64)[None, :],
                      self.struct.transpose(1, 0, 2).reshape(n, n * n))
        return t.reshape(n, n)

    def mul(self, x, y) -> np.ndarray:
        return la.matmul(self.field, np.asarray(y, dtype=np.int64)[None, :], self.left_matrix(x))[0]

    def add(self, x, y):
        return self.field.add(x, y)

    def sub(self, x, y):
        return self.field.sub(x, y)

    def scale(self, c, x):
        return self.field.mul(np.asarray(x, dtype=np.int64), c)

    def sig(self, x) -> np.ndarray:
        return la.matmul(self.field, np.asarray(x, dtype=np.int64)[None, :], self.sigma)[0]

    def is_unit(self, x) -> bool:
        return la.det(self.field, self.left_matrix(x)) != 0

    def inverse(self, x) -> np.ndarray:
        R = self.right_matrix(x)   # y @ R = y x
        y = la.solve(self.field, R.T, self.unit)
        if y is None:
            raise AlgebraError("element is not invertible")
        return y

    def power(self, x, k: int):
        out = self.unit.copy()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def eval_poly(self, f, x, unit=None) -> np.ndarray:
        e = self.unit if unit is None else np.asarray(unit, dtype=np.int64)
        acc = self.zero()
        for c in reversed(list(f)):
            acc = self.mul(acc, x)
            if c:
                acc = self.add(acc, self.scale(c, e))
        return acc

    def minpoly(self, x, unit=None) -> list[int]:
        """Minimal polynomial of x in the (corner) algebra with identity ``unit``."""
        e = self.unit if unit is None else np.asarray(unit, dtype=np.int64)
        R = self.right_matrix(x)
        return la.minpoly_vectors(self.field, lambda v: la.matmul(self.field, v[None, :], R)[0], e)

    def code(self, x) -> int:
        q = self.q
        return int(sum(int(c) * q ** i for i, c in enumerate(x)))

    def codes(self, X) -> np.ndarray:
        X = np.atleast_2d(X)
        return X @ (self.q ** np.arange(self.n, dtype=np.int64))

    def from_code(self, c: int) -> np.ndarray:
        q = self.q
        return np.array([(c // q ** i) % q for i in range(self.n)], dtype=np.int64)

    # validation ------------------------------------------------------------
    def validate(self):
        F, n, C = self.field, self.n, self.struct
        eye = la.identity(n)
        if not np.array_equal(self.left_matrix(self.unit), eye) or \
                not np.array_equal(self.right_matrix(self.unit), eye):
            raise AlgebraError("unit is not a two-sided identity")
        if n <= 24 or self.mats is None:
            if F.is_prime:
                lhs = np.einsum("ijm,mkl->ijkl", C, C) % F.p
                rhs = np.einsum("jkm,iml->ijkl", C, C) % F.p
            else:
                lhs = np.stack([np.stack([la.matmul(F, C[i, j][None, :], C.reshape(n, n * n)).reshape(n, n)
                                          for j in range(n)]) for i in range(n)])
                rhs = np.stack([np.stack([la.matmul(F, C[j], C[i]) for j in range(n)])
                                for i in range(n)])
            if not np.array_equal(lhs, rhs):
                raise AlgebraError("structure constants are not associative")
        if self.mats is not None:
            mats = self.mats
            for i in range(n):
                for j in range(n):
                    if not np.array_equal(la.matmul(F, mats[i], mats[j]), _combine(F, mats, C[i, j])):
                        raise AlgebraError("matrix representation disagrees with structure constants")
        S = self.sigma
        if not np.array_equal(la.matmul(F, S, S), eye):
            raise AlgebraError("sigma is not an involution")
        # sigma(b_i b_j) = sigma(b_j) sigma(b_i)
        for i in range(n):
            for j in range(n):
                lhs = la.matmul(F, C[i, j][None, :], S)[0]
                rhs = self.mul(S[j], S[i])
                if not np.array_equal(lhs, rhs):
                    raise AlgebraError("sigma is not an anti-automorphism")
        if not np.array_equal(self.sig(self.unit), self.unit):
            raise AlgebraError("sigma does not fix the unit")
        return self

    # subspaces ---------------------------------------------------------------
    def span(self, vecs):
        return la.row_basis(self.field, np.asarray(vecs, dtype=np.int64).reshape(-1, self.n), self.n)

    def hermitian_subspace(self, eps: int) -> np.ndarray:
        """Basis of {z : sigma(z) = eps z}."""
        F = self.field
        M = F.sub(self.sigma, F.mul(la.identity(self.n), eps % F.p))
        return la.nullspace(F, M.T) if self.n else np.zeros((0, 0), dtype=np.int64)

    @cached_property
    def generators(self) -> np.ndarray:
        """A small set of algebra generators (verified to generate)."""
        F, n = self.field, self.n
        rng = np.random.default_rng(12345)
        for k in range(1, n + 2):
            for _ in range(4):
                gens = rng.integers(0, F.q, size=(k, n))
                if self.generated_dim(gens) == n:
                    return gens
        return la.identity(n)

    def generated_dim(self, gens) -> int:
        """Dimension of the subalgebra generated by ``gens`` (with 1)."""
        F = self.field
        Rs = [self.right_matrix(g) for g in gens]
        basis, piv = la.row_basis(F, self.unit[None, :])
        queue = [basis[0]]
        rows = [basis[0]]
        pivs = list(piv)
        ech = [basis[0]]
        while queue:
            v = queue.pop()
            for R in Rs:
                w = la.matmul(F, v[None, :], R)[0]
                r = _reduce(F, ech, pivs, w)
                nz = np.flatnonzero(r)
                if nz.size:
                    r = F.mul(r, F.sinv(int(r[nz[0]])))
                    ech.append(r)
                    pivs.append(int(nz[0]))
                    queue.append(w)
                    rows.append(w)
        return len(ech)

    @cached_property
    def center(self) -> np.ndarray:
        """RREF basis of the center, via commutation with algebra generators."""
        F, n = self.field, self.n
        blocks = []
        for g in self.generators:
            blocks.append(F.sub(self.right_matrix(g), self.left_matrix(g)))
        M = np.concatenate(blocks, axis=1)   # x @ M = 0
        return la.nullspace(F, M.T)

    def faithful_mats(self) -> np.ndarray:
        """Matrices of the basis on a faithful module (given ones, else left regular)."""
        if self.mats is not None:
            return self.mats
        # column convention: (b_i y)_k = sum_j y_j C[i, j, k]  ->  A_i[k, j] = C[i, j, k]
        return np.ascontiguousarray(self.struct.transpose(0, 2, 1))

    def element_matrix(self, x) -> np.ndarray:
        return _combine(self.field, self.faithful_mats(), x)

    def split_idempotent(self, x, unit):
        """Idempotent from the first primary factor of minpoly(x), or None."""
        F = self.field
        mu = self.minpoly(x, unit)
        facs = polys.factor_poly(F, mu)
        if len(facs) <= 1:
            return None, mu
        g, a = facs[0]
        ga = [1]
        for _ in range(a):
            ga = polys.mul(F, ga, g)
        h = polys.divmod_(F, mu, ga)[0]
        d, s, t = polys.xgcd(F, ga, h)
        th = polys.mod(F, polys.mul(F, t, h), mu)
        e = self.eval_poly(th, x, unit)
        if not np.array_equal(self.mul(e, e), e):
            raise StructuralError("CRT idempotent is not idempotent")  # pragma: no cover
        return e, mu


def _reduce(F, ech, pivs, w):
    w = np.array(w, dtype=np.int64, copy=True)
    for row, p in zip(ech, pivs):
        c = int(w[p])
        if c:
            w = F.sub(w, F.mul(c, row))
    return w


def _combine(F: GF, mats, coeffs):
    out = np.zeros(mats.shape[1:], dtype=np.int64)
    for c, M in zip(coeffs, mats):
        c = int(c)
        if c:
            out = F.add(out, F.mul(c, M))
    return out


# --------------------------------------------------------------------------
# constructions

def algebra_from_matrices(F: GF, basis_mats: np.ndarray, sigma_fn=None, name: str = "",
                          check: bool = True) -> Algebra:
    """Algebra spanned by matrices (closed under product, containing I).

    ``basis_mats`` must be linearly independent and in RREF with respect to
    column-major flattening (as returned by :func:`~gforms.forms.hom_basis`).
    ``sigma_fn`` maps a matrix to its image under the involution.
    """
    k, d, _ = basis_mats.shape
    flat = basis_mats.transpose(0, 2, 1).reshape(k, -1)
    piv = [int(np.flatnonzero(r)[0]) for r in flat]

    def coords(M):
        v = np.asarray(M).T.reshape(-1)
        c = v[piv]
        if not np.array_equal(la.matmul(F, c[None, :], flat)[0] if k else np.zeros_like(v), v):
            raise AlgebraError("matrix is not in the algebra")
        return c

    struct = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            struct[i, j] = coords(la.matmul(F, basis_mats[i], basis_mats[j]))
    unit = coords(la.identity(d))
    if sigma_fn is None:
        sigma = la.identity(k)
    else:
        sigma = np.stack([coords(sigma_fn(M)) for M in basis_mats]) if k else np.zeros((0, 0), dtype=np.int64)
    A = Algebra(F, struct, unit, sigma, mats=np.ascontiguousarray(basis_mats), name=name, check=check)
    A._cache["coords"] = coords
    return A


def matrix_algebra(F: GF, m: int, involution: str = "transpose", gram=None) -> Algebra:
    """M_m(F) on the basis of matrix units in column-major order.

    ``involution``: 'transpose', or 'adjoint' for a -> G^-1 a^T G with the
    given Gram matrix G (symmetric or alternating).
    """
    basis = np.zeros((m * m, m, m), dtype=np.int64)
    for c in range(m):
        for r in range(m):
            basis[c * m + r, r, c] = 1
    if involution == "transpose":
        fn = lambda M: np.ascontiguousarray(M.T)
    elif involution == "adjoint":
        G = np.asarray(gram, dtype=np.int64)
        Gi = la.inverse(F, G)
        fn = lambda M: la.matmul(F, la.matmul(F, Gi, M.T), G)
    else:
        raise AlgebraError(f"unknown involution {involution!r}")
    return algebra_from_matrices(F, basis, fn, name=f"M_{m}")


def product_algebra(*algs: Algebra) -> Algebra:
    """Direct product (block structure constants, involution componentwise)."""
    F = algs[0].field
    n = sum(A.n for A in algs)
    struct = np.zeros((n, n, n), dtype=np.int64)
    sigma = np.zeros((n, n), dtype=np.int64)
    unit = np.zeros(n, dtype=np.int64)
    off = 0
    for A in algs:
        s = slice(off, off + A.n)
        struct[s, s, s] = A.struct
        sigma[s, s] = A.sigma
        unit[s] = A.unit
        off += A.n
    return Algebra(F, struct, unit, sigma, name=" x ".join(A.name or "?" for A in algs))


def swap_algebra(A: Algebra) -> Algebra:
    """A x A^op with the exchange involution (a, b) -> (b, a)."""
    F, n = A.field, A.n
    op = A.struct.transpose(1, 0, 2)
    struct = np.zeros((2 * n, 2 * n, 2 * n), dtype=np.int64)
    struct[:n, :n, :n] = A.struct
    struct[n:, n:, n:] = op
    sigma = np.zeros((2 * n, 2 * n), dtype=np.int64)
    sigma[:n, n:] = la.identity(n)
    sigma[n:, :n] = la.identity(n)
    unit = np.concatenate([A.unit, A.unit])
    return Algebra(F, struct, unit, sigma, name=f"({A.name or 'A'})x({A.name or 'A'})op")


def field_algebra(F: GF, m: int, frobenius_power: int = 0) -> Algebra:
    """F_{q^m} as an m-dimensional F_q algebra (q prime) with x -> x^(q^k)."""
    from .field import make_field
    if not F.is_prime:
        raise AlgebraError("field_algebra expects a prime base field")
    K = make_field(F.p, m)
    basis = np.array([F.p ** i for i in range(m)], dtype=np.int64)
    prods = K.mul(basis[:, None], basis[None, :])
    struct = K.digits(prods)
    sig_imgs = K.frobenius(basis, frobenius_power) if frobenius_power else basis
    sigma = K.digits(sig_imgs)
    unit = np.zeros(m, dtype=np.int64)
    unit[0] = 1
    return Algebra(F, struct, unit, sigma, name=f"F_{K.q}")


def truncated_poly_algebra(F: GF, k: int) -> Algebra:
    """F[t]/(t^k) with trivial involution."""
    struct = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            if i + j < k:
                struct[i, j, i + j] = 1
    unit = np.zeros(k, dtype=np.int64)
    unit[0] = 1
    return Algebra(F, struct, unit, la.identity(k), name=f"F[t]/(t^{k})")


def upper_triangular_algebra(F: GF) -> Algebra:
    """Upper triangular 2x2 matrices with the anti-transpose involution."""
    basis = np.zeros((3, 2, 2), dtype=np.int64)
    basis[0, 0, 0] = 1   # column-major order: (0,0), (0,1), (1,1)
    basis[1, 0, 1] = 1
    basis[2, 1, 1] = 1
    Jm = np.array([[0, 1], [1, 0]], dtype=np.int64)
    fn = lambda M: la.matmul(F, la.matmul(F, Jm, M.T), Jm)
    return algebra_from_matrices(F, basis, fn, name="T_2")


def quotient_algebra(A: Algebra, ideal_basis: np.ndarray, ideal_piv: list[int]):
    """A / I for a two-sided sigma-stable ideal I given in RREF.

    Returns (Abar, proj, lift): proj maps A-coordinates to Abar-coordinates,
    lift sends Abar-coordinates to the complement spanned by the non-pivot
    standard basis vectors.
    """
    F, n = A.field, A.n
    comp = [i for i in range(n) if i not in set(ideal_piv)]

    def proj(x):
        x = la.reduce_against(F, ideal_basis, ideal_piv, x)
        return x[..., comp]

    def lift(xb):
        x = np.zeros(n, dtype=np.int64)
        x[comp] = xb
        return x

    m = len(comp)
    struct = np.zeros((m, m, m), dtype=np.int64)
    for a, ia in enumerate(comp):
        La = A.left_matrix(A.basis_vec(ia))
        for b, ib in enumerate(comp):
            struct[a, b] = proj(La[ib])
    unit = proj(A.unit)
    sigma = np.stack([proj(A.sig(lift(np.eye(m, dtype=np.int64)[a]))) for a in range(m)]) if m else \
        np.zeros((0, 0), dtype=np.int64)
    Abar = Algebra(F, struct, unit, sigma, name=(A.name + "/J") if A.name else "", check=m <= 24)
    return Abar, proj, lift
