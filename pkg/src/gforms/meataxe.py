"""Submodules and composition series of matrix algebras over finite fields.

A module is given by a list of d x d matrices acting on column vectors.  The
proper-submodule search follows Norton's irreducibility test: for a random
algebra element a and an irreducible factor g of its minimal polynomial,
either some nonzero vector of ker g(a) spins to a proper submodule, or (when
ker g(a) has dimension deg g) a transposed spin decides irreducibility.
"""
from __future__ import annotations

import numpy as np

from . import linalg as la
from . import polys
from .field import GF


class MeatAxeError(RuntimeError):
    pass


def spin(F: GF, mats, vecs) -> np.ndarray:
    """RREF basis (rows) of the smallest invariant subspace containing ``vecs``."""
    d = mats[0].shape[0] if len(mats) else np.asarray(vecs).shape[-1]
    ech: list[np.ndarray] = []
    pivs: list[int] = []
    queue = []

    def push(w):
        for row, p in zip(ech, pivs):
            c = int(w[p])
            if c:
                w = F.sub(w, F.mul(c, row))
        nz = np.flatnonzero(w)
        if nz.size:
            w = F.mul(w, F.sinv(int(w[nz[0]])))
            ech.append(w)
            pivs.append(int(nz[0]))
            return True
        return False

    for v in np.atleast_2d(np.asarray(vecs, dtype=np.int64)):
        if push(v.copy()):
            queue.append(v.copy())
    while queue and len(ech) < d:
        v = queue.pop()
        for A in mats:
            w = la.matmul(F, A, v[:, None])[:, 0]
            if push(w.copy()):
                queue.append(w)
    if not ech:
        return np.zeros((0, d), dtype=np.int64)
    return la.rref(F, np.array(ech))[0]


def find_submodule(F: GF, mats, algebra_span=None, seed: int = 0, attempts: int = 400):
    """A proper nonzero invariant subspace (RREF rows), or None if irreducible.

    ``algebra_span`` is a stack of matrices spanning the acting algebra (used
    to draw random elements); it defaults to ``mats`` plus pairwise products.
    """
    mats = [np.asarray(A, dtype=np.int64) for A in mats]
    d = mats[0].shape[0]
    if d <= 1:
        return None
    for i in range(min(d, 3)):
        e = np.zeros(d, dtype=np.int64)
        e[i] = 1
        W = spin(F, mats, e)
        if 0 < W.shape[0] < d:
            return W
    if algebra_span is None:
        span = list(mats) + [la.matmul(F, A, B) for A in mats for B in mats]
    else:
        span = list(algebra_span)
    span = np.array(span)
    rng = np.random.default_rng(seed)
    mT = [np.ascontiguousarray(A.T) for A in mats]
    for _ in range(attempts):
        c = rng.integers(0, F.q, size=len(span))
        a = np.zeros((d, d), dtype=np.int64)
        for ci, S in zip(c, span):
            if ci:
                a = F.add(a, F.mul(int(ci), S))
        mu = la.minpoly_matrix(F, a)
        facs = sorted(polys.factor_poly(F, mu), key=lambda fm: len(fm[0]))
        for g, _mult in facs:
            if len(g) == 1:
                continue
            ga = la.poly_eval_matrix(F, g, a)
            N = la.nullspace(F, ga)
            if N.shape[0] == 0:
                continue
            W = spin(F, mats, N[0])
            if W.shape[0] < d:
                return W
            if N.shape[0] == len(g) - 1:
                Nt = la.nullspace(F, np.ascontiguousarray(ga.T))
                Wt = spin(F, mT, Nt[0])
                if Wt.shape[0] < d:
                    return la.nullspace(F, Wt)
                return None
    raise MeatAxeError("irreducibility test did not conclude")


def composition_series(F: GF, mats, seed: int = 0, span=None):
    """Basis change P (columns) making all matrices block upper triangular.

    Returns ``(P, sizes)`` where the diagonal blocks of P^-1 A P, of the given
    sizes, are the (irreducible) composition factors.
    """
    mats = [np.asarray(A, dtype=np.int64) for A in mats]
    d = mats[0].shape[0]
    if d == 0:
        return np.zeros((0, 0), dtype=np.int64), []
    W = find_submodule(F, mats, algebra_span=span, seed=seed)
    if W is None:
        return la.identity(d), [d]
    k = W.shape[0]
    # basis: W (columns) followed by standard vectors completing it
    pivs = [int(np.flatnonzero(r)[0]) for r in W]
    rest = [i for i in range(d) if i not in pivs]
    P = np.zeros((d, d), dtype=np.int64)
    P[:, :k] = W.T
    for j, i in enumerate(rest):
        P[i, k + j] = 1
    Pi = la.inverse(F, P)
    conj = [la.matmul_chain(F, Pi, A, P) for A in mats]
    sub = [C[:k, :k] for C in conj]
    quo = [C[k:, k:] for C in conj]
    span1 = span2 = None
    if span is not None:
        cs = [la.matmul_chain(F, Pi, A, P) for A in span]
        span1 = [C[:k, :k] for C in cs]
        span2 = [C[k:, k:] for C in cs]
    P1, s1 = composition_series(F, sub, seed + 1, span1)
    P2, s2 = composition_series(F, quo, seed + 2, span2)
    Q = la.block_diag(P1, P2)
    return la.matmul(F, P, Q), s1 + s2


def radical_of_matrix_algebra(F: GF, basis_mats, gens=None, seed: int = 0) -> np.ndarray:
    """Jacobson radical of the algebra spanned by ``basis_mats``.

    The algebra acts faithfully on the column space; the radical is the set of
    elements acting as zero on every composition factor.  Returns an RREF
    basis of radical coordinates (rows, w.r.t. ``basis_mats``).
    """
    basis_mats = np.asarray(basis_mats, dtype=np.int64)
    n = basis_mats.shape[0]
    acting = list(gens) if gens is not None else list(basis_mats)
    P, sizes = composition_series(F, acting, seed, span=list(basis_mats))
    Pi = la.inverse(F, P)
    conj = np.stack([la.matmul_chain(F, Pi, B, P) for B in basis_mats])
    cols = []
    off = 0
    for s in sizes:
        blk = conj[:, off:off + s, off:off + s].reshape(n, -1)
        cols.append(blk)
        off += s
    M = np.concatenate(cols, axis=1)    # x @ M = 0  <=>  x in radical
    return la.nullspace(F, np.ascontiguousarray(M.T))
