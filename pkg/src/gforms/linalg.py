"""Dense linear algebra over a finite field (matrices of element codes)."""
from __future__ import annotations

import numpy as np

from .field import GF


def asmat(A) -> np.ndarray:
    return np.array(A, dtype=np.int64, copy=True)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(F: GF, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.is_prime:
        return (A @ B) % F.p
    if A.ndim == 1:
        return matmul(F, A[None, :], B)[0]
    if B.ndim == 1:
        return matmul(F, A, B[:, None])[:, 0]
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, k:k + 1], B[k:k + 1, :]))
    return out


def matmul_chain(F: GF, *mats) -> np.ndarray:
    out = mats[0]
    for M in mats[1:]:
        out = matmul(F, out, M)
    return out


def transpose(A) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(A).T)


def rref(F: GF, A):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = asmat(A)
    if A.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = A.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r] = F.mul(A[r], F.sinv(lead))
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] = F.sub(A[others], F.mul(A[others, c][:, None], A[r][None, :]))
        piv.append(c)
        r += 1
    return A[:r], piv


def rank(F: GF, A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: GF, A, ncols: int | None = None) -> np.ndarray:
    """Basis (rows, in RREF) of {x : A x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1] if A.ndim == 2 and A.size else (ncols if ncols is not None else A.shape[-1])
    if A.size == 0:
        return identity(n)
    R, piv = rref(F, A)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(piv):
            basis[i, pc] = F.sneg(int(R[j, f]))
    if not len(free):
        return basis
    return rref(F, basis)[0]


def left_nullspace(F: GF, A) -> np.ndarray:
    """Basis of {y : y A = 0}."""
    return nullspace(F, transpose(A))


def det(F: GF, A) -> int:
    A = asmat(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("det of a non-square matrix")
    result = 1
    for c in range(n):
        nz = np.flatnonzero(A[c:, c])
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            A[[c, k]] = A[[k, c]]
            result = F.sneg(result)
        lead = int(A[c, c])
        result = F.smul(result, lead)
        inv = F.sinv(lead)
        below = c + 1 + np.flatnonzero(A[c + 1:, c])
        if below.size:
            factors = F.mul(A[below, c], inv)
            A[below] = F.sub(A[below], F.mul(factors[:, None], A[c][None, :]))
    return result


def is_invertible(F: GF, A) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


def inverse(F: GF, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    aug = np.concatenate([A, identity(n)], axis=1)
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)) or len(piv) < n or piv[n - 1] != n - 1:
        raise np.linalg.LinAlgError("matrix is singular")
    return R[:, n:]


def solve(F: GF, A, b):
    """One solution x of A x = b (b vector or matrix), or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    B = b[:, None] if vec else b
    n = A.shape[1]
    aug = np.concatenate([A, B], axis=1)
    R, piv = rref(F, aug)
    if piv and piv[-1] >= n:
        return None
    x = np.zeros((n, B.shape[1]), dtype=np.int64)
    for j, pc in enumerate(piv):
        x[pc] = R[j, n:]
    return x[:, 0] if vec else x


def row_basis(F: GF, vecs, n: int | None = None):
    """RREF basis of the span of the given row vectors, with pivots."""
    vecs = np.asarray(vecs, dtype=np.int64)
    if vecs.size == 0:
        width = n if n is not None else (vecs.shape[1] if vecs.ndim == 2 else 0)
        return np.zeros((0, width), dtype=np.int64), []
    return rref(F, vecs)


def reduce_against(F: GF, basis, piv, v) -> np.ndarray:
    """Reduce v modulo the span of an RREF basis."""
    v = np.array(v, dtype=np.int64, copy=True)
    for row, pc in zip(basis, piv):
        c = int(v[pc])
        if c:
            v = F.sub(v, F.mul(c, row))
    return v


def coords_in(F: GF, basis, piv, v, check: bool = True) -> np.ndarray:
    """Coordinates of v in an RREF basis (entries at pivot positions)."""
    v = np.asarray(v, dtype=np.int64)
    c = v[..., piv] if len(piv) else np.zeros(v.shape[:-1] + (0,), dtype=np.int64)
    if check:
        back = matmul(F, c.reshape(-1, len(piv)), basis) if len(piv) else np.zeros_like(v).reshape(-1, v.shape[-1])
        if not np.array_equal(back.reshape(v.shape), v):
            raise ValueError("vector not in span")
    return c


def in_span(F: GF, basis, piv, v) -> bool:
    return not np.any(reduce_against(F, basis, piv, v))


def block_diag(*blocks) -> np.ndarray:
    blocks = [np.asarray(b, dtype=np.int64) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=np.int64)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def kron(F: GF, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = F.mul(A[:, None, :, None], B[None, :, None, :])
    return out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


def scalar_mul(F: GF, c, A) -> np.ndarray:
    return F.mul(np.asarray(A, dtype=np.int64), c)


def minpoly_matrix(F: GF, A) -> list[int]:
    """Minimal polynomial (monic, ascending coefficients) of a square matrix."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    return minpoly_vectors(F, lambda v: matmul(F, v.reshape(n, n), A).reshape(-1),
                           identity(n).reshape(-1))


def minpoly_vectors(F: GF, apply, one) -> list[int]:
    """Minimal polynomial of a linear operator on the cyclic space of ``one``.

    ``apply`` maps a flat vector to its image.  Used both for matrices and
    for elements of structure-constant algebras (left multiplication).
    """
    vecs = [np.asarray(one, dtype=np.int64)]
    limit = vecs[0].size + 1
    while True:
        ns = nullspace(F, np.array(vecs).T)
        if ns.shape[0]:
            # exactly one relation: the newest power depends on the others
            rel = ns[0]
            rel = F.mul(rel, F.sinv(int(rel[-1])))
            return [int(c) for c in rel]
        if len(vecs) > limit:  # pragma: no cover
            raise RuntimeError("minimal polynomial search did not terminate")
        vecs.append(np.asarray(apply(vecs[-1]), dtype=np.int64))


def poly_eval_matrix(F: GF, f, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in reversed(list(f)):
        out = matmul(F, out, A)
        if c:
            out = F.add(out, F.mul(identity(n), c))
    return out
