"""Hot loops: isometry search, hermitian orbit scans, batched invertibility.

Every kernel has a numba implementation and a pure-numpy implementation with
identical results; ``impl=None`` picks numba unless ``GFORMS_NO_NUMBA`` is set.
Field arithmetic inside kernels goes through the add/mul/neg/inv tables of a
:class:`~gforms.field.GF` (available for q <= 1024).
"""
from __future__ import annotations

import numpy as np

from ._accel import njit, resolve_impl
from .field import GF

INT_CAP = 1 << 62
NUMPY_CHUNK = 1 << 15


class KernelFieldError(ValueError):
    pass


def field_tables(F: GF):
    if F.add_table is None:
        raise KernelFieldError(f"{F!r} is too large for table-driven kernels")
    return F.add_table, F.mul_table, F.neg_table, F.inv_table


def _capped_pow(q: int, k: int) -> int:
    v = 1
    for _ in range(k):
        v *= q
        if v >= INT_CAP:
            return INT_CAP
    return v


# --------------------------------------------------------------------------
# isometry search

@njit
def _solve_level(level, s, e, coeff, basis, phi, BY, BX, add, mul, neg, inv, q,
                 Rs, pivc, freec, nfree, rank):
    """Row-reduce the linear constraints of column ``level``; return #candidates."""
    d = BX.shape[0]
    kc = e - s
    base = np.zeros(d, dtype=np.int64)
    for i in range(s):
        c = coeff[i]
        if c != 0:
            for r in range(d):
                base[r] = add[base[r], mul[c, basis[i, r, level]]]
    R = Rs[level]
    for l in range(level):
        # a = BY^T phi_l; row: a . W | BX[l, level] - a . base
        rhs = BX[l, level]
        for j in range(kc):
            R[l, j] = 0
        for u in range(d):
            acc = 0
            for r in range(d):
                if phi[r, l] != 0:
                    acc = add[acc, mul[phi[r, l], BY[r, u]]]
            if acc != 0:
                for j in range(kc):
                    R[l, j] = add[R[l, j], mul[acc, basis[s + j, u, level]]]
                rhs = add[rhs, neg[mul[acc, base[u]]]]
        R[l, kc] = rhs
    rk = 0
    for col in range(kc + 1):
        p = -1
        for r in range(rk, level):
            if R[r, col] != 0:
                p = r
                break
        if p < 0:
            continue
        if col == kc:
            return 0
        for j in range(kc + 1):
            tmp = R[rk, j]
            R[rk, j] = R[p, j]
            R[p, j] = tmp
        iv = inv[R[rk, col]]
        for j in range(kc + 1):
            R[rk, j] = mul[iv, R[rk, j]]
        for r in range(level):
            if r != rk and R[r, col] != 0:
                f = R[r, col]
                for j in range(kc + 1):
                    R[r, j] = add[R[r, j], neg[mul[f, R[rk, j]]]]
        pivc[level, rk] = col
        rk += 1
    rank[level] = rk
    nf = 0
    for col in range(kc):
        is_piv = False
        for r in range(rk):
            if pivc[level, r] == col:
                is_piv = True
        if not is_piv:
            freec[level, nf] = col
            nf += 1
    nfree[level] = nf
    total = 1
    for _ in range(nf):
        total *= q
        if total >= 4611686018427387904:
            return 4611686018427387904
    return total


@njit
def _isometry_numba(basis, col_start, col_end, BX, BY, add, mul, neg, inv, q, budget):
    k = basis.shape[0]
    d = BX.shape[0]
    kmax = 1
    for c in range(d):
        if col_end[c] - col_start[c] > kmax:
            kmax = col_end[c] - col_start[c]
    coeff = np.zeros(k, dtype=np.int64)
    phi = np.zeros((d, d), dtype=np.int64)
    ech = np.zeros((d, d), dtype=np.int64)
    piv = np.zeros(d, dtype=np.int64)
    counter = np.zeros(d, dtype=np.int64)
    nvals = np.zeros(d, dtype=np.int64)
    Rs = np.zeros((d, d + 1, kmax + 1), dtype=np.int64)
    pivc = np.zeros((d, kmax + 1), dtype=np.int64)
    freec = np.zeros((d, kmax + 1), dtype=np.int64)
    nfree = np.zeros(d, dtype=np.int64)
    rank = np.zeros(d, dtype=np.int64)
    tvals = np.zeros(kmax + 1, dtype=np.int64)
    w = np.zeros(d, dtype=np.int64)
    v = np.zeros(d, dtype=np.int64)
    level = 0
    visited = 0
    nvals[0] = _solve_level(0, col_start[0], col_end[0], coeff, basis, phi, BY, BX, add, mul, neg,
                            inv, q, Rs, pivc, freec, nfree, rank)
    while True:
        if level < 0:
            return 0, coeff, visited
        if counter[level] >= nvals[level]:
            counter[level] = 0
            level -= 1
            if level >= 0:
                counter[level] += 1
            continue
        visited += 1
        if visited > budget:
            return -1, coeff, visited
        s = col_start[level]
        e = col_end[level]
        kc = e - s
        # free variables from the counter (last free variable fastest)
        t = counter[level]
        nf = nfree[level]
        for j in range(nf - 1, -1, -1):
            tvals[freec[level, j]] = t % q
            t //= q
        R = Rs[level]
        for r in range(rank[level]):
            acc = R[r, kc]
            for j in range(nf):
                fc = freec[level, j]
                if R[r, fc] != 0 and tvals[fc] != 0:
                    acc = add[acc, neg[mul[R[r, fc], tvals[fc]]]]
            tvals[pivc[level, r]] = acc
        for j in range(kc):
            coeff[s + j] = tvals[j]
        for r in range(d):
            acc = 0
            for i in range(e):
                c = coeff[i]
                if c != 0:
                    acc = add[acc, mul[c, basis[i, r, level]]]
            phi[r, level] = acc
        for r in range(d):
            acc = 0
            for u in range(d):
                acc = add[acc, mul[BY[r, u], phi[u, level]]]
            w[r] = acc
        acc = 0
        for r in range(d):
            acc = add[acc, mul[phi[r, level], w[r]]]
        ok = acc == BX[level, level]
        if ok:
            for r in range(d):
                v[r] = phi[r, level]
            for tt in range(level):
                c = v[piv[tt]]
                if c != 0:
                    for r in range(d):
                        v[r] = add[v[r], neg[mul[c, ech[tt, r]]]]
            r0 = -1
            for r in range(d):
                if v[r] != 0:
                    r0 = r
                    break
            if r0 < 0:
                ok = False
            else:
                iv = inv[v[r0]]
                for r in range(d):
                    ech[level, r] = mul[iv, v[r]]
                piv[level] = r0
        if ok:
            if level == d - 1:
                return 1, coeff, visited
            level += 1
            counter[level] = 0
            nvals[level] = _solve_level(level, col_start[level], col_end[level], coeff, basis, phi,
                                        BY, BX, add, mul, neg, inv, q, Rs, pivc, freec, nfree, rank)
        else:
            counter[level] += 1


def _solve_level_numpy(level, s, e, coeff, basis, phi, BY, BX, add, mul, neg, inv):
    """Affine solution set of column ``level``'s linear constraints.

    Returns (t0, N, free) with every solution t0 + digits @ N (N rows indexed
    by free variables), or None when inconsistent.
    """
    d = BX.shape[0]
    kc = e - s
    base = np.zeros(d, dtype=np.int64)
    for i in range(s):
        if coeff[i]:
            base = add[base, mul[coeff[i], basis[i, :, level]]]
    W = basis[s:e, :, level]            # (kc, d)
    R = np.zeros((level, kc + 1), dtype=np.int64)
    for l in range(level):
        a = np.zeros(d, dtype=np.int64)
        for r in range(d):
            if phi[r, l]:
                a = add[a, mul[phi[r, l], BY[r]]]
        row = np.zeros(kc, dtype=np.int64)
        rhs = BX[l, level]
        for u in range(d):
            if a[u]:
                row = add[row, mul[a[u], W[:, u]]]
                rhs = add[rhs, neg[mul[a[u], base[u]]]]
        R[l, :kc] = row
        R[l, kc] = rhs
    rk = 0
    pivc = []
    for col in range(kc + 1):
        nz = [r for r in range(rk, level) if R[r, col]]
        if not nz:
            continue
        if col == kc:
            return None
        p = nz[0]
        R[[rk, p]] = R[[p, rk]]
        R[rk] = mul[inv[R[rk, col]], R[rk]]
        for r in range(level):
            if r != rk and R[r, col]:
                R[r] = add[R[r], neg[mul[R[r, col], R[rk]]]]
        pivc.append(col)
        rk += 1
    free = [c for c in range(kc) if c not in pivc]
    t0 = np.zeros(kc, dtype=np.int64)
    for r, pc in enumerate(pivc):
        t0[pc] = R[r, kc]
    N = np.zeros((len(free), kc), dtype=np.int64)
    for j, fc in enumerate(free):
        N[j, fc] = 1
        for r, pc in enumerate(pivc):
            N[j, pc] = neg[R[r, fc]]
    return t0, N, free


def _isometry_numpy(basis, col_start, col_end, BX, BY, add, mul, neg, inv, q, budget):
    k = basis.shape[0]
    d = BX.shape[0]
    coeff = np.zeros(k, dtype=np.int64)
    phi = np.zeros((d, d), dtype=np.int64)
    ech = np.zeros((d, d), dtype=np.int64)
    piv = np.zeros(d, dtype=np.int64)
    state = {"visited": 0}

    def tdot(A, B):
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for j in range(A.shape[1]):
            out = add[out, mul[A[:, j:j + 1], B[j:j + 1, :]]]
        return out

    def rec(level):
        s, e = int(col_start[level]), int(col_end[level])
        kc = e - s
        sol = _solve_level_numpy(level, s, e, coeff, basis, phi, BY, BX, add, mul, neg, inv)
        if sol is None:
            return 0
        t0, N, free = sol
        nf = len(free)
        total = _capped_pow(q, nf)
        base = np.zeros(d, dtype=np.int64)
        for i in range(s):
            if coeff[i]:
                base = add[base, mul[coeff[i], basis[i, :, level]]]
        for start in range(0, total, NUMPY_CHUNK):
            stop = min(total, start + NUMPY_CHUNK)
            idx = np.arange(start, stop, dtype=np.int64)
            digits = np.empty((idx.size, nf), dtype=np.int64)
            t = idx.copy()
            for j in range(nf - 1, -1, -1):
                digits[:, j] = t % q
                t //= q
            tv = np.broadcast_to(t0, (idx.size, kc)).copy()
            for j in range(nf):
                tv = add[tv, mul[digits[:, j:j + 1], N[j][None, :]]]
            cols = np.broadcast_to(base, (idx.size, d)).copy()
            for j in range(kc):
                cols = add[cols, mul[tv[:, j:j + 1], basis[s + j, :, level][None, :]]]
            w = tdot(cols, BY.T)
            vals = np.zeros(idx.size, dtype=np.int64)
            for r in range(d):
                vals = add[vals, mul[cols[:, r], w[:, r]]]
            ok = vals == BX[level, level]
            done = 0
            for pos in np.flatnonzero(ok):
                pos = int(pos)
                v = cols[pos].copy()
                for tt in range(level):
                    c = v[piv[tt]]
                    if c:
                        v = add[v, neg[mul[c, ech[tt]]]]
                nz = np.flatnonzero(v)
                if nz.size == 0:
                    continue
                ech[level] = mul[inv[v[nz[0]]], v]
                piv[level] = nz[0]
                coeff[s:e] = tv[pos]
                phi[:, level] = cols[pos]
                state["visited"] += pos + 1 - done
                done = pos + 1
                if state["visited"] > budget:
                    return -1
                if level == d - 1:
                    return 1
                sub = rec(level + 1)
                if sub != 0:
                    return sub
            state["visited"] += idx.size - done
            if state["visited"] > budget:
                return -1
        return 0

    status = rec(0) if d else 1
    return status, coeff, state["visited"]


def isometry_search(F: GF, basis: np.ndarray, BX: np.ndarray, BY: np.ndarray,
                    budget: int, impl: str | None = None):
    """Search Hom-space combinations for an isometry.

    ``basis`` has shape (k, d, d): an RREF basis of Hom_G(X, Y) with respect to
    column-major flattening, so column c of phi only involves basis elements
    whose pivot lies in columns <= c.  Columns are fixed one at a time: the
    conditions phi_l^T B_Y phi_c = B_X[l, c] (l < c) are linear in the new
    coefficients and are solved first, so only the affine solution set is
    enumerated (free variables in counting order, last one fastest); then the
    diagonal condition and linear independence are checked.

    Returns ``(status, phi, visited)`` with status 1 (found; phi is the first
    witness in enumeration order), 0 (no isometry) or -1 (more than
    ``budget`` candidates visited).
    """
    impl = resolve_impl(impl)
    add, mul, neg, inv = field_tables(F)
    k = basis.shape[0]
    d = BX.shape[0]
    if BY.shape[0] != d:
        return 0, None, 0
    if d == 0:
        return 1, np.zeros((0, 0), dtype=np.int64), 0
    if k == 0:
        return 0, None, 0
    flat = basis.transpose(0, 2, 1).reshape(k, -1)  # column-major flattening
    pivots = [int(np.flatnonzero(row)[0]) for row in flat]
    if pivots != sorted(pivots):
        raise ValueError("basis is not in echelon form for column-major flattening")
    pcol = np.array([p // d for p in pivots], dtype=np.int64)
    col_end = np.array([int(np.count_nonzero(pcol <= c)) for c in range(d)], dtype=np.int64)
    col_start = np.concatenate([[0], col_end[:-1]]).astype(np.int64)
    basis = np.ascontiguousarray(basis, dtype=np.int64)
    BX = np.ascontiguousarray(BX, dtype=np.int64)
    BY = np.ascontiguousarray(BY, dtype=np.int64)
    if impl == "numba":
        status, coeff, visited = _isometry_numba(basis, col_start, col_end, BX, BY,
                                                 add, mul, neg, inv, F.q, budget)
    else:
        status, coeff, visited = _isometry_numpy(basis, col_start, col_end, BX, BY,
                                                 add, mul, neg, inv, F.q, budget)
    if status != 1:
        return int(status), None, int(visited)
    phi = np.zeros((d, d), dtype=np.int64)
    for i in range(k):
        if coeff[i]:
            phi = add[phi, mul[coeff[i], basis[i]]]
    return 1, phi, int(visited)


# --------------------------------------------------------------------------
# batched invertibility

@njit
def _batch_invertible_numba(mats, add, mul, neg, inv):
    N = mats.shape[0]
    d = mats.shape[1]
    out = np.zeros(N, dtype=np.bool_)
    A = np.empty((d, d), dtype=np.int64)
    for n in range(N):
        for i in range(d):
            for j in range(d):
                A[i, j] = mats[n, i, j]
        ok = True
        for c in range(d):
            p = -1
            for r in range(c, d):
                if A[r, c] != 0:
                    p = r
                    break
            if p < 0:
                ok = False
                break
            if p != c:
                for j in range(d):
                    tmp = A[c, j]
                    A[c, j] = A[p, j]
                    A[p, j] = tmp
            iv = inv[A[c, c]]
            for r in range(c + 1, d):
                if A[r, c] != 0:
                    f = mul[A[r, c], iv]
                    for j in range(c, d):
                        A[r, j] = add[A[r, j], neg[mul[f, A[c, j]]]]
        out[n] = ok
    return out


def _batch_invertible_numpy(mats, add, mul, neg, inv):
    A = mats.copy()
    N, d, _ = A.shape
    alive = np.ones(N, dtype=bool)
    rows = np.arange(N)
    for c in range(d):
        col = A[:, c:, c]
        has = np.any(col != 0, axis=1)
        alive &= has
        p = c + np.argmax(col != 0, axis=1)
        top = A[rows, p].copy()
        A[rows, p] = A[:, c]
        A[:, c] = top
        piv = A[:, c, c]
        iv = np.where(piv != 0, inv[piv], 0)
        f = mul[A[:, c + 1:, c], iv[:, None]]          # (N, d-c-1)
        A[:, c + 1:, :] = add[A[:, c + 1:, :], neg[mul[f[:, :, None], A[:, c, None, :]]]]
    return alive


def batch_invertible(F: GF, mats: np.ndarray, impl: str | None = None) -> np.ndarray:
    """Boolean mask of invertible matrices in a stack of shape (N, d, d)."""
    impl = resolve_impl(impl)
    add, mul, neg, inv = field_tables(F)
    mats = np.ascontiguousarray(mats, dtype=np.int64)
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if mats.shape[1] == 0:
        return np.ones(mats.shape[0], dtype=bool)
    if impl == "numba":
        return _batch_invertible_numba(mats, add, mul, neg, inv)
    return _batch_invertible_numpy(mats, add, mul, neg, inv)


# --------------------------------------------------------------------------
# hermitian orbits  z -> sigma(e) z e

@njit
def _alg_mul(x, y, struct, add, mul):
    n = x.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j] == 0:
                continue
            c = mul[x[i], y[j]]
            for k in range(n):
                s = struct[i, j, k]
                if s != 0:
                    out[k] = add[out[k], mul[c, s]]
    return out


@njit
def _orbits_numba(codes, herm, units, sunits, struct, add, mul, q):
    nz = herm.shape[0]
    n = herm.shape[1]
    labels = np.full(nz, -1, dtype=np.int64)
    qp = np.ones(n, dtype=np.int64)
    for k in range(1, n):
        qp[k] = qp[k - 1] * q
    ncls = 0
    for zi in range(nz):
        if labels[zi] >= 0:
            continue
        labels[zi] = ncls
        for ui in range(units.shape[0]):
            t = _alg_mul(sunits[ui], herm[zi], struct, add, mul)
            w = _alg_mul(t, units[ui], struct, add, mul)
            code = 0
            for k in range(n):
                code += w[k] * qp[k]
            idx = np.searchsorted(codes, code)
            if idx >= nz or codes[idx] != code:
                return labels, -1
            labels[idx] = ncls
        ncls += 1
    return labels, ncls


def batch_alg_mul(x, y, struct, add, mul):
    """Row-wise products in a structure-constant algebra (table arithmetic)."""
    x = np.atleast_2d(x)
    y = np.atleast_2d(y)
    N = max(x.shape[0], y.shape[0])
    n = struct.shape[0]
    out = np.zeros((N, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            nzk = np.flatnonzero(struct[i, j])
            if nzk.size == 0:
                continue
            c = mul[x[:, i], y[:, j]]
            if not np.any(c):
                continue
            for k in nzk:
                out[:, k] = add[out[:, k], mul[c, struct[i, j, k]]]
    return out


def _orbits_numpy(codes, herm, units, sunits, struct, add, mul, q):
    nz, n = herm.shape
    labels = np.full(nz, -1, dtype=np.int64)
    qp = q ** np.arange(n, dtype=np.int64)
    ncls = 0
    for zi in range(nz):
        if labels[zi] >= 0:
            continue
        labels[zi] = ncls
        t = batch_alg_mul(sunits, herm[zi][None, :], struct, add, mul)
        w = batch_alg_mul(t, units, struct, add, mul)
        wc = w @ qp
        idx = np.searchsorted(codes, wc)
        if np.any(idx >= nz) or np.any(codes[np.minimum(idx, nz - 1)] != wc):
            return labels, -1
        labels[idx] = ncls
        ncls += 1
    return labels, ncls


def hermitian_orbits(F: GF, codes, herm, units, sunits, struct, impl: str | None = None):
    """Orbit labels of the sorted hermitian elements under z -> sigma(e) z e.

    ``codes`` are the element codes (sum x_k q^k) of the rows of ``herm`` in
    increasing order, so every orbit's label is assigned at its least code.
    """
    impl = resolve_impl(impl)
    add, mul, neg, inv = field_tables(F)
    args = (np.ascontiguousarray(codes, dtype=np.int64), np.ascontiguousarray(herm, dtype=np.int64),
            np.ascontiguousarray(units, dtype=np.int64), np.ascontiguousarray(sunits, dtype=np.int64),
            np.ascontiguousarray(struct, dtype=np.int64), add, mul, F.q)
    if len(codes) == 0:
        return np.zeros(0, dtype=np.int64), 0
    if impl == "numba":
        labels, ncls = _orbits_numba(*args)
    else:
        labels, ncls = _orbits_numpy(*args)
    if ncls < 0:
        raise RuntimeError("orbit image left the hermitian set (algebra data inconsistent)")
    return labels, int(ncls)
