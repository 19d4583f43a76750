"""Exact integer linear algebra: Hermite form, integer kernels, Smith invariants.

Matrices are lists of lists of Python ints (arbitrary precision).
"""
from __future__ import annotations

from math import gcd


def _copy(A):
    return [list(map(int, row)) for row in A]


def transpose(A, ncols: int | None = None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def _echelon(A, extra=None):
    """Row-reduce over Z with unimodular operations.

    Returns (E, T, pivots) where E = T*A is in row echelon form with positive
    pivots (entries above pivots are reduced into [0, pivot)).  ``extra``,
    when given, receives the same row operations (used to track T).
    """
    E = _copy(A)
    m = len(E)
    n = len(E[0]) if m else 0
    T = extra if extra is not None else [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        while True:
            rows = [i for i in range(r, m) if E[i][c] != 0]
            if not rows:
                break
            k = min(rows, key=lambda i: abs(E[i][c]))
            if k != r:
                E[r], E[k] = E[k], E[r]
                T[r], T[k] = T[k], T[r]
            done = True
            for i in range(r + 1, m):
                if E[i][c]:
                    f = E[i][c] // E[r][c]
                    if f:
                        E[i] = [x - f * y for x, y in zip(E[i], E[r])]
                        T[i] = [x - f * y for x, y in zip(T[i], T[r])]
                    if E[i][c]:
                        done = False
            if done:
                break
        if r < m and E[r][c] != 0:
            if E[r][c] < 0:
                E[r] = [-x for x in E[r]]
                T[r] = [-x for x in T[r]]
            for i in range(r):
                f = E[i][c] // E[r][c]
                if f:
                    E[i] = [x - f * y for x, y in zip(E[i], E[r])]
                    T[i] = [x - f * y for x, y in zip(T[i], T[r])]
            pivots.append(c)
            r += 1
    return E, T, pivots


def hnf(A):
    """Hermite normal form (row style, zero rows dropped): canonical lattice basis."""
    if not A:
        return []
    E, _, piv = _echelon(A)
    return E[:len(piv)]


def integer_kernel(A, ncols: int | None = None):
    """Basis (rows, in Hermite form) of the lattice {x in Z^n : A x = 0}.

    The basis is saturated: it spans the full kernel lattice, not a finite
    index sublattice, because it is read off a unimodular transform.
    """
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    At = transpose(A)
    E, T, piv = _echelon(At)
    kern = [T[i] for i in range(len(piv), n)]
    return hnf(kern) if kern else []


def smith_invariants(A):
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    M = _copy(A)
    m = len(M)
    n = len(M[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        M[t], M[i0] = M[i0], M[t]
        for row in M:
            row[t], row[j0] = row[j0], row[t]
        while True:
            changed = False
            p = M[t][t]
            for i in range(t + 1, m):
                if M[i][t]:
                    f = M[i][t] // p
                    M[i] = [x - f * y for x, y in zip(M[i], M[t])]
                    if M[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if M[t][j]:
                    f = M[t][j] // p
                    for row in M:
                        row[j] -= f * row[t]
                    if M[t][j]:
                        changed = True
            if changed:
                entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n)
                           if M[i][j] and (i == t or j == t)]
                _, i0, j0 = min(entries)
                M[t], M[i0] = M[i0], M[t]
                for row in M:
                    row[t], row[j0] = row[j0], row[t]
                continue
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p]
            if bad:
                i, _ = bad[0]
                M[t] = [x + y for x, y in zip(M[t], M[i])]
                continue
            break
        diag.append(abs(M[t][t]))
        t += 1
    # normalise into a divisibility chain
    for a in range(len(diag)):
        for b in range(a + 1, len(diag)):
            g = gcd(diag[a], diag[b])
            l = diag[a] * diag[b] // g if g else 0
            diag[a], diag[b] = g, l
    return diag


def lattice_equal(B1, B2) -> bool:
    """Equality of the lattices spanned by two row bases."""
    return hnf(B1) == hnf(B2)


def lattice_rank(B) -> int:
    return len(hnf(B)) if B else 0


def cokernel_invariants(gens, ambient_dim: int):
    """Invariants of Z^d / span(gens): (torsion factors > 1, free rank)."""
    if not gens:
        return [], ambient_dim
    d = smith_invariants(gens)
    return [x for x in d if x != 1], ambient_dim - len(d)
