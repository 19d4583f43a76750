"""Shared oracles for the test suite."""
import numpy as np

from gforms import hermitian as he


def partitions_agree(E, eps, budget=3 ** 8):
    """Exhaustive orbit partition == partition by structural invariants.

    Returns (agree, exhaustive class count, structural class count).
    """
    cs = he.class_set_exhaustive(E, eps, budget)
    if cs.elements.shape[0] == 0:
        st = he.classify_classes_structural(he.reduce_mod_radical(E).quotient, eps)
        return st.count == 0 or not _has_hermitian_units(E, eps), 0, st.count
    red = he.reduce_mod_radical(E)
    st = he.classify_classes_structural(red.quotient, eps)
    inv = [st.invariant(red.proj(z)) for z in cs.elements]
    by_label = {}
    for lab, key in zip(cs.labels.tolist(), inv):
        by_label.setdefault(lab, set()).add(key)
    one_key_per_class = all(len(v) == 1 for v in by_label.values())
    keys = [next(iter(v)) for v in by_label.values()]
    distinct = len(set(keys)) == len(keys)
    return one_key_per_class and distinct and st.count == cs.count, cs.count, st.count


def _has_hermitian_units(E, eps):
    return he.hermitian_elements(E, eps).shape[0] > 0


def chain_witness_ok(red, z, z2, eps):
    """equivalence_chain gives e with sigma(e) z e = z2."""
    E = red.algebra
    e, factors = red.equivalence_chain(z, z2, eps)
    lhs = E.mul(E.mul(E.sig(e), z), e)
    return np.array_equal(lhs, np.asarray(z2)) and E.is_unit(e), factors


def rational_rank(rows):
    """Rank over Q of an integer matrix, by fraction Gaussian elimination."""
    from fractions import Fraction
    M = [[Fraction(int(v)) for v in r] for r in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                f = M[i][c] / M[rank][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def _mat_all(p, d):
    """Every d x d matrix over F_p, shape (p**(d*d), d, d)."""
    grid = np.indices((p,) * (d * d)).reshape(d * d, -1).T
    return grid.reshape(-1, d, d).astype(np.int64)


def _det_mod(A, p):
    return int(round(np.linalg.det(A))) % p


def cyclic_reps(G, p, d):
    """One matrix representation per GL_d(F_p)-conjugacy class, for cyclic G.

    Returns arrays of shape (|G|, d, d) built from the image A of a generator.
    """
    n = G.order
    mats = _mat_all(p, d)
    gl = [A for A in mats if _det_mod(A, p) != 0]
    eye = np.eye(d, dtype=np.int64)

    def power(A, k):
        R = eye
        for _ in range(k):
            R = (R @ A) % p
        return R

    roots = [A for A in gl if np.array_equal(power(A, n), eye)]
    inv = {P.tobytes(): np.round(np.linalg.inv(P) * np.linalg.det(P)).astype(np.int64) for P in gl}
    seen, out = set(), []
    gen = G.generators[0] if G.generators else 0
    for A in roots:
        if A.tobytes() in seen:
            continue
        for P in gl:
            adj = inv[P.tobytes()]
            dinv = pow(_det_mod(P, p), p - 2, p)
            B = (P @ A @ adj * dinv) % p
            seen.add(B.tobytes())
        rep = np.zeros((n, d, d), dtype=np.int64)
        for k in range(n):
            rep[G.power(gen, k)] = power(A, k)
        out.append(rep)
    return out


def invariant_grams(rep, p, eps):
    """All nondegenerate eps-symmetric Grams B with A^T B A = B for every A in rep."""
    d = rep.shape[1]
    out = []
    for B in _mat_all(p, d):
        if not np.array_equal(B.T % p, (eps * B) % p) or _det_mod(B, p) == 0:
            continue
        if all(np.array_equal((A.T @ B @ A) % p, B) for A in rep):
            out.append(B)
    return out
