import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gforms import intlin
from gforms import linalg as la
from gforms.field import make_field


def brute_det(F, A):
    n = A.shape[0]
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = 1
        for i in range(n):
            term = int(F.mul(term, int(A[i, perm[i]])))
        total = int(F.add(total, term if sign > 0 else int(F.neg(term))))
    return total


@given(st.sampled_from([3, 5, 9]), st.integers(1, 4), st.data())
def test_det_and_inverse(q, n, data):
    F = make_field(3, 2) if q == 9 else make_field(q)
    A = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n))).reshape(n, n)
    assert la.det(F, A) == brute_det(F, A)
    if la.det(F, A):
        assert np.array_equal(la.matmul(F, A, la.inverse(F, A)), la.identity(n))


@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_nullspace(rows, cols, data):
    F = make_field(5)
    A = np.array(data.draw(st.lists(st.integers(0, 4), min_size=rows * cols, max_size=rows * cols))).reshape(rows, cols)
    N = la.nullspace(F, A)
    assert N.shape[0] + la.rank(F, A) == cols
    if N.shape[0]:
        assert not la.matmul(F, A, N.T).any()


def test_smith_and_kernel():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    assert intlin.smith_invariants(A) == [2, 6, 12]
    K = intlin.integer_kernel([[1, 2, 3]], 3)
    assert intlin.lattice_rank(K) == 2
    for v in K:
        assert v[0] + 2 * v[1] + 3 * v[2] == 0


def test_lattice_equality_is_basis_independent():
    B1 = [[1, 0, 0], [0, 2, 0]]
    B2 = [[1, 2, 0], [0, -2, 0]]
    assert intlin.lattice_equal(B1, B2)
    assert not intlin.lattice_equal(B1, [[1, 0, 0], [0, 1, 0]])


@pytest.mark.parametrize("A", [[[4, 0], [0, 6]], [[1, 1], [1, -1]], [[3]]])
def test_smith_product_equals_determinant(A):
    from math import prod
    d = round(abs(np.linalg.det(np.array(A, dtype=float))))
    assert prod(intlin.smith_invariants(A)) == d
