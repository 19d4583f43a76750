import numpy as np
import pytest

from gforms import forms as fo
from gforms import groups as gr
from gforms import linalg as la
from gforms.field import make_field
from gforms.isometry import is_isometric, is_witness

F3, F5 = make_field(3), make_field(5)


def iso(X, Y):
    return is_isometric(X, Y, "both").isometric


def test_sum_examples():
    X = fo.diagonal_form(F5, [1, 2])
    assert fo.orthogonal_sum(X, fo.zero_space(F5, X.group)).gram.tolist() == X.gram.tolist()
    one = fo.diagonal_form(F5, [1])
    assert fo.orthogonal_sum(one, one).gram.tolist() == [[1, 0], [0, 1]]
    assert fo.n_fold(one, 3).gram.tolist() == np.eye(3, dtype=int).tolist()


def test_mixed_epsilon_rejected():
    H = fo.hyperbolic(fo.trivial_module(F5, gr.catalog_group("C1")), -1)
    with pytest.raises(fo.FormError):
        fo.orthogonal_sum(fo.diagonal_form(F5, [1]), H)


def test_tensor_examples():
    G = gr.catalog_group("C2")
    X = fo.regular_form(G, F5)
    assert np.array_equal(fo.tensor_scalar_form([[1]], X).gram, X.gram)
    assert iso(fo.tensor_scalar_form([[1, 0], [0, 1]], X), fo.orthogonal_sum(X, X))
    assert iso(fo.tensor_scalar_form([[1, 0], [0, 4]], X), fo.hyperbolic(X.module, 1))


def test_hyperbolic_examples():
    N = fo.trivial_module(F5, gr.catalog_group("C1"))
    assert fo.hyperbolic(N, 1).gram.tolist() == [[0, 1], [1, 0]]
    assert fo.hyperbolic(N, -1).gram.tolist() == [[0, 1], [4, 0]]
    G = gr.catalog_group("C3")
    M = fo.permutation_module(gr.regular_gset(G), F5)
    lhs = fo.hyperbolic(fo.direct_sum_modules(fo.trivial_module(F5, G), fo.trivial_module(F5, G).dual), 1)
    rhs = fo.n_fold(fo.hyperbolic(fo.trivial_module(F5, G), 1), 2)
    assert iso(lhs, rhs)
    assert iso(fo.hyperbolic(M, 1), fo.hyperbolic(M.dual, 1))


def test_induce_restrict_examples():
    G = gr.catalog_group("S3")
    T = gr.trivial_subgroup(G)
    unit = fo.diagonal_form(F5, [1], T.as_group)
    R = fo.induce_space(T, unit)
    assert iso(R, fo.regular_form(G, F5))
    S = gr.sylow2(G)
    Q = fo.induce_space(S, fo.diagonal_form(F5, [1], S.as_group))
    assert iso(Q, fo.permutation_form(gr.coset_action(G, S), F5))
    W = gr.whole_group(G)
    X = fo.regular_form(G, F5)
    assert np.array_equal(fo.restrict_space(X, W).gram, X.gram)
    P = fo.permutation_form(gr.coset_action(G, S), F5)
    assert fo.restrict_space(P, T).gram.tolist() == np.eye(3, dtype=int).tolist()


def test_permutation_form_of_disjoint_union():
    G = gr.catalog_group("S3")
    X, Y = gr.coset_action(G, gr.sylow2(G)), gr.coset_action(G, gr.whole_group(G))
    lhs = fo.permutation_form(X.disjoint_union(Y), F3)
    rhs = fo.orthogonal_sum(fo.permutation_form(X, F3), fo.permutation_form(Y, F3))
    assert np.array_equal(lhs.gram, rhs.gram) and np.array_equal(lhs.rep, rhs.rep)


def test_extension_makes_two_a_square():
    two = fo.diagonal_form(F5, [2])
    one = fo.diagonal_form(F5, [1])
    assert not iso(one, two)
    assert iso(fo.extend_scalars(one, 2), fo.extend_scalars(two, 2))
    assert fo.extend_scalars(one, 1) is one


def test_transfer_examples():
    K = make_field(3, 2)
    unit = fo.diagonal_form(K, [1])
    T = fo.scharlau_transfer(unit, 1)
    assert T.field is F3 and T.dim == 2 and la.det(F3, T.gram) != 0
    # Tr(z^2) on the basis 1, x of F_9 with x^2 = -1: Gram [[2, 0], [0, -2]]
    assert T.gram.tolist() == [[2, 0], [0, 1]]
    X = fo.diagonal_form(F5, [3])
    assert np.array_equal(fo.scharlau_transfer(X, 1).gram, X.gram)


@pytest.mark.parametrize("q,m", [(3, 3), (5, 3), (7, 3), (3, 5)])
def test_scharlau_section(q, m):
    a, gram = fo.scharlau_section(q, m)
    k = make_field(q)
    assert fo.witt_class_plain(k, gram) == fo.witt_class_plain(k, [[1]])
    assert 1 <= a < q ** m


def test_transfer_of_extension_is_tensor():
    K = make_field(3, 3)
    a, qs = fo.scharlau_section(3, 3)
    G = gr.catalog_group("C2")
    X = fo.regular_form(G, F3)
    lhs = fo.scharlau_transfer(fo.extend_scalars(X, 3), a)
    rhs = fo.tensor_scalar_form(qs, X)
    assert iso(lhs, rhs)


def test_witt_class_plain_examples():
    assert fo.witt_class_plain(F5, [[0, 1], [1, 0]]) == (0, 0)
    assert fo.witt_class_plain(F5, [[1]]) == (1, 0)
    assert fo.witt_class_plain(F5, np.diag([1, 1])) == fo.witt_class_plain(F5, np.diag([2, 2]))


def test_invariance_checked_on_construction():
    G = gr.catalog_group("C2")
    rep = np.array([np.eye(2, dtype=np.int64), np.array([[0, 1], [1, 0]])])
    with pytest.raises(fo.FormError):
        fo.EquivariantSpace(F5, G, 1, np.array([[1, 0], [0, 2]]), rep)
    with pytest.raises(fo.FormError):
        fo.EquivariantSpace(F5, G, 1, np.array([[1, 1], [1, 1]]), rep)


def test_dual_of_dual():
    G = gr.catalog_group("S3")
    M = fo.permutation_module(gr.regular_gset(G), F5)
    assert fo.dual_of_dual_is_identity(M)


def test_isometry_remark_over_f5():
    one, two = fo.diagonal_form(F5, [1]), fo.diagonal_form(F5, [2])
    assert not is_isometric(one, two, "both").isometric
    v = is_isometric(fo.n_fold(one, 2), fo.n_fold(two, 2), "both")
    assert v.isometric and is_witness(fo.n_fold(one, 2), fo.n_fold(two, 2), v.witness)
    X = fo.regular_form(gr.catalog_group("S3"), F5)
    w = is_isometric(X, X, "exhaustive")
    assert w.isometric and is_witness(X, X, w.witness)
