import numpy as np
import pytest

from gforms import forms as fo
from gforms import groups as gr
from gforms import linalg as la
from gforms.field import make_field
from gforms.galois import delta_condition, galois_algebra, sdnb_search, trace_form, trace_gram
from gforms.isometry import is_isometric


def test_split_algebra_is_permutation_form():
    G = gr.catalog_group("S3")
    L = galois_algebra(G, 5, 0)
    assert L.degree == 1
    X = trace_form(L)
    assert np.array_equal(X.gram, np.eye(6, dtype=np.int64))
    assert is_isometric(X, fo.regular_form(G, make_field(5)), "both").isometric
    x = sdnb_search(L)
    assert x.tolist() == [1, 0, 0, 0, 0, 0]


def test_c2_quadratic_extension():
    C2 = gr.catalog_group("C2")
    L = galois_algebra(C2, 3, 1)
    assert L.degree == 2 and L.dim == 2
    K = L.ext
    # the nontrivial element acts as Frobenius on the value at the identity
    for b in range(2):
        v = L.values[b]
        moved = L.to_values(L.action[1][:, b])
        assert moved[0] == K.frobenius(int(v[0]), 1)
    F3 = make_field(3)
    disc = la.det(F3, trace_gram(L))
    # discriminant of F_9/F_3 is a non-square (the extension is nontrivial)
    assert F3.square_class(disc) == 1
    assert trace_gram(L).tolist() == [[2, 0], [0, 1]]


def test_c2_q3_has_no_self_dual_normal_basis():
    L = galois_algebra(gr.catalog_group("C2"), 3, 1)
    assert sdnb_search(L) is None
    # independent check: no element x with q(x,x)=1, q(gx,x)=0
    F = L.field
    found = False
    for a in range(3):
        for b in range(3):
            if delta_condition(L, np.array([a, b])):
                found = True
    assert not found


def test_c3_over_f7():
    L = galois_algebra(gr.catalog_group("C3"), 7, 1)
    x = sdnb_search(L)
    assert x is not None and delta_condition(L, x)


def test_split_c2_is_f3_squared_with_swap():
    L = galois_algebra(gr.catalog_group("C2"), 3, 0)
    assert L.degree == 1
    assert L.action[1].tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("name", ["C4", "V4", "D4", "Q8", "A4"])
def test_all_classes_validate(name):
    G = gr.catalog_group(name)
    for cls in G.conjugacy_classes():
        for q in (3, 5):
            L = galois_algebra(G, q, cls[0])
            X = trace_form(L)
            assert X.dim == G.order


def test_trace_form_forgetting_action_is_plain_trace_form():
    G = gr.catalog_group("C3")
    L = galois_algebra(G, 5, 1)
    X = trace_form(L)
    T = fo.restrict_space(X, gr.trivial_subgroup(G))
    assert np.array_equal(T.gram, trace_gram(L))
