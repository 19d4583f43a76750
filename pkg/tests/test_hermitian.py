import numpy as np
import pytest

from gforms import forms as fo
from gforms import groups as gr
from gforms import hermitian as he
from gforms.algebra import (field_algebra, matrix_algebra, product_algebra, swap_algebra,
                            truncated_poly_algebra, upper_triangular_algebra)
from gforms.field import make_field

from oracles import chain_witness_ok, partitions_agree

F3 = make_field(3)
C1 = gr.catalog_group("C1")


def F3_alg():
    return field_algebra(F3, 1)


def test_endomorphism_algebra_examples():
    E = he.endomorphism_algebra(fo.diagonal_form(F3, [1]))
    assert E.n == 1 and E.sigma.tolist() == [[1]]
    C2 = gr.catalog_group("C2")
    E2 = he.endomorphism_algebra(fo.regular_form(C2, F3))
    assert E2.n == 2 and np.array_equal(E2.sigma, np.eye(2))
    assert np.array_equal(E2.struct, E2.struct.transpose(1, 0, 2))     # commutative
    H = fo.hyperbolic(fo.trivial_module(F3, C1), 1)
    EH = he.endomorphism_algebra(H)
    assert EH.n == 4


def test_class_set_examples():
    assert he.class_set_exhaustive(F3_alg(), 1).count == 2
    assert he.class_set_exhaustive(swap_algebra(F3_alg()), 1).count == 1
    assert he.class_set_exhaustive(F3_alg(), -1).count == 0


def test_radical_examples():
    J, _ = he.jacobson_radical(product_algebra(F3_alg(), F3_alg()))
    assert J.shape[0] == 0
    T = upper_triangular_algebra(F3)
    J, _ = he.jacobson_radical(T)
    assert J.tolist() == [[0, 1, 0]]             # strictly upper triangular
    x = J[0]
    assert not np.any(T.mul(x, x))
    P = truncated_poly_algebra(F3, 2)
    J, _ = he.jacobson_radical(P)
    assert J.tolist() == [[0, 1]]


@pytest.mark.parametrize("build", [
    lambda: upper_triangular_algebra(F3), lambda: truncated_poly_algebra(F3, 3),
    lambda: matrix_algebra(F3, 2, "transpose"), lambda: product_algebra(F3_alg(), F3_alg()),
])
def test_radical_methods_agree(build):
    E = build()
    a, _ = he.jacobson_radical(E, "meataxe")
    b, _ = he.jacobson_radical(E, "scan")
    assert np.array_equal(a, b)


def test_radical_chain_in_truncated_polynomials():
    E = truncated_poly_algebra(F3, 2)
    red = he.reduce_mod_radical(E)
    ok, factors = chain_witness_ok(red, E.unit, np.array([1, 1]), 1)
    assert ok and len(factors) == 1
    cs = he.class_set_exhaustive(E, 1)
    assert cs.class_of([1, 0]) == cs.class_of([1, 1])


def test_upper_triangular_bijection():
    T = upper_triangular_algebra(F3)
    red = he.reduce_mod_radical(T)
    assert he.class_set_exhaustive(T, 1).count == he.class_set_exhaustive(red.quotient, 1).count


def test_split_semisimple_kinds():
    comps = he.split_semisimple(swap_algebra(F3_alg()))
    assert [c.kind for c in comps] == ["swap"]
    symp = matrix_algebra(F3, 2, "adjoint", [[0, 1], [2, 0]])
    assert [(c.kind, c.m) for c in he.split_semisimple(symp)] == [("symplectic", 2)]
    orth = matrix_algebra(F3, 2, "adjoint", [[0, 1], [1, 0]])
    assert [c.kind for c in he.split_semisimple(orth)] == ["orthogonal"]
    assert [c.kind for c in he.split_semisimple(field_algebra(F3, 2, 1))] == ["unitary"]


def test_structural_counts():
    assert he.classify_classes_structural(F3_alg(), 1).count == 2
    assert he.classify_classes_structural(swap_algebra(F3_alg()), 1).count == 1
    symp = matrix_algebra(F3, 2, "adjoint", [[0, 1], [2, 0]])
    assert he.classify_classes_structural(symp, 1).count == 1
    assert he.class_set_exhaustive(symp, 1).count == 1


@pytest.mark.parametrize("build,eps", [
    (lambda: F3_alg(), 1), (lambda: swap_algebra(F3_alg()), 1), (lambda: field_algebra(F3, 2, 1), 1),
    (lambda: field_algebra(F3, 2), 1), (lambda: matrix_algebra(F3, 2, "transpose"), 1),
    (lambda: matrix_algebra(F3, 2, "transpose"), -1),
    (lambda: matrix_algebra(F3, 2, "adjoint", [[0, 1], [2, 0]]), 1),
    (lambda: matrix_algebra(F3, 2, "adjoint", [[0, 1], [2, 0]]), -1),
    (lambda: upper_triangular_algebra(F3), 1), (lambda: truncated_poly_algebra(F3, 2), 1),
    (lambda: truncated_poly_algebra(F3, 3), 1), (lambda: truncated_poly_algebra(make_field(5), 2), 1),
])
def test_partitions_agree(build, eps):
    ok, ne, ns = partitions_agree(build(), eps)
    assert ok, (ne, ns)


def test_product_law():
    A, B = F3_alg(), matrix_algebra(F3, 2, "transpose")
    P = product_algebra(A, B)
    ca, cb, cp = (he.class_set_exhaustive(X, 1) for X in (A, B, P))
    assert cp.count == ca.count * cb.count
    pairs = set()
    for z in cp.elements:
        pairs.add((ca.class_of(z[:1]), cb.class_of(z[1:])))
        assert len(pairs) <= cp.count
    assert len(pairs) == cp.count


def test_diagonal_embedding():
    E = F3_alg()
    En, un = he.diagonal_embed(E, [1], 1)
    assert np.array_equal(un, [1])
    En, un = he.diagonal_embed(E, [1], 3)
    assert np.array_equal(un, En.unit)
    En, u2 = he.diagonal_embed(E, [2], 3)
    red = he.reduce_mod_radical(En)
    cs = he.classify_classes_structural(red.quotient, 1)
    assert cs.invariant(red.proj(un)) != cs.invariant(red.proj(u2))


def test_same_class_rungs_agree_with_enumeration():
    E = matrix_algebra(F3, 2, "transpose")
    cs = he.class_set_exhaustive(E, 1)
    for i, z1 in enumerate(cs.reps):
        for z2 in cs.elements[::7]:
            d = he.same_class(E, 1, z1, z2)
            assert d.same == (cs.class_of(z2) == i)
