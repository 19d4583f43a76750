"""The numba kernels and their numpy fallbacks must agree exactly."""
import numpy as np
import pytest

from gforms import forms as fo
from gforms import groups as gr
from gforms import hermitian as he
from gforms import kernels
from gforms._accel import HAVE_NUMBA
from gforms.algebra import matrix_algebra, truncated_poly_algebra
from gforms.field import make_field

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


def pairs():
    F3, F5 = make_field(3), make_field(5)
    C2, S3 = gr.catalog_group("C2"), gr.catalog_group("S3")
    yield fo.diagonal_form(F5, [1, 1]), fo.diagonal_form(F5, [2, 2])
    yield fo.diagonal_form(F5, [1]), fo.diagonal_form(F5, [2])
    yield fo.diagonal_form(F3, [1, 1, 2]), fo.diagonal_form(F3, [2, 2, 2])
    yield fo.diagonal_form(F3, [1, 2, 1, 2]), fo.hyperbolic(fo.trivial_module(F3, gr.catalog_group("C1"), 2), 1)
    yield fo.regular_form(C2, F5), fo.scale_form(fo.regular_form(C2, F5), 2)
    yield fo.regular_form(S3, F3), fo.regular_form(S3, F3)
    yield fo.regular_form(S3, F5), fo.scale_form(fo.regular_form(S3, F5), 2)


@pytest.mark.parametrize("X,Y", list(pairs()))
def test_isometry_search_agrees(X, Y):
    H = fo.hom_basis(X.module, Y.module)
    a = kernels.isometry_search(X.field, H, X.gram, Y.gram, 1 << 22, "numba")
    b = kernels.isometry_search(X.field, H, X.gram, Y.gram, 1 << 22, "numpy")
    assert a[0] == b[0] and a[2] == b[2]
    if a[0] == 1:
        assert np.array_equal(a[1], b[1])


def test_budget_status_agrees():
    F3 = make_field(3)
    X, Y = fo.diagonal_form(F3, [1, 1, 1, 1]), fo.diagonal_form(F3, [1, 1, 1, 2])
    H = fo.hom_basis(X.module, Y.module)
    a = kernels.isometry_search(F3, H, X.gram, Y.gram, 50, "numba")
    b = kernels.isometry_search(F3, H, X.gram, Y.gram, 50, "numpy")
    assert a[0] == b[0] == -1


@pytest.mark.parametrize("q", [3, 5, 9])
def test_batch_invertible_agrees(q):
    F = make_field(3, 2) if q == 9 else make_field(q)
    rng = np.random.default_rng(q)
    mats = rng.integers(0, F.q, size=(300, 3, 3))
    assert np.array_equal(kernels.batch_invertible(F, mats, "numba"),
                          kernels.batch_invertible(F, mats, "numpy"))


@pytest.mark.parametrize("build", [
    lambda: matrix_algebra(make_field(3), 2, "transpose"),
    lambda: truncated_poly_algebra(make_field(5), 2),
])
def test_hermitian_orbits_agree(build):
    E = build()
    a = he.class_set_exhaustive(E, 1, impl="numba")
    b = he.class_set_exhaustive(E, 1, impl="numpy")
    assert a.count == b.count
    assert np.array_equal(a.labels, b.labels)
