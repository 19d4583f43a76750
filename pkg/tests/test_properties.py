import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gforms import forms as fo
from gforms import linalg as la
from gforms import wittlab as wl
from gforms.burnside import BurnsideRing
from gforms import groups as gr
from gforms.isometry import is_isometric, is_witness

GROUPS = ("C1", "C2", "C3", "S3")


@st.composite
def spaces(draw, eps=st.sampled_from((1, -1)), max_dim=2):
    group = draw(st.sampled_from(GROUPS))
    q = draw(st.sampled_from((3, 5)))
    e = draw(eps)
    seed = draw(st.integers(0, 10**6))
    rng = np.random.default_rng(seed)
    mods = wl.small_modules(group, q, max_dim)
    for _ in range(10):
        X = wl.random_space(mods[int(rng.integers(len(mods)))], e, rng)
        if X is not None:
            return X, rng
    return fo.hyperbolic(mods[0], e), rng


@given(spaces())
def test_isometry_reflexive_with_identity_witness(data):
    X, _ = data
    v = is_isometric(X, X, "both")
    assert v.isometric and is_witness(X, X, v.witness)


@given(spaces())
def test_isometry_symmetric_via_inverse_witness(data):
    X, rng = data
    Y = wl.conjugation_twist(X, int(rng.integers(X.group.order)))
    v = is_isometric(X, Y, "both")
    if v.isometric:
        assert is_witness(X, Y, v.witness)
        assert is_witness(Y, X, la.inverse(X.field, v.witness))
    assert is_isometric(Y, X, "both").isometric == v.isometric


@given(spaces(), st.data())
def test_scaling_by_square_is_isometric(data, draw):
    X, _ = data
    F = X.field
    c = draw.draw(st.integers(1, F.q - 1))
    Y = fo.scale_form(X, F.mul(c, c))
    v = is_isometric(X, Y, "both")
    assert v.isometric and is_witness(X, Y, v.witness)


@given(spaces(eps=st.just(1), max_dim=1))
def test_sum_with_negative_is_hyperbolic(data):
    X, _ = data
    S = fo.orthogonal_sum(X, fo.negate(X))
    H = fo.hyperbolic(X.module, X.epsilon)
    assert is_isometric(S, H, "both").isometric


@given(spaces(max_dim=1))
def test_hyperbolic_of_dual(data):
    X, _ = data
    M = X.module
    assert is_isometric(fo.hyperbolic(M, X.epsilon), fo.hyperbolic(M.dual, X.epsilon), "both").isometric


@given(spaces(max_dim=1))
def test_orthogonal_sum_commutes(data):
    X, rng = data
    Y = wl.random_space(X.module, X.epsilon, rng) or X
    v = is_isometric(fo.orthogonal_sum(X, Y), fo.orthogonal_sum(Y, X), "both")
    assert v.isometric


def _orbit_decomposition(R, X):
    """Coefficients of a G-set by brute-force orbits and stabilizer classes."""
    G = R.group
    coeffs = [0] * R.h
    seen = np.zeros(X.size, dtype=bool)
    for x in range(X.size):
        if seen[x]:
            continue
        seen[X.action[:, x]] = True
        stab = gr.make_subgroup(G, [g for g in range(G.order) if X.action[g, x] == x])
        coeffs[R.classes.index_of(stab)] += 1
    return coeffs


def _product_gset(X, Y):
    a = X.action[:, :, None] * Y.size + Y.action[:, None, :]
    return gr.GSet(X.group, a.reshape(X.group.order, -1))


@settings(max_examples=15)
@given(st.sampled_from(["C2", "C3", "S3", "C4", "V4", "D4", "A4"]), st.data())
def test_basis_products_match_cartesian_products(name, data):
    G = gr.catalog_group(name)
    R = BurnsideRing(G)
    i = data.draw(st.integers(0, R.h - 1))
    j = data.draw(st.integers(0, R.h - 1))
    P = _product_gset(R.basis_gsets[i], R.basis_gsets[j]).validate()
    assert list((R.basis(i) * R.basis(j)).coeffs) == _orbit_decomposition(R, P)
    assert (R.basis(i) * R.basis(j)).ghost() == tuple(P.fixed_points(c.representative.elements)
                                                       for c in R.classes)
