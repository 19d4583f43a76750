import pytest

from gforms import burnside as bn
from gforms import groups as gr


def orbit_stabilizer_counts(X, S):
    """Orbit sizes of the G-set X restricted to S (independent orbit walk)."""
    seen, sizes = set(), []
    for x in range(X.size):
        if x in seen:
            continue
        orb = {int(X.action[s, x]) for s in S.elements}
        seen |= orb
        sizes.append(len(orb))
    return sorted(sizes)


def ring(name):
    return bn.burnside_ring(gr.catalog_group(name))


def test_s3_mark_table():
    R = ring("S3")
    assert R.marks == [[6, 3, 2, 1], [0, 1, 0, 1], [0, 0, 2, 1], [0, 0, 0, 1]]
    assert bn.mark_table_csv(R.group).splitlines()[1] == "H0,6,3,2,1"


def test_decompose_and_marks():
    C2 = gr.catalog_group("C2")
    x = bn.decompose_gset(gr.regular_gset(C2))
    assert x.coeffs == (1, 0)
    assert x.ghost() == (2, 0)
    assert ring("C2").one().ghost() == (1, 1)
    S3 = gr.catalog_group("S3")
    Q = bn.decompose_gset(gr.coset_action(S3, gr.sylow2(S3)))
    assert Q.ghost() == (3, 1, 0, 0)


def test_restricted_cosets_orbits():
    G = gr.catalog_group("S3")
    S = gr.sylow2(G)
    X = gr.coset_action(G, S)
    assert orbit_stabilizer_counts(X, S) == [1, 2]
    q = bn.restrict(S, bn.decompose_gset(X))
    R = bn.burnside_ring(S.as_group)
    assert q == R.one() + R.basis(0)


def test_multiplication_examples():
    R2 = ring("C2")
    b = R2.basis(0)
    assert b * b == 2 * b
    R = ring("S3")
    Q = R.basis(1)
    assert Q * Q == Q + R.basis(0)
    assert Q * R.one() == Q


def test_spectral_examples():
    S = gr.sylow2(gr.catalog_group("S3"))
    R = bn.burnside_ring(S.as_group)
    x = R.one() + R.basis(0)
    sd = bn.spectral(x)
    assert sd.ghost == (3, 1) and sd.char_poly == (3, -4, 1) and sd.norm == 3
    one = bn.spectral(ring("S3").one())
    assert one.norm == 1 and one.char_poly == (1, -4, 6, -4, 1)
    sq = bn.spectral(ring("S3").basis(1))
    assert sq.norm == 0 and sq.char_poly == (0, 0, 3, -4, 1)


def test_division_polynomial_examples():
    S = gr.sylow2(gr.catalog_group("S3"))
    R = bn.burnside_ring(S.as_group)
    F, N = bn.division_polynomial(R.one() + R.basis(0))
    assert (F, N) == ((4, -1), 3)
    assert bn.to_string(F) == "4 - t"
    F, N = bn.division_polynomial(R.basis(0))
    assert N == 0 and F == (2, -1)


def test_induce_restrict_examples():
    G = gr.catalog_group("S3")
    S = gr.sylow2(G)
    A = bn.burnside_ring(S.as_group)
    assert bn.induce(S, A.one()) == bn.burnside_ring(G).basis(1)
    assert bn.induce(S, A.basis(0)) == bn.burnside_ring(G).basis(0)
    W = gr.whole_group(G)
    y = bn.burnside_ring(G).basis(2)
    assert bn.restrict(W, y) == y
    T = gr.trivial_subgroup(G)
    assert bn.restrict(T, bn.burnside_ring(G).basis(1)).coeffs == (3,)


@pytest.mark.parametrize("name", ["S3", "S4", "A4", "D6"])
def test_projection_suite_passes(name):
    rep = bn.projection_suite(gr.catalog_group(name))
    assert rep.passed and rep.nonvacuous > 0
    assert rep.data["n"] % 2 == 1


def test_projection_suite_trivial_subgroup_pair():
    G = gr.catalog_group("C3")
    rep = bn.projection_suite(G, gr.whole_group(G))
    assert rep.passed and rep.data["n"] == 1 and rep.data["F"] == "2 - t"


def test_spec_connected():
    assert bn.spec_connected(gr.catalog_group("C2")) == (True, None)
    assert bn.spec_connected(gr.catalog_group("C1")) == (True, None)
    conn, e = bn.spec_connected(gr.catalog_group("A5"))
    assert not conn and e * e == e and not e.is_zero() and e != e.ring.one()
