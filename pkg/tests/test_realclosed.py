import random
from fractions import Fraction

import pytest

from gforms import realclosed as rc
from gforms.realclosed import CASES, I, ONE, ExactForm, Quat

WITT_LIST = ["Z", "0", "Z/2Z", "0", "Z", "Z", "Z", "Z/2Z", "Z/2Z", "Z"]


def q(*parts):
    return Quat.of(*parts)


def test_quaternion_arithmetic():
    i, j, k = rc.I, rc.J, rc.K
    assert i * j == k and j * k == i and k * i == j
    assert i * i == -ONE
    x = q(1, 2, -1, Fraction(1, 2))
    assert x * x.inverse() == ONE


def test_signature_example():
    f = ExactForm(CASES[0], [[q(1), q(0), q(0)], [q(0), q(-1), q(0)], [q(0), q(0), q(2)]])
    inv = rc.classify_case(f)
    assert inv.values == (2, 1) and inv.witt == 1


def test_alternating_plane():
    f = ExactForm(CASES[1], [[q(0), q(1)], [q(-1), q(0)]])
    assert rc.classify_case(f).values == (2,)


def test_unique_rank_one_class():
    case = CASES[7]
    f = ExactForm(case, [[I]])
    g = ExactForm(case, [[q(0, 3)]])
    assert rc.is_isometric_exact(f, g)
    assert rc.classify_case(f).witt_group == "Z/2Z"


def test_witt_classes_examples():
    hyp = ExactForm(CASES[0], [[q(0), q(1)], [q(1), q(0)]])
    assert rc.witt_class_case(hyp) == 0
    one = ExactForm(CASES[2], [[q(1)]])
    three = rc.n_fold(one, 3)
    assert rc.witt_class_case(one) == rc.witt_class_case(three) == 1


def test_witt_group_list():
    assert [rc.witt_group_of_case(c) for c in CASES] == WITT_LIST


@pytest.mark.parametrize("case", CASES, ids=[c.label() for c in CASES])
def test_div2_and_congruence_invariance(case):
    rng = random.Random(7)
    for _ in range(4):
        n = 2 if case.involution == "trivial" and case.epsilon == -1 else rng.randint(1, 3)
        f = rc.random_form(case, n, rng)
        g = rc.random_form(case, n, rng)
        P = rc.random_invertible(rng, case.ring, n)
        h = ExactForm(case, rc.congruent(case.involution, P, f.gram))
        assert rc.classify_case(h) == rc.classify_case(f)
        assert rc.is_isometric_exact(rc.n_fold(f, 2), rc.n_fold(g, 2)) == rc.is_isometric_exact(f, g)


@pytest.mark.parametrize("kind", ["trivial", "conjugation", "orthogonal"])
def test_diagonalization_reconstructs(kind):
    ring = "k" if kind == "trivial" else "quaternion"
    case = rc.CaseDescriptor(ring, "hyperbolic" if kind == "conjugation" else kind, 1)
    rng = random.Random(3)
    f = rc.random_form(case, 3, rng)
    P, diag = rc.diagonalize(case.involution, f.gram)
    D = rc.congruent(case.involution, P, f.gram)
    for i in range(3):
        for j in range(3):
            assert D[i][j] == (diag[i] if i == j else rc.ZERO)


def test_rejects_non_hermitian():
    with pytest.raises(rc.ExactFormError):
        ExactForm(CASES[0], [[q(1), q(2)], [q(3), q(1)]])
    with pytest.raises(rc.ExactFormError):
        ExactForm(CASES[0], [[q(0, 1)]])
