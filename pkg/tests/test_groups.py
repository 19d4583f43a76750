from itertools import combinations

import numpy as np
import pytest

from gforms import groups as gr


def brute_subgroups(G):
    """All subsets closed under multiplication (independent of the library)."""
    out = []
    others = range(1, G.order)
    for r in range(G.order):
        for extra in combinations(others, r):
            S = {0, *extra}
            if G.order % len(S):
                continue
            if all(int(G.table[a, b]) in S for a in S for b in S):
                out.append(frozenset(S))
    return out


def brute_classes(G, subs):
    seen, classes = set(), 0
    for H in subs:
        if H in seen:
            continue
        classes += 1
        for g in range(G.order):
            seen.add(frozenset(G.conj(g, h) for h in H))
    return classes


def test_permutation_generators_give_order_six():
    G = gr.build_group({"gens": ["(1 2)", "(1 2 3)"]})
    assert G.order == 6


def test_trivial_and_table_groups():
    C1 = gr.build_group("C1")
    assert C1.order == 1 and C1.table.tolist() == [[0]]
    C2 = gr.build_group({"table": [[0, 1], [1, 0]]})
    assert C2.order == 2 and C2.is_abelian()


@pytest.mark.parametrize("name", ["C1", "C2", "C4", "V4", "S3", "D4", "Q8", "A4"])
def test_group_axioms(name):
    G = gr.catalog_group(name)
    T = G.table
    n = G.order
    assert np.array_equal(T[0], np.arange(n)) and np.array_equal(T[:, 0], np.arange(n))
    assert all(T[a, G.inverse[a]] == 0 for a in range(n))
    for a in range(n):
        assert np.array_equal(T[T[a]], T[a][T])   # (ab)c = a(bc) for all b, c


@pytest.mark.parametrize("name,subs,classes", [("S3", 6, 4), ("C2", 2, 2), ("A4", 10, 5), ("D4", 10, 8)])
def test_subgroup_counts_match_brute_force(name, subs, classes):
    G = gr.catalog_group(name)
    brute = brute_subgroups(G)
    assert len(brute) == subs
    assert brute_classes(G, brute) == classes
    assert len(gr.all_subgroups(G)) == subs
    assert len(gr.subgroup_classes(G)) == classes


def test_a5_subgroup_classes():
    assert len(gr.subgroup_classes(gr.catalog_group("A5"))) == 9


@pytest.mark.parametrize("name,order", [("S3", 2), ("C3", 1), ("S4", 8), ("A4", 4), ("D5", 2)])
def test_sylow2_orders(name, order):
    S = gr.sylow2(gr.catalog_group(name))
    assert S.order == order


def test_sylow2_of_s4_is_dihedral():
    S = gr.sylow2(gr.catalog_group("S4")).as_group
    assert not S.is_abelian()
    assert sorted(int(x) for x in S.element_orders).count(2) == 5   # D4 has 5 involutions


@pytest.mark.parametrize("name,expected", [("S4", True), ("A5", False), ("C1", True), ("SL23", True)])
def test_solvable(name, expected):
    assert gr.is_solvable(gr.catalog_group(name)) is expected


def test_coset_actions():
    G = gr.catalog_group("S3")
    assert gr.coset_action(G, gr.sylow2(G)).size == 3
    assert gr.coset_action(G, gr.whole_group(G)).size == 1
    C4 = gr.catalog_group("C4")
    X = gr.coset_action(C4, gr.trivial_subgroup(C4))
    assert X.size == 4
    for g in range(1, 4):
        assert X.fixed_points([g]) == 0


def test_catalog_orders_bounded():
    for G in gr.catalog():
        assert G.order <= 60
