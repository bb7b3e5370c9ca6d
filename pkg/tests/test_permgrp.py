from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from endocert.catalog import CORE_CATALOG, catalog_group, group_source
from endocert.lowindex import has_proper_subgroup_of_index_dividing, is_valid_witness
from endocert.permgrp import (BudgetExceeded, CycleSyntaxError, PermGroup, conjugacy_classes,
                              cycle_type, format_cycles, has_proper_normal_subgroup_of_index_dividing,
                              normal_subgroups, parse_generators, parse_perm, perm_inv, perm_mul,
                              perm_order, perm_pow)

SMALL = [name for name in CORE_CATALOG if catalog_group(name).order() <= 720]


@st.composite
def perms(draw, n):
    return tuple(draw(st.permutations(list(range(n)))))


@st.composite
def groups(draw, max_n=6, max_gens=3):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, max_gens))
    gens = [draw(perms(n)) for _ in range(k)]
    return PermGroup(gens, n)


def test_parse_and_format_round_trip():
    gens, n = parse_generators("(1 2),(1 2 3 4 5)")
    assert n == 5
    assert [format_cycles(g) for g in gens] == ["(1 2)", "(1 2 3 4 5)"]
    assert parse_perm("(1,2,3)(4 5)") == (1, 2, 0, 4, 3)
    assert format_cycles((0, 1, 2)) == "()"
    gens, n = parse_generators("(1 2); (3 4)", 6)
    assert n == 6 and len(gens) == 2


@pytest.mark.parametrize("text,column", [("(1 2", 1), ("(1 a)", 4), ("(1 2)x", 6), ("(1 2),", 7)])
def test_parse_errors_report_column(text, column):
    with pytest.raises(CycleSyntaxError) as info:
        parse_generators(text)
    assert info.value.column == column


def test_parse_rejects_repeated_point():
    with pytest.raises(CycleSyntaxError):
        parse_perm("(1 2 1)")


def test_product_applies_left_factor_first():
    a = parse_perm("(1 2)", 3)
    b = parse_perm("(2 3)", 3)
    # 1 -> 2 under a, then 2 -> 3 under b
    assert perm_mul(a, b)[0] == 2
    assert perm_mul(a, perm_inv(a)) == (0, 1, 2)


@given(perms(7))
def test_order_and_powers(g):
    k = perm_order(g)
    assert perm_pow(g, k) == tuple(range(7))
    assert sum(cycle_type(g)) == 7


@given(groups())
def test_bsgs_order_matches_closure(G):
    elems = oracles.closure(G.generators, G.degree)
    assert G.order() == len(elems)
    assert G.transitivity_degree() == oracles.transitivity_degree(elems, G.degree)
    assert sorted(G.elements()) == sorted(elems)


@given(groups(), st.data())
def test_membership(G, data):
    elems = oracles.closure(G.generators, G.degree)
    g = data.draw(perms(G.degree))
    assert G.contains(g) == (g in elems)


@given(groups(max_n=5))
def test_conjugacy_classes_partition(G):
    elems = oracles.closure(G.generators, G.degree)
    classes = conjugacy_classes(G)
    assert classes[0] == [G.identity()]
    assert sum(len(c) for c in classes) == len(elems)
    for c in classes:
        x = c[0]
        assert set(c) == {oracles.compose(oracles.compose(oracles.inverse(g), x), g) for g in elems}


@pytest.mark.parametrize("name", SMALL)
def test_normal_oracle_matches_brute_force(name):
    G = catalog_group(name)
    elems = oracles.closure(G.generators, G.degree)
    for d in range(1, 13):
        ans = has_proper_normal_subgroup_of_index_dividing(G, d)
        expected = oracles.brute_normal_index_dividing(elems, G.degree, d)
        assert ans.status == ("Yes" if expected else "No"), (name, d)
        if expected:
            assert is_valid_witness(G, ans.witness)


@given(groups(max_n=5), st.integers(1, 12))
@settings(max_examples=40)
def test_normal_oracle_random_groups(G, d):
    elems = oracles.closure(G.generators, G.degree)
    ans = has_proper_normal_subgroup_of_index_dividing(G, d)
    assert ans.status == ("Yes" if oracles.brute_normal_index_dividing(elems, G.degree, d) else "No")


def test_normal_subgroups_of_s4():
    data = normal_subgroups(catalog_group("S4"))
    orders = sorted(sum(len(data.classes[i]) for i in keys) for keys, _ in data.subgroups)
    assert orders == [1, 4, 12, 24]


@pytest.mark.parametrize("name", [n for n in SMALL if catalog_group(n).order() <= 168])
def test_subgroup_oracle_matches_brute_force(name):
    G = catalog_group(name)
    elems = oracles.closure(G.generators, G.degree)
    subs = oracles.all_subgroups(elems, G.degree)
    indices = {len(elems) // len(H) for H in subs}
    for d in range(1, 13):
        ans = has_proper_subgroup_of_index_dividing(G, d)
        expected = any(i > 1 and d % i == 0 for i in indices)
        assert ans.status == ("Yes" if expected else "No"), (name, d)
        if expected:
            w = ans.witness
            assert d % w.index == 0 and is_valid_witness(G, w)
            assert _homomorphism_to_transitive_action(G, elems, w)


def _homomorphism_to_transitive_action(G, elems, w):
    """The generator images extend to a well-defined transitive action on w.index points."""
    image = {G.identity(): tuple(range(w.index))}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g, a in zip(G.generators, w.action):
                y = oracles.compose(x, g)
                img = oracles.compose(image[x], a)
                if y in image:
                    if image[y] != img:
                        return False
                else:
                    image[y] = img
                    nxt.append(y)
        frontier = nxt
    orbit = {img[0] for img in image.values()}
    return len(orbit) == w.index


@given(groups(max_n=5, max_gens=2), st.integers(1, 8))
@settings(max_examples=30)
def test_subgroup_oracle_random_groups(G, d):
    elems = oracles.closure(G.generators, G.degree)
    expected = oracles.brute_has_subgroup_index_dividing(elems, G.degree, d)
    assert has_proper_subgroup_of_index_dividing(G, d).status == ("Yes" if expected else "No")


@pytest.mark.parametrize("name,d,expected", [
    ("A5", 4, "No"), ("S5", 5, "Yes"), ("A5", 6, "Yes"), ("C6", 2, "Yes"),
    ("PSL2_7", 6, "No"), ("PSL2_7", 7, "Yes"),
])
def test_subgroup_oracle_examples(name, d, expected):
    assert has_proper_subgroup_of_index_dividing(catalog_group(name), d).status == expected


def test_subgroup_oracle_budget_gives_unknown_then_answer():
    G = catalog_group("A8")
    small = has_proper_subgroup_of_index_dividing(G, 6, node_budget=5)
    assert small.status in ("Unknown", "No")
    full = has_proper_subgroup_of_index_dividing(G, 6)
    assert full.status == "No"


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        catalog_group("S8").elements(budget=1000)
    assert has_proper_normal_subgroup_of_index_dividing(catalog_group("S8"), 6, budget=3).status == "Unknown"


# orders and transitivity degrees: standard facts about these groups
CATALOG_FACTS = {
    "S4": (24, 4), "S5": (120, 5), "S6": (720, 6), "S7": (5040, 7), "S8": (40320, 8),
    "A4": (12, 2), "A5": (60, 3), "A6": (360, 4), "A7": (2520, 5), "A8": (20160, 6),
    "C5": (5, 1), "C6": (6, 1), "C7": (7, 1), "D5": (10, 1), "D6": (12, 1),
    "F20": (20, 2), "PSL2_7": (168, 2), "PSL2_7_8": (168, 2), "AGL1_8": (56, 2), "M11": (7920, 4),
    "PGL2_5": (120, 3), "M12": (95040, 5),
}


@pytest.mark.parametrize("name", sorted(CATALOG_FACTS))
def test_catalog_orders_and_transitivity(name):
    G = catalog_group(name)
    order, t = CATALOG_FACTS[name]
    assert G.order() == order
    assert G.transitivity_degree() == t


def test_catalog_unknown_name():
    with pytest.raises(KeyError):
        group_source("Q8")


def test_random_element_is_member():
    G = catalog_group("M11")
    rng = random.Random(1)
    assert all(G.contains(G.random_element(rng)) for _ in range(20))
