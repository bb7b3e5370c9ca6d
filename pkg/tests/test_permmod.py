from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from endocert.catalog import CORE_CATALOG, catalog_group
from endocert.linalg import rref_mod
from endocert.permgrp import PermGroup, perm_mul
from endocert.permmod import (Kind, KindUnavailable, build_module, commutant, find_submodule,
                              is_absolutely_irreducible, is_faithful, submodule_lattice)

ELLS = (2, 3, 5, 7)
GROUPS = {name: catalog_group(name) for name in CORE_CATALOG}
ORACLE_MATS = {Kind.ZERO_SUM: oracles.zero_sum_matrices, Kind.HEART: oracles.heart_matrices,
               Kind.QUOTIENT: oracles.quotient_matrices}


def test_kind_parse():
    assert Kind.parse("zero-sum") is Kind.ZERO_SUM
    assert Kind.parse("Heart") is Kind.HEART
    with pytest.raises(ValueError):
        Kind.parse("dual")


def test_heart_needs_ell_dividing_n():
    with pytest.raises(KindUnavailable):
        build_module(GROUPS["S5"], 2, Kind.HEART)


@pytest.mark.parametrize("kind", list(Kind))
def test_matrices_form_a_representation(kind):
    G = GROUPS["S6"]
    M = build_module(G, 3, kind)
    a, b = G.generators
    # perm_mul(a, b) applies a first, so it acts as [b][a]
    assert M.matrix_of(perm_mul(a, b)).rows == (M.matrix_of(b) @ M.matrix_of(a)).rows


@pytest.mark.parametrize("name", [n for n in CORE_CATALOG if GROUPS[n].degree <= 7])
@pytest.mark.parametrize("ell", (2, 3, 5))
def test_commutant_dimension_matches_oracle(name, ell):
    G = GROUPS[name]
    n = G.degree
    for kind, build in ORACLE_MATS.items():
        if kind is Kind.HEART and n % ell:
            continue
        mats = build(G.generators, n, ell)
        assert commutant(build_module(G, ell, kind)).dim == oracles.commutant_dim(mats, ell)


def _brute_is_field(C):
    """Every nonzero element of the commutant is invertible."""
    p = C.ell
    d = C.basis[0].nrows
    for coeffs in product(range(p), repeat=C.dim):
        if not any(coeffs):
            continue
        X = [[sum(c * B.rows[i][j] for c, B in zip(coeffs, C.basis)) % p for j in range(d)]
             for i in range(d)]
        if oracles.rank_fp(X, p) < d:
            return False
    return True


@pytest.mark.parametrize("name,ell,kind", [
    ("C5", 2, Kind.ZERO_SUM), ("C5", 3, Kind.ZERO_SUM), ("C7", 2, Kind.ZERO_SUM),
    ("C6", 5, Kind.ZERO_SUM), ("D5", 2, Kind.ZERO_SUM), ("C6", 3, Kind.HEART),
    ("F20", 3, Kind.ZERO_SUM), ("C7", 3, Kind.ZERO_SUM), ("S5", 3, Kind.ZERO_SUM),
])
def test_field_test_matches_brute_force(name, ell, kind):
    C = commutant(build_module(GROUPS[name], ell, kind))
    if ell ** C.dim > 5000:
        pytest.skip("commutant too large for brute force")
    assert C.is_field == (C.is_commutative and _brute_is_field(C))


def test_commutant_examples():
    # C5 over F_2: F_2[x]/(1 + x + ... + x^4) = F_16
    C = commutant(build_module(GROUPS["C5"], 2, Kind.ZERO_SUM))
    assert C.dim == 4 and C.is_field
    C = commutant(build_module(GROUPS["C6"], 5, Kind.ZERO_SUM))
    assert C.dim == 5 and not C.is_field
    assert commutant(build_module(GROUPS["S6"], 3, Kind.HEART)).is_scalars_only


# -- doubly transitive groups and the zero-sum module --------------------------------------

@pytest.mark.parametrize("name", CORE_CATALOG)
def test_zero_sum_scalars_iff_doubly_transitive(name):
    G = GROUPS[name]
    two = G.transitivity_degree() >= 2
    for ell in ELLS:
        if G.degree % ell == 0:
            continue
        assert commutant(build_module(G, ell, Kind.ZERO_SUM)).is_scalars_only == two, ell


@given(st.integers(3, 6).flatmap(lambda n: st.lists(st.permutations(list(range(n))), min_size=1,
                                                     max_size=2)),
       st.sampled_from(ELLS))
@settings(max_examples=40)
def test_zero_sum_scalars_iff_doubly_transitive_random(gens, ell):
    n = len(gens[0])
    if n % ell == 0:
        return
    G = PermGroup([tuple(g) for g in gens], n)
    elems = oracles.closure(G.generators, n)
    two = oracles.tuple_orbit_transitive(elems, n, 2)
    assert commutant(build_module(G, ell, Kind.ZERO_SUM)).is_scalars_only == two


@pytest.mark.parametrize("name", CORE_CATALOG)
def test_three_transitive_gives_scalar_heart(name):
    G = GROUPS[name]
    for ell in ELLS:
        if G.degree % ell or G.transitivity_degree() < 3:
            continue
        assert commutant(build_module(G, ell, Kind.HEART)).is_scalars_only


@pytest.mark.parametrize("name", CORE_CATALOG)
def test_field_heart_forces_double_transitivity(name):
    G = GROUPS[name]
    n = G.degree
    for ell in ELLS:
        if n % ell or n < 4 or not G.is_transitive():
            continue
        if commutant(build_module(G, ell, Kind.HEART)).is_field:
            assert (ell == 2 and n % 4 == 2) or G.transitivity_degree() >= 2


# -- faithfulness ------------------------------------------------------------

@pytest.mark.parametrize("n,ell", [(n, ell) for n in range(4, 9) for ell in ELLS if n % ell == 0])
def test_heart_and_quotient_faithful_for_symmetric_groups(n, ell):
    G = catalog_group(f"S{n}")
    expected = not (n == 4 and ell == 2)
    assert is_faithful(build_module(G, ell, Kind.HEART)) == expected
    if expected:
        assert is_faithful(build_module(G, ell, Kind.QUOTIENT))


def test_exceptional_pairs_are_not_faithful():
    assert not is_faithful(build_module(catalog_group("S3"), 3, Kind.HEART))
    assert not is_faithful(build_module(catalog_group("S4"), 2, Kind.HEART))


@pytest.mark.parametrize("name", CORE_CATALOG)
def test_faithfulness_catalog_wide(name):
    G = GROUPS[name]
    n = G.degree
    for ell in ELLS:
        if n % ell or (n, ell) == (4, 2) or (ell == 2 and n < 5):
            continue
        assert is_faithful(build_module(G, ell, Kind.HEART))
        assert is_faithful(build_module(G, ell, Kind.QUOTIENT))


# -- submodule lattices ------------------------------------------------------

def _key(rows, p, d):
    red, _ = rref_mod(rows, p, d)
    return tuple(tuple(r) for r in red)


LATTICE_CASES = [(f"{kind}{n}", ell) for n in (5, 6, 7) for kind in "SA" for ell in ELLS if n % ell == 0]


@pytest.mark.parametrize("name,ell", LATTICE_CASES)
def test_full_and_quotient_lattices(name, ell):
    G = catalog_group(name)
    n = G.degree
    full = submodule_lattice(build_module(G, ell, Kind.FULL), budget=10**6)
    ones = _key([[1] * n], ell, n)
    zero_sum = _key([[int(i == j) - int(i == n - 1) for i in range(n)] for j in range(n - 1)], ell, n)
    whole = _key([[int(i == j) for i in range(n)] for j in range(n)], ell, n)
    assert sorted(full) == sorted([(), ones, zero_sum, whole])
    quot = submodule_lattice(build_module(G, ell, Kind.QUOTIENT), budget=10**6)
    # zero-sum functions e_j - e_{n-1} have quotient coordinates delta_j + 1
    heart = _key([[(int(i == j) + 1) % ell for i in range(n - 1)] for j in range(n - 1)], ell, n - 1)
    assert len(heart) == n - 2
    assert sorted(quot) == sorted([(), heart, _key(
        [[int(i == j) for i in range(n - 1)] for j in range(n - 1)], ell, n - 1)])


@pytest.mark.parametrize("name,ell,kind", [
    ("S4", 2, Kind.FULL), ("A4", 2, Kind.FULL), ("C5", 2, Kind.ZERO_SUM), ("D6", 2, Kind.QUOTIENT),
    ("C6", 2, Kind.HEART), ("D5", 3, Kind.ZERO_SUM), ("S4", 3, Kind.FULL), ("C6", 3, Kind.HEART),
])
def test_lattice_matches_brute_force(name, ell, kind):
    G = catalog_group(name)
    M = build_module(G, ell, kind)
    lat = submodule_lattice(M)
    mats = [[list(r) for r in A.rows] for A in M.action]
    brute = oracles.invariant_subspaces_brute(mats, M.dim, ell)
    assert len(lat) == len(brute)
    assert sorted(len(k) for k in lat) == sorted(_dim(S, ell) for S in brute)


def _dim(S, p):
    k = 0
    while p ** k < len(S):
        k += 1
    return k


@pytest.mark.parametrize("name", CORE_CATALOG)
def test_absolutely_simple_heart_gives_scalar_quotient(name):
    G = GROUPS[name]
    n = G.degree
    for ell in ELLS:
        if n % ell or not G.is_transitive():
            continue
        if is_absolutely_irreducible(build_module(G, ell, Kind.HEART)):
            assert commutant(build_module(G, ell, Kind.QUOTIENT)).is_scalars_only


@pytest.mark.parametrize("name,ell,kind", [
    ("S6", 2, Kind.FULL), ("C7", 2, Kind.ZERO_SUM), ("D6", 3, Kind.HEART), ("A5", 5, Kind.HEART),
    ("PSL2_7", 2, Kind.ZERO_SUM), ("M11", 3, Kind.ZERO_SUM), ("S5", 5, Kind.QUOTIENT),
])
def test_find_submodule_is_invariant_or_none(name, ell, kind):
    M = build_module(catalog_group(name), ell, kind)
    sub = find_submodule(M)
    if sub is None:
        if ell ** M.dim <= 4096:
            assert all(len(M.spin([v])) == M.dim for v in product(range(ell), repeat=M.dim) if any(v))
        return
    assert 0 < len(sub) < M.dim
    for v in sub.rows:
        for A in M.action:
            assert sub.contains(A.apply(v))
