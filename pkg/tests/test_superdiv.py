from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, strategies as st

import oracles
from endocert.superdiv import (BranchDivisor, CurveParams, NonzeroDegree, ZeroSumViolated,
                               check_witness, class_group, class_key, divisor_class,
                               equivariance_check, is_principal, scaled_class_is_zero, lift, psi,
                               reduced_representative)

PAIRS = [(2, 4), (3, 6), (4, 4), (4, 8), (8, 8), (9, 9)]


def D(q, n, coeffs):
    return BranchDivisor(CurveParams.from_q(n, q), coeffs)


@st.composite
def degree_zero(draw, q, n, bound=None):
    bound = bound or 2 * q
    head = draw(st.lists(st.integers(-bound, bound), min_size=n - 1, max_size=n - 1))
    return head + [-sum(head)]


@st.composite
def principal_divisors(draw, q, n):
    m = n // q
    j = draw(st.integers(0, q - 1))
    head = draw(st.lists(st.integers(-3, 3), min_size=n - 1, max_size=n - 1))
    b = head + [-j * m - sum(head)]
    return [j + q * x for x in b]


def test_examples():
    assert is_principal(D(3, 6, (3, -3, 0, 0, 0, 0))).principal
    assert not is_principal(D(3, 6, (1, -1, 0, 0, 0, 0))).principal
    zero = is_principal(D(4, 8, (0,) * 8))
    assert zero.principal and zero.witness.j == 0 and not any(zero.witness.D0)
    assert scaled_class_is_zero(D(3, 6, (1, 1, 1, 1, 1, -5)))
    assert not scaled_class_is_zero(D(4, 8, (1, -1, 0, 0, 0, 0, 0, 0)))
    assert scaled_class_is_zero(D(4, 8, (0,) * 8))


@pytest.mark.parametrize("q,n,factors,dim", [(3, 6, (3, 3, 3, 3), 4), (4, 4, (4, 4), 2), (2, 4, (2, 2), 2)])
def test_class_group_examples(q, n, factors, dim):
    cg = class_group(CurveParams.from_q(n, q))
    assert cg.invariant_factors == factors and cg.lambda_torsion_dim == dim


@pytest.mark.parametrize("q,n", PAIRS + [(3, 9), (5, 5), (2, 10), (27, 27)])
def test_class_group_is_q_to_the_n_minus_2(q, n):
    cg = class_group(CurveParams.from_q(n, q))
    assert cg.invariant_factors == (q,) * (n - 2)
    assert cg.lambda_torsion_dim == n - 2


@pytest.mark.parametrize("q,n", PAIRS)
@given(data=st.data())
def test_closed_form_matches_search(q, n, data):
    coeffs = data.draw(st.one_of(degree_zero(q, n), principal_divisors(q, n)))
    d = D(q, n, coeffs)
    res = is_principal(d)
    if max(abs(a) for a in coeffs) <= 4 * q:
        assert res.principal == oracles.principal_by_search(coeffs, q)
    if res.principal:
        assert check_witness(d, res.witness)
    assert (class_key(d) == tuple([0] * (n - 2))) == res.principal


@pytest.mark.parametrize("q,n", PAIRS)
@given(data=st.data())
def test_scaled_class_matches_scaled_principality(q, n, data):
    params = CurveParams.from_q(n, q)
    d = BranchDivisor(params, data.draw(degree_zero(q, n)))
    assert scaled_class_is_zero(d) == is_principal(d.scale(params.p ** (params.r - 1))).principal


@pytest.mark.parametrize("q,n", PAIRS)
@given(data=st.data())
def test_class_key_detects_equivalence(q, n, data):
    a = data.draw(degree_zero(q, n))
    b = data.draw(st.one_of(degree_zero(q, n), principal_divisors(q, n).map(
        lambda pr: [x + y for x, y in zip(a, pr)])))
    da, db = D(q, n, a), D(q, n, b)
    diff = D(q, n, [x - y for x, y in zip(a, b)])
    assert (class_key(da) == class_key(db)) == is_principal(diff).principal
    rep = reduced_representative(da)
    assert is_principal(D(q, n, [x - y for x, y in zip(a, rep.coeffs)])).principal
    assert class_key(rep) == class_key(da)


@pytest.mark.parametrize("q,n", [(2, 4), (3, 6), (4, 4), (4, 8), (8, 8), (3, 9)])
def test_psi_kernel_and_image(q, n):
    params = CurveParams.from_q(n, q)
    p = params.p
    kernel = []
    images = set()
    for head in product(range(p), repeat=n - 1):
        phi = list(head) + [(-sum(head)) % p]
        cls = psi(phi, params)
        images.add(cls.key)
        if cls.is_zero:
            kernel.append(phi)
    assert sorted(kernel) == sorted([[c] * n for c in range(p)])
    assert len(images) == p ** (n - 2)


@pytest.mark.parametrize("q,n", PAIRS)
def test_equivariance_for_generators(q, n):
    params = CurveParams.from_q(n, q)
    transposition = (1, 0) + tuple(range(2, n))
    cycle = tuple(range(1, n)) + (0,)
    assert equivariance_check(tuple(range(n)), params)
    assert equivariance_check(transposition, params)
    assert equivariance_check(cycle, params)


def test_psi_examples():
    params = CurveParams(6, 3, 1)
    assert psi([0] * 6, params).is_zero
    assert psi([2] * 6, params).is_zero
    assert not psi([1, 2, 0, 0, 0, 0], params).is_zero
    assert not divisor_class(BranchDivisor(params, (1, -1, 0, 0, 0, 0))).is_zero


def test_errors():
    params = CurveParams(6, 3, 1)
    with pytest.raises(NonzeroDegree):
        scaled_class_is_zero(BranchDivisor(params, (1, 0, 0, 0, 0, 0)))
    with pytest.raises(ZeroSumViolated):
        psi([1, 0, 0, 0, 0, 0], params)
    with pytest.raises(ValueError):
        CurveParams(7, 3, 1)
    with pytest.raises(ValueError):
        CurveParams.from_q(12, 6)


@pytest.mark.parametrize("q,n", [(2, 4), (2, 6), (2, 8), (3, 6), (4, 4), (4, 8), (8, 8)])
@given(data=st.data())
def test_closed_form_on_small_box(q, n, data):
    coeffs = data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n))
    excess = sum(coeffs)
    for i in range(n):
        step = max(-6 - coeffs[i], min(6 - coeffs[i], -excess))
        coeffs[i] += step
        excess += step
    assert is_principal(D(q, n, coeffs)).principal == oracles.principal_by_search(coeffs, q)


@pytest.mark.parametrize("q,n", PAIRS)
@given(data=st.data())
def test_psi_is_lift_independent(q, n, data):
    params = CurveParams.from_q(n, q)
    p = params.p
    head = data.draw(st.lists(st.integers(0, p - 1), min_size=n - 1, max_size=n - 1))
    phi = head + [(-sum(head)) % p]
    E = data.draw(degree_zero(q, n, bound=3))
    other = [a + p * e for a, e in zip(lift(phi, params).coeffs, E)]
    scaled = BranchDivisor(params, other).scale(p ** (params.r - 1))
    assert divisor_class(scaled).key == psi(phi, params).key
