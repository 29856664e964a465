import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqadditive.bohr import (bohr_build, bohr_dilate, bohr_enumerate, bohr_member,
                             bohr_member_direct, bohr_narrow, degree_subspace, dilate_set,
                             normalize, whole_group)
from fqadditive.errors import DomainViolation, PrecisionTooLow, TooLarge, ZeroDilate
from fqadditive.group import group_for_q
from fqadditive.poly import LaurentTail, pmul, ptrim
from oracles import OracleField, coeffs_of, index_of, poly_mul


def tail(G, coeffs, exact=True):
    return LaurentTail(G.ctx, coeffs, exact=exact)


def test_empty_frequency_set_is_whole_group():
    G = group_for_q(3, 2)
    assert bohr_build([], [], G).size == 9 and whole_group(G).size == 9


def test_single_condition_examples():
    G = group_for_q(2, 3)
    B = bohr_build([tail(G, [1])], 1, G)
    assert B.size == 4
    assert sorted(B.indices.tolist()) == [x for x in range(8) if x % 2 == 0]
    B2 = bohr_build([tail(G, [0, 1])], 2, G)
    assert B2.size == 2 >= 2 ** (3 - 2)
    assert sorted(B2.indices.tolist()) == [0, 4]


def test_membership_examples():
    G = group_for_q(2, 3)
    B = bohr_build([tail(G, [1])], 1, G)
    assert bohr_member(B, 0)
    assert bohr_member(B, G.index_of((0, 1)))
    assert not bohr_member(B, G.index_of((1,)))


def test_precision_is_checked():
    G = group_for_q(2, 3)
    with pytest.raises(PrecisionTooLow):
        bohr_build([tail(G, [1, 0, 1], exact=False)], 2, G)
    bohr_build([tail(G, [1, 0, 1, 1], exact=False)], 2, G)


def test_narrow_examples():
    G = group_for_q(2, 3)
    B = bohr_build([tail(G, [0, 1])], 1, G)
    assert bohr_narrow(B, 0) is B
    assert bohr_narrow(B, 1).same_set(bohr_build([tail(G, [0, 1])], 2, G))
    assert bohr_narrow(B, 1).size == 2
    assert bohr_narrow(B, 2).size >= 2 ** max(0, 3 - 3)


def test_dilation_examples():
    G = group_for_q(2, 3)
    B = bohr_build([tail(G, [1]), tail(G, [0, 0, 1])], 1, G)
    assert sorted(B.indices.tolist()) == [0, 2]
    D = bohr_dilate(B, (0, 1))
    assert sorted(D.indices.tolist()) == [0, 4]
    assert D.rank <= B.rank + 2
    assert bohr_dilate(B, (1,)).same_set(B)
    zero = bohr_build([tail(G, [1]), tail(G, [0, 1]), tail(G, [0, 0, 1])], 1, G)
    assert zero.size == 1
    for c in [(1,), (0, 1), (1, 1), (0, 0, 1), (1, 0, 1)]:
        assert bohr_dilate(zero, c).size == 1


def test_dilation_errors():
    G = group_for_q(2, 3)
    with pytest.raises(ZeroDilate):
        bohr_dilate(whole_group(G), ())
    with pytest.raises(DomainViolation):
        bohr_dilate(whole_group(G), (0, 1))


def test_enumerate_examples():
    G1 = group_for_q(3, 1)
    assert [x.index for x in bohr_enumerate(whole_group(G1))] == [0, 1, 2]
    G2 = group_for_q(2, 2)
    B = bohr_build([tail(G2, [1])], 1, G2)
    assert [x.poly for x in bohr_enumerate(B)] == [(), (0, 1)]
    G3 = group_for_q(2, 3)
    assert [x.index for x in bohr_enumerate(degree_subspace(G3, 0))] == [0]
    with pytest.raises(TooLarge):
        bohr_enumerate(whole_group(G3), limit=4)


def _random_bohr(G, rng, max_rank=2, max_width=2):
    r = int(rng.integers(0, max_rank + 1))
    gam = [tail(G, [int(v) for v in rng.integers(0, G.q, size=G.N + max_width)]) for _ in range(r)]
    kap = [int(rng.integers(1, max_width + 1)) for _ in range(r)]
    return bohr_build(gam, kap, G)


@settings(max_examples=40, deadline=None)
@given(q=st.sampled_from([2, 3, 4]), N=st.integers(1, 4), seed=st.integers(0, 2**31))
def test_subspace_size_and_membership(q, N, seed):
    G = group_for_q(q, N)
    rng = np.random.default_rng(seed)
    B = _random_bohr(G, rng)
    m = B.mask()
    assert B.size == int(m.sum()) == q**B.dim
    assert B.size >= q ** max(0, N - sum(B.kappa))
    idx = B.indices
    sums = G.add(idx[:, None], idx[None, :])
    assert m[sums].all()
    for lam in range(q):
        assert m[G.scale(lam, idx)].all()
    direct = np.array([bohr_member_direct(B, x) for x in range(G.size)])
    assert np.array_equal(direct, m)
    assert normalize(B).same_set(B)


@pytest.mark.parametrize("q,N", [(2, 4), (3, 3)])
def test_scaling_inclusion(q, N):
    G = group_for_q(q, N)
    rng = np.random.default_rng(q + N)
    for _ in range(10):
        B = _random_bohr(G, rng, max_width=1)
        for m in (1, 2):
            Bm = bohr_narrow(B, m)
            for lam in itertools.product(range(q), repeat=m + 1):
                lam = ptrim(lam)
                if not lam:
                    continue
                for x in Bm.indices:
                    y = pmul(G.ctx, lam, G.poly_of(int(x)))
                    if len(y) <= N:
                        assert bohr_member(B, G.index_of(y))


@pytest.mark.parametrize("q", [2, 3])
def test_dilation_matches_independent_image(q):
    N = 4
    G = group_for_q(q, N)
    F = OracleField(q)
    rng = np.random.default_rng(7 * q)
    for _ in range(15):
        c = ptrim([int(v) for v in rng.integers(0, q, size=3)])
        if not c:
            continue
        d = len(c) - 1
        B = _random_bohr(G, rng)
        if d:
            cut = degree_subspace(G, N - d)
            B = bohr_build(B.gammas + cut.gammas, B.kappa + cut.kappa, G)
        D = bohr_dilate(B, c)
        image = sorted(index_of(poly_mul(list(c), coeffs_of(int(x), q, N), F.p), q)
                       for x in B.indices)
        assert image == sorted(D.indices.tolist())
        assert D.rank <= B.rank + q**d
        assert D.width == (max(B.width, 1) if d else B.width)


def test_dilate_set_and_normalize():
    G = group_for_q(3, 2)
    assert dilate_set(G, [0, 1, 2], (0, 1)).tolist() == [0, 3, 6]
    B = bohr_build([tail(G, [1]), tail(G, [1]), tail(G, [0, 0])], [1, 2, 1], G)
    n = normalize(B)
    assert n.rank == 1 and n.same_set(B)
