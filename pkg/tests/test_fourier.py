import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqadditive.bohr import bohr_build, degree_subspace, whole_group
from fqadditive.errors import EmptySet, SupportViolation
from fqadditive.fourier import (GroupFn, char_eval, conv_chain_counts, conv_counts,
                                convolve_local, convolve_with_measure, fourier_forward,
                                fourier_inverse, fourier_values, inverse_values)
from fqadditive.group import group_for_q
from fqadditive.poly import GPoly, LaurentTail
from oracles import OracleField, chain_counts, direct_convolution, naive_transform

FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 9: (3, 2)}


def _fn(G, v):
    return GroupFn(np.asarray(v, dtype=complex), G)


def test_char_eval_examples():
    G2, G3 = group_for_q(2, 2), group_for_q(3, 1)
    xi2 = LaurentTail(G2.ctx, [1], exact=True)
    assert char_eval(xi2, GPoly.from_poly(G2.ctx, (0, 1), 2)) == 1
    assert char_eval(xi2, GPoly.from_poly(G2.ctx, (1,), 2)) == pytest.approx(-1)
    xi3 = LaurentTail(G3.ctx, [1], exact=True)
    assert char_eval(xi3, GPoly.from_poly(G3.ctx, (2,), 1)) == pytest.approx(np.exp(4j * np.pi / 3))


@pytest.mark.parametrize("q,N", [(2, 3), (3, 2), (4, 2)])
def test_char_multiplicative_and_matches_table(q, N):
    G = group_for_q(q, N)
    table = np.exp(2j * np.pi * G.pairing_matrix() / G.ctx.p)
    for xi in range(G.size):
        tail = G.dual(xi)
        vals = np.array([char_eval(tail, G.element(x)) for x in range(G.size)])
        assert np.allclose(vals, table[xi], atol=1e-12)
        sums = G.add(np.arange(G.size)[:, None], np.arange(G.size)[None, :])
        assert np.allclose(vals[sums], vals[:, None] * vals[None, :], atol=1e-12)


def test_delta_and_constant_transforms():
    G = group_for_q(2, 2)
    d = np.zeros(4)
    d[0] = 1
    assert np.allclose(fourier_values(G, d), 0.25)
    one = fourier_values(G, np.ones(4))
    assert one[0] == pytest.approx(1) and np.allclose(one[1:], 0)


@pytest.mark.parametrize("q,N", [(3, 4), (2, 6), (4, 3), (5, 2), (9, 2)])
def test_fast_matches_independent_naive(q, N):
    G = group_for_q(q, N)
    F = OracleField(*FIELDS[q])
    f = np.random.default_rng(q * 10 + N).normal(size=G.size)
    assert np.max(np.abs(fourier_values(G, f) - naive_transform(F, N, f))) <= 1e-12


def test_inverse_round_trips():
    G = group_for_q(2, 8)
    f = np.random.default_rng(1).normal(size=G.size)
    back = fourier_inverse(fourier_forward(_fn(G, f))).values
    assert np.max(np.abs(back - f)) <= 1e-10
    d = np.zeros(G.size)
    d[0] = 1
    assert np.allclose(inverse_values(G, fourier_values(G, d)), d)
    assert np.allclose(inverse_values(G, np.zeros(G.size)), 0)


@settings(max_examples=40, deadline=None)
@given(q=st.sampled_from([2, 3, 4]), N=st.integers(1, 4), seed=st.integers(0, 2**31))
def test_parseval_property(q, N, seed):
    G = group_for_q(q, N)
    rng = np.random.default_rng(seed)
    f = rng.normal(size=G.size) + 1j * rng.normal(size=G.size)
    g = rng.normal(size=G.size) + 1j * rng.normal(size=G.size)
    lhs = np.sum(fourier_values(G, f) * np.conj(fourier_values(G, g)))
    rhs = np.mean(f * np.conj(g))
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


@settings(max_examples=25, deadline=None)
@given(q=st.sampled_from([2, 3]), N=st.integers(1, 3), M=st.integers(0, 3), seed=st.integers(0, 2**31))
def test_convolution_theorem_and_mean(q, N, M, seed):
    G = group_for_q(q, N)
    B = degree_subspace(G, min(M, N))
    rng = np.random.default_rng(seed)
    f = rng.normal(size=G.size) * B.mask()
    g = rng.normal(size=G.size)
    conv = convolve_local(_fn(G, f), _fn(G, g), B).values
    F = OracleField(*FIELDS[q])
    assert np.allclose(conv, direct_convolution(F, N, f, g) / B.size, atol=1e-10)
    assert np.allclose(B.density * fourier_values(G, conv),
                       fourier_values(G, f) * fourier_values(G, g), atol=1e-9)
    assert B.density * conv.mean() == pytest.approx(f.mean() * g.mean(), abs=1e-9)


def test_convolve_local_examples():
    G = group_for_q(3, 2)
    B = whole_group(G)
    one = np.ones(G.size)
    assert np.allclose(convolve_local(_fn(G, one), _fn(G, one), B).values, 1)
    H = degree_subspace(G, 1).mask().astype(float)
    assert np.allclose(convolve_local(_fn(G, H), _fn(G, H), B).values, H * (3 / 9))
    d = np.zeros(G.size)
    d[0] = 1
    g = np.arange(G.size, dtype=float)
    assert np.allclose(convolve_local(_fn(G, d), _fn(G, g), B).values, g / G.size)


def test_convolve_local_support_checked():
    G = group_for_q(2, 3)
    B = degree_subspace(G, 1)
    with pytest.raises(SupportViolation):
        convolve_local(_fn(G, np.ones(8)), _fn(G, np.ones(8)), B)


def test_measure_convolution_examples():
    G = group_for_q(3, 2)
    f = _fn(G, np.random.default_rng(0).normal(size=G.size))
    assert np.allclose(convolve_with_measure(f, {0}).values, f.values)
    d = np.zeros(G.size)
    d[0] = 1
    H = degree_subspace(G, 1).mask()
    assert np.allclose(convolve_with_measure(_fn(G, d), H).values, H / H.sum())
    assert np.allclose(convolve_with_measure(_fn(G, np.ones(9)), H).values, 1)
    assert convolve_with_measure(f, H).mean() == pytest.approx(f.mean())
    with pytest.raises(EmptySet):
        convolve_with_measure(f, np.zeros(9, dtype=bool))


@pytest.mark.parametrize("q,N", [(2, 4), (3, 2)])
def test_exact_chain_counts(q, N):
    G = group_for_q(q, N)
    F = OracleField(*FIELDS[q])
    rng = np.random.default_rng(N)
    sets = [rng.random(G.size) < 0.5 for _ in range(3)]
    got = conv_chain_counts(G, sets)
    want = chain_counts(F, N, [np.flatnonzero(s) for s in sets])
    assert all(int(got[x]) == want.get(x, 0) for x in range(G.size))
    a, b = sets[0].astype(int), sets[1].astype(int)
    assert np.array_equal(conv_counts(G, a, b), conv_chain_counts(G, sets[:2]))


def test_groupfn_validates():
    G = group_for_q(2, 2)
    with pytest.raises(ValueError):
        GroupFn(np.zeros(3), G)
    with pytest.raises(ValueError):
        GroupFn(np.array([0, 0, 0, np.nan]), G)


def test_bohr_dual_pairing_depends_on_first_N_coefficients():
    G = group_for_q(3, 2)
    long = LaurentTail(G.ctx, [1, 2, 1, 1], exact=True)
    short = LaurentTail(G.ctx, [1, 2], exact=True)
    for x in range(G.size):
        assert char_eval(long, G.element(x)) == pytest.approx(char_eval(short, G.element(x)))
    B = bohr_build([short], 1, G)
    assert B.size == 3
