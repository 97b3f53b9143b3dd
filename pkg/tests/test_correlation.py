import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gcas.correlation import (aacf_1d, aacf_2d, autocorrelation_sum, correlation_surface,
                              correlation_surface_fft, gcp_mate_check, verify_gcas, verify_gcs)
from gcas.baselines import zc_sequence
from gcas.tables import load_table
from gcas.gbf import to_unimodular

from oracles import aacf, aacf_sum_all

A = np.array([1, 1, 1, -1])
B = np.array([1, 1, -1, 1])


def rand_unimod(rng, shape):
    return np.exp(2j * np.pi * rng.random(shape))


@st.composite
def pm1_arrays(draw, max_l1=3, max_l2=5):
    L1 = draw(st.integers(1, max_l1))
    L2 = draw(st.integers(1, max_l2))
    bits = draw(st.lists(st.sampled_from([1, -1]), min_size=L1 * L2, max_size=L1 * L2))
    return np.array(bits).reshape(L1, L2)


class TestAacf2d:
    def test_zero_shift_is_size(self):
        X = rand_unimod(np.random.default_rng(1), (3, 5))
        assert aacf_2d(X, X, 0, 0) == pytest.approx(15)

    def test_ones_2x2(self):
        X = np.ones((2, 2))
        assert aacf_2d(X, X, 1, 0) == 2

    def test_conjugate_reversal(self):
        rng = np.random.default_rng(2)
        X, Y = rand_unimod(rng, (3, 5)), rand_unimod(rng, (3, 5))
        for u1 in range(-2, 3):
            for u2 in range(-4, 5):
                lhs = aacf_2d(X, Y, u1, u2)
                assert lhs == pytest.approx(aacf(X.tolist(), Y.tolist(), u1, u2), abs=1e-12)
                assert lhs == pytest.approx(np.conj(aacf_2d(Y, X, -u1, -u2)), abs=1e-12)

    def test_errors(self):
        X = np.ones((2, 3))
        with pytest.raises(ValueError):
            aacf_2d(X, np.ones((3, 2)), 0, 0)
        with pytest.raises(ValueError):
            aacf_2d(X, X, 2, 0)
        with pytest.raises(ValueError):
            aacf_2d(X, X, 0, -3)


class TestAacf1d:
    def test_small(self):
        assert aacf_1d([1, 1], 1) == 1

    def test_zc_peak(self):
        assert aacf_1d(zc_sequence(33), 0) == pytest.approx(33)

    def test_matches_2d(self):
        x = np.random.default_rng(3).choice([-1, 1], 7)
        for u in range(-6, 7):
            assert aacf_1d(x, u) == aacf_2d(x[None], x[None], 0, u)

    def test_range(self):
        with pytest.raises(ValueError):
            aacf_1d([1, 1], 2)


class TestVerify:
    def test_printed_4x4x33(self):
        rep = verify_gcas([to_unimodular(a) for a in load_table("4x4x33")])
        assert rep.is_gcas and rep.peak == 528 and rep.max_offside == 0 and rep.exact

    def test_printed_8x4x21(self):
        rep = verify_gcas([to_unimodular(a) for a in load_table("8x4x21")])
        assert rep.is_gcas and rep.peak == 672 and rep.max_offside == 0

    def test_identical_ones(self):
        rep = verify_gcas([np.ones((2, 2)), np.ones((2, 2))])
        assert not rep.is_gcas
        assert rep.max_offside == 4
        assert rep.offending_shift is not None

    def test_errors(self):
        with pytest.raises(ValueError):
            verify_gcas([])
        with pytest.raises(ValueError):
            verify_gcas([np.ones((2, 2)), np.ones((2, 3))])

    def test_classic_pair(self):
        assert verify_gcs([A, B]).is_gcas

    def test_single_ones(self):
        assert not verify_gcs([np.ones(2)]).is_gcas

    def test_1x1(self):
        rep = verify_gcas([np.ones((1, 1))])
        assert rep.is_gcas and rep.offending_shift is None

    def test_report_dict(self):
        d = verify_gcs([A, B]).to_dict()
        assert d["peak"] == 8 and d["shape"] == [1, 4] and d["offending_shift"] is None

    def test_quaternary_exact(self):
        # rotating one member by j keeps the complementary property
        rep = verify_gcs([1j * A, B])
        assert rep.exact and rep.is_gcas


class TestMate:
    def test_standard_mate(self):
        mate = (np.conj(B)[::-1], -np.conj(A)[::-1])
        assert gcp_mate_check((A, B), mate)

    def test_self_is_not_mate(self):
        assert not gcp_mate_check((A, B), (A, B))

    def test_non_gcp_rejected(self):
        with pytest.raises(ValueError):
            gcp_mate_check((A, A), (A, B))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            gcp_mate_check((A, B), (A[:2], B[:2]))


class TestSurface:
    def test_layout_and_oracle(self):
        rng = np.random.default_rng(4)
        arrays = [rng.choice([-1, 1], (2, 4)) for _ in range(3)]
        surf = autocorrelation_sum(arrays)
        assert surf.shape == (3, 7) and surf.dtype == np.int64
        want = aacf_sum_all([a.tolist() for a in arrays])
        for (u1, u2), v in want.items():
            assert surf[u1 + 1, u2 + 3] == v

    def test_fft_matches_direct(self):
        rng = np.random.default_rng(5)
        X, Y = rand_unimod(rng, (3, 6)), rand_unimod(rng, (3, 6))
        assert np.allclose(correlation_surface(X, Y), correlation_surface_fft(X, Y), atol=1e-9)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            autocorrelation_sum([np.ones((2, 2))], method="nope")


@settings(max_examples=60, deadline=None)
@given(pm1_arrays(), pm1_arrays())
def test_surface_exact_for_binary(X, Y):
    if X.shape != Y.shape:
        Y = np.resize(Y, X.shape)
    s = correlation_surface(X, Y)
    L1, L2 = X.shape
    assert s.dtype == np.int64
    for u1 in range(-L1 + 1, L1):
        for u2 in range(-L2 + 1, L2):
            assert s[u1 + L1 - 1, u2 + L2 - 1] == aacf(X.tolist(), Y.tolist(), u1, u2)
            assert s[u1 + L1 - 1, u2 + L2 - 1] == aacf_2d(X, Y, u1, u2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 12))
def test_fft_direct_agree(seed, L1, L2):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((L1, L2)) + 1j * rng.standard_normal((L1, L2))
    Y = rng.standard_normal((L1, L2)) + 1j * rng.standard_normal((L1, L2))
    assert np.max(np.abs(correlation_surface(X, Y) - correlation_surface_fft(X, Y))) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_peak_is_size_for_unimodular(seed):
    rng = np.random.default_rng(seed)
    X = rand_unimod(rng, (2, 5))
    s = correlation_surface(X)
    assert s[1, 4] == pytest.approx(10)
    # autocorrelation surface is Hermitian about the centre
    assert np.allclose(s, np.conj(s[::-1, ::-1]))
