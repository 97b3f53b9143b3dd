import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gcas.gbf import (GbfPoly, ZqArray, build_array, eval_gbf, format_gbf, parse_gbf, root_table,
                      stack, to_unimodular, truncate, variable_arrays)

from oracles import gbf_matrix

# q=4, n=2, m=3: f = 3 z5 z4 + z2 z3 + 2 z2
F = GbfPoly(4, 2, 3, ((3, (5, 4)), (1, (2, 3)), (2, (2,))))
PRINTED_ROWS = {
    0: [0, 0, 0, 0, 0, 0, 3, 3],
    2: [2, 3, 2, 3, 2, 3, 1, 2],
    3: [2, 3, 2, 3, 2, 3, 1, 2],
}


@st.composite
def polys(draw, max_n=3, max_m=4):
    q = draw(st.sampled_from([2, 4, 6, 8]))
    n = draw(st.integers(0, max_n))
    m = draw(st.integers(1, max_m))
    nv = n + m
    terms = draw(st.lists(
        st.tuples(st.integers(-20, 20),
                  st.sets(st.integers(1, nv), min_size=1, max_size=min(nv, 3)).map(tuple)),
        max_size=6))
    return GbfPoly(q, n, m, tuple(terms), draw(st.integers(0, 50)))


class TestReferenceArray:
    def test_printed_rows(self):
        a = build_array(F).values
        for g, row in PRINTED_ROWS.items():
            assert a[g].tolist() == row

    def test_row1_equals_row0(self):
        # f has no y1 term, so flipping bit 0 of the row index cannot change it
        a = build_array(F).values
        assert np.array_equal(a[1], a[0])

    def test_point_values(self):
        assert eval_gbf(F, 0, 6) == 3
        assert eval_gbf(F, 2, 0) == 2

    def test_truncated_to_six(self):
        t = truncate(build_array(F), 6)
        assert t.shape == (4, 6)
        for g, row in PRINTED_ROWS.items():
            assert t.values[g].tolist() == row[:6]

    def test_xy_spelling_is_same_poly(self):
        assert parse_gbf("3*x3*x2 + y2*x1 + 2*y2", 4, 2, 3) == F
        assert parse_gbf("3*z5*z4 + z2*z3 + 2*z2", 4, 2, 3) == F


class TestGbfPoly:
    def test_odd_q_rejected(self):
        with pytest.raises(ValueError):
            GbfPoly(3, 1, 1)

    def test_repeated_variable_rejected(self):
        with pytest.raises(ValueError):
            GbfPoly(2, 1, 2, ((1, (2, 2)),))

    def test_index_range(self):
        with pytest.raises(ValueError):
            GbfPoly(2, 1, 2, ((1, (4,)),))

    def test_canonical_merge(self):
        f = GbfPoly(4, 1, 2, ((1, (2, 3)), (3, (3, 2)), (2, ())))
        assert f.monomials == ()
        assert f.constant == 2

    def test_constant_only(self):
        a = build_array(GbfPoly(4, 1, 1, (), 3))
        assert (a.values == 3).all()

    def test_add(self):
        f = GbfPoly(2, 1, 1, ((1, (1,)),))
        assert (f + f).monomials == ()
        with pytest.raises(ValueError):
            f + GbfPoly(4, 1, 1)


class TestArrays:
    def test_variable_arrays_lsb_first(self):
        z = variable_arrays(2, 3)
        assert z[0, :, 0].tolist() == [0, 1, 0, 1]   # y1
        assert z[1, :, 0].tolist() == [0, 0, 1, 1]   # y2
        assert z[2, 0].tolist() == [0, 1] * 4        # x1
        assert z[4, 0].tolist() == [0] * 4 + [1] * 4  # x3

    def test_eval_out_of_range(self):
        with pytest.raises(IndexError):
            eval_gbf(F, 4, 0)
        with pytest.raises(IndexError):
            eval_gbf(F, 0, 8)

    def test_truncate_bounds(self):
        a = build_array(F)
        with pytest.raises(ValueError):
            truncate(a, 0)
        with pytest.raises(ValueError):
            truncate(a, 9)
        assert truncate(a, 8) == a

    def test_zq_range_checked(self):
        with pytest.raises(ValueError):
            ZqArray(np.array([[0, 4]]), 4)
        with pytest.raises(TypeError):
            ZqArray(np.array([[0.5]]), 4)

    def test_zq_immutable(self):
        a = build_array(F)
        with pytest.raises(ValueError):
            a.values[0, 0] = 1

    def test_root_table_exact_quarter_turns(self):
        assert root_table(4).tolist() == [1, 1j, -1, -1j]
        assert root_table(2).tolist() == [1, -1]
        r8 = root_table(8)
        assert r8[2] == 1j and r8[4] == -1

    def test_to_unimodular_needs_q(self):
        with pytest.raises(ValueError):
            to_unimodular(np.zeros((2, 2), int))
        assert np.allclose(to_unimodular(np.array([[5]]), 4), 1j)

    def test_stack(self):
        a = build_array(F)
        assert stack([a, a]).shape == (2, 4, 8)


class TestParse:
    @pytest.mark.parametrize("bad", ["", "1*w2", "1*z1+", "x4", "y3"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_gbf(bad, 4, 2, 3)

    def test_constants_and_negatives(self):
        f = parse_gbf("3 + -1*z1 + 2", 4, 1, 1)
        assert f.constant == 1
        assert f.monomials == ((3, (1,)),)


@settings(max_examples=120, deadline=None)
@given(polys())
def test_build_matches_oracle(f):
    want = gbf_matrix(f.q, f.n, f.m, f.monomials, f.constant)
    assert build_array(f).values.tolist() == want


@settings(max_examples=80, deadline=None)
@given(polys(), st.data())
def test_truncation_commutes(f, data):
    L = data.draw(st.integers(1, 2**f.m))
    assert build_array(f, L) == truncate(build_array(f), L)


@settings(max_examples=80, deadline=None)
@given(polys())
def test_format_parse_roundtrip(f):
    for style in ("z", "xy"):
        assert parse_gbf(format_gbf(f, style), f.q, f.n, f.m) == f


@settings(max_examples=60, deadline=None)
@given(polys(), st.data())
def test_linear_shift_is_pointwise(f, data):
    l = data.draw(st.integers(1, f.n + f.m))
    shifted = build_array(f.plus([(f.q // 2, (l,))])).values
    z = variable_arrays(f.n, f.m)[l - 1]
    assert np.array_equal(shifted, (build_array(f).values + f.q // 2 * z) % f.q)


@settings(max_examples=60, deadline=None)
@given(polys())
def test_unimodular(f):
    u = to_unimodular(build_array(f))
    assert np.allclose(np.abs(u), 1.0, atol=1e-15)
