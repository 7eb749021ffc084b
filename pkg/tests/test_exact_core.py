"""Exact-arithmetic core: window iteration, EDS, Hankel residuals, gauge."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from somos import (
    DivisionByZeroTerm,
    IndexOutOfWindow,
    InvalidSeed,
    NonInteger,
    SequenceWindow,
    Somos4Params,
    Somos5Params,
    ZeroGaugeFactor,
    check_divisibility,
    check_hankel_somos4,
    check_hankel_somos5,
    gauge_transform,
    h_from_tau,
    iterate_eds,
    iterate_somos4,
    iterate_somos5,
)

ONES4 = SequenceWindow(0, (1, 1, 1, 1))
ONES5 = SequenceWindow(0, (1, 1, 1, 1, 1))


class TestSequenceWindow:
    def test_value_and_bounds(self):
        w = SequenceWindow(-2, (5, 6, 7))
        assert w.value(-2) == 5 and w.value(0) == 7
        assert w.end_index == 0 and len(w) == 3
        with pytest.raises(IndexOutOfWindow):
            w.value(1)

    def test_json_roundtrip(self):
        w = SequenceWindow(-1, (Fraction(1, 3), Fraction(-2), Fraction(7, 2)))
        assert SequenceWindow.from_json(w.to_json()) == w
        assert w.to_json()["values"] == ["1/3", "-2/1", "7/2"]

    def test_has_zero(self):
        assert SequenceWindow(0, (1, 0, 2)).has_zero
        assert not ONES4.has_zero

    def test_parity_subsequence(self):
        w = SequenceWindow(-3, tuple(range(10, 18)))  # indices -3..4
        even = w.parity_subsequence(0)
        odd = w.parity_subsequence(1)
        assert even.base_index == -1 and list(even.values) == [11, 13, 15, 17]
        assert odd.base_index == -2 and list(odd.values) == [10, 12, 14, 16]


class TestSomos4Iteration:
    def test_forward_golden(self):
        w = iterate_somos4(Somos4Params(1, 1), ONES4, 0, 10)
        assert [int(w.value(i)) for i in range(4, 11)] == [2, 3, 7, 23, 59, 314, 1529]

    def test_backward_golden(self):
        w = iterate_somos4(Somos4Params(1, 1), ONES4, -1, 3)
        assert w.value(-1) == 2

    def test_fixed_point(self):
        w = iterate_somos4(Somos4Params(1, 0), ONES4, -5, 15)
        assert all(w.value(i) == 1 for i in w.indices())

    def test_residuals_exactly_zero(self, somos4_window, somos4_params):
        for n in range(somos4_window.base_index + 2, somos4_window.end_index - 1):
            assert somos4_window.somos4_residual(somos4_params, n) == 0

    def test_range_must_cover_seeds(self):
        with pytest.raises(ValueError):
            iterate_somos4(Somos4Params(1, 1), ONES4, 1, 10)

    def test_wrong_seed_count(self):
        with pytest.raises(InvalidSeed):
            iterate_somos4(Somos4Params(1, 1), ONES5, 0, 10)

    def test_zero_pivot_blocks(self):
        # alpha=1, beta=-1 sends (1,1,1,1) to tau4 = 0, and the next forward
        # step must divide by tau0... it divides by tau1 first at tau5; the
        # produced zero only blocks once it becomes the pivot, at tau8.
        params = Somos4Params(1, -1)
        w = iterate_somos4(params, ONES4, 0, 7)
        assert w.value(4) == 0
        with pytest.raises(DivisionByZeroTerm) as exc:
            iterate_somos4(params, ONES4, 0, 8)
        assert exc.value.index == 4


class TestSomos5Iteration:
    def test_forward_golden_display(self):
        w = iterate_somos5(Somos5Params(1, 1), ONES5, 0, 14)
        assert [int(w.value(i)) for i in range(0, 15)] == [
            1, 1, 1, 1, 1, 2, 3, 5, 11, 37, 83, 274, 1217, 6161, 22833,
        ]

    def test_backward_golden(self):
        w = iterate_somos5(Somos5Params(1, 1), ONES5, -1, 4)
        assert w.value(-1) == 2

    def test_backward_mirrors_forward(self, somos5_window):
        # the all-ones seed block is symmetric, so tau(-n) = tau(n+4)
        for n in range(1, 8):
            assert somos5_window.value(-n) == somos5_window.value(n + 4)

    def test_fixed_point(self):
        w = iterate_somos5(Somos5Params(1, 0), ONES5, -5, 15)
        assert all(w.value(i) == 1 for i in w.indices())

    def test_residuals_exactly_zero(self, somos5_window, somos5_params):
        for n in range(somos5_window.base_index + 2, somos5_window.end_index - 2):
            assert somos5_window.somos5_residual(somos5_params, n) == 0


class TestEds:
    def test_golden_terms(self):
        w = iterate_eds(1, 1, -1, 1, 7)
        assert (w.value(5), w.value(6), w.value(7)) == (2, -1, -3)

    def test_antisymmetry(self):
        w = iterate_eds(1, 2, -3, 4, 9)
        for n in range(0, 10):
            assert w.value(-n) == -w.value(n)

    def test_a1_zero_rejected(self):
        with pytest.raises(InvalidSeed):
            iterate_eds(0, 1, 1, 1, 6)

    def test_n_hi_too_small(self):
        with pytest.raises(ValueError):
            iterate_eds(1, 1, 1, 1, 4)

    @pytest.mark.parametrize("seeds", [(1, 1, -1, 1), (1, 2, -3, 4), (1, 1, 2, 3)])
    def test_integrality_and_divisibility(self, seeds):
        # integer seeds with a2 | a4 give integer terms with a(n) | a(m) for n | m
        w = iterate_eds(*seeds, n_hi=20)
        assert all(w.value(n).denominator == 1 for n in range(0, 21))
        for n in range(1, 13):
            if w.value(n) == 0:
                continue
            for m in range(n, 13, n):
                assert check_divisibility(w, n, m)

    def test_divisibility_golden(self):
        w = iterate_eds(1, 1, -1, 1, 12)
        assert check_divisibility(w, 2, 6)  # 1 | -1

    def test_divisibility_trivial_cases(self):
        w = iterate_eds(1, 1, -1, 1, 12)
        assert check_divisibility(w, 7, 7)
        assert all(check_divisibility(w, 1, m) for m in range(1, 13))

    def test_divisibility_errors(self):
        w = iterate_eds(1, 1, -1, 1, 12)
        with pytest.raises(ValueError):
            check_divisibility(w, 2, 7)  # 2 does not divide 7
        with pytest.raises(IndexOutOfWindow):
            check_divisibility(w, 2, 40)
        frac = SequenceWindow(0, (Fraction(0), Fraction(1, 2), Fraction(1)))
        with pytest.raises(NonInteger):
            check_divisibility(frac, 1, 2)


class TestHankelResiduals:
    def test_somos4_m1_any_windows(self, somos4_window):
        eds = iterate_eds(1, 5, -7, 10, 8)  # any EDS with a1 = 1
        for n in range(0, 6):
            assert check_hankel_somos4(somos4_window, eds, 1, n) == 0

    def test_somos4_m0(self, somos4_window):
        eds = iterate_eds(1, 3, 2, 6, 8)
        for n in range(0, 6):
            assert check_hankel_somos4(somos4_window, eds, 0, n) == 0

    def test_somos5_m0_and_symmetry(self, somos5_window):
        eds = iterate_eds(1, 4, -2, 8, 8)
        for n in range(0, 6):
            assert check_hankel_somos5(somos5_window, eds, 0, n) == 0
            assert check_hankel_somos5(somos5_window, eds, -1, n) == check_hankel_somos5(
                somos5_window, eds, 0, n
            )

    def test_index_out_of_window(self, somos5_window):
        eds = iterate_eds(1, 1, -1, 1, 6)
        with pytest.raises(IndexOutOfWindow):
            check_hankel_somos5(somos5_window, eds, 6, 4)


class TestGauge:
    def test_identity(self, somos5_window):
        assert gauge_transform(somos5_window, 1, 1, 1) == somos5_window

    def test_transformed_window_still_somos5(self, somos5_window, somos5_params):
        w = gauge_transform(somos5_window, 7, 1, 1)
        for n in range(w.base_index + 2, w.end_index - 2):
            assert w.somos5_residual(somos5_params, n) == 0

    def test_general_gauge_keeps_h(self, somos5_window):
        w = gauge_transform(somos5_window, 3, Fraction(5, 2), Fraction(2, 7))
        for n in range(-3, 12):
            assert h_from_tau(w, n) == h_from_tau(somos5_window, n)

    def test_somos4_gauge_keeps_recurrence(self, somos4_window, somos4_params):
        w = gauge_transform(somos4_window, Fraction(3, 4), Fraction(3, 4), 2)
        for n in range(w.base_index + 2, w.end_index - 1):
            assert w.somos4_residual(somos4_params, n) == 0

    def test_zero_factor_rejected(self, somos5_window):
        with pytest.raises(ZeroGaugeFactor):
            gauge_transform(somos5_window, 0, 1, 1)


nonzero_small = st.integers(min_value=1, max_value=6)


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(st.lists(nonzero_small, min_size=4, max_size=4), nonzero_small, nonzero_small)
    def test_somos4_forward_backward_roundtrip(self, seeds, a, b):
        params = Somos4Params(a, b)
        fwd = iterate_somos4(params, SequenceWindow(0, tuple(seeds)), 0, 12)
        top = SequenceWindow(9, tuple(fwd.value(i) for i in range(9, 13)))
        back = iterate_somos4(params, top, 0, 12)
        assert all(back.value(i) == seeds[i] for i in range(4))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(nonzero_small, min_size=5, max_size=5), nonzero_small, nonzero_small)
    def test_somos5_forward_backward_roundtrip(self, seeds, a, b):
        params = Somos5Params(a, b)
        fwd = iterate_somos5(params, SequenceWindow(0, tuple(seeds)), 0, 12)
        top = SequenceWindow(8, tuple(fwd.value(i) for i in range(8, 13)))
        back = iterate_somos5(params, top, 0, 12)
        assert all(back.value(i) == seeds[i] for i in range(5))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(nonzero_small, min_size=5, max_size=5), nonzero_small, nonzero_small)
    def test_somos5_interior_residuals(self, seeds, a, b):
        params = Somos5Params(a, b)
        w = iterate_somos5(params, SequenceWindow(0, tuple(seeds)), -3, 12)
        assert all(w.somos5_residual(params, n) == 0 for n in range(-1, 10))
