"""QRT-type maps: f/h steps, conserved quantities, biquadratic generality."""

from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from somos import (
    BiquadraticCurve,
    FState,
    HState,
    MapSingular,
    SequenceWindow,
    Somos4Params,
    Somos5Params,
    ZeroDenominator,
    biquadratic_invariant,
    biquadratic_step,
    f_from_tau,
    h_from_tau,
    invariant_It,
    invariant_J,
    invariant_Jt,
    invariant_Jt_from_f,
    iterate_somos4,
    iterate_somos5,
    somos4_to_somos5_params,
    step_f,
    step_f3,
    step_f_back,
    step_h,
    step_h_back,
    subsequence_somos4_params,
)
from somos.qrt import f_orbit, h_orbit, h_curve_residual, jt_difference_residual

P45 = Somos5Params(1, 1)
P44 = Somos4Params(1, 1)


class TestRatios:
    def test_f_golden(self, somos5_window):
        assert f_from_tau(somos5_window, 4) == 2

    def test_f_constant_window(self):
        w = SequenceWindow(0, (1,) * 6)
        assert f_from_tau(w, 2) == 1

    def test_f_somos4(self, somos4_window):
        assert f_from_tau(somos4_window, 1) == 1

    def test_h_golden_paper(self, somos5_window):
        assert h_from_tau(somos5_window, 0) == 2   # uses tau(-1) = 2
        assert h_from_tau(somos5_window, 1) == 1

    def test_h_n4(self, somos5_window):
        assert h_from_tau(somos5_window, 4) == Fraction(3, 2)

    def test_h_constant_window(self):
        w = SequenceWindow(0, (1,) * 6)
        assert h_from_tau(w, 1) == 1

    def test_h_is_f_product(self, somos5_window):
        for n in range(-2, 10):
            assert h_from_tau(somos5_window, n) == f_from_tau(
                somos5_window, n + 1
            ) * f_from_tau(somos5_window, n)


class TestFMap:
    def test_step_golden(self):
        st_ = step_f(FState(2, 1), P44)
        assert st_.f_curr == 1 and st_.index == 1

    def test_fixed_point(self):
        assert step_f(FState(1, 1), Somos4Params(1, 0)).f_curr == 1

    def test_backward_recovers(self):
        fwd = step_f(FState(2, 1, 5), P44)
        back = step_f_back(fwd, P44)
        assert back == FState(2, 1, 5)

    def test_orbit_matches_window(self, somos4_window):
        vals = f_orbit(FState(f_from_tau(somos4_window, 0), f_from_tau(somos4_window, 1), 1), P44, 15)
        for k, v in enumerate(vals):
            assert v == f_from_tau(somos4_window, k + 1)

    def test_map_singular(self):
        with pytest.raises(MapSingular):
            step_f(FState(1, 1), Somos4Params(1, -1))

    def test_zero_state_rejected(self):
        with pytest.raises(ZeroDenominator):
            FState(0, 1)

    def test_invariant_golden(self):
        assert invariant_J(2, 1, P44) == 4
        assert invariant_J(1, 1, Somos4Params(1, 0)) == 3

    def test_invariant_conserved_20_steps(self):
        state = FState(Fraction(2), Fraction(1))
        J = invariant_J(state.f_prev, state.f_curr, P44)
        for _ in range(20):
            state = step_f(state, P44)
            assert invariant_J(state.f_prev, state.f_curr, P44) == J


class TestHMap:
    def test_step_sequence_golden(self):
        st_ = HState(Fraction(2), Fraction(1))
        seen = [st_.h_curr]
        for _ in range(3):
            st_ = step_h(st_, P45)
            seen.append(st_.h_curr)
        assert seen == [1, 1, 2, Fraction(3, 2)]

    def test_fixed_point(self):
        assert step_h(HState(1, 1), Somos5Params(0, 1)).h_curr == 1

    def test_backward_recovers(self):
        fwd = step_h(HState(2, 1, 0), P45)
        assert step_h_back(fwd, P45) == HState(2, 1, 0)

    def test_invariant_golden_paper(self):
        assert invariant_Jt(2, 1, P45) == 5
        assert invariant_Jt(1, 1, Somos5Params(1, 0)) == 4

    def test_invariant_conserved_20_steps(self):
        state = HState(Fraction(2), Fraction(1))
        Jt = invariant_Jt(state.h_prev, state.h_curr, P45)
        for _ in range(20):
            state = step_h(state, P45)
            assert invariant_Jt(state.h_prev, state.h_curr, P45) == Jt

    def test_orbit_matches_window(self, somos5_window):
        vals = h_orbit(HState(h_from_tau(somos5_window, 0), h_from_tau(somos5_window, 1), 1), P45, 15)
        for k, v in enumerate(vals):
            assert v == h_from_tau(somos5_window, k + 1)


class TestThirdOrderMap:
    def test_step_f3_golden(self, somos5_window):
        assert step_f3(1, 1, 1, P45) == 2 == f_from_tau(somos5_window, 4)

    def test_step_f3_fixed_point(self):
        assert step_f3(1, 1, 1, Somos5Params(0, 1)) == 1

    def test_orbit_matches_window(self, somos5_window):
        f = [f_from_tau(somos5_window, n) for n in range(1, 4)]
        for n in range(4, 19):
            f.append(step_f3(f[-3], f[-2], f[-1], P45))
            assert f[-1] == f_from_tau(somos5_window, n)

    def test_invariant_It_embedded_somos4(self):
        # Somos 4 orbit (2,1,1) inside the third order map with (-beta, alpha^2+beta*J)
        params = Somos5Params(-1, 5)
        assert invariant_It(2, 1, 1, params) == 2  # = 2*alpha

    def test_invariant_It_trivial(self):
        assert invariant_It(1, 1, 1, Somos5Params(0, 1)) == 2

    def test_invariant_It_conserved(self, somos5_window):
        vals = [invariant_It(
            f_from_tau(somos5_window, n - 1),
            f_from_tau(somos5_window, n),
            f_from_tau(somos5_window, n + 1), P45)
            for n in range(0, 21)]
        assert len(set(vals)) == 1

    def test_jt_forms_agree_on_window(self, somos5_window):
        for n in range(0, 15):
            f3 = [f_from_tau(somos5_window, n + k) for k in (-1, 0, 1)]
            assert invariant_Jt_from_f(*f3, P45) == invariant_Jt(
                h_from_tau(somos5_window, n - 1), h_from_tau(somos5_window, n), P45
            )


class TestParameterTransfers:
    def test_somos4_to_somos5_golden(self, somos4_window):
        p5 = somos4_to_somos5_params(P44, 4)
        assert (p5.alpha_t, p5.beta_t) == (-1, 5)
        for n in range(-2, 20):
            assert somos4_window.somos5_residual(p5, n) == 0

    def test_somos4_to_somos5_trivials(self):
        assert somos4_to_somos5_params(Somos4Params(2, 0), 9).beta_t == 4
        p = somos4_to_somos5_params(Somos4Params(0, 3), 7)
        assert (p.alpha_t, p.beta_t) == (-3, 21)

    def test_subsequence_params_golden(self, somos5_window):
        p4 = subsequence_somos4_params(P45, 5)
        assert (p4.alpha, p4.beta) == (1, 8)
        even = somos5_window.parity_subsequence(0)
        odd = somos5_window.parity_subsequence(1)
        assert list(even.values)[4:11] == [1, 1, 1, 3, 11, 83, 1217]
        for k in range(even.base_index + 2, even.end_index - 1):
            assert even.somos4_residual(p4, k) == 0
        for k in range(odd.base_index + 2, odd.end_index - 1):
            assert odd.somos4_residual(p4, k) == 0

    def test_subsequence_params_alpha_zero(self):
        p4 = subsequence_somos4_params(Somos5Params(0, 3), 11)
        assert (p4.alpha, p4.beta) == (9, 0)


class TestHCurve:
    def test_golden_point(self):
        assert h_curve_residual(2, 1, P45, 5) == 0

    def test_symmetry(self):
        assert h_curve_residual(1, 2, P45, 5) == 0

    def test_zero_along_orbit(self):
        state = HState(Fraction(2), Fraction(1))
        for _ in range(20):
            state = step_h(state, P45)
            assert h_curve_residual(state.h_prev, state.h_curr, P45, 5) == 0

    @settings(max_examples=50, deadline=None)
    @given(st.fractions(min_value=Fraction(-5), max_value=Fraction(5), max_denominator=6),
           st.fractions(min_value=Fraction(-5), max_value=Fraction(5), max_denominator=6),
           st.fractions(min_value=Fraction(-5), max_value=Fraction(5), max_denominator=6))
    def test_jt_difference_identity(self, a, b, c):
        # the factored form of Jt(n+1) - Jt(n) holds for arbitrary triples
        if 0 in (a, b, c):
            return
        assert jt_difference_residual(a, b, c, P45) == 0


class TestBiquadratic:
    def test_reduces_to_f_map(self):
        curve = BiquadraticCurve(a=Fraction(1), b=Fraction(1), c=0, d=0, e=1)  # a=beta, b=alpha
        state = FState(Fraction(2), Fraction(1))
        u_prev, u_curr = Fraction(2), Fraction(1)
        for _ in range(12):
            state = step_f(state, P44)
            u_prev, u_curr = u_curr, biquadratic_step(u_prev, u_curr, curve)
            assert u_curr == state.f_curr
        assert biquadratic_invariant(2, 1, curve) == invariant_J(2, 1, P44)

    def test_reduces_to_h_map(self):
        curve = BiquadraticCurve(a=Fraction(1), b=Fraction(1), c=0, d=1, e=0)  # a=beta, b=alpha
        state = HState(Fraction(2), Fraction(1))
        u_prev, u_curr = Fraction(2), Fraction(1)
        for _ in range(12):
            state = step_h(state, P45)
            u_prev, u_curr = u_curr, biquadratic_step(u_prev, u_curr, curve)
            assert u_curr == state.h_curr
        assert biquadratic_invariant(2, 1, curve) == invariant_Jt(2, 1, P45)

    def test_generic_conservation_exact_50_steps(self):
        curve = BiquadraticCurve(*(Fraction(k) for k in (1, 2, 3, 4, 5)))
        u_prev, u_curr = Fraction(1), Fraction(1)
        K = biquadratic_invariant(u_prev, u_curr, curve)
        for _ in range(50):
            u_prev, u_curr = u_curr, biquadratic_step(u_prev, u_curr, curve)
            assert biquadratic_invariant(u_prev, u_curr, curve) == K

    def test_generic_conservation_floating(self):
        with mp.workdps(16):
            curve = BiquadraticCurve(*(mp.mpf(k) for k in (1, 2, 3, 4, 5)))
            u_prev, u_curr = mp.mpf(1), mp.mpf(1)
            K = biquadratic_invariant(u_prev, u_curr, curve)
            for _ in range(50):
                u_prev, u_curr = u_curr, biquadratic_step(u_prev, u_curr, curve)
                assert abs(biquadratic_invariant(u_prev, u_curr, curve) - K) < 1e-10 * abs(K)

    def test_degenerate_curve_rejected(self):
        with pytest.raises(ValueError):
            BiquadraticCurve(0, 0, 0, 0, 0)

    def test_zero_denominator(self):
        curve = BiquadraticCurve(a=1, b=1, c=0, d=0, e=1)
        with pytest.raises(ZeroDenominator):
            biquadratic_step(0, 1, curve)
