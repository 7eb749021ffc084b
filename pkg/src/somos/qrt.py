"""Reduced maps attached to Somos recurrences and their conserved quantities.

The gauge-invariant ratio f(n) = t(n+1) t(n-1) / t(n)^2 of a Somos 4 window
satisfies a reversible second order map with invariant J; the doubly
gauge-invariant ratio h(n) = f(n+1) f(n) of a Somos 5 window satisfies a
second order map with invariant Jt, and f itself then satisfies a third
order map with the pair of invariants (It, Jt).  All of these are
degenerations of the plane map preserving a symmetric biquadratic curve,
which is implemented here in full generality.

Every operation accepts exact Fractions or floating (mpmath) scalars through
the same interface; conservation is exact in the former mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MapSingular, ZeroDenominator
from .exact import SequenceWindow, Somos4Params, Somos5Params


@dataclass(frozen=True)
class FState:
    """Consecutive values (f(index-1), f(index)) of the second order f-map."""

    f_prev: object
    f_curr: object
    index: int = 0

    def __post_init__(self):
        if self.f_prev == 0 or self.f_curr == 0:
            raise ZeroDenominator("f-state values must be nonzero")


@dataclass(frozen=True)
class HState:
    """Consecutive values (h(index-1), h(index)) of the second order h-map."""

    h_prev: object
    h_curr: object
    index: int = 0

    def __post_init__(self):
        if self.h_prev == 0 or self.h_curr == 0:
            raise ZeroDenominator("h-state values must be nonzero")


@dataclass(frozen=True)
class BiquadraticCurve:
    """Coefficients of e X^2Y^2 + d XY(X+Y) + c(X^2+Y^2) + b(X+Y) + a = K XY."""

    a: object
    b: object
    c: object
    d: object
    e: object
    K: object = None

    def __post_init__(self):
        if all(x == 0 for x in (self.a, self.b, self.c, self.d, self.e)):
            raise ValueError("biquadratic curve is identically degenerate")

    def diagonal_quartic_coeffs(self):
        """Coefficients (X^4 .. X^0) of B(X, X) = 0, the branch-point quartic."""
        return (self.e, 2 * self.d, 2 * self.c + (0 if self.K is None else -self.K), 2 * self.b, self.a)


def f_from_tau(tau: SequenceWindow, n: int):
    """Gauge-invariant ratio f(n) = t(n+1) t(n-1) / t(n)^2 of a window."""
    tn = tau.value(n)
    if tn == 0:
        raise ZeroDenominator(f"t({n}) = 0")
    return tau.value(n + 1) * tau.value(n - 1) / tn**2


def h_from_tau(tau: SequenceWindow, n: int):
    """Fully gauge-invariant ratio h(n) = t(n+2) t(n-1) / (t(n+1) t(n))."""
    den = tau.value(n + 1) * tau.value(n)
    if den == 0:
        raise ZeroDenominator(f"t({n}) t({n + 1}) = 0")
    return tau.value(n + 2) * tau.value(n - 1) / den


def step_f(state: FState, params: Somos4Params) -> FState:
    """One forward step of f(n-1) f(n)^2 f(n+1) = alpha f(n) + beta."""
    den = state.f_prev * state.f_curr**2
    if den == 0:
        raise ZeroDenominator("f-map denominator vanished")
    f_next = (params.alpha * state.f_curr + params.beta) / den
    if f_next == 0:
        raise MapSingular("f-map produced a zero iterate")
    return FState(state.f_curr, f_next, state.index + 1)


def step_f_back(state: FState, params: Somos4Params) -> FState:
    """One backward step; the map is reversible."""
    den = state.f_prev**2 * state.f_curr
    if den == 0:
        raise ZeroDenominator("f-map denominator vanished")
    f_before = (params.alpha * state.f_prev + params.beta) / den
    if f_before == 0:
        raise MapSingular("f-map produced a zero iterate")
    return FState(f_before, state.f_prev, state.index - 1)


def invariant_J(f_prev, f_curr, params: Somos4Params):
    """Conserved quantity of the f-map."""
    if f_prev == 0 or f_curr == 0:
        raise ZeroDenominator("f values must be nonzero")
    return (
        f_prev * f_curr
        + params.alpha * (1 / f_prev + 1 / f_curr)
        + params.beta / (f_prev * f_curr)
    )


def step_h(state: HState, params: Somos5Params) -> HState:
    """One forward step of h(n-1) h(n) h(n+1) = alpha h(n) + beta."""
    den = state.h_prev * state.h_curr
    if den == 0:
        raise ZeroDenominator("h-map denominator vanished")
    h_next = (params.alpha_t * state.h_curr + params.beta_t) / den
    if h_next == 0:
        raise MapSingular("h-map produced a zero iterate")
    return HState(state.h_curr, h_next, state.index + 1)


def step_h_back(state: HState, params: Somos5Params) -> HState:
    den = state.h_prev * state.h_curr
    if den == 0:
        raise ZeroDenominator("h-map denominator vanished")
    h_before = (params.alpha_t * state.h_prev + params.beta_t) / den
    if h_before == 0:
        raise MapSingular("h-map produced a zero iterate")
    return HState(h_before, state.h_prev, state.index - 1)


def invariant_Jt(h_prev, h_curr, params: Somos5Params):
    """Conserved quantity of the h-map."""
    if h_prev == 0 or h_curr == 0:
        raise ZeroDenominator("h values must be nonzero")
    return (
        h_prev
        + h_curr
        + params.alpha_t * (1 / h_prev + 1 / h_curr)
        + params.beta_t / (h_prev * h_curr)
    )


def invariant_It(f_prev, f_curr, f_next, params: Somos5Params):
    """First of the two conserved quantities of the third order f-map."""
    prod = f_prev * f_curr * f_next
    if prod == 0:
        raise ZeroDenominator("f values must be nonzero")
    return (
        prod
        + params.alpha_t * (1 / f_prev + 1 / f_curr + 1 / f_next)
        + params.beta_t / prod
    )


def invariant_Jt_from_f(f_prev, f_curr, f_next, params: Somos5Params):
    """Second conserved quantity of the third order map, written in f.

    Algebraically identical to invariant_Jt on (f_curr*f_prev, f_next*f_curr).
    """
    if f_prev == 0 or f_curr == 0 or f_next == 0:
        raise ZeroDenominator("f values must be nonzero")
    return (
        f_prev * f_curr
        + f_curr * f_next
        + params.alpha_t * (1 / (f_prev * f_curr) + 1 / (f_curr * f_next))
        + params.beta_t / (f_prev * f_curr**2 * f_next)
    )


def step_f3(f_prev, f_curr, f_next, params: Somos5Params):
    """Forward step of f(n-1) f(n)^2 f(n+1)^2 f(n+2) = alpha f(n) f(n+1) + beta."""
    den = f_prev * f_curr**2 * f_next**2
    if den == 0:
        raise ZeroDenominator("third order f-map denominator vanished")
    return (params.alpha_t * f_curr * f_next + params.beta_t) / den


def somos4_to_somos5_params(params: Somos4Params, J) -> Somos5Params:
    """Somos 5 parameters satisfied by every Somos 4 solution with invariant J."""
    return Somos5Params(-params.beta, params.alpha**2 + params.beta * J)


def subsequence_somos4_params(params: Somos5Params, Jt) -> Somos4Params:
    """Somos 4 parameters satisfied by both parity subsequences of a Somos 5."""
    a, b = params.alpha_t, params.beta_t
    return Somos4Params(b**2, a * (2 * b**2 + a * b * Jt + a**3))


def h_curve_residual(h_prev, h_curr, params: Somos5Params, Jt):
    """Residual of the cubic invariant curve of the h-map at (h_prev, h_curr)."""
    return (h_prev + h_curr - Jt) * (h_prev * h_curr + params.alpha_t) + params.beta_t + params.alpha_t * Jt


def jt_difference_residual(h_prev, h_curr, h_next, params: Somos5Params):
    """Jt(n+1) - Jt(n) minus its factored form; identically zero in h.

    The factored form is (h(n+1)-h(n-1)) / (h(n-1)h(n)h(n+1)) times the
    h-map defect, so Jt is conserved exactly on orbits where the defect
    vanishes and h(n+1) != h(n-1).
    """
    lhs = invariant_Jt(h_curr, h_next, params) - invariant_Jt(h_prev, h_curr, params)
    defect = h_next * h_curr * h_prev - params.alpha_t * h_curr - params.beta_t
    rhs = (h_next - h_prev) / (h_prev * h_curr * h_next) * defect
    return lhs - rhs


def biquadratic_invariant(u_prev, u_curr, curve: BiquadraticCurve):
    """Value of the biquadratic first integral at consecutive iterates."""
    if u_prev == 0 or u_curr == 0:
        raise ZeroDenominator("iterates must be nonzero")
    return (
        curve.e * u_prev * u_curr
        + curve.d * (u_prev + u_curr)
        + curve.c * (u_prev / u_curr + u_curr / u_prev)
        + curve.b * (1 / u_prev + 1 / u_curr)
        + curve.a / (u_prev * u_curr)
    )


def biquadratic_step(u_prev, u_curr, curve: BiquadraticCurve):
    """Forward step u(n+1) = (a + b u + c u^2) / ((c + d u + e u^2) u(n-1))."""
    den = (curve.c + curve.d * u_curr + curve.e * u_curr**2) * u_prev
    if den == 0:
        raise ZeroDenominator("biquadratic step denominator vanished")
    u_next = (curve.a + curve.b * u_curr + curve.c * u_curr**2) / den
    if u_next == 0:
        raise MapSingular("biquadratic map produced a zero iterate")
    return u_next


def f_orbit(state: FState, params: Somos4Params, steps: int) -> list:
    """f values [f(index), f(index+1), ...] along `steps` forward steps."""
    out = [state.f_curr]
    for _ in range(steps):
        state = step_f(state, params)
        out.append(state.f_curr)
    return out


def h_orbit(state: HState, params: Somos5Params, steps: int) -> list:
    out = [state.h_curr]
    for _ in range(steps):
        state = step_h(state, params)
        out.append(state.h_curr)
    return out
