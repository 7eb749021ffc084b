"""Exact arbitrary-precision iteration of Somos 4, Somos 5 and elliptic
divisibility sequences.

Everything in this module is pure rational arithmetic (`fractions.Fraction`);
no floating point enters, so recurrence residuals, Hankel determinants and
divisibility checks are all decided exactly.  The three recurrences handled
here are

    Somos 4:  t(n+2) t(n-2) = alpha * t(n+1) t(n-1) + beta * t(n)^2
    Somos 5:  t(n+3) t(n-2) = alpha * t(n+2) t(n-1) + beta * t(n+1) t(n)
    EDS:      a(n+2) a(n-2) = a2^2 * a(n+1) a(n-1) - a1 a3 * a(n)^2

with backward extension defined by algebraic rearrangement.  A zero pivot
term blocks extension in that direction and raises DivisionByZeroTerm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import (
    DivisionByZeroTerm,
    IndexOutOfWindow,
    InvalidSeed,
    NonInteger,
    ZeroGaugeFactor,
)

RationalLike = Union[Fraction, int, str]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    """Serialize as an explicit 'numerator/denominator' string."""
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Somos4Params:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        object.__setattr__(self, "beta", as_rational(self.beta))
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("Somos 4 parameters (alpha, beta) must not both be zero")


@dataclass(frozen=True)
class Somos5Params:
    alpha_t: Fraction
    beta_t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha_t", as_rational(self.alpha_t))
        object.__setattr__(self, "beta_t", as_rational(self.beta_t))
        if self.alpha_t == 0 and self.beta_t == 0:
            raise ValueError("Somos 5 parameters must not both be zero")


@dataclass(frozen=True)
class SequenceWindow:
    """A contiguous block of exact sequence values.

    ``values[k]`` holds the term with index ``base_index + k``.  Windows are
    immutable; the iteration functions return extended copies.
    """

    base_index: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))

    @classmethod
    def from_values(cls, base_index: int, values: Iterable[RationalLike]) -> "SequenceWindow":
        return cls(base_index, tuple(as_rational(v) for v in values))

    @property
    def end_index(self) -> int:
        return self.base_index + len(self.values) - 1

    @property
    def has_zero(self) -> bool:
        return any(v == 0 for v in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, index: int) -> bool:
        return self.base_index <= index <= self.end_index

    def indices(self) -> range:
        return range(self.base_index, self.end_index + 1)

    def value(self, index: int) -> Fraction:
        if index not in self:
            raise IndexOutOfWindow(index, self.base_index, self.end_index)
        return self.values[index - self.base_index]

    def parity_subsequence(self, parity: int) -> "SequenceWindow":
        """Window over k of the terms t(2k + parity) contained in this window."""
        if parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        k_lo = -((-(self.base_index - parity)) // 2)  # ceil((base - parity)/2)
        vals = []
        k = k_lo
        while 2 * k + parity <= self.end_index:
            vals.append(self.value(2 * k + parity))
            k += 1
        return SequenceWindow(k_lo, tuple(vals))

    def somos4_residual(self, params: Somos4Params, n: int) -> Fraction:
        return (
            self.value(n + 2) * self.value(n - 2)
            - params.alpha * self.value(n + 1) * self.value(n - 1)
            - params.beta * self.value(n) ** 2
        )

    def somos5_residual(self, params: Somos5Params, n: int) -> Fraction:
        return (
            self.value(n + 3) * self.value(n - 2)
            - params.alpha_t * self.value(n + 2) * self.value(n - 1)
            - params.beta_t * self.value(n + 1) * self.value(n)
        )

    def to_json(self) -> dict:
        return {
            "base_index": self.base_index,
            "values": [format_rational(v) for v in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SequenceWindow":
        return cls.from_values(int(obj["base_index"]), obj["values"])


def _extend(window: SequenceWindow, n_lo: int, n_hi: int, step_fwd, step_back) -> SequenceWindow:
    if n_lo > window.base_index or n_hi < window.end_index:
        raise ValueError("requested range must contain the seed window")
    vals = list(window.values)
    base = window.base_index
    while base + len(vals) - 1 < n_hi:
        vals.append(step_fwd(base, vals))
    while base > n_lo:
        vals.insert(0, step_back(base, vals))
        base -= 1
    return SequenceWindow(base, tuple(vals))


def iterate_somos4(
    params: Somos4Params, seeds: SequenceWindow, n_lo: int, n_hi: int
) -> SequenceWindow:
    """Extend four seed terms to cover [n_lo, n_hi], exactly, both directions."""
    if len(seeds) != 4:
        raise InvalidSeed("Somos 4 needs exactly four seed terms")
    a, b = params.alpha, params.beta

    def fwd(base, vals):
        m = base + len(vals)  # index being produced
        pivot = vals[m - 4 - base]
        if pivot == 0:
            raise DivisionByZeroTerm(m - 4)
        return (a * vals[m - 1 - base] * vals[m - 3 - base] + b * vals[m - 2 - base] ** 2) / pivot

    def back(base, vals):
        m = base - 1
        pivot = vals[m + 4 - base]
        if pivot == 0:
            raise DivisionByZeroTerm(m + 4)
        return (a * vals[m + 3 - base] * vals[m + 1 - base] + b * vals[m + 2 - base] ** 2) / pivot

    return _extend(seeds, n_lo, n_hi, fwd, back)


def iterate_somos5(
    params: Somos5Params, seeds: SequenceWindow, n_lo: int, n_hi: int
) -> SequenceWindow:
    """Extend five seed terms to cover [n_lo, n_hi], exactly, both directions."""
    if len(seeds) != 5:
        raise InvalidSeed("Somos 5 needs exactly five seed terms")
    a, b = params.alpha_t, params.beta_t

    def fwd(base, vals):
        m = base + len(vals)
        pivot = vals[m - 5 - base]
        if pivot == 0:
            raise DivisionByZeroTerm(m - 5)
        return (
            a * vals[m - 1 - base] * vals[m - 4 - base]
            + b * vals[m - 2 - base] * vals[m - 3 - base]
        ) / pivot

    def back(base, vals):
        m = base - 1
        pivot = vals[m + 5 - base]
        if pivot == 0:
            raise DivisionByZeroTerm(m + 5)
        return (
            a * vals[m + 4 - base] * vals[m + 1 - base]
            + b * vals[m + 3 - base] * vals[m + 2 - base]
        ) / pivot

    return _extend(seeds, n_lo, n_hi, fwd, back)


def iterate_eds(
    a1: RationalLike,
    a2: RationalLike,
    a3: RationalLike,
    a4: RationalLike,
    n_hi: int,
) -> SequenceWindow:
    """Generate an elliptic divisibility sequence on [-n_hi, n_hi].

    a(0) = 0 and a(1)..a(4) are taken as given; indices from 5 up use the
    recurrence with pivot a(n-4) (so the forced a(0) = 0 is never a divisor),
    and negative indices are filled by the antisymmetry a(-n) = -a(n).
    """
    a1, a2, a3, a4 = (as_rational(x) for x in (a1, a2, a3, a4))
    if a1 == 0:
        raise InvalidSeed("EDS requires a1 != 0")
    if n_hi < 5:
        raise ValueError("n_hi must be at least 5")
    vals = [Fraction(0), a1, a2, a3, a4]
    for m in range(5, n_hi + 1):
        pivot = vals[m - 4]
        if pivot == 0:
            raise DivisionByZeroTerm(m - 4)
        vals.append((a2 * a2 * vals[m - 1] * vals[m - 3] - a1 * a3 * vals[m - 2] ** 2) / pivot)
    neg = [-v for v in vals[1:]]
    neg.reverse()
    return SequenceWindow(-n_hi, tuple(neg + vals))


def check_divisibility(window: SequenceWindow, n: int, m: int) -> bool:
    """Exact check that a(n) | a(m).  Both values must be integers."""
    if n == 0 or m % n != 0:
        raise ValueError("requires n | m with n != 0")
    an, am = window.value(n), window.value(m)
    if an.denominator != 1 or am.denominator != 1:
        raise NonInteger(f"a({n}) = {an}, a({m}) = {am} are not both integers")
    if an == 0:
        raise ValueError("a(n) must be nonzero")
    return am.numerator % an.numerator == 0


def check_hankel_somos4(
    tau: SequenceWindow, a: SequenceWindow, m: int, n: int
) -> Fraction:
    """Residual of the 2x2 Hankel determinant relation tying a Somos 4 window
    to its associated divisibility sequence; zero iff the identity holds."""
    det = a.value(m) ** 2 * tau.value(n + 1) * tau.value(n - 1) - a.value(m + 1) * a.value(
        m - 1
    ) * tau.value(n) ** 2
    return tau.value(n + m) * tau.value(n - m) - det


def check_hankel_somos5(
    tau: SequenceWindow, a: SequenceWindow, m: int, n: int
) -> Fraction:
    """Residual of the shifted Hankel determinant relation for Somos 5 windows.

    The relation is symmetric under m -> -m-1, which callers can use as a free
    consistency check.
    """
    det = a.value(m + 1) * a.value(m) * tau.value(n + 2) * tau.value(n - 1) - a.value(
        m - 1
    ) * a.value(m + 2) * tau.value(n + 1) * tau.value(n)
    return a.value(1) * a.value(2) * tau.value(n + m + 1) * tau.value(n - m) - det


def gauge_transform(
    window: SequenceWindow,
    A_even: RationalLike,
    A_odd: RationalLike,
    B: RationalLike,
) -> SequenceWindow:
    """Apply t(2n) -> A_even B^(2n) t(2n), t(2n+1) -> A_odd B^(2n+1) t(2n+1).

    With A_even == A_odd this is the two-parameter Somos 4 gauge group.
    """
    A_even, A_odd, B = (as_rational(x) for x in (A_even, A_odd, B))
    if A_even == 0 or A_odd == 0 or B == 0:
        raise ZeroGaugeFactor("gauge factors must be nonzero")
    out = []
    for idx in window.indices():
        scale = (A_even if idx % 2 == 0 else A_odd) * B**idx
        out.append(scale * window.value(idx))
    return SequenceWindow(window.base_index, tuple(out))
