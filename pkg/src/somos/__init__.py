"""Somos 4/5 sequences: exact iteration, QRT reductions, Weierstrass numerics
and the sigma-function solution of the initial value problem."""

from .errors import (
    ConsistencyFailure,
    DegenerateCurve,
    DivisionByZeroTerm,
    IndexOutOfWindow,
    InvalidSeed,
    MapSingular,
    NonInteger,
    NotApplicable,
    PoleAtLatticePoint,
    PrecisionLoss,
    SingularMu,
    SomosError,
    ZeroDenominator,
    ZeroGaugeFactor,
    ZeroScale,
    ZeroSeed,
)
from .exact import (
    SequenceWindow,
    Somos4Params,
    Somos5Params,
    as_rational,
    check_divisibility,
    check_hankel_somos4,
    check_hankel_somos5,
    format_rational,
    gauge_transform,
    iterate_eds,
    iterate_somos4,
    iterate_somos5,
)
from .qrt import (
    BiquadraticCurve,
    FState,
    HState,
    biquadratic_invariant,
    biquadratic_step,
    f_from_tau,
    h_from_tau,
    invariant_It,
    invariant_J,
    invariant_Jt,
    invariant_Jt_from_f,
    somos4_to_somos5_params,
    step_f,
    step_f3,
    step_f_back,
    step_h,
    step_h_back,
    subsequence_somos4_params,
)
from .solver import (
    Somos4Solution,
    Somos5Solution,
    TauEval,
    eval_f_closed,
    eval_h_closed,
    eval_tau,
    growth_constant,
    matched_eds_somos4,
    matched_eds_somos5,
    solve_somos4,
    solve_somos5,
    somos4_from_even_odd,
)
from .weierstrass import (
    DEFAULT_DPS,
    CurveInvariants,
    Lattice,
    addition_formula_residual,
    carlson_rf,
    curve_roots,
    inverse_wp,
    lattice_from_invariants,
    log_sigma,
    reduce_to_cell,
    scale_lattice,
    sigma,
    three_term_residual,
    wp,
    wp_prime,
    wp_second,
    zeta_w,
)

__version__ = "0.1.0"
