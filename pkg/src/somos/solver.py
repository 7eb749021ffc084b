"""End-to-end solution of Somos 4 and Somos 5 initial value problems.

The pipeline turns coefficients plus seeds into explicit sigma-function
data.  For Somos 5:

  seeds -> h1, h2 -> (backward h-steps) h0, h(-1) -> invariant Jt
        -> mu = (beta + alpha Jt)^(1/4),  lambda = (Jt^2/4 + alpha)/(3 mu^2)
        -> g2 = 12 lambda^2 - 2 Jt,  g3 = 4 lambda^3 - g2 lambda - mu^2
        -> kappa = inv_wp(lambda), z0 = inv_wp(x0),
           x0 = lambda + mu^2/(h(-1) + h0 - Jt)
        -> rescale to the quartic-root-free curve g2* = mu^4 g2, g3* = mu^6 g3
           with u0 = z0/mu, v = kappa/mu
        -> prefactors A+-, B+- from the first four seeds.

Terms are then evaluated in closed form:

  t(2n)   = A+ B+^n sigma*(u0 + 2n v)  / sigma*(2v)^(n^2)
  t(2n+1) = A- B-^n sigma*(u0+(2n+1)v) / sigma*(2v)^(n^2)

Everything that is rational stays exact (Fractions): Jt, mu^4, g2, the
starred invariants, the subsequence parameters and the j-invariant, so the
worked-example values can be asserted with zero tolerance.  Signs of kappa
and z0 are pinned by the consistency conditions wp'(kappa) = mu and
wp'(kappa) wp'(z0) = (x0 - lambda)(h(-1) - h0), making output reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import mpmath as mp

from .errors import (
    ConsistencyFailure,
    DegenerateCurve,
    NotApplicable,
    PoleAtLatticePoint,
    PrecisionLoss,
    SingularMu,
    ZeroSeed,
)
from .exact import (
    RationalLike,
    SequenceWindow,
    Somos4Params,
    Somos5Params,
    as_rational,
    format_rational,
    iterate_eds,
    iterate_somos5,
)
from .qrt import HState, invariant_J, invariant_Jt, step_h_back, subsequence_somos4_params
from .weierstrass import (
    DEFAULT_DPS,
    CurveInvariants,
    Lattice,
    inverse_wp,
    lattice_from_invariants,
    log_sigma,
    reduce_to_cell,
    sigma,
    to_mp,
    wp,
    wp_prime,
    wp_second,
)

_SIGN_TOL = mp.mpf("1e-6")
_POST_TOL = mp.mpf("1e-9")
_LOG_VALUE_LIMIT = mp.mpf("1e6")


class TauEval(NamedTuple):
    """log |t(n)| plus the reconstructed value when representable."""

    log_abs: object
    value: object


def _require_nonzero_seeds(seeds):
    vals = tuple(as_rational(s) for s in seeds)
    if any(v == 0 for v in vals):
        raise ZeroSeed("all seeds must be nonzero")
    return vals


def _sign_candidates(z, lat):
    """The two cell representatives of +-z, deduplicated, original first."""
    zc = reduce_to_cell(z, lat)
    zn = reduce_to_cell(-z, lat)
    if abs(zc - zn) < mp.mpf(10) ** (-(lat.dps // 2)):
        return [zc]
    return [zc, zn]


def _real_if_close(value, tol=mp.mpf("1e-6")):
    if abs(mp.im(value)) <= tol * max(1, abs(mp.re(value))):
        return mp.re(value)
    raise PrecisionLoss(
        f"imaginary residue {mp.nstr(abs(mp.im(value)), 5)} too large for a real result"
    )


def _num_json(x, dps):
    return {"re": mp.nstr(mp.re(x), dps), "im": mp.nstr(mp.im(x), dps)}


@dataclass(frozen=True)
class Somos4Solution:
    """Sigma-function data solving a Somos 4 IVP: t(n) = A B^n sigma(z0+n k)/sigma(k)^(n^2)."""

    params: Somos4Params
    seeds: tuple
    dps: int
    J: object
    lam: object
    inv: CurveInvariants
    lat: Lattice
    kappa: object
    z0: object
    A: object
    B: object
    exact: dict
    convention: dict

    def eval_tau(self, n: int) -> TauEval:
        return eval_tau(self, n)

    def to_json(self) -> dict:
        d = self.dps
        return {
            "kind": "somos4",
            "precision": d,
            "params": {"alpha": format_rational(self.params.alpha),
                       "beta": format_rational(self.params.beta)},
            "seeds": [format_rational(s) for s in self.seeds],
            "exact": {k: format_rational(v) for k, v in sorted(self.exact.items())},
            "numeric": {
                "J": _num_json(self.J, d),
                "lambda": _num_json(self.lam, d),
                "g2": _num_json(self.inv.g2, d),
                "g3": _num_json(self.inv.g3, d),
                "kappa": _num_json(self.kappa, d),
                "z0": _num_json(self.z0, d),
                "A": _num_json(self.A, d),
                "B": _num_json(self.B, d),
                "lattice": {
                    "omega1": _num_json(self.lat.omega1, d),
                    "omega2": _num_json(self.lat.omega2, d),
                    "eta1": _num_json(self.lat.eta1, d),
                    "q": _num_json(self.lat.q, d),
                },
            },
            "convention": self.convention,
        }


@dataclass(frozen=True)
class Somos5Solution:
    """Sigma-function data solving a Somos 5 IVP (alternating even/odd form)."""

    params: Somos5Params
    seeds: tuple
    dps: int
    Jt: object
    mu: object
    lam_t: object
    x0: object
    inv: CurveInvariants
    lat: Lattice
    kappa: object
    z0: object
    inv_star: CurveInvariants
    lat_star: Lattice
    u0: object
    v: object
    A_plus: object
    A_minus: object
    B_plus: object
    B_minus: object
    exact: dict
    convention: dict
    periodic_flag: bool = False

    @property
    def mu4_exact(self) -> Fraction:
        return self.exact["mu4"]

    def eval_tau(self, n: int) -> TauEval:
        return eval_tau(self, n)

    def to_json(self) -> dict:
        d = self.dps
        return {
            "kind": "somos5",
            "precision": d,
            "params": {"alpha_t": format_rational(self.params.alpha_t),
                       "beta_t": format_rational(self.params.beta_t)},
            "seeds": [format_rational(s) for s in self.seeds],
            "exact": {k: format_rational(v) for k, v in sorted(self.exact.items())},
            "numeric": {
                "Jt": _num_json(self.Jt, d),
                "mu": _num_json(self.mu, d),
                "lambda_t": _num_json(self.lam_t, d),
                "x0": _num_json(self.x0, d),
                "g2": _num_json(self.inv.g2, d),
                "g3": _num_json(self.inv.g3, d),
                "g2_star": _num_json(self.inv_star.g2, d),
                "g3_star": _num_json(self.inv_star.g3, d),
                "kappa": _num_json(self.kappa, d),
                "z0": _num_json(self.z0, d),
                "u0": _num_json(self.u0, d),
                "v": _num_json(self.v, d),
                "A_plus": _num_json(self.A_plus, d),
                "A_minus": _num_json(self.A_minus, d),
                "B_plus": _num_json(self.B_plus, d),
                "B_minus": _num_json(self.B_minus, d),
                "lattice_star": {
                    "omega1": _num_json(self.lat_star.omega1, d),
                    "omega2": _num_json(self.lat_star.omega2, d),
                    "eta1": _num_json(self.lat_star.eta1, d),
                    "q": _num_json(self.lat_star.q, d),
                },
            },
            "convention": self.convention,
            "periodic_orbit_warning": self.periodic_flag,
        }

    # derived accessors for the rescaled point data
    @property
    def x0_star(self) -> Fraction:
        return self.exact["x0_star"]

    @property
    def lambda_star(self) -> Fraction:
        return self.exact["lambda_star"]


def solve_somos4(params: Somos4Params, seeds, dps: int = DEFAULT_DPS) -> Somos4Solution:
    """Solve the Somos 4 IVP for four nonzero seeds t0..t3."""
    seeds = _require_nonzero_seeds(seeds)
    if len(seeds) != 4:
        raise ZeroSeed("Somos 4 needs exactly four seeds")
    t0, t1, t2, t3 = seeds
    a, b = params.alpha, params.beta

    f1 = t2 * t0 / t1**2
    f2 = t3 * t1 / t2**2
    if f1 == 0 or f2 == 0:
        raise ZeroSeed("derived f-values must be nonzero")
    f0 = (a * f1 + b) / (f1**2 * f2)
    if f0 == 0:
        raise DegenerateCurve("f0 = 0: orbit hits a singular fiber")
    f_m1 = (a * f0 + b) / (f0**2 * f1)
    J = invariant_J(f0, f1, params)
    if a == 0:
        raise DegenerateCurve("alpha = 0 places kappa at a two-torsion point")
    lam = (J**2 / 4 - b) / (3 * a)
    g2 = 12 * lam**2 - 2 * J
    g3 = 4 * lam**3 - g2 * lam - a
    inv = CurveInvariants.from_exact(g2, g3, dps)

    with mp.workdps(dps):
        lat = lattice_from_invariants(inv)
        kappa_raw = inverse_wp(to_mp(lam, dps), lat)
        z0_raw = inverse_wp(to_mp(lam - f0, dps), lat)
        target = to_mp(f0**2 * (f1 - f_m1), dps)
        scale = max(1, abs(target))

        chosen = None
        for ik, kc in enumerate(_sign_candidates(kappa_raw, lat)):
            wpk = wp_prime(kc, lat)
            for iz, zc in enumerate(_sign_candidates(z0_raw, lat)):
                if abs(wpk * wp_prime(zc, lat) - target) <= _SIGN_TOL * scale:
                    chosen = (kc, zc, ik, iz)
                    break
            if chosen:
                break
        if chosen is None:
            raise ConsistencyFailure("no sign assignment matches wp'(z0) wp'(kappa)")
        kappa, z0, ik, iz = chosen

        A = to_mp(t0, dps) / sigma(z0, lat)
        B = sigma(kappa, lat) * sigma(z0, lat) * to_mp(t1, dps) / (
            sigma(z0 + kappa, lat) * to_mp(t0, dps)
        )

        sol = Somos4Solution(
            params=params,
            seeds=seeds,
            dps=dps,
            J=to_mp(J, dps),
            lam=to_mp(lam, dps),
            inv=inv,
            lat=lat,
            kappa=kappa,
            z0=z0,
            A=A,
            B=B,
            exact={
                "J": J,
                "lambda": lam,
                "g2": g2,
                "g3": g3,
                "j_invariant": inv.j_invariant,
                "f_m1": f_m1,
                "f0": f0,
                "f1": f1,
                "f2": f2,
            },
            convention={
                "kappa_sign": "wp'(z0) wp'(kappa) = f0^2 (f1 - f(-1)); candidates (kappa, z0) = "
                f"({ik}, {iz})",
                "cell": "representatives reduced to [0,1)^2 in lattice coordinates",
            },
        )
        for n, t in enumerate(seeds):
            got = sol.eval_tau(n).value
            if abs(got - to_mp(t, dps)) > _POST_TOL * max(1, abs(to_mp(t, dps))):
                raise ConsistencyFailure(f"seed reconstruction failed at n = {n}")
        return sol


def solve_somos5(params: Somos5Params, seeds, dps: int = DEFAULT_DPS) -> Somos5Solution:
    """Solve the Somos 5 IVP for five nonzero seeds t0..t4."""
    seeds = _require_nonzero_seeds(seeds)
    if len(seeds) != 5:
        raise ZeroSeed("Somos 5 needs exactly five seeds")
    t0, t1, t2, t3, t4 = seeds
    at, bt = params.alpha_t, params.beta_t

    h1 = t3 * t0 / (t2 * t1)
    h2 = t4 * t1 / (t3 * t2)
    st = step_h_back(HState(h1, h2, 2), params)      # -> (h0, h1)
    st = step_h_back(st, params)                     # -> (h(-1), h0)
    h0, h_m1 = st.h_curr, st.h_prev
    Jt = invariant_Jt(h0, h1, params)

    m4 = bt + at * Jt
    if m4 == 0:
        raise SingularMu("beta + alpha*Jt = 0: quartic-root scale vanishes")
    r = (Jt**2 / 4 + at) / 3                          # lambda* = mu^2 lambda
    g2 = 12 * r**2 / m4 - 2 * Jt                      # exact rational
    g2_star = 12 * r**2 - 2 * Jt * m4
    g3_star = 4 * r**3 - g2_star * r - m4**2
    if g2_star**3 - 27 * g3_star**2 == 0:
        raise DegenerateCurve("discriminant g2*^3 - 27 g3*^2 = 0")
    denom = h_m1 + h0 - Jt
    if denom == 0:
        raise DegenerateCurve("h(-1) + h0 = Jt: base point degenerates to infinity")
    x0_star = r + m4 / denom

    periodic = h2 == h0 or h1 == h_m1
    if periodic:
        warnings.warn("orbit looks periodic (h(n+1) = h(n-1)); uniqueness is weakened",
                      stacklevel=2)

    f1 = t2 * t0 / t1**2
    f0 = h0 / f1
    alpha_star, beta_star = (p := subsequence_somos4_params(params, Jt)).alpha, p.beta

    with mp.workdps(dps):
        mu = mp.root(to_mp(m4, dps), 4)               # principal quartic root
        mu2 = mu * mu
        lam_t = to_mp(r, dps) / mu2
        x0 = to_mp(x0_star, dps) / mu2
        g3 = to_mp(g3_star, dps) / (mu2 * to_mp(m4, dps))

        inv = CurveInvariants(to_mp(g2, dps), g3, dps)
        lat = lattice_from_invariants(inv)
        kappa_raw = inverse_wp(lam_t, lat)
        z0_raw = inverse_wp(x0, lat)

        kappa = None
        for ik, kc in enumerate(_sign_candidates(kappa_raw, lat)):
            if abs(wp_prime(kc, lat) - mu) <= _SIGN_TOL * max(1, abs(mu)):
                kappa, ik_chosen = kc, ik
                break
        if kappa is None:
            raise ConsistencyFailure("no sign of kappa satisfies wp'(kappa) = mu")

        target = (x0 - lam_t) * to_mp(h_m1 - h0, dps)
        wpk = wp_prime(kappa, lat)
        z0 = None
        for iz, zc in enumerate(_sign_candidates(z0_raw, lat)):
            if abs(wpk * wp_prime(zc, lat) - target) <= _SIGN_TOL * max(1, abs(target)):
                z0, iz_chosen = zc, iz
                break
        if z0 is None:
            raise ConsistencyFailure("no sign of z0 satisfies the consistency product")

        inv_star = CurveInvariants.from_exact(g2_star, g3_star, dps)
        lat_star = lattice_from_invariants(inv_star)
        u0 = reduce_to_cell(z0 / mu, lat_star)
        v = reduce_to_cell(kappa / mu, lat_star)

        s = lambda w: sigma(w, lat_star)
        A_plus = to_mp(t0, dps) / s(u0)
        A_minus = to_mp(t1, dps) / s(u0 + v)
        B_plus = s(2 * v) * s(u0) * to_mp(t2, dps) / (s(u0 + 2 * v) * to_mp(t0, dps))
        B_minus = s(2 * v) * s(u0 + v) * to_mp(t3, dps) / (s(u0 + 3 * v) * to_mp(t1, dps))

        ratio_resid = abs(B_plus / B_minus + s(2 * v))
        if ratio_resid > _POST_TOL * max(1, abs(s(2 * v))):
            raise ConsistencyFailure("B+/B- = -sigma(2v) failed; sign conventions inconsistent")

        sol = Somos5Solution(
            params=params,
            seeds=seeds,
            dps=dps,
            Jt=to_mp(Jt, dps),
            mu=mu,
            lam_t=lam_t,
            x0=x0,
            inv=inv,
            lat=lat,
            kappa=kappa,
            z0=z0,
            inv_star=inv_star,
            lat_star=lat_star,
            u0=u0,
            v=v,
            A_plus=A_plus,
            A_minus=A_minus,
            B_plus=B_plus,
            B_minus=B_minus,
            exact={
                "Jt": Jt,
                "mu4": m4,
                "lambda_star": r,
                "g2": g2,
                "g2_star": g2_star,
                "g3_star": g3_star,
                "x0_star": x0_star,
                "alpha_star": alpha_star,
                "beta_star": beta_star,
                "j_invariant": inv_star.j_invariant,
                "h_m1": h_m1,
                "h0": h0,
                "h1": h1,
                "h2": h2,
                "f0": f0,
                "f1": f1,
            },
            convention={
                "mu_branch": "principal quartic root, argument in (-pi/4, pi/4]",
                "kappa_sign": f"wp'(kappa) = mu; candidate {ik_chosen}",
                "z0_sign": "wp'(kappa) wp'(z0) = (x0 - lambda)(h(-1) - h0); candidate "
                f"{iz_chosen}",
                "cell": "representatives reduced to [0,1)^2 in lattice coordinates",
            },
            periodic_flag=periodic,
        )
        for n, t in enumerate(seeds):
            got = sol.eval_tau(n).value
            if abs(got - to_mp(t, dps)) > _POST_TOL * max(1, abs(to_mp(t, dps))):
                raise ConsistencyFailure(f"seed reconstruction failed at n = {n}")
        return sol


def eval_tau(sol, n: int) -> TauEval:
    """Closed-form t(n), via log sigma so that exp(C n^2) growth stays finite.

    Returns (log|t(n)|, value); the value slot is None past the representable
    range, and real-seed problems get a real value after checking that the
    imaginary residue is below 1e-6 relative.
    """
    with mp.workdps(sol.dps):
        if isinstance(sol, Somos4Solution):
            try:
                num = log_sigma(sol.z0 + n * sol.kappa, sol.lat)
            except PoleAtLatticePoint:
                return TauEval(mp.ninf, mp.mpf(0))
            total = mp.log(sol.A) + n * mp.log(sol.B) + num - n * n * log_sigma(sol.kappa, sol.lat)
        else:
            k, odd = divmod(n, 2)
            A = sol.A_minus if odd else sol.A_plus
            B = sol.B_minus if odd else sol.B_plus
            try:
                num = log_sigma(sol.u0 + (2 * k + odd) * sol.v, sol.lat_star)
            except PoleAtLatticePoint:
                return TauEval(mp.ninf, mp.mpf(0))
            total = mp.log(A) + k * mp.log(B) + num - k * k * log_sigma(2 * sol.v, sol.lat_star)
        log_abs = mp.re(total)
        if log_abs > _LOG_VALUE_LIMIT:
            return TauEval(log_abs, None)
        value = mp.exp(total)
        return TauEval(log_abs, _real_if_close(value))


def eval_h_closed(sol: Somos5Solution, n: int):
    """h(n) from the closed form on the unstarred curve.

    Both analytic forms (sigma quotient, wp-ratio) are computed; they must
    agree to 1e-9 relative, and the sigma form is returned.
    """
    with mp.workdps(sol.dps):
        lat, k, z0 = sol.lat, sol.kappa, sol.z0
        ls = lambda w: log_sigma(w, lat)
        sig_form = mp.exp(
            ls(z0 + (n + 2) * k) + ls(z0 + (n - 1) * k)
            - 4 * ls(k) - ls(z0 + n * k) - ls(z0 + (n + 1) * k)
        )
        wpn = wp(z0 + n * k, lat)
        wppn = wp_prime(z0 + n * k, lat)
        wpk = wp(k, lat)
        wppk = wp_prime(k, lat)
        wp_form = -wppk / 2 * (wppn - wppk) / (wpn - wpk) + wp_second(k, lat) / 2
        if abs(sig_form - wp_form) > mp.mpf("1e-9") * max(1, abs(sig_form)):
            raise PrecisionLoss("sigma-form and wp-form of h disagree")
        return sig_form


def eval_f_closed(sol: Somos5Solution, n: int):
    """f(n) from the alternating wp-ratio form on the starred curve."""
    with mp.workdps(sol.dps):
        lat, u0, v = sol.lat_star, sol.u0, sol.v
        wpv = wp(v, lat)
        k, odd = divmod(n, 2)
        base = to_mp(sol.exact["f1"] if odd else sol.exact["f0"], sol.dps)
        ref = wp(u0 + odd * v, lat)
        cur = wp(u0 + (2 * k + odd) * v, lat)
        return base * (wpv - cur) / (wpv - ref)


@dataclass(frozen=True)
class EvenOddReduction:
    """Result of splitting a Somos 5 window into its two Somos 4 subsequences."""

    params_star: Somos4Params
    even: SequenceWindow
    odd: SequenceWindow
    even_residuals: tuple
    odd_residuals: tuple
    wp_ratio_residuals: tuple


def somos4_from_even_odd(sol: Somos5Solution, k_hi: int = 20) -> EvenOddReduction:
    """Verify that both parity subsequences are Somos 4 with the starred parameters.

    The subsequence recurrence is checked exactly on the rational window; the
    canonical ratio t(n+2) t(n-2)/t(n)^2 = wp(2v) - wp(u0 + n v) is checked
    numerically at n = 2..8.
    """
    params_star = Somos4Params(sol.exact["alpha_star"], sol.exact["beta_star"])
    window = iterate_somos5(
        sol.params, SequenceWindow(0, sol.seeds), -2, 2 * k_hi + 3
    )
    even = window.parity_subsequence(0)
    odd = window.parity_subsequence(1)
    ev_res = tuple(
        even.somos4_residual(params_star, k)
        for k in range(even.base_index + 2, even.end_index - 1)
    )
    od_res = tuple(
        odd.somos4_residual(params_star, k)
        for k in range(odd.base_index + 2, odd.end_index - 1)
    )
    wp_res = []
    with mp.workdps(sol.dps):
        wp2v = wp(2 * sol.v, sol.lat_star)
        for n in range(2, 9):
            ratio = to_mp(
                window.value(n + 2) * window.value(n - 2) / window.value(n) ** 2, sol.dps
            )
            wp_res.append(abs(ratio - (wp2v - wp(sol.u0 + n * sol.v, sol.lat_star))))
    return EvenOddReduction(params_star, even, odd, ev_res, od_res, tuple(wp_res))


def growth_constant(sol: Somos5Solution):
    """Quadratic-growth constant C with log|t(n)| ~ C n^2.

    Only stated for v on the real-period axis; anything else raises
    NotApplicable.
    """
    with mp.workdps(sol.dps):
        ratio = sol.v / sol.lat_star.omega1
        if abs(mp.im(ratio)) > mp.mpf("1e-8") * max(1, abs(ratio)):
            raise NotApplicable("growth formula requires v in omega1 * R")
        om1, eta1 = sol.lat_star.omega1, sol.lat_star.eta1
        return mp.re(eta1 * sol.v**2 / (2 * om1)) - mp.log(abs(sigma(2 * sol.v, sol.lat_star))) / 4


def round_to_fraction(x, max_denominator: int = 10**6, tol=mp.mpf("1e-9")) -> Fraction:
    """Nearest small-denominator rational, verified against x at tolerance."""
    fr = Fraction(float(mp.re(x))).limit_denominator(max_denominator)
    if abs(to_mp(fr) - x) > tol * max(1, abs(x)):
        raise NotApplicable(f"value {mp.nstr(x, 12)} is not close to a small rational")
    return fr


def matched_eds_somos4(sol: Somos4Solution, n_hi: int) -> SequenceWindow:
    """The elliptic divisibility sequence tied to a Somos 4 solution.

    Seeds are a1 = 1, a2 = -wp'(kappa), a3 = -beta, a4 = (alpha^2 + beta J) wp'(kappa),
    which are rational exactly when wp'(kappa) is; the rounding is verified
    numerically against sigma(m kappa)/sigma(kappa)^(m^2) before returning.
    """
    with mp.workdps(sol.dps):
        p = round_to_fraction(wp_prime(sol.kappa, sol.lat))
        a, b, J = sol.params.alpha, sol.params.beta, sol.exact["J"]
        window = iterate_eds(1, -p, -b, (a**2 + b * J) * p, n_hi)
        lsk = log_sigma(sol.kappa, sol.lat)
        for m_idx in range(2, min(6, n_hi) + 1):
            ref = mp.exp(log_sigma(m_idx * sol.kappa, sol.lat) - m_idx**2 * lsk)
            got = to_mp(window.value(m_idx), sol.dps)
            if abs(got - ref) > mp.mpf("1e-8") * max(1, abs(ref)):
                raise ConsistencyFailure(f"matched EDS term a({m_idx}) disagrees with sigma form")
        return window


def matched_eds_somos5(sol: Somos5Solution, n_hi: int) -> SequenceWindow:
    """Rational parts of the EDS tied to a Somos 5 solution.

    The true sequence is a(m) = sigma(m kappa)/sigma(kappa)^(m^2) on the
    unstarred curve, which equals c(m) * mu^(m+1 mod 2) with c(m) rational.
    The c-window satisfies the EDS recurrence with an extra factor mu^4 on
    the odd-pivot steps, and is exactly what the Somos 5 Hankel determinant
    needs (every product there carries a single power of mu, which cancels).
    """
    if n_hi < 5:
        raise ValueError("n_hi must be at least 5")
    at = sol.params.alpha_t
    m4 = sol.exact["mu4"]
    c = [Fraction(0), Fraction(1), Fraction(-1), at, sol.params.beta_t]
    for n in range(3, n_hi - 1):
        factor = m4 if n % 2 else Fraction(1)
        pivot = c[n - 2]
        if pivot == 0:
            raise DegenerateCurve(f"matched EDS pivot c({n - 2}) = 0")
        c.append((factor * c[n + 1] * c[n - 1] - at * c[n] ** 2) / pivot)
    with mp.workdps(sol.dps):
        lsk = log_sigma(sol.kappa, sol.lat)
        for m_idx in range(2, min(6, n_hi) + 1):
            ref = mp.exp(log_sigma(m_idx * sol.kappa, sol.lat) - m_idx**2 * lsk)
            if m_idx % 2 == 0:
                ref = ref / sol.mu
            got = to_mp(c[m_idx], sol.dps)
            if abs(got - ref) > mp.mpf("1e-8") * max(1, abs(ref)):
                raise ConsistencyFailure(f"matched EDS part c({m_idx}) disagrees with sigma form")
    neg = [-x for x in c[1:]]
    neg.reverse()
    return SequenceWindow(-(n_hi), tuple(neg + c))
