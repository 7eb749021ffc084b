"""Named verification suites aggregating the module oracles for one problem.

Each suite returns a list of Check records (name, residual, tolerance, pass);
the CLI renders them as JSON and fails with a distinct exit code when any
check misses its tolerance.  Exact checks report the rational residual and
tolerance 0; floating checks report a relative residual.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from fractions import Fraction

import mpmath as mp

from .errors import NotApplicable
from .exact import (
    SequenceWindow,
    Somos4Params,
    Somos5Params,
    check_hankel_somos4,
    check_hankel_somos5,
    format_rational,
    iterate_somos4,
    iterate_somos5,
)
from .qrt import f_from_tau, h_from_tau, invariant_It, invariant_J, invariant_Jt
from .solver import (
    Somos4Solution,
    Somos5Solution,
    eval_f_closed,
    eval_h_closed,
    eval_tau,
    growth_constant,
    matched_eds_somos4,
    matched_eds_somos5,
    solve_somos4,
    solve_somos5,
)
from .weierstrass import (
    addition_formula_residual,
    log_sigma,
    scale_lattice,
    sigma,
    three_term_residual,
    to_mp,
    wp,
    wp_prime,
    wp_second,
    zeta_w,
)

SUITE_NAMES = (
    "recurrence",
    "hankel4",
    "hankel5",
    "invariants",
    "subsequence",
    "identities",
    "reconstruction",
    "asymptotics",
)


@dataclass(frozen=True)
class Check:
    name: str
    residual: str
    tolerance: str
    passed: bool


def _exact_check(name: str, residual: Fraction) -> Check:
    return Check(name, format_rational(Fraction(residual)), "0", residual == 0)


def _num_check(name: str, residual, tolerance) -> Check:
    residual = abs(residual)
    return Check(name, mp.nstr(mp.mpf(residual), 8), mp.nstr(mp.mpf(tolerance), 3),
                 bool(residual <= tolerance))


def _cell_points(lat, count, seed):
    rng = random.Random(seed)
    pts = []
    while len(pts) < count:
        s = rng.uniform(0.08, 0.92)
        t = rng.uniform(0.08, 0.92)
        if min(abs(s - 0.5), abs(t - 0.5)) < 0.04:
            continue  # keep clear of half-periods
        pts.append(2 * s * lat.omega1 + 2 * t * lat.omega2)
    return pts


def _window(kind, params, seeds, n_lo, n_hi):
    seeds_w = SequenceWindow(0, tuple(seeds))
    if kind == "somos4":
        return iterate_somos4(params, seeds_w, n_lo, n_hi)
    return iterate_somos5(params, seeds_w, n_lo, n_hi)


def suite_recurrence(kind, params, seeds, dps) -> list[Check]:
    out = []
    win = _window(kind, params, seeds, -5, 25)
    if kind == "somos4":
        rng = range(win.base_index + 2, win.end_index - 1)
        residual = sum(abs(win.somos4_residual(params, n)) for n in rng)
    else:
        rng = range(win.base_index + 2, win.end_index - 2)
        residual = sum(abs(win.somos5_residual(params, n)) for n in rng)
    out.append(_exact_check("recurrence_residuals_exact", residual))

    # forward-then-backward returns the seeds
    order = 4 if kind == "somos4" else 5
    fwd = _window(kind, params, seeds, 0, 20)
    back_seeds = SequenceWindow(20 - order + 1,
                                tuple(fwd.value(i) for i in range(20 - order + 1, 21)))
    if kind == "somos4":
        back = iterate_somos4(params, back_seeds, 0, 20)
    else:
        back = iterate_somos5(params, back_seeds, 0, 20)
    rt = sum(abs(back.value(i) - Fraction(s)) for i, s in enumerate(seeds))
    out.append(_exact_check("forward_backward_roundtrip", rt))
    return out


def suite_hankel4(sol: Somos4Solution) -> list[Check]:
    win = iterate_somos4(sol.params, SequenceWindow(0, sol.seeds), -4, 16)
    eds = matched_eds_somos4(sol, 8)
    residual = Fraction(0)
    for m in range(2, 6):
        for n in range(m + 2, 11):
            residual += abs(check_hankel_somos4(win, eds, m, n))
    return [_exact_check("hankel4_grid_exact", residual)]


def suite_hankel5(sol: Somos5Solution) -> list[Check]:
    win = iterate_somos5(sol.params, SequenceWindow(0, sol.seeds), -4, 17)
    eds = matched_eds_somos5(sol, 9)
    residual = Fraction(0)
    symmetry = Fraction(0)
    for m in range(2, 6):
        for n in range(m + 2, 11):
            residual += abs(check_hankel_somos5(win, eds, m, n))
            symmetry += abs(
                check_hankel_somos5(win, eds, m, n) - check_hankel_somos5(win, eds, -m - 1, n)
            )
    return [
        _exact_check("hankel5_grid_exact", residual),
        _exact_check("hankel5_symmetry_m_to_minus_m_minus_1", symmetry),
    ]


def suite_invariants(sol, kind) -> list[Check]:
    out = []
    with mp.workdps(sol.dps):
        if kind == "somos4":
            win = iterate_somos4(sol.params, SequenceWindow(0, sol.seeds), -2, 25)
            J0 = invariant_J(f_from_tau(win, 0), f_from_tau(win, 1), sol.params)
            drift = sum(
                abs(invariant_J(f_from_tau(win, n), f_from_tau(win, n + 1), sol.params) - J0)
                for n in range(0, 22)
            )
            out.append(_exact_check("J_constant_exact", drift))
            out.append(_num_check(
                "J_equals_wp_second_kappa",
                (to_mp(J0, sol.dps) - wp_second(sol.kappa, sol.lat)) / max(1, abs(J0)),
                mp.mpf("1e-8"),
            ))
            a_res = abs(wp_prime(sol.kappa, sol.lat) ** 2 - to_mp(sol.params.alpha, sol.dps))
            b_res = abs(
                wp_prime(sol.kappa, sol.lat) ** 2
                * (wp(2 * sol.kappa, sol.lat) - wp(sol.kappa, sol.lat))
                - to_mp(sol.params.beta, sol.dps)
            )
            out.append(_num_check("alpha_from_kappa", a_res / max(1, abs(sol.params.alpha)),
                                  mp.mpf("1e-9")))
            out.append(_num_check("beta_from_kappa", b_res / max(1, abs(sol.params.beta)),
                                  mp.mpf("1e-9")))
            return out

        win = iterate_somos5(sol.params, SequenceWindow(0, sol.seeds), -2, 25)
        Jt0 = invariant_Jt(h_from_tau(win, 0), h_from_tau(win, 1), sol.params)
        drift = sum(
            abs(invariant_Jt(h_from_tau(win, n), h_from_tau(win, n + 1), sol.params) - Jt0)
            for n in range(0, 21)
        )
        out.append(_exact_check("Jt_constant_exact", drift))
        It0 = invariant_It(f_from_tau(win, 0), f_from_tau(win, 1), f_from_tau(win, 2), sol.params)
        drift_i = sum(
            abs(invariant_It(f_from_tau(win, n), f_from_tau(win, n + 1),
                             f_from_tau(win, n + 2), sol.params) - It0)
            for n in range(0, 21)
        )
        out.append(_exact_check("It_constant_exact", drift_i))

        lam, mu, Jt = sol.lam_t, sol.mu, sol.Jt
        out.append(_num_check("lambda_equals_wp_kappa",
                              abs(wp(sol.kappa, sol.lat) - lam) / max(1, abs(lam)),
                              mp.mpf("1e-8")))
        out.append(_num_check("mu_equals_wp_prime_kappa",
                              abs(wp_prime(sol.kappa, sol.lat) - mu) / max(1, abs(mu)),
                              mp.mpf("1e-8")))
        out.append(_num_check("Jt_equals_wp_second_kappa",
                              abs(wp_second(sol.kappa, sol.lat) - Jt) / max(1, abs(Jt)),
                              mp.mpf("1e-8")))
        alpha_ref = -wp_prime(sol.kappa, sol.lat) ** 2 * (
            wp(2 * sol.kappa, sol.lat) - wp(sol.kappa, sol.lat)
        )
        out.append(_num_check("alpha_from_kappa",
                              abs(alpha_ref - to_mp(sol.params.alpha_t, sol.dps))
                              / max(1, abs(sol.params.alpha_t)),
                              mp.mpf("1e-8")))
        out.append(_num_check("mu4_equals_wp_prime_star_v",
                              abs(wp_prime(sol.v, sol.lat_star) - to_mp(sol.exact["mu4"], sol.dps))
                              / max(1, abs(sol.exact["mu4"])),
                              mp.mpf("1e-8")))
        # product identity h(n-1) h(n) = wp'(k)^2 (wp(2k) - wp(z0 + n k))
        wppk2 = wp_prime(sol.kappa, sol.lat) ** 2
        wp2k = wp(2 * sol.kappa, sol.lat)
        worst = mp.mpf(0)
        for n in range(0, 9):
            lhs = to_mp(h_from_tau(win, n - 1) * h_from_tau(win, n), sol.dps)
            rhs = wppk2 * (wp2k - wp(sol.z0 + n * sol.kappa, sol.lat))
            worst = max(worst, abs(lhs - rhs) / max(1, abs(lhs)))
        out.append(_num_check("h_product_identity", worst, mp.mpf("1e-8")))
        # B ratio relations
        s2v = sigma(2 * sol.v, sol.lat_star)
        out.append(_num_check("B_ratio_equals_minus_sigma_2v",
                              abs(sol.B_plus / sol.B_minus + s2v) / max(1, abs(s2v)),
                              mp.mpf("1e-9")))
        sk4 = mp.exp(4 * log_sigma(sol.kappa, sol.lat))
        out.append(_num_check("B_ratio_equals_sigma_kappa_4",
                              abs(sol.B_plus / sol.B_minus - sk4) / max(1, abs(sk4)),
                              mp.mpf("1e-8")))
        return out


def suite_subsequence(sol: Somos5Solution) -> list[Check]:
    from .solver import somos4_from_even_odd

    red = somos4_from_even_odd(sol, k_hi=20)
    out = [
        _exact_check("even_subsequence_somos4_exact", sum(abs(r) for r in red.even_residuals)),
        _exact_check("odd_subsequence_somos4_exact", sum(abs(r) for r in red.odd_residuals)),
    ]
    worst = max(red.wp_ratio_residuals)
    out.append(_num_check("canonical_wp_ratio", worst, mp.mpf("1e-8")))
    return out


def suite_identities(sol, kind, samples: int = 20, seed: int = 20240921) -> list[Check]:
    """Weierstrass identity battery on the solution's curve(s)."""
    out = []
    lattices = [("curve", sol.lat)]
    if kind == "somos5":
        lattices.append(("curve_star", sol.lat_star))
    with mp.workdps(sol.dps):
        for tag, lat in lattices:
            pts = _cell_points(lat, samples, seed)
            kap = _cell_points(lat, samples, seed + 1)
            worst_add = max(
                abs(addition_formula_residual(z, k, lat))
                / max(1, abs(wp(k, lat) - wp(z, lat)))
                for z, k in zip(pts, kap)
            )
            out.append(_num_check(f"{tag}_addition_formula", worst_add, mp.mpf("1e-9")))
            rng = random.Random(seed + 2)
            worst_3t = mp.mpf(0)
            for z, k in zip(pts, kap):
                a = z
                b = k
                c = 2 * rng.random() * lat.omega1 + 2 * rng.random() * lat.omega2
                d = 2 * rng.random() * lat.omega1 + 2 * rng.random() * lat.omega2
                scale = max(1, abs(sigma(a + b, lat) * sigma(a - b, lat)
                                   * sigma(c + d, lat) * sigma(c - d, lat)))
                worst_3t = max(worst_3t, abs(three_term_residual(a, b, c, d, lat)) / scale)
            out.append(_num_check(f"{tag}_three_term", worst_3t, mp.mpf("1e-9")))
            worst_de = max(
                abs(wp_prime(z, lat) ** 2
                    - (4 * wp(z, lat) ** 3 - lat.g2 * wp(z, lat) - lat.g3))
                / max(1, abs(wp_prime(z, lat) ** 2))
                for z in pts
            )
            out.append(_num_check(f"{tag}_differential_equation", worst_de, mp.mpf("1e-10")))
            worst_par = max(
                max(abs(wp(-z, lat) - wp(z, lat)),
                    abs(wp_prime(-z, lat) + wp_prime(z, lat)),
                    abs(sigma(-z, lat) + sigma(z, lat)),
                    abs(zeta_w(-z, lat) + zeta_w(z, lat))) / max(1, abs(wp(z, lat)))
                for z in pts
            )
            out.append(_num_check(f"{tag}_parity", worst_par, mp.mpf("1e-12")))
            worst_dup = max(
                abs(wp(2 * z, lat)
                    - ((wp_second(z, lat) / (2 * wp_prime(z, lat))) ** 2 - 2 * wp(z, lat)))
                / max(1, abs(wp(2 * z, lat)))
                for z in pts
            )
            out.append(_num_check(f"{tag}_duplication", worst_dup, mp.mpf("1e-9")))
            worst_e1 = max(
                abs(wp_prime(k, lat) ** 2
                    - mp.exp(2 * log_sigma(2 * k, lat) - 8 * log_sigma(k, lat)))
                / max(1, abs(wp_prime(k, lat) ** 2))
                for k in kap
            )
            out.append(_num_check(f"{tag}_efns_first", worst_e1, mp.mpf("1e-9")))
            worst_e2 = max(
                abs(wp_prime(k, lat) ** 2 * (wp(2 * k, lat) - wp(k, lat))
                    + mp.exp(log_sigma(3 * k, lat) - 9 * log_sigma(k, lat)))
                / max(1, abs(wp_prime(k, lat) ** 2 * (wp(2 * k, lat) - wp(k, lat))))
                for k in kap
            )
            out.append(_num_check(f"{tag}_efns_second", worst_e2, mp.mpf("1e-9")))
            worst_int = mp.mpf(0)
            for k in kap:
                lhs = wp_prime(k, lat) ** 4 + wp_second(k, lat) * wp_prime(k, lat) ** 2 * (
                    wp(2 * k, lat) - wp(k, lat)
                )
                rhs = -mp.exp(
                    log_sigma(4 * k, lat) - log_sigma(2 * k, lat) - 12 * log_sigma(k, lat)
                )
                worst_int = max(worst_int, abs(lhs - rhs) / max(1, abs(lhs)))
            out.append(_num_check(f"{tag}_interest_identity", worst_int, mp.mpf("1e-9")))
    return out


def suite_reconstruction(sol, kind, params, seeds) -> list[Check]:
    out = []
    win = _window(kind, params, seeds, -5, 25)
    with mp.workdps(sol.dps):
        worst_log = mp.mpf(0)
        for n in range(-5, 26):
            exact_val = win.value(n)
            ev = eval_tau(sol, n)
            if exact_val == 0:
                continue
            worst_log = max(worst_log,
                            abs(ev.log_abs - mp.log(abs(to_mp(exact_val, sol.dps)))))
        out.append(_num_check("eval_tau_log_domain", worst_log, mp.mpf("1e-6")))
        if kind == "somos5":
            worst_h = max(
                abs(eval_h_closed(sol, n) - to_mp(h_from_tau(win, n), sol.dps))
                / max(1, abs(h_from_tau(win, n)))
                for n in range(-2, 11)
            )
            out.append(_num_check("eval_h_closed_vs_exact", worst_h, mp.mpf("1e-9")))
            worst_f = max(
                abs(eval_f_closed(sol, n) - to_mp(f_from_tau(win, n), sol.dps))
                / max(1, abs(f_from_tau(win, n)))
                for n in range(-2, 11)
            )
            out.append(_num_check("eval_f_closed_vs_exact", worst_f, mp.mpf("1e-9")))
            worst_hf = max(
                abs(eval_f_closed(sol, n + 1) * eval_f_closed(sol, n) - eval_h_closed(sol, n))
                / max(1, abs(eval_h_closed(sol, n)))
                for n in range(-2, 11)
            )
            out.append(_num_check("f_product_equals_h", worst_hf, mp.mpf("1e-9")))
    return out


def suite_asymptotics(sol: Somos5Solution, params, seeds, empirical_n: int = 30) -> list[Check]:
    out = []
    with mp.workdps(sol.dps):
        try:
            C = growth_constant(sol)
        except NotApplicable:
            return [Check("growth_constant_applicable", "inf", "0", False)]
        win = _window("somos5", params, seeds, 0, empirical_n)
        emp = mp.log(abs(to_mp(win.value(empirical_n), sol.dps))) / empirical_n**2
        # O(n) corrections make the raw ratio converge like 1/n; 5e-2 is a
        # sanity band at desk scale, not the asymptotic statement itself
        out.append(_num_check("growth_empirical_sanity", emp - C, mp.mpf("5e-2")))
        out.append(_num_check("growth_sign_flip_invariance",
                              abs(C - (mp.re(sol.lat_star.eta1 * sol.v**2 / (2 * sol.lat_star.omega1))
                                       - mp.log(abs(sigma(-2 * sol.v, sol.lat_star))) / 4)),
                              mp.mpf("1e-12")))
    return out


def run_suites(names, kind, params, seeds, dps) -> dict:
    """Run the requested verification suites for one IVP; returns a report dict."""
    if kind == "somos4":
        sol = solve_somos4(params, seeds, dps)
    else:
        sol = solve_somos5(params, seeds, dps)
    report = {}
    for name in names:
        if name == "recurrence":
            checks = suite_recurrence(kind, params, seeds, dps)
        elif name == "hankel4":
            checks = suite_hankel4(sol) if kind == "somos4" else []
        elif name == "hankel5":
            checks = suite_hankel5(sol) if kind == "somos5" else []
        elif name == "invariants":
            checks = suite_invariants(sol, kind)
        elif name == "subsequence":
            checks = suite_subsequence(sol) if kind == "somos5" else []
        elif name == "identities":
            checks = suite_identities(sol, kind)
        elif name == "reconstruction":
            checks = suite_reconstruction(sol, kind, params, seeds)
        elif name == "asymptotics":
            checks = suite_asymptotics(sol, params, seeds) if kind == "somos5" else []
        else:
            raise ValueError(f"unknown suite {name!r}")
        report[name] = [asdict(c) for c in checks]
    report["pass"] = all(c["passed"] for checks in report.values()
                         if isinstance(checks, list) for c in checks)
    return report
