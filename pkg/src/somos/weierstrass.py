"""Numerical engine for Weierstrass functions and elliptic integrals.

Given curve invariants (g2, g3) with nonzero discriminant, this module
builds the period lattice and evaluates sigma, wp, wp', zeta on it:

  * roots of 4x^3 - g2 x - g3 with a deterministic ordering;
  * half-periods by quadratically convergent mean iterations (classical
    AGM when all roots are real, Carlson's duplication otherwise);
  * the quasi-period eta1 from the weight-2 Eisenstein q-series, eta2 via
    the Legendre relation  eta1 om2 - eta2 om1 = i pi / 2;
  * sigma from the product formula
        sigma(z) = (2 om1/pi) exp(eta1 z^2 / (2 om1)) sin(pi z/(2 om1))
                   prod_n (1 - 2 q^{2n} cos(pi z/om1) + q^{4n}) / (1-q^{2n})^2
    and wp, wp', zeta from the companion q-series;
  * inversion of wp through the Carlson symmetric integral
        RF(x - e1, x - e2, x - e3) = integral_x^inf dt / sqrt(4(t-e1)(t-e2)(t-e3)).

All evaluation runs at an explicit working precision (decimal digits),
carried by the invariants/lattice objects; mpmath supplies the underlying
arbitrary-precision arithmetic.  Large arguments are reduced into the
fundamental cell with the quasi-periodicity bookkeeping done additively in
log space, so sigma-quotient formulas stay finite for indices whose terms
grow like exp(C n^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import (
    DegenerateCurve,
    PoleAtLatticePoint,
    PrecisionLoss,
    ZeroScale,
)

DEFAULT_DPS = 30
_SERIES_CAP = 10_000
_Q_LIMIT = 0.999


def _eps(dps: int) -> mp.mpf:
    return mp.mpf(10) ** (-dps)


def to_mp(x, dps: int = DEFAULT_DPS):
    """Convert ints, Fractions, floats and mp numbers at the given precision."""
    with mp.workdps(dps):
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / mp.mpf(x.denominator)
        return mp.mpmathify(x)


@dataclass(frozen=True)
class CurveInvariants:
    """Invariants (g2, g3) of y^2 = 4x^3 - g2 x - g3, discriminant nonzero.

    Exact rational shadows are kept alongside the floating values whenever
    the inputs are rational, so degeneracy tests and j-invariants can be
    decided exactly.
    """

    g2: object
    g3: object
    dps: int = DEFAULT_DPS
    g2_exact: Fraction | None = None
    g3_exact: Fraction | None = None

    def __post_init__(self):
        with mp.workdps(self.dps):
            object.__setattr__(self, "g2", to_mp(self.g2, self.dps))
            object.__setattr__(self, "g3", to_mp(self.g3, self.dps))
            if self.g2_exact is not None and self.g3_exact is not None:
                if self.g2_exact**3 - 27 * self.g3_exact**2 == 0:
                    raise DegenerateCurve("discriminant g2^3 - 27 g3^2 = 0")
            else:
                disc = self.g2**3 - 27 * self.g3**2
                scale = max(1, abs(self.g2) ** 3, 27 * abs(self.g3) ** 2)
                if abs(disc) <= scale * mp.mpf(10) ** (-(2 * self.dps // 3)):
                    raise DegenerateCurve("discriminant numerically zero")

    @classmethod
    def from_exact(cls, g2, g3, dps: int = DEFAULT_DPS) -> "CurveInvariants":
        g2, g3 = Fraction(g2), Fraction(g3)
        return cls(g2, g3, dps, g2_exact=g2, g3_exact=g3)

    @property
    def discriminant(self):
        with mp.workdps(self.dps):
            return self.g2**3 - 27 * self.g3**2

    @property
    def j_invariant(self):
        if self.g2_exact is not None and self.g3_exact is not None:
            num = 1728 * self.g2_exact**3
            return num / (self.g2_exact**3 - 27 * self.g3_exact**2)
        with mp.workdps(self.dps):
            return 1728 * self.g2**3 / self.discriminant

    @property
    def is_real(self) -> bool:
        with mp.workdps(self.dps):
            tol = _eps(self.dps - 5 if self.dps > 10 else self.dps)
            scale = 1 + max(abs(self.g2), abs(self.g3))
            return abs(mp.im(self.g2)) < tol * scale and abs(mp.im(self.g3)) < tol * scale


def curve_roots(inv: CurveInvariants):
    """Roots (e1, e2, e3) of 4x^3 - g2 x - g3, deterministically ordered.

    All real: descending.  Real invariants with one real root: the real root
    first, then the conjugate pair with positive imaginary part first.
    Complex invariants: sorted by descending real part, then imaginary part.
    """
    with mp.workdps(inv.dps):
        rts = mp.polyroots([mp.mpf(4), mp.mpf(0), -inv.g2, -inv.g3], extraprec=40)
        rts = [mp.mpc(r) for r in rts]
        tol = _eps(2 * inv.dps // 3)
        if inv.is_real:
            scale = 1 + max(abs(r) for r in rts)
            real = [r for r in rts if abs(r.imag) < tol * scale]
            cplx = sorted((r for r in rts if abs(r.imag) >= tol * scale),
                          key=lambda r: -r.imag)
            if len(real) == 3:
                ordered = sorted(rts, key=lambda r: -r.real)
                ordered = [mp.mpc(r.real) for r in ordered]
            elif len(real) == 1 and len(cplx) == 2:
                ordered = [mp.mpc(real[0].real)] + cplx
            else:
                ordered = sorted(rts, key=lambda r: (-r.real, -r.imag))
        else:
            ordered = sorted(rts, key=lambda r: (-r.real, -r.imag))
        return tuple(ordered)


def carlson_rf(x, y, z, dps: int = DEFAULT_DPS):
    """Carlson's symmetric elliptic integral of the first kind, RF(x, y, z).

    Standard duplication iteration with the fifth-order Taylor tail; complex
    arguments use principal square roots throughout.
    """
    with mp.workdps(dps):
        x0, y0, z0 = (to_mp(t, dps) for t in (x, y, z))
        A0 = (x0 + y0 + z0) / 3
        xm, ym, zm, Am = x0, y0, z0, A0
        Q = (3 * _eps(dps)) ** (mp.mpf(-1) / 6) * max(
            abs(A0 - x0), abs(A0 - y0), abs(A0 - z0)
        )
        p4 = mp.mpf(1)
        for _ in range(300):
            if Q / p4 <= abs(Am):
                break
            lam = mp.sqrt(xm) * mp.sqrt(ym) + mp.sqrt(ym) * mp.sqrt(zm) + mp.sqrt(zm) * mp.sqrt(xm)
            xm, ym, zm = (xm + lam) / 4, (ym + lam) / 4, (zm + lam) / 4
            Am = (Am + lam) / 4
            p4 *= 4
        else:
            raise PrecisionLoss("Carlson RF duplication did not converge")
        X = (A0 - x0) / (p4 * Am)
        Y = (A0 - y0) / (p4 * Am)
        Z = -X - Y
        E2 = X * Y - Z**2
        E3 = X * Y * Z
        series = 1 - E2 / 10 + E3 / 14 + E2**2 / 24 - 3 * E2 * E3 / 44
        return series / mp.sqrt(Am)


def _agm(a, b, dps: int):
    eps = _eps(dps)
    for _ in range(300):
        a, b = (a + b) / 2, mp.sqrt(a * b)
        if abs(a - b) <= eps * abs(a):
            return (a + b) / 2
    raise PrecisionLoss("AGM did not converge")


@dataclass(frozen=True)
class Lattice:
    """Period lattice data for one curve: everything sigma/wp evaluation needs.

    omega1, omega2 are half-periods with Im(omega2/omega1) > 0; q is the nome
    exp(i pi omega2/omega1); eta1 = zeta(omega1) and eta2 follows from the
    Legendre relation.  Immutable and safe to share.
    """

    inv: CurveInvariants
    omega1: object
    omega2: object
    eta1: object
    eta2: object
    q: object
    e1: object
    e2: object
    e3: object

    @property
    def dps(self) -> int:
        return self.inv.dps

    @property
    def g2(self):
        return self.inv.g2

    @property
    def g3(self):
        return self.inv.g3

    @property
    def tau(self):
        with mp.workdps(self.dps):
            return self.omega2 / self.omega1

    def roots(self):
        return (self.e1, self.e2, self.e3)


def _lambert(q, weight, dps):
    """Sum of n^weight q^(2n) / (1 - q^(2n)); geometric tail bound stop."""
    eps = _eps(dps)
    total = mp.mpf(0)
    qa = abs(q)
    for n in range(1, _SERIES_CAP):
        q2n = q ** (2 * n)
        term = n**weight * q2n / (1 - q2n)
        total += term
        if n**weight * qa ** (2 * n) / (1 - qa**2) < eps * max(1, abs(total)):
            return total
    raise PrecisionLoss("Lambert series did not converge within the term cap")


def eisenstein_invariants(lat: Lattice):
    """Recompute (g2, g3) from the lattice via Eisenstein q-series."""
    with mp.workdps(lat.dps):
        E4 = 1 + 240 * _lambert(lat.q, 3, lat.dps)
        E6 = 1 - 504 * _lambert(lat.q, 5, lat.dps)
        w = mp.pi / (2 * lat.omega1)
        return w**4 * mp.mpf(4) / 3 * E4, w**6 * mp.mpf(8) / 27 * E6


def lattice_from_invariants(inv: CurveInvariants) -> Lattice:
    """Construct the period lattice of y^2 = 4x^3 - g2 x - g3.

    Three real roots give the rectangular AGM formulas; otherwise both
    half-periods come from Carlson RF evaluated at the roots.  The result is
    validated by recomputing (g2, g3) from the lattice to relative 1e-10.
    """
    dps = inv.dps
    with mp.workdps(dps):
        e1, e2, e3 = curve_roots(inv)
        all_real = inv.is_real and all(abs(mp.im(e)) == 0 for e in (e1, e2, e3))
        if all_real:
            r1, r2, r3 = e1.real, e2.real, e3.real
            om1 = mp.mpc(mp.pi / (2 * _agm(mp.sqrt(r1 - r3), mp.sqrt(r1 - r2), dps)))
            om2 = mp.mpc(0, 1) * mp.pi / (2 * _agm(mp.sqrt(r1 - r3), mp.sqrt(r2 - r3), dps))
        else:
            om1 = carlson_rf(0, e1 - e2, e1 - e3, dps)
            om2 = carlson_rf(0, e3 - e1, e3 - e2, dps)
            if mp.im(om2 / om1) < 0:
                om2 = -om2
        ratio = om2 / om1
        if not mp.im(ratio) > 0:
            raise DegenerateCurve("period ratio is real; lattice degenerate")
        q = mp.exp(mp.mpc(0, 1) * mp.pi * ratio)
        if abs(q) > _Q_LIMIT:
            raise PrecisionLoss(f"nome |q| = {mp.nstr(abs(q), 6)} too close to 1")
        E2 = 1 - 24 * _lambert(q, 1, dps)
        eta1 = mp.pi**2 * E2 / (12 * om1)
        eta2 = (eta1 * om2 - mp.mpc(0, 1) * mp.pi / 2) / om1
        lat = Lattice(inv, om1, om2, eta1, eta2, q, e1, e2, e3)
        g2b, g3b = eisenstein_invariants(lat)
        scale = max(1, abs(inv.g2), abs(inv.g3))
        if abs(g2b - inv.g2) > 1e-10 * scale or abs(g3b - inv.g3) > 1e-10 * scale:
            raise PrecisionLoss("lattice failed the Eisenstein round-trip check")
        return lat


def lattice_coords(z, lat: Lattice):
    """Real coordinates (s, t) with z = 2 s omega1 + 2 t omega2."""
    with mp.workdps(lat.dps):
        z = to_mp(z, lat.dps)
        B1, B2 = 2 * lat.omega1, 2 * lat.omega2
        den = mp.im(B1 * mp.conj(B2))
        s = mp.im(z * mp.conj(B2)) / den
        t = mp.im(z * mp.conj(B1)) / -den
        return s, t


def reduce_to_cell(z, lat: Lattice):
    """Representative of z modulo the period lattice with (s, t) in [0,1)^2."""
    with mp.workdps(lat.dps):
        s, t = lattice_coords(z, lat)
        return to_mp(z, lat.dps) - 2 * mp.floor(s) * lat.omega1 - 2 * mp.floor(t) * lat.omega2


def _reduce_centered(z, lat: Lattice):
    """z_red with coordinates in [-1/2, 1/2) and shifts (m, n): z = z_red + 2m om1 + 2n om2."""
    s, t = lattice_coords(z, lat)
    m = int(mp.floor(s + mp.mpf(1) / 2))
    n = int(mp.floor(t + mp.mpf(1) / 2))
    z_red = to_mp(z, lat.dps) - 2 * m * lat.omega1 - 2 * n * lat.omega2
    return z_red, m, n


def _check_pole(z_red, lat: Lattice):
    scale = max(abs(lat.omega1), abs(lat.omega2))
    if abs(z_red) < scale * _eps(lat.dps - 4 if lat.dps > 8 else lat.dps):
        raise PoleAtLatticePoint("argument is a lattice point at working precision")


def _sigma_reduced(z_red, lat: Lattice):
    """Product formula on a cell-reduced argument."""
    om1, q = lat.omega1, lat.q
    u2 = mp.pi * z_red / om1  # = 2u
    c = mp.cos(u2)
    pref = (2 * om1 / mp.pi) * mp.exp(lat.eta1 * z_red**2 / (2 * om1)) * mp.sin(u2 / 2)
    prod = mp.mpf(1)
    eps = _eps(lat.dps)
    bound_c = mp.cosh(abs(mp.im(u2)))
    qa = abs(q)
    for n in range(1, _SERIES_CAP):
        q2n = q ** (2 * n)
        prod *= (1 - 2 * q2n * c + q2n * q2n) / (1 - q2n) ** 2
        if qa ** (2 * n) * (1 + bound_c) < eps:
            return pref * prod
    raise PrecisionLoss("sigma product did not converge within the term cap")


def sigma(z, lat: Lattice):
    """Weierstrass sigma; entire, odd, sigma(z)/z -> 1 at the origin."""
    with mp.workdps(lat.dps):
        z_red, m, n = _reduce_centered(z, lat)
        base = _sigma_reduced(z_red, lat)
        if m == 0 and n == 0:
            return base
        eta = 2 * m * lat.eta1 + 2 * n * lat.eta2
        sign = -1 if (m + n + m * n) % 2 else 1
        return sign * base * mp.exp(eta * (z_red + m * lat.omega1 + n * lat.omega2))


def log_sigma(z, lat: Lattice):
    """log sigma(z) with quasi-periodicity handled additively (overflow-safe).

    The imaginary part follows the principal branch on the reduced argument
    plus the exact lattice-shift corrections; exp(log_sigma(z)) == sigma(z).
    """
    with mp.workdps(lat.dps):
        z_red, m, n = _reduce_centered(z, lat)
        _check_pole(z_red, lat)
        base = _sigma_reduced(z_red, lat)
        eta = 2 * m * lat.eta1 + 2 * n * lat.eta2
        correction = eta * (z_red + m * lat.omega1 + n * lat.omega2)
        sign = mp.mpc(0, mp.pi) if (m + n + m * n) % 2 else 0
        return mp.log(base) + correction + sign


def wp(z, lat: Lattice):
    """Weierstrass wp via its q-series on the cell-reduced argument."""
    with mp.workdps(lat.dps):
        z_red, _, _ = _reduce_centered(z, lat)
        _check_pole(z_red, lat)
        om1, q = lat.omega1, lat.q
        u = mp.pi * z_red / (2 * om1)
        total = mp.mpf(0)
        eps = _eps(lat.dps)
        grow = mp.exp(2 * abs(mp.im(u)))
        qa = abs(q)
        for n in range(1, _SERIES_CAP):
            q2n = q ** (2 * n)
            total += n * q2n * mp.cos(2 * n * u) / (1 - q2n)
            if n * (qa**2 * grow) ** n < eps * max(1, abs(total)):
                break
        else:
            raise PrecisionLoss("wp series did not converge within the term cap")
        return (
            -lat.eta1 / om1
            + (mp.pi / (2 * om1)) ** 2 / mp.sin(u) ** 2
            - 2 * (mp.pi / om1) ** 2 * total
        )


def wp_prime(z, lat: Lattice):
    """Derivative wp'(z), odd, with wp'^2 = 4 wp^3 - g2 wp - g3."""
    with mp.workdps(lat.dps):
        z_red, _, _ = _reduce_centered(z, lat)
        _check_pole(z_red, lat)
        om1, q = lat.omega1, lat.q
        u = mp.pi * z_red / (2 * om1)
        total = mp.mpf(0)
        eps = _eps(lat.dps)
        grow = mp.exp(2 * abs(mp.im(u)))
        qa = abs(q)
        for n in range(1, _SERIES_CAP):
            q2n = q ** (2 * n)
            total += n**2 * q2n * mp.sin(2 * n * u) / (1 - q2n)
            if n**2 * (qa**2 * grow) ** n < eps * max(1, abs(total)):
                break
        else:
            raise PrecisionLoss("wp' series did not converge within the term cap")
        return (
            -2 * (mp.pi / (2 * om1)) ** 3 * mp.cos(u) / mp.sin(u) ** 3
            + 2 * (mp.pi / om1) ** 3 * total
        )


def wp_second(z, lat: Lattice):
    """wp''(z) = 6 wp(z)^2 - g2/2, an exact consequence of the curve equation."""
    with mp.workdps(lat.dps):
        return 6 * wp(z, lat) ** 2 - lat.g2 / 2


def zeta_w(z, lat: Lattice):
    """Weierstrass zeta; quasi-periodic with zeta(z + 2om) = zeta(z) + 2eta."""
    with mp.workdps(lat.dps):
        z_red, m, n = _reduce_centered(z, lat)
        _check_pole(z_red, lat)
        om1, q = lat.omega1, lat.q
        u = mp.pi * z_red / (2 * om1)
        total = mp.mpf(0)
        eps = _eps(lat.dps)
        grow = mp.exp(2 * abs(mp.im(u)))
        qa = abs(q)
        for k in range(1, _SERIES_CAP):
            q2k = q ** (2 * k)
            total += q2k * mp.sin(2 * k * u) / (1 - q2k)
            if (qa**2 * grow) ** k < eps * max(1, abs(total)):
                break
        else:
            raise PrecisionLoss("zeta series did not converge within the term cap")
        base = (
            lat.eta1 * z_red / om1
            + mp.pi / (2 * om1) / mp.tan(u)
            + 2 * mp.pi / om1 * total
        )
        return base + 2 * m * lat.eta1 + 2 * n * lat.eta2


def addition_formula_residual(z, kappa, lat: Lattice):
    """sigma(z+k) sigma(z-k) / (sigma(z)^2 sigma(k)^2) - (wp(k) - wp(z))."""
    with mp.workdps(lat.dps):
        z = to_mp(z, lat.dps)
        kappa = to_mp(kappa, lat.dps)
        lhs = (
            sigma(z + kappa, lat)
            * sigma(z - kappa, lat)
            / (sigma(z, lat) ** 2 * sigma(kappa, lat) ** 2)
        )
        return lhs - (wp(kappa, lat) - wp(z, lat))


def three_term_residual(a, b, c, d, lat: Lattice):
    """Cyclic three-product sum of the sigma three-term equation (zero always)."""
    with mp.workdps(lat.dps):
        a, b, c, d = (to_mp(t, lat.dps) for t in (a, b, c, d))
        s = lambda w: sigma(w, lat)
        return (
            s(c + d) * s(c - d) * s(a + b) * s(a - b)
            - s(b + d) * s(b - d) * s(a + c) * s(a - c)
            + s(b + c) * s(b - c) * s(a + d) * s(a - d)
        )


def scale_lattice(inv: CurveInvariants, mu) -> CurveInvariants:
    """Rescaled invariants (mu^4 g2, mu^6 g3).

    Under this rescaling wp(z; g2, g3) = mu^-2 wp(z/mu; mu^4 g2, mu^6 g3) and
    sigma(z; g2, g3) = mu sigma(z/mu; mu^4 g2, mu^6 g3).
    """
    with mp.workdps(inv.dps):
        mu = to_mp(mu, inv.dps)
        if mu == 0:
            raise ZeroScale("scale factor must be nonzero")
        return CurveInvariants(mu**4 * inv.g2, mu**6 * inv.g3, inv.dps)


def inverse_wp(x, lat: Lattice):
    """A preimage z of x under wp, reduced to the fundamental cell.

    Computed as RF(x-e1, x-e2, x-e3).  wp is even, so the sign of z is a free
    choice; callers needing a particular branch must apply their own
    consistency conditions between z and -z (mod the lattice).
    """
    with mp.workdps(lat.dps):
        x = to_mp(x, lat.dps)
        z = carlson_rf(x - lat.e1, x - lat.e2, x - lat.e3, lat.dps)
        z = reduce_to_cell(z, lat)
        err = abs(wp(z, lat) - x) / max(1, abs(x))
        if err > mp.mpf("1e-10"):
            raise PrecisionLoss(f"inverse_wp verification failed: residual {mp.nstr(err, 5)}")
        return z
