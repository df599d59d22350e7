"""Physical radial wavefunctions assembled from tower states.

The two radial components of a bound state are built from the adjacent
tower polynomials (pi_n, pi_{n-1}) of the state's window:

    F(rho) = sqrt(c^2 + E) (psi_minus + psi_plus) rho^s e^{-rho}
    G(rho) = sqrt(c^2 - E) (psi_minus - psi_plus) rho^s e^{-rho}

with psi_plus = pi_n and psi_minus = -(w + tau) pi_{n-1}, where
w = sqrt((s+n)^2 + zeta^2) solves w^2 - tau^2 = n (n + 2s). The relative
scalar lives in the quadratic tower Q(s)[w], so both polynomial parts stay
exact; the only floating numbers are the overall scales sqrt(c^2 +- E).

For n = 0 the small combination collapses to -pi_0, giving the closed-form
ratio G/F = -sqrt((c^2-E)/(c^2+E)) of the lowest physical state.

Normalization uses the radial measure d rho,

    int_0^inf rho^{2s+m} e^{-2 rho} d rho = Gamma(2s+1+m) / 2^{2s+1+m},

so that A^2 [ (c^2+E) M[f^2] + (c^2-E) M[g^2] ] = 1 fixes the physical
constant; it is stored on the state, separate from the ket normalizer of
the phase-averaged product.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .params import DEFAULT_PRECISION, _GUARD, Channel, DomainError
from .qsfield import QsNumber, QsPolynomial, TowerNumber, sturm_positive_roots
from .ladder import LadderState, with_norm_constant
from .algebra import gamma_weighted_moments


@dataclass(frozen=True, slots=True)
class RadialPair:
    """Exact polynomial parts and floating overall scales of (F, G)."""

    state: LadderState
    f_poly: QsPolynomial  # tower coefficients, weight rho^s e^{-rho} implied
    g_poly: QsPolynomial
    f_scale: mp.mpf
    g_scale: mp.mpf
    samples: Optional[tuple] = None

    @property
    def channel(self) -> Channel:
        return self.state.channel

    @property
    def n(self) -> int:
        return self.state.n


def tower_w2(channel: Channel, n: int) -> QsNumber:
    """w^2 = tau^2 + n(n + 2s) = (s+n)^2 + zeta^2 as an element of Q(s)."""
    tau = channel.tau
    return channel.qs(tau * tau + n * n, 2 * n)


def tower_lift(poly: QsPolynomial, w2: QsNumber) -> QsPolynomial:
    zero = TowerNumber.zero(w2)
    return QsPolynomial.from_coeffs(
        [TowerNumber.of(c, w2=w2) for c in poly.coeffs], zero)


def exact_w(channel: Channel, n: int) -> TowerNumber:
    """The positive root of w^2 = tau^2 + n(n+2s) as a tower element.

    At n = 0 the radicand is the perfect square tau^2 and the quotient ring
    Q(s)[w]/(w^2 - tau^2) has zero divisors, so the symbol form would make
    structural zero tests lie; there w is stored by its value |tau|.
    """
    w2 = tower_w2(channel, n)
    if n == 0:
        return TowerNumber.of(channel.qs(abs(channel.tau)), w2=w2)
    return TowerNumber.w_root(w2)


def small_component_scalar(channel: Channel, n: int) -> TowerNumber:
    """-(w + tau): the exact ratio psi_minus / pi_{n-1} of a bound state."""
    return -(exact_w(channel, n) + channel.qs(channel.tau))


def assemble(state: LadderState, allow_unphysical: bool = False) -> RadialPair:
    """Radial pair of a tower state; the bottom rung with tau > 0 solves the
    coupled system only formally and is refused unless explicitly allowed."""
    if not state.is_physical and not allow_unphysical:
        raise DomainError(
            "bottom rung with tau > 0 is not a bound state; "
            "pass allow_unphysical=True to assemble it anyway")
    ch = state.channel
    n = state.n
    w2 = tower_w2(ch, n)
    plus = tower_lift(state.psi_plus, w2)
    if n == 0:
        minus = QsPolynomial.zero_poly(TowerNumber.zero(w2))
    else:
        minus = tower_lift(state.psi_minus, w2).scale(small_component_scalar(ch, n))
    prec = state.spectral.precision
    with mp.workprec(prec + _GUARD):
        c2 = ch.params.c2_mp(prec + _GUARD)
        fs = mp.sqrt(c2 + state.spectral.E)
        gs = mp.sqrt(c2 - state.spectral.E)
    with mp.workprec(prec):
        fs, gs = +fs, +gs
    return RadialPair(
        state=state,
        f_poly=minus + plus,
        g_poly=minus - plus,
        f_scale=fs,
        g_scale=gs,
    )


def radial_moments(channel: Channel, count: int, precision: int) -> list:
    """[Gamma(2s+1+m)/2^(2s+1+m)] for m < count (measure d rho)."""
    return gamma_weighted_moments(channel, count + 1, precision)[1:]


def _moment_sum(poly: QsPolynomial, moments, precision: int) -> mp.mpf:
    with mp.workprec(precision + _GUARD):
        acc = mp.mpf(0)
        for m, c in enumerate(poly.coeffs):
            if not c.is_zero:
                acc += c.embed(precision + _GUARD) * moments[m]
        return +acc


def normalize(pair: RadialPair, precision: Optional[int] = None) -> RadialPair:
    """Fix the overall constant so int (F^2 + G^2) d rho = 1.

    Returns a pair whose scales carry the constant and whose state records
    it in norm_constant.
    """
    prec = precision or pair.state.spectral.precision
    ff = pair.f_poly * pair.f_poly
    gg = pair.g_poly * pair.g_poly
    count = max(ff.degree, gg.degree) + 1
    moments = radial_moments(pair.channel, count, prec)
    with mp.workprec(prec + _GUARD):
        total = (pair.f_scale ** 2 * _moment_sum(ff, moments, prec)
                 + pair.g_scale ** 2 * _moment_sum(gg, moments, prec))
        if total <= 0:
            raise DomainError("normalization integral must be positive")
        const = 1 / mp.sqrt(total)
    with mp.workprec(prec):
        const = +const
        new_state = with_norm_constant(pair.state, const)
        return replace(pair, state=new_state,
                       f_scale=+(pair.f_scale * const),
                       g_scale=+(pair.g_scale * const))


def norm_integral(pair: RadialPair, precision: Optional[int] = None) -> mp.mpf:
    """int (F^2 + G^2) d rho for the pair as scaled."""
    prec = precision or pair.state.spectral.precision
    ff = pair.f_poly * pair.f_poly
    gg = pair.g_poly * pair.g_poly
    count = max(ff.degree, gg.degree) + 1
    moments = radial_moments(pair.channel, count, prec)
    with mp.workprec(prec + _GUARD):
        total = (pair.f_scale ** 2 * _moment_sum(ff, moments, prec)
                 + pair.g_scale ** 2 * _moment_sum(gg, moments, prec))
    with mp.workprec(prec):
        return +total


def overlap_integral(a: RadialPair, b: RadialPair, precision: int) -> mp.mpf:
    """int (F_a F_b + G_a G_b) d rho; exact 0 is impossible here (floats),
    so exact orthogonality statements live at the polynomial level."""
    if a.channel.key() != b.channel.key():
        raise ValueError("overlap requires a common channel")
    ff = a.f_poly * b.f_poly
    gg = a.g_poly * b.g_poly
    count = max(ff.degree, gg.degree) + 1
    moments = radial_moments(a.channel, count, precision)
    with mp.workprec(precision + _GUARD):
        total = (a.f_scale * b.f_scale * _moment_sum(ff, moments, precision)
                 + a.g_scale * b.g_scale * _moment_sum(gg, moments, precision))
    with mp.workprec(precision):
        return +total


# -- Laguerre route ------------------------------------------------------------


def laguerre_poly(channel: Channel, n: int) -> QsPolynomial:
    """L_n^{(2s)}(2 rho) over Q(s) by the three-term recurrence."""
    if n < 0:
        raise DomainError("Laguerre degree must be nonnegative")
    zero = QsNumber.zero(channel.s2)
    one = QsNumber.one(channel.s2)
    alpha = channel.s * 2
    prev = QsPolynomial.from_coeffs([one], zero)  # L_0
    if n == 0:
        return prev
    # L_1 = 1 + alpha - y at y = 2 rho
    cur = QsPolynomial.from_coeffs([one + alpha, zero - 2], zero)
    for k in range(1, n):
        # (k+1) L_{k+1} = (2k+1+alpha - y) L_k - (k+alpha) L_{k-1}
        lin = QsPolynomial.from_coeffs([alpha + (2 * k + 1), zero - 2], zero)
        nxt = (lin * cur - prev.scale(alpha + k)).scale(Fraction(1, k + 1))
        prev, cur = cur, nxt
    return cur


@dataclass(frozen=True, slots=True)
class LaguerreReport:
    """Exact comparison of the tower polynomials with classical Laguerre
    polynomials, plus the coupled linear system tying the two scalars."""

    n: int
    alpha: str                      # 2s as an exact field element, printed
    scalar_ratio_plus: str          # psi_plus / L_n, exact (integer n!)
    scalar_ratio_minus: str         # psi_minus / L_{n-1} in the tower
    a: str                          # Laguerre scalar of psi_plus
    b: str                          # Laguerre scalar of psi_minus
    consistency_residual: mp.mpf    # coupling rows evaluated at (a, b)
    rows_exact_zero: bool
    det_on_shell_exact_zero: bool
    eliminated_energy_residual: mp.mpf  # |E from elimination - E| / c^2
    off_shell_det: mp.mpf           # det with binding detuned by 1e-6: nonzero
    sonine_residual: mp.mpf         # Gamma(2s+n+1)/Gamma(2s+1) vs prod (2s+k)


def _coupling_rows(channel: Channel, n: int, a: TowerNumber, b: TowerNumber):
    """Rows of the linear system relating the two Laguerre scalars:

        (n + 2s) a + (w - tau) b = 0
        (w + tau) a + n b        = 0

    Its determinant n(n+2s) - (w^2 - tau^2) vanishes identically on shell.
    """
    w = exact_w(channel, n)
    tau = channel.qs(channel.tau)
    two_s = channel.s * 2
    row1 = a * channel.qs(n) + a * two_s + (w - tau) * b
    row2 = (w + tau) * a + b * n
    return row1, row2


def laguerre_cross_check(state: LadderState, precision: Optional[int] = None) -> LaguerreReport:
    ch = state.channel
    n = state.n
    prec = precision or state.spectral.precision
    if n < 1:
        raise DomainError("cross check needs n >= 1 so both scalars exist")
    w2 = tower_w2(ch, n)

    # exact scalar ratios against the recurrence-built polynomials
    ln = laguerre_poly(ch, n)
    lnm1 = laguerre_poly(ch, n - 1)
    a_scalar = TowerNumber.of(ch.qs(math.factorial(n)), w2=w2)
    if not (tower_lift(state.psi_plus, w2) - tower_lift(ln, w2).scale(a_scalar)).is_zero:
        raise AssertionError("psi_plus is not n! L_n^{(2s)}(2 rho)")
    b_scalar = small_component_scalar(ch, n) * math.factorial(n - 1)
    phys_minus = tower_lift(state.psi_minus, w2).scale(small_component_scalar(ch, n))
    if not (phys_minus - tower_lift(lnm1, w2).scale(b_scalar)).is_zero:
        raise AssertionError("psi_minus is not -(w+tau)(n-1)! L_{n-1}^{(2s)}(2 rho)")

    row1, row2 = _coupling_rows(ch, n, a_scalar, b_scalar)
    rows_zero = row1.is_zero and row2.is_zero
    with mp.workprec(prec + _GUARD):
        resid = max(abs(row1.embed(prec + _GUARD)), abs(row2.embed(prec + _GUARD)))

    # determinant: exact zero on shell, nonzero off shell
    tau, s = ch.tau, ch.s
    gap = ch.qs(n * n, 2 * n)          # n(n+2s)
    w2_minus_tau2 = tower_w2(ch, n) - ch.qs(tau * tau)
    det_exact = gap - w2_minus_tau2
    det_zero = det_exact.is_zero

    with mp.workprec(prec + _GUARD):
        c2 = ch.params.c2_mp(prec + _GUARD)
        zeta = mp.mpf(ch.zeta.numerator) / ch.zeta.denominator
        tau_emb = mp.mpf(tau.numerator) / tau.denominator
        s_emb = s.embed(prec + _GUARD)
        # eliminate: w^2 = tau^2 + n(n+2s) -> E = c^2 (s+n)/w
        w_elim = mp.sqrt(gap.embed(prec + _GUARD) + tau_emb ** 2)
        e_elim = c2 * (s_emb + n) / w_elim
        e_resid = abs(e_elim - state.spectral.E) / c2
        # off shell: w from a perturbed energy no longer satisfies the system;
        # detune the binding, not E itself, so E stays inside (0, c^2) even
        # when the level is much closer to the continuum than the detuning
        e_off = c2 + (state.spectral.E - c2) * (1 + mp.mpf(10) ** -6)
        w_off = zeta * c2 / mp.sqrt((c2 - e_off) * (c2 + e_off))
        det_off = gap.embed(prec + _GUARD) - (w_off ** 2 - tau_emb ** 2)
        # Sonine scalar: the n-th iterate of the classical derivative formula
        sonine = mp.gamma(2 * s_emb + n + 1) / mp.gamma(2 * s_emb + 1)
        prod = mp.mpf(1)
        for k in range(1, n + 1):
            prod *= 2 * s_emb + k
        sonine_resid = abs(sonine - prod) / prod

    with mp.workprec(prec):
        return LaguerreReport(
            n=n,
            alpha=str(ch.s * 2),
            scalar_ratio_plus=str(math.factorial(n)),
            scalar_ratio_minus=str(small_component_scalar(ch, n)),
            a=str(a_scalar),
            b=str(b_scalar),
            consistency_residual=+resid,
            rows_exact_zero=rows_zero,
            det_on_shell_exact_zero=det_zero,
            eliminated_energy_residual=+e_resid,
            off_shell_det=+det_off,
            sonine_residual=+sonine_resid,
        )


def report_to_dict(report: LaguerreReport, precision: int = DEFAULT_PRECISION) -> dict:
    from .params import SCHEMA_TAG, mp_str

    return {
        "schema": SCHEMA_TAG,
        "kind": "laguerre-report",
        "n": report.n,
        "alpha": report.alpha,
        "scalar_ratio_plus": report.scalar_ratio_plus,
        "scalar_ratio_minus": report.scalar_ratio_minus,
        "a": report.a,
        "b": report.b,
        "consistency_residual": mp_str(report.consistency_residual, precision),
        "rows_exact_zero": report.rows_exact_zero,
        "det_on_shell_exact_zero": report.det_on_shell_exact_zero,
        "eliminated_energy_residual": mp_str(report.eliminated_energy_residual, precision),
        "off_shell_det": mp_str(report.off_shell_det, precision),
        "sonine_residual": mp_str(report.sonine_residual, precision),
    }


# -- sampling and node counting -------------------------------------------------


def sample(pair: RadialPair, count: int = 400,
           rho_min: Fraction = Fraction(1, 1000),
           rho_max: Optional[Fraction] = None,
           precision: Optional[int] = None) -> RadialPair:
    """Evaluate (F, G) on a geometric grid; returns a pair carrying samples."""
    if count < 2:
        raise DomainError("need at least two sample points")
    prec = precision or pair.state.spectral.precision
    ch = pair.channel
    if rho_max is None:
        with mp.workprec(prec):
            top = 5 * (pair.n + ch.s.embed(prec) + 1)
    else:
        top = mp.mpf(rho_max.numerator) / rho_max.denominator
    rows = []
    with mp.workprec(prec + _GUARD):
        lo = mp.mpf(rho_min.numerator) / rho_min.denominator
        ratio = (top / lo) ** (mp.mpf(1) / (count - 1))
        s_emb = ch.s.embed(prec + _GUARD)
        for i in range(count):
            rho = lo * ratio ** i
            weight = mp.power(rho, s_emb) * mp.exp(-rho)
            fv = pair.f_scale * weight * pair.f_poly.eval_mp(rho, prec + _GUARD)
            gv = pair.g_scale * weight * pair.g_poly.eval_mp(rho, prec + _GUARD)
            with mp.workprec(prec):
                rows.append((+rho, +fv, +gv))
    return replace(pair, samples=tuple(rows))


def write_csv(pair: RadialPair, path: str, precision: int = DEFAULT_PRECISION) -> None:
    from .params import mp_str

    if pair.samples is None:
        pair = sample(pair)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rho", "F", "G"])
        for rho, fv, gv in pair.samples:
            writer.writerow([mp_str(rho, precision), mp_str(fv, precision),
                             mp_str(gv, precision)])


def count_f_nodes(pair: RadialPair) -> int:
    """Positive zeros of F, exactly; the weight rho^s e^{-rho} never vanishes."""
    return sturm_positive_roots(pair.f_poly)


def count_g_nodes(pair: RadialPair) -> int:
    return sturm_positive_roots(pair.g_poly)
