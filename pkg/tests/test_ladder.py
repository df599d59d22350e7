"""Tower construction, ladder coefficients, ket normalization."""

import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from dirac_su11.params import make_params, make_channel, DomainError
from dirac_su11 import algebra as al
from dirac_su11 import ladder as ld

P1 = make_params(Z=1)
CH = make_channel(P1, Fraction(1, 2), -1)
CH_HEAVY = make_channel(make_params(Z=92), Fraction(3, 2), 1)


class TestConstruction:
    def test_bottom_rung(self):
        g = ld.ground_state(CH)
        assert g.n == 0
        assert g.psi_plus.degree == 0
        assert g.psi_minus.is_zero
        assert not g.is_zero

    def test_degrees_and_leading_signs(self):
        st_ = ld.build_state(CH, 7)
        assert st_.psi_plus.degree == 7
        assert st_.psi_minus.degree == 6
        # leading coefficient (-2)^n: hand value for n=7 is -128
        assert (st_.psi_plus.leading - CH.qs(-128)).is_zero

    def test_explicit_first_rung(self):
        # pi_1 = (1 + 2s) - 2 rho from the closed form of the step map
        st_ = ld.build_state(CH, 1)
        assert (st_.psi_plus.coeff(0) - (CH.qs(1) + CH.s * 2)).is_zero
        assert (st_.psi_plus.coeff(1) - CH.qs(-2)).is_zero

    def test_window_shift(self):
        a = ld.build_state(CH, 4)
        b = ld.raise_state(a)
        assert (b.psi_minus - a.psi_plus).is_zero

    def test_cap(self):
        with pytest.raises(DomainError):
            ld.build_state(CH, ld.MAX_RUNG + 1)
        with pytest.raises(DomainError):
            ld.build_state(CH, -1)

    @settings(max_examples=12, deadline=None)
    @given(st.integers(0, 8))
    def test_roundtrip_exact(self, n):
        up = ld.build_state(CH_HEAVY, n)
        down_up = ld.lower_state(ld.raise_state(up))
        assert (down_up.psi_plus - up.psi_plus).is_zero
        assert (down_up.psi_minus - up.psi_minus).is_zero
        with mp.workprec(256):
            assert abs(down_up.ladder_norm - up.ladder_norm) < mp.mpf(2) ** -240

    def test_annihilation_and_zero_stability(self):
        z = ld.lower_state(ld.ground_state(CH))
        assert z.is_zero
        assert ld.lower_state(z).is_zero
        assert ld.raise_state(z).is_zero


class TestLadderCoefficients:
    def test_magnitudes(self):
        # |C^+| at rung m is sqrt((m+1)(m+2s+1)); spot value at the bottom:
        # mu = lam gives radicand lam(lam+1) - lam(lam-1) = 2 lam = 2s + 1
        lam = CH.lam
        c = ld.ladder_coefficient(lam, lam, "+", 192)
        with mp.workprec(192):
            expect = mp.sqrt(2 * CH.s.embed(224) + 1)
            assert abs(c - expect) < mp.mpf(2) ** -150

    def test_signs_follow_stated_convention(self):
        lam = CH.lam
        assert ld.ladder_coefficient(lam, lam + 1, "+", 64) > 0
        assert ld.ladder_coefficient(lam, lam + 1, "-", 64) < 0

    def test_annihilation_coefficient_is_zero(self):
        lam = CH.lam
        assert ld.ladder_coefficient(lam, lam, "-", 64) == 0

    def test_boundary_error(self):
        lam = CH.lam
        with pytest.raises(ld.RepresentationBoundaryError):
            ld.ladder_coefficient(lam, lam - 1, "-", 64)
        with pytest.raises(ValueError):
            ld.ladder_coefficient(lam, lam, "x", 64)

    def test_operator_route_matches_coefficient_product(self):
        # Xi- Xi+ on rung n scales by (n+1)(n+1+2s) = |C^+|^2 exactly
        for n in range(4):
            state = ld.build_state(CH, n)
            F = al.FamilySum.from_function(state.plus_function())
            gap = ld.tower_gap(CH, n + 1)
            assert (al.xi_minus(al.xi_plus(F)) - F.scaled(gap)).is_zero

    def test_expectation_identity_through_rung_ten(self):
        # <Xi+ Xi-> on unit kets: mu(mu-1) - lam(lam-1) = n(n+2s), exact
        for n in range(11):
            state = ld.build_state(CH_HEAVY, n, 128)
            F = al.FamilySum.from_function(state.plus_function())
            gap = ld.tower_gap(CH_HEAVY, n)
            assert (al.xi_plus(al.xi_minus(F)) - F.scaled(gap)).is_zero
            mu = CH_HEAVY.lam + n
            lam = CH_HEAVY.lam
            assert (mu * (mu - 1) - lam * (lam - 1) - gap).is_zero


class TestKetNormalization:
    def test_bottom_constant(self):
        # N_lam = 2^s / sqrt(Gamma(2s))
        with mp.workprec(200):
            s = CH.s.embed(232)
            expect = mp.power(2, s) / mp.sqrt(mp.gamma(2 * s))
            got = ld.n_lambda_constant(CH, 200)
            assert abs(got - expect) < mp.mpf(2) ** -190

    def test_unit_kets_up_the_tower(self):
        for n in (0, 1, 2, 5):
            state = ld.build_state(CH, n, 192)
            val = ld.ket_norm_squared(state, 192)
            with mp.workprec(192):
                assert abs(state.ladder_norm ** 2 * val - 1) < mp.mpf(2) ** -150

    def test_norm_scalar_closed_form(self):
        # A_n = N_lam / sqrt(n! (2s+1)_n)
        n = 4
        state = ld.build_state(CH_HEAVY, n, 192)
        with mp.workprec(192):
            s = CH_HEAVY.s.embed(224)
            poch = mp.mpf(1)
            for k in range(n):
                poch *= 2 * s + 1 + k
            expect = (ld.n_lambda_constant(CH_HEAVY, 192)
                      / mp.sqrt(math.factorial(n) * poch))
            assert abs(state.ladder_norm - expect) < mp.mpf(2) ** -150


class TestLaguerreShape:
    def test_pi_n_is_n_factorial_times_laguerre(self):
        # spot check n = 2 by hand: 2! L_2^(a)(y) = y^2 - 2(a+2) y + (a+1)(a+2)
        # at a = 2s, y = 2 rho
        st2 = ld.build_state(CH, 2)
        a = CH.s * 2
        c0 = (a + 1) * (a + 2)
        c1 = (a + 2) * -4
        c2 = CH.qs(4)
        for k, want in enumerate((c0, c1, c2)):
            assert (st2.psi_plus.coeff(k) - want).is_zero
