"""Assembly, normalization, Laguerre equivalence, sampling, node counts."""

import csv
import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from dirac_su11.params import make_params, make_channel, DomainError
from dirac_su11.qsfield import QsNumber, QsPolynomial, TowerNumber
from dirac_su11 import ladder as ld
from dirac_su11 import wavefunctions as wf

P1 = make_params(Z=1)
CH = make_channel(P1, Fraction(1, 2), -1)
CH_P = make_channel(P1, Fraction(1, 2), 1)
CH_HEAVY = make_channel(make_params(Z=80), Fraction(3, 2), -1)

HP = 300


def pair_for(ch, n, prec=256):
    return wf.assemble(ld.build_state(ch, n, prec))


class TestTowerScalars:
    def test_w_squared_value(self):
        # w^2 = tau^2 + n^2 + 2ns: components checked directly
        w2 = wf.tower_w2(CH, 3)
        assert w2.a == Fraction(1) + 9
        assert w2.b == 6

    def test_w_at_bottom_is_rational(self):
        w = wf.exact_w(CH, 0)
        assert w.v.is_zero
        assert w.u == CH.qs(Fraction(1))  # |tau| = 1 for j = 1/2

    def test_w_squares_to_w2(self):
        for n in (0, 1, 4):
            w = wf.exact_w(CH_HEAVY, n)
            w2 = wf.tower_w2(CH_HEAVY, n)
            assert (w * w - TowerNumber.of(w2, w2=w2)).is_zero

    def test_small_component_scalar_vanishes_only_at_physical_bottom(self):
        assert wf.small_component_scalar(CH, 0).is_zero
        assert not wf.small_component_scalar(CH_P, 0).is_zero
        assert not wf.small_component_scalar(CH, 1).is_zero


class TestAssembly:
    def test_refuses_unphysical_without_flag(self):
        state = ld.build_state(CH_P, 0)
        with pytest.raises(DomainError):
            wf.assemble(state)
        assert wf.assemble(state, allow_unphysical=True).n == 0

    def test_ground_component_ratio(self):
        # G/F = -sqrt((c^2-E)/(c^2+E)) for the lowest bound state
        pair = pair_for(CH, 0)
        with mp.workprec(HP):
            f0 = pair.f_poly.coeff(0).embed(HP)
            g0 = pair.g_poly.coeff(0).embed(HP)
            ratio = (pair.g_scale * g0) / (pair.f_scale * f0)
            assert abs(ratio + pair.state.spectral.nu) < mp.mpf(2) ** -240

    def test_polynomial_degrees(self):
        pair = pair_for(CH, 4)
        assert pair.f_poly.degree == 4
        assert pair.g_poly.degree == 4

    def test_scales_squared(self):
        pair = pair_for(CH_HEAVY, 2)
        pt = pair.state.spectral
        with mp.workprec(HP):
            c2 = CH_HEAVY.params.c2_mp(HP)
            assert abs(pair.f_scale ** 2 - (c2 + pt.E)) < mp.mpf(2) ** -220
            assert abs(pair.g_scale ** 2 - (c2 - pt.E)) < mp.mpf(2) ** -220


class TestNormalization:
    @settings(max_examples=8, deadline=None)
    @given(st.integers(0, 6))
    def test_unit_integral(self, n):
        pair = wf.normalize(pair_for(CH, n))
        with mp.workprec(256):
            assert abs(wf.norm_integral(pair) - 1) < mp.mpf(2) ** -200

    def test_ground_constant_closed_form(self):
        # constant = [2^s/sqrt(Gamma(2s))] / sqrt(2 c^2 s)
        pair = wf.normalize(pair_for(CH, 0))
        with mp.workprec(HP):
            s = CH.s.embed(HP)
            c2 = P1.c2_mp(HP)
            expect = mp.power(2, s) / mp.sqrt(mp.gamma(2 * s)) / mp.sqrt(2 * c2 * s)
            assert abs(pair.state.norm_constant - expect) < mp.mpf(2) ** -230

    def test_norm_constant_recorded(self):
        pair = wf.normalize(pair_for(CH_HEAVY, 1))
        assert pair.state.norm_constant is not None
        # the returned scales absorb exactly that constant
        raw = pair_for(CH_HEAVY, 1)
        with mp.workprec(256):
            assert abs(pair.f_scale - raw.f_scale * pair.state.norm_constant) < mp.mpf(2) ** -200

    def test_heavy_channel_unit_integral(self):
        pair = wf.normalize(pair_for(CH_HEAVY, 3))
        with mp.workprec(256):
            assert abs(wf.norm_integral(pair) - 1) < mp.mpf(2) ** -200


class TestLaguerreEquivalence:
    def test_recurrence_against_hypergeometric_oracle(self):
        # L_n^(a)(y) = ((a+1)_n / n!) sum_k (-n)_k / ((a+1)_k k!) y^k,
        # built here directly in Q(s) as an independent route
        for ch in (CH, CH_HEAVY):
            a = ch.s * 2
            for n in range(9):
                got = wf.laguerre_poly(ch, n)
                poch_an = ch.qs(1)
                for k in range(n):
                    poch_an = poch_an * (a + 1 + k)
                lead = poch_an * Fraction(1, math.factorial(n))
                zero = QsNumber.zero(ch.s2)
                coeffs = []
                for k in range(n + 1):
                    num = ch.qs(1)
                    for i in range(k):
                        num = num * (i - n)  # (-n)_k
                    den = ch.qs(1)
                    for i in range(k):
                        den = den * (a + 1 + i)
                    term = num * den.inverse() * Fraction(1, math.factorial(k))
                    # substitute y = 2 rho
                    coeffs.append(lead * term * Fraction(2 ** k))
                oracle = QsPolynomial.from_coeffs(coeffs, zero)
                assert (got - oracle).is_zero

    def test_cross_check_exact_fields(self):
        for n in (1, 2, 5):
            rep = wf.laguerre_cross_check(ld.build_state(CH, n))
            assert rep.rows_exact_zero
            assert rep.det_on_shell_exact_zero
            assert rep.consistency_residual == 0
            with mp.workprec(256):
                assert rep.eliminated_energy_residual < mp.mpf(10) ** -30
                assert abs(rep.off_shell_det) > mp.mpf(10) ** -8
                assert rep.sonine_residual < mp.mpf(10) ** -60

    def test_cross_check_needs_excited_state(self):
        with pytest.raises(DomainError):
            wf.laguerre_cross_check(ld.build_state(CH, 0))

    def test_report_dict_roundtrip(self):
        rep = wf.laguerre_cross_check(ld.build_state(CH_HEAVY, 2))
        d = wf.report_to_dict(rep, 128)
        assert d["schema"] == "dirac-su11/1"
        assert d["rows_exact_zero"] is True
        assert d["n"] == 2


class TestSamplingAndNodes:
    def test_node_count_matches_rung(self):
        for n in range(7):
            assert wf.count_f_nodes(pair_for(CH, n, 128)) == n

    def test_node_count_heavy(self):
        for n in (0, 2, 4):
            assert wf.count_f_nodes(pair_for(CH_HEAVY, n, 128)) == n

    def test_sample_grid_geometry(self):
        pair = wf.sample(pair_for(CH, 2, 128), count=50)
        rhos = [row[0] for row in pair.samples]
        assert len(rhos) == 50
        with mp.workprec(128):
            assert abs(rhos[0] - mp.mpf(1) / 1000) < mp.mpf(2) ** -100
            s = CH.s.embed(128)
            assert abs(rhos[-1] - 5 * (2 + s + 1)) < mp.mpf("1e-20")
            # geometric: constant ratio
            r0 = rhos[1] / rhos[0]
            r1 = rhos[-1] / rhos[-2]
            assert abs(r0 - r1) < mp.mpf("1e-25")

    def test_sample_values_match_direct_evaluation(self):
        pair = wf.sample(wf.normalize(pair_for(CH, 1, 192)), count=7, precision=192)
        with mp.workprec(192):
            s = CH.s.embed(192)
            for rho, fv, gv in pair.samples:
                weight = mp.power(rho, s) * mp.exp(-rho)
                f_direct = pair.f_scale * weight * pair.f_poly.eval_mp(rho, 192)
                assert abs(fv - f_direct) < mp.mpf(2) ** -150

    def test_csv_format(self, tmp_path):
        out = tmp_path / "state.csv"
        wf.write_csv(wf.sample(pair_for(CH, 1, 64), count=10), str(out), 64)
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["rho", "F", "G"]
        assert len(rows) == 11
        float(rows[1][1])  # parsable decimal strings

    def test_sample_count_guard(self):
        with pytest.raises(DomainError):
            wf.sample(pair_for(CH, 0, 64), count=1)
