"""Polynomial evaluation, norms, Mahler measures, exact expansions."""

import math
from fractions import Fraction

import numpy as np
import pytest

from flatlab import singer, trigpoly
from flatlab.errors import EmptySupport, NotNormalized
from flatlab.trigpoly import (QuadratureConfig, TrigPoly,
                              _evaluate_grid_direct, _evaluate_grid_fft)

TWO_SQRT2_OVER_PI = 2.0 * math.sqrt(2.0) / math.pi


def random_support(rng, max_size=16, max_element=60):
    size = int(rng.integers(2, max_size + 1))
    return tuple(sorted(int(x) for x in
                        rng.choice(max_element, size=size, replace=False)))


class TestConstruction:
    def test_single_frequency(self):
        poly = trigpoly.from_support((0,))
        assert poly.coeffs == {0: 1.0}

    def test_two_frequencies(self):
        poly = trigpoly.from_support((0, 1))
        assert poly.coeffs[0] == pytest.approx(1 / math.sqrt(2))
        assert poly.coeffs[1] == pytest.approx(1 / math.sqrt(2))

    def test_empty_support(self):
        with pytest.raises(EmptySupport):
            trigpoly.from_support(())

    def test_zero_coefficients_dropped(self):
        poly = TrigPoly({0: 1, 5: 0.0, -2: Fraction(0)})
        assert poly.frequencies == (0,)

    def test_immutable(self):
        poly = trigpoly.from_support((0, 1))
        with pytest.raises(AttributeError):
            poly.uniform_support = None


class TestEvaluation:
    def test_constant_on_grid(self):
        vals = trigpoly.evaluate_grid(TrigPoly.constant(1), 4)
        assert np.allclose(vals, np.ones(4), atol=1e-15)

    def test_two_term_at_one(self):
        vals = trigpoly.evaluate_grid(trigpoly.from_support((0, 1)), 1)
        assert abs(vals[0] - math.sqrt(2)) < 1e-14

    def test_singer_modulus_on_grid(self):
        s = singer.singer_set(2)
        vals = trigpoly.evaluate_grid(trigpoly.from_support(s.residues), 7)
        mods = np.abs(vals)
        assert abs(mods[0] - math.sqrt(3)) < 1e-12
        assert np.max(np.abs(mods[1:] - math.sqrt(2 / 3))) < 1e-12

    @pytest.mark.parametrize("m", [7, 65, 257, 1024])
    def test_fft_and_direct_paths_agree(self, m):
        rng = np.random.default_rng(5)
        coeffs = {int(f): complex(rng.normal(), rng.normal())
                  for f in rng.integers(-90, 90, size=14)}
        poly = TrigPoly(coeffs)
        a = _evaluate_grid_fft(poly, m, 0.37)
        b = _evaluate_grid_direct(poly, m, 0.37)
        assert np.max(np.abs(a - b)) < 1e-12

    def test_values_at_angles_matches_grid(self):
        poly = trigpoly.from_support((0, 2, 9))
        grid = trigpoly.evaluate_grid(poly, 32)
        direct = poly.values_at_angles(np.arange(32) / 32)
        assert np.max(np.abs(grid - direct)) < 1e-12


class TestLpNorm:
    def test_two_term_l1(self):
        est = trigpoly.lp_norm(trigpoly.from_support((0, 1)), 1.0)
        assert abs(est.value - TWO_SQRT2_OVER_PI) < 1e-8

    def test_parseval_on_random_supports(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            poly = trigpoly.from_support(random_support(rng))
            est = trigpoly.lp_norm(poly, 2.0)
            assert abs(est.value - 1.0) < 1e-10

    def test_singer_fourth_power(self):
        s = singer.singer_set(2)
        est = trigpoly.lp_norm(trigpoly.from_support(s.residues), 4.0)
        assert abs(est.value ** 4 - 5.0 / 3.0) < 1e-9

    def test_budget_flag(self):
        cfg = QuadratureConfig(max_grid=128, stop_rel_tol=1e-15)
        est = trigpoly.lp_norm(trigpoly.from_support((0, 1)), 1.0, cfg)
        assert not est.converged
        assert est.grid_size <= 128

    def test_monotonicity_below_one(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            poly = trigpoly.from_support(random_support(rng, max_size=8, max_element=30))
            n_quarter = trigpoly.lp_norm(poly, 0.25).value
            n_half = trigpoly.lp_norm(poly, 0.5).value
            n_one = trigpoly.lp_norm(poly, 1.0).value
            assert n_quarter <= n_half + 1e-8
            assert n_half <= n_one + 1e-8


class TestQuasiNorm:
    def test_all_ones(self):
        for delta in (0.01, 0.5, 1.0):
            assert trigpoly.quasi_norm([1.0, 1.0, 1.0], delta) == pytest.approx(1.0)

    def test_four_and_one(self):
        assert trigpoly.quasi_norm([4.0, 1.0], 1.0) == pytest.approx(2.5)
        assert trigpoly.quasi_norm([4.0, 1.0], 0.5) == pytest.approx(2.25)

    def test_zero_value_collapses(self):
        # mass on a zero forces the delta -> 0 limit to vanish
        assert trigpoly.quasi_norm([0.0, 2.0, 3.0], 1e-4) < 1e-100


class TestMahler:
    @pytest.mark.parametrize("n", [3, 10])
    def test_cosine_continuous(self, n):
        est = trigpoly.mahler_measure(TrigPoly.cosine(0.6, n))
        assert abs(est.value - 0.9) < 1e-10

    @pytest.mark.parametrize("n", [3, 10])
    def test_cosine_discrete(self, n):
        val = trigpoly.mahler_discrete(TrigPoly.cosine(0.6, n), 2 * n)
        assert abs(val - 0.8) < 1e-10
        # the discrete geometric mean sits below the continuous one here
        assert val <= trigpoly.mahler_measure(TrigPoly.cosine(0.6, n)).value

    def test_two_term_jensen(self):
        assert abs(trigpoly.mahler_jensen(trigpoly.from_support((0, 1)))
                   - 1 / math.sqrt(2)) < 1e-12

    def test_two_term_quadrature_flags_slow_convergence(self):
        # the circle zero makes log|P| integrable but slowly resolved;
        # the value is still good to ~1e-5 at this budget
        cfg = QuadratureConfig(max_grid=1 << 19)
        est = trigpoly.mahler_measure(trigpoly.from_support((0, 1)), cfg)
        assert abs(est.value - 1 / math.sqrt(2)) < 1e-4
        assert not est.converged

    def test_constant(self):
        est = trigpoly.mahler_measure(TrigPoly.constant(2.5))
        assert est.value == pytest.approx(2.5, abs=1e-12)
        assert trigpoly.mahler_jensen(TrigPoly.constant(-2.5)) == pytest.approx(2.5)

    def test_discrete_constant(self):
        assert trigpoly.mahler_discrete(TrigPoly.constant(1), 17) == pytest.approx(1.0)

    def test_discrete_zero_sample(self):
        # 1 - z vanishes at angle 0, which every grid hits exactly
        poly = TrigPoly({0: 1.0, 1: -1.0})
        assert trigpoly.mahler_discrete(poly, 4) == 0.0

    def test_jensen_matches_quadrature_when_smooth(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            coeffs = {i: complex(rng.normal(), rng.normal()) for i in range(4)}
            coeffs[0] = coeffs[0] + 3.0  # keep roots away from the circle
            poly = TrigPoly(coeffs)
            quad = trigpoly.mahler_measure(poly)
            assert quad.converged
            assert abs(quad.value - trigpoly.mahler_jensen(poly)) < 1e-8

    def test_multiplicativity(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            p1 = TrigPoly({i: complex(rng.normal(), rng.normal())
                           for i in range(int(rng.integers(2, 8)))})
            p2 = TrigPoly({i: complex(rng.normal(), rng.normal())
                           for i in range(int(rng.integers(2, 8)))})
            lhs = trigpoly.mahler_jensen(p1.multiply(p2))
            rhs = trigpoly.mahler_jensen(p1) * trigpoly.mahler_jensen(p2)
            assert abs(lhs - rhs) < 1e-8

    def test_mahler_below_small_norms(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            poly = trigpoly.from_support(random_support(rng, max_size=8, max_element=30))
            m = trigpoly.mahler_jensen(poly)
            for p in (0.25, 0.5, 1.0):
                assert m <= trigpoly.lp_norm(poly, p).value + 1e-6

    def test_support_mass_limit(self):
        # integral of |P|^delta approaches the measure of {|P| > 0} = 1
        rng = np.random.default_rng(3)
        for _ in range(30):
            sup = random_support(rng, max_size=16, max_element=40)
            est = trigpoly.lp_norm(trigpoly.from_support(sup), 1e-3)
            assert abs(est.value ** 1e-3 - 1.0) < 1e-3


class TestSquaredModulus:
    def test_two_term(self):
        exp = trigpoly.squared_modulus_expansion(trigpoly.from_support((0, 1)))
        assert dict(exp.coeffs) == {0: Fraction(1), 1: Fraction(1, 2),
                                    -1: Fraction(1, 2)}

    def test_singer_p2(self):
        exp = trigpoly.squared_modulus_expansion(trigpoly.from_support((0, 1, 3)))
        want = {0: Fraction(1)}
        for d in (1, 2, 3):
            want[d] = want[-d] = Fraction(1, 3)
        assert dict(exp.coeffs) == want

    def test_consecutive_run(self):
        # {1..R}: coefficient (R-l)/R at l = 1..R-1 and nothing at |l| >= R
        R = 6
        exp = trigpoly.squared_modulus_expansion(
            trigpoly.from_support(tuple(range(1, R + 1))))
        for l in range(1, R):
            assert exp.coeffs[l] == Fraction(R - l, R)
            assert exp.coeffs[-l] == Fraction(R - l, R)
        assert R not in exp.coeffs and -R not in exp.coeffs

    def test_zero_coefficient_and_symmetry(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            sup = random_support(rng)
            exp = trigpoly.squared_modulus_expansion(trigpoly.from_support(sup))
            assert exp.coeffs[0] == Fraction(1)
            for d, c in exp.coeffs.items():
                assert exp.coeffs[-d] == c

    def test_unnormalized(self):
        exp = trigpoly.squared_modulus_expansion(
            trigpoly.from_support((0, 1), normalize=False))
        assert dict(exp.coeffs) == {0: 2, 1: 1, -1: 1}


class TestL4Obstruction:
    def test_triple(self):
        value, lower = trigpoly.l4_obstruction((1, 2, 3))
        assert value == Fraction(10, 9)
        assert lower == Fraction(2, 3)

    def test_sidon_four(self):
        value, lower = trigpoly.l4_obstruction((1, 2, 5, 11))
        assert value == lower == Fraction(3, 4)

    def test_lower_bound_and_equality(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            sup = random_support(rng, max_size=20, max_element=80)
            value, lower = trigpoly.l4_obstruction(sup)
            assert value >= lower
            assert (value == lower) == singer.is_sidon(sup)

    def test_matches_quadrature(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            sup = random_support(rng)
            value, _ = trigpoly.l4_obstruction(sup)
            poly = trigpoly.from_support(sup)
            m = 1 << max(6, (4 * poly.degree_span + 1).bit_length())
            mods_sq = np.abs(trigpoly.evaluate_grid(poly, m)) ** 2
            assert abs(float(value) - float(np.mean((mods_sq - 1) ** 2))) < 1e-9


class TestFlatnessReport:
    def test_two_term(self):
        rep = trigpoly.flatness_report(trigpoly.from_support((0, 1)))
        assert abs(rep.l1 - TWO_SQRT2_OVER_PI) < 1e-8
        assert abs(rep.abs_mod_minus_one_l2_sq
                   - 2 * (1 - TWO_SQRT2_OVER_PI)) < 1e-8
        assert rep.identity_gap < 2 * rep.est_error + 1e-12

    def test_constant(self):
        rep = trigpoly.flatness_report(TrigPoly.constant(1.0))
        assert rep.flatness_defect == pytest.approx(0.0, abs=1e-12)
        assert rep.sq_mod_l2_sq == pytest.approx(0.0, abs=1e-12)
        assert rep.l2 == pytest.approx(1.0, abs=1e-12)

    def test_singer_p2_fourth_moment(self):
        s = singer.singer_set(2)
        rep = trigpoly.flatness_report(trigpoly.from_support(s.residues))
        assert abs(rep.sq_mod_l2_sq - 2.0 / 3.0) < 1e-9

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            trigpoly.flatness_report(trigpoly.from_support((0, 1), normalize=False))

    def test_identity_and_cauchy_schwarz_chain(self):
        rng = np.random.default_rng(14)
        for _ in range(100):
            poly = trigpoly.from_support(random_support(rng, max_size=12))
            rep = trigpoly.flatness_report(poly)
            assert rep.identity_gap <= 2 * rep.est_error + 1e-12
            assert rep.sq_mod_minus_one_l1 <= \
                2 * math.sqrt(rep.abs_mod_minus_one_l2_sq) + 1e-9

    def test_initial_grid_exceeds_twice_span(self):
        poly = trigpoly.from_support((0, 40))
        rep = trigpoly.flatness_report(poly)
        assert rep.grid_size_used > 2 * poly.degree_span
