"""The diffusive-side derivative family, the alternative double/triple-sum
expansion, and their exact equivalence."""

from fractions import Fraction as F

import pytest

from dampedwave import expansion as ex
from dampedwave import oracles
from dampedwave.exact import double_factorial


class TestDiffusiveDerivatives:
    def test_zeroth_order(self):
        assert ex.diffusive_derivative("g", 0) == ex.DiffusivePoly({(0, 0): F(1)})
        assert ex.diffusive_derivative("h", 0) == ex.DiffusivePoly({(0, 0): F(1)})

    def test_printed_g_tables(self):
        assert ex.diffusive_derivative("g", 1) == ex.DiffusivePoly({(1, 1): F(-1)})
        assert ex.diffusive_derivative("g", 2) == ex.DiffusivePoly(
            {(2, 1): F(-4), (2, 2): F(1)}
        )

    def test_printed_h_tables(self):
        assert ex.diffusive_derivative("h", 1) == ex.DiffusivePoly(
            {(1, 0): F(2), (1, 1): F(-1)}
        )
        assert ex.diffusive_derivative("h", 2) == ex.DiffusivePoly(
            {(2, 0): F(12), (2, 1): F(-8), (2, 2): F(1)}
        )

    @pytest.mark.parametrize("k", range(1, 9))
    def test_g_band_structure(self, k):
        poly = ex.diffusive_derivative("g", k)
        assert all(kk == k and 1 <= j <= k for (kk, j) in poly.terms)

    @pytest.mark.parametrize("k", range(1, 9))
    def test_h_band_structure_and_leading_coefficient(self, k):
        poly = ex.diffusive_derivative("h", k)
        assert all(kk == k and 0 <= j <= k for (kk, j) in poly.terms)
        assert poly.terms[(k, 0)] == F(2**k * double_factorial(2 * k - 1))

    def test_domain(self):
        with pytest.raises(ValueError):
            ex.diffusive_derivative("q", 1)
        with pytest.raises(ValueError):
            ex.diffusive_derivative("g", -1)

    @pytest.mark.parametrize("k", range(1, 6))
    def test_against_central_differences(self, rng, k):
        dg = ex.diffusive_derivative("g", k)
        dh = ex.diffusive_derivative("h", k)
        for _ in range(20):
            r = rng.uniform(0.05, 3.0)
            t = rng.uniform(0.5, 10.0)
            refg = oracles.g_a_derivative(k, r, 0.0, t)
            refh = oracles.h_a_derivative(k, r, 0.0, t)
            assert abs(dg.evaluate(r, t) - refg) <= 1e-6 * max(abs(refg), 1e-30)
            assert abs(dh.evaluate(r, t) - refh) <= 1e-6 * max(abs(refh), 1e-30)


class TestDiffusiveProfiles:
    def test_first_orders(self):
        assert ex.diffusive_profile(1, 1) == ex.DiffusivePoly({(0, 0): F(1, 2)})
        assert ex.diffusive_profile(2, 1) == ex.DiffusivePoly({(0, 0): F(1)})

    def test_second_order_product_profile(self):
        want = ex.DiffusivePoly({(0, 0): F(1), (1, 0): F(2), (1, 1): F(-1)})
        assert ex.diffusive_profile(2, 2) == want

    def test_domain(self):
        with pytest.raises(ValueError):
            ex.diffusive_profile(1, 0)
        with pytest.raises(ValueError):
            ex.diffusive_profile(3, 1)


class TestTakedaCoefficients:
    def test_printed_values(self):
        tc = ex.takeda_coefficients(3)
        assert tc.alpha[(0, 0)] == 1
        assert tc.alpha[(1, 0)] == 1
        assert tc.alpha[(1, 1)] == 2
        assert tc.alpha[(2, 0)] == F(1, 2)
        assert tc.alpha[(1, 2)] == 5
        assert tc.alpha[(2, 1)] == 2
        assert tc.alpha[(3, 0)] == F(1, 6)
        assert [tc.beta[i] for i in range(4)] == [1, 2, 6, 20]

    def test_alpha_0k_vanishes(self):
        tc = ex.takeda_coefficients(6)
        assert all(tc.alpha[(0, k)] == 0 for k in range(1, 7))

    @pytest.mark.parametrize("ell", range(13))
    def test_beta_closed_form(self, ell):
        tc = ex.takeda_coefficients(12)
        want = F(2**ell * double_factorial(2 * ell - 1), 1)
        for i in range(2, ell + 1):
            want /= i
        assert tc.beta[ell] == want


class TestTakedaExpansion:
    def test_order_zero(self):
        u0, u1 = ex.takeda_expansion(0)
        assert u1 == ex.DiffusivePoly({(0, 0): F(1)})
        assert u0 == ex.DiffusivePoly({(0, 0): F(1, 2)})

    def test_order_one_second_part(self):
        _u0, u1 = ex.takeda_expansion(1)
        assert u1 == ex.DiffusivePoly({(0, 0): F(1), (1, 0): F(2), (1, 1): F(-1)})

    def test_order_two_first_part(self):
        u0, _u1 = ex.takeda_expansion(2)
        want = ex.DiffusivePoly(
            {(0, 0): F(1, 2), (1, 1): F(-1, 2), (2, 1): F(-1), (2, 2): F(1, 4)}
        )
        assert u0 == want


class TestEquivalence:
    def test_order_zero(self):
        assert ex.check_equivalence(0).equal

    def test_order_two(self):
        assert ex.check_equivalence(2).equal

    @pytest.mark.parametrize("m", range(9))
    def test_orders_through_eight(self, m):
        report = ex.check_equivalence(m)
        assert report.equal, (report.side, report.monomial)

    def test_mismatch_reporting_shape(self):
        # perturb one Taylor coefficient through a copied comparison
        a = ex.diffusive_profile(2, 2)
        b = ex.DiffusivePoly(dict(a.terms))
        b.add_term((1, 1), F(1, 7))
        key = ex._first_mismatch(a, b)
        assert key == (1, 1)

    def test_json_serialization(self):
        doc = ex.diffusive_derivative("h", 2).to_json_dict()
        assert {t["coeff"] for t in doc["terms"]} == {"12/1", "-8/1", "1/1"}
