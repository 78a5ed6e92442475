"""Exact combinatorics and power-series arithmetic."""

from fractions import Fraction as F

import pytest

from dampedwave.exact import (
    FaaPartition,
    PowerSeries,
    double_factorial,
    enumerate_faa_partitions,
    faa_di_bruno_coefficient,
    l_constant,
    one_minus_4s,
)


def partition_count(k: int) -> int:
    """Independent oracle: integer-partition numbers by dynamic programming."""
    table = [1] + [0] * k
    for part in range(1, k + 1):
        for total in range(part, k + 1):
            table[total] += table[total - part]
    return table[k]


class TestDoubleFactorial:
    def test_conventions(self):
        assert double_factorial(-1) == 1
        assert double_factorial(0) == 1
        assert double_factorial(1) == 1

    def test_small_values_by_direct_multiplication(self):
        assert double_factorial(5) == 5 * 3 * 1
        assert double_factorial(7) == 7 * 5 * 3 * 1
        assert double_factorial(6) == 6 * 4 * 2

    def test_domain(self):
        with pytest.raises(ValueError):
            double_factorial(-2)


class TestLConstant:
    def test_first_value(self):
        assert l_constant(1) == F(-1, 2)

    def test_printed_formula(self):
        assert l_constant(2) == F(-1, 4)
        assert l_constant(5) == F(-105, 32)  # 7!! = 105

    def test_odd_integer_property(self):
        for j in range(2, 12):
            value = l_constant(j) * (-(2**j))
            assert value.denominator == 1
            assert value.numerator > 0
            assert value.numerator % 2 == 1

    def test_domain(self):
        with pytest.raises(ValueError):
            l_constant(0)


class TestPartitions:
    def test_trivial(self):
        assert [p.multiplicities for p in enumerate_faa_partitions(1)] == [(1,)]

    def test_k3_order(self):
        got = [p.multiplicities for p in enumerate_faa_partitions(3)]
        assert got == [(3, 0, 0), (1, 1, 0), (0, 0, 1)]

    def test_count_k5(self):
        assert len(enumerate_faa_partitions(5)) == 7

    @pytest.mark.parametrize("k", range(1, 13))
    def test_counts_match_partition_function(self, k):
        assert len(enumerate_faa_partitions(k)) == partition_count(k)

    @pytest.mark.parametrize("k", range(1, 13))
    def test_constraint_holds(self, k):
        for p in enumerate_faa_partitions(k):
            assert sum(j * pj for j, pj in enumerate(p.multiplicities, start=1)) == k
            assert 1 <= p.block_count <= k

    def test_domain(self):
        with pytest.raises(ValueError):
            enumerate_faa_partitions(0)
        with pytest.raises(ValueError):
            FaaPartition((1, 1))  # sums to 3, order 2


class TestFaaCoefficient:
    def test_chain_rule_base(self):
        assert faa_di_bruno_coefficient(FaaPartition((1,)), 1) == 1

    def test_examples(self):
        assert faa_di_bruno_coefficient(FaaPartition((0, 1)), 2) == 1
        assert faa_di_bruno_coefficient(FaaPartition((1, 1, 0)), 3) == 3

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            faa_di_bruno_coefficient(FaaPartition((1,)), 2)

    @pytest.mark.parametrize("k", range(1, 9))
    def test_coefficients_sum_to_bell_number_style_identity(self, k):
        # with F = exp and G = e^x - 1 all derivative factors are 1, so the
        # sum over partitions of the weights equals the Bell number; check
        # against a Bell-triangle oracle.
        bell = [[1]]
        for _ in range(k):
            row = [bell[-1][-1]]
            for v in bell[-1]:
                row.append(row[-1] + v)
            bell.append(row)
        want = bell[k][0]
        got = sum(faa_di_bruno_coefficient(p, k) for p in enumerate_faa_partitions(k))
        assert got == want


def random_series(rng, order, invertible=False):
    coeffs = [F(int(rng.integers(-9, 10)), int(rng.integers(1, 7))) for _ in range(order + 1)]
    if invertible and coeffs[0] == 0:
        coeffs[0] = F(1, 2)
    return PowerSeries(coeffs)


class TestPowerSeries:
    def test_sqrt_of_one_minus_4s(self):
        got = one_minus_4s(4).sqrt()
        assert got == PowerSeries([1, -2, -2, -4, -10])

    def test_sqrt_squares_back(self):
        s = one_minus_4s(12).sqrt()
        assert s * s == one_minus_4s(12)

    def test_reciprocal_of_one(self):
        one = PowerSeries.constant(1, 6)
        assert one.reciprocal() == one

    def test_inverse_of_one_plus_sqrt(self):
        one = PowerSeries.constant(1, 2)
        series = (one + one_minus_4s(2).sqrt()).reciprocal()
        assert series == PowerSeries([F(1, 2), F(1, 2), F(1, 1)])

    def test_mul_reciprocal_is_one(self, rng):
        for order in (3, 8, 32):
            a = random_series(rng, order, invertible=True)
            assert a * a.reciprocal() == PowerSeries.constant(1, order)

    def test_truncation_propagates_min_order(self, rng):
        a = random_series(rng, 7)
        b = random_series(rng, 4)
        assert (a * b).truncation_order == 4
        assert (a + b).truncation_order == 4

    def test_compose_requires_zero_constant(self, rng):
        outer = random_series(rng, 5)
        inner = PowerSeries.constant(1, 5)
        with pytest.raises(ValueError):
            outer.compose(inner)

    def test_sqrt_requires_unit_constant(self):
        with pytest.raises(ValueError):
            PowerSeries([F(4), F(1)]).sqrt()

    def test_reciprocal_requires_nonzero_constant(self):
        with pytest.raises(ValueError):
            PowerSeries([F(0), F(1)]).reciprocal()

    @pytest.mark.parametrize("k", range(1, 9))
    def test_chain_rule_cross_check(self, rng, k):
        """k-th derivative at 0 of F(G(s)) from series composition equals the
        partition sum built from the multinomial weights, exactly."""
        order = k
        outer = random_series(rng, order)
        inner_coeffs = [F(0)] + [
            F(int(rng.integers(-6, 7)), int(rng.integers(1, 5))) for _ in range(order)
        ]
        inner = PowerSeries(inner_coeffs)
        composed = outer.compose(inner)
        direct = composed.derivative_at_zero(k)

        total = F(0)
        for part in enumerate_faa_partitions(k):
            term = faa_di_bruno_coefficient(part, k)
            term *= outer.derivative_at_zero(part.block_count)
            for j, pj in enumerate(part.multiplicities, start=1):
                term *= inner.derivative_at_zero(j) ** pj
            total += term
        assert direct == total

    def test_evaluate_horner(self):
        s = PowerSeries([F(1), F(2), F(3)])
        assert s.evaluate(F(1, 2)) == F(1) + F(2) * F(1, 2) + F(3) * F(1, 4)
