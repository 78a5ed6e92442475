"""Exact rational combinatorics and truncated formal power series.

Everything in this module is exact: coefficients are `fractions.Fraction`
values, so results can be compared with `==` and no tolerance.  These are
the building blocks for the symbolic derivative families in
:mod:`dampedwave.expansion`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

# Exact rational scalar used throughout the package.  ``Fraction`` already
# guarantees lowest terms, positive denominator, and 0 == 0/1.
Rational = Fraction


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 0!! = 1.

    Raises ValueError for n < -1.
    """
    if n < -1:
        raise ValueError(f"double factorial undefined for n={n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def l_constant(j: int) -> Fraction:
    """Coefficient of the j-th c-derivative of sqrt(r^2 - c) at c = 0,
    as a multiple of r^-(2j-1): -1/2 for j = 1, -(2j-3)!!/2^j for j >= 2.
    """
    if j < 1:
        raise ValueError(f"l_constant requires j >= 1, got {j}")
    if j == 1:
        return Fraction(-1, 2)
    return Fraction(-double_factorial(2 * j - 3), 2**j)


@dataclass(frozen=True)
class FaaPartition:
    """Multiplicity vector (p_1, ..., p_k) with sum(j * p_j) = k.

    p_j counts the blocks of size j; the tuple length is the derivative
    order k.
    """

    multiplicities: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.multiplicities)

    @property
    def block_count(self) -> int:
        return sum(self.multiplicities)

    def __post_init__(self) -> None:
        k = len(self.multiplicities)
        weighted = sum(j * p for j, p in enumerate(self.multiplicities, start=1))
        if k == 0 or weighted != k or any(p < 0 for p in self.multiplicities):
            raise ValueError(f"invalid multiplicities {self.multiplicities} for order {k}")


def enumerate_faa_partitions(k: int) -> list[FaaPartition]:
    """All (p_1, ..., p_k) with sum(j * p_j) = k, in descending
    lexicographic order, e.g. k=3 -> [(3,0,0), (1,1,0), (0,0,1)].
    """
    if k < 1:
        raise ValueError(f"partition enumeration requires k >= 1, got {k}")

    results: list[tuple[int, ...]] = []

    def extend(prefix: list[int], j: int, remaining: int) -> None:
        if j > k:
            if remaining == 0:
                results.append(tuple(prefix))
            return
        # p_j can take any value with j * p_j <= remaining
        for p in range(remaining // j, -1, -1):
            extend(prefix + [p], j + 1, remaining - j * p)

    extend([], 1, k)
    results.sort(reverse=True)
    return [FaaPartition(m) for m in results]


def faa_di_bruno_coefficient(partition: FaaPartition, k: int) -> Fraction:
    """Multinomial weight k! / prod(p_j! * (j!)^p_j) of one partition in the
    higher-order chain rule.
    """
    if partition.order != k:
        raise ValueError(f"partition order {partition.order} does not match k={k}")
    denom = 1
    fact_j = 1
    for j, p in enumerate(partition.multiplicities, start=1):
        fact_j *= j
        denom *= _factorial(p) * fact_j**p
    return Fraction(_factorial(k), denom)


def _factorial(n: int) -> int:
    result = 1
    for i in range(2, n + 1):
        result *= i
    return result


class PowerSeries:
    """Truncated formal power series with Fraction coefficients.

    A series of truncation order T stores coefficients for degrees 0..T and
    is exact through degree T.  Binary operations truncate to the minimum
    order of the operands.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Fraction | int]) -> None:
        if len(coeffs) == 0:
            raise ValueError("a power series needs at least the constant term")
        self.coeffs: tuple[Fraction, ...] = tuple(Fraction(c) for c in coeffs)

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: Fraction | int, order: int) -> "PowerSeries":
        return cls([Fraction(value)] + [Fraction(0)] * order)

    @classmethod
    def identity(cls, order: int) -> "PowerSeries":
        """The series of the variable itself, s."""
        if order < 1:
            raise ValueError("identity series needs order >= 1")
        coeffs = [Fraction(0)] * (order + 1)
        coeffs[1] = Fraction(1)
        return cls(coeffs)

    def __repr__(self) -> str:
        return f"PowerSeries({list(self.coeffs)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def coefficient(self, degree: int) -> Fraction:
        return self.coeffs[degree]

    def derivative_at_zero(self, k: int) -> Fraction:
        """d^k/ds^k at s = 0, i.e. k! times the k-th coefficient."""
        return self.coeffs[k] * _factorial(k)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.truncation_order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: order + 1])

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        t = min(self.truncation_order, other.truncation_order)
        return PowerSeries([self.coeffs[i] + other.coeffs[i] for i in range(t + 1)])

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        t = min(self.truncation_order, other.truncation_order)
        return PowerSeries([self.coeffs[i] - other.coeffs[i] for i in range(t + 1)])

    def __neg__(self) -> "PowerSeries":
        return PowerSeries([-c for c in self.coeffs])

    def scale(self, factor: Fraction | int) -> "PowerSeries":
        f = Fraction(factor)
        return PowerSeries([c * f for c in self.coeffs])

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        t = min(self.truncation_order, other.truncation_order)
        out = [Fraction(0)] * (t + 1)
        for i, a in enumerate(self.coeffs[: t + 1]):
            if a == 0:
                continue
            for j in range(t + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return PowerSeries(out)

    def pow_int(self, exponent: int) -> "PowerSeries":
        if exponent < 0:
            raise ValueError("use reciprocal() for negative powers")
        result = PowerSeries.constant(1, self.truncation_order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def reciprocal(self) -> "PowerSeries":
        """Series of 1/self; requires a nonzero constant term."""
        a0 = self.coeffs[0]
        if a0 == 0:
            raise ValueError("reciprocal requires a nonzero constant term")
        t = self.truncation_order
        out = [Fraction(0)] * (t + 1)
        out[0] = 1 / a0
        for m in range(1, t + 1):
            acc = Fraction(0)
            for i in range(1, m + 1):
                acc += self.coeffs[i] * out[m - i]
            out[m] = -acc / a0
        return PowerSeries(out)

    def sqrt(self) -> "PowerSeries":
        """Series of sqrt(self); restricted to constant term exactly 1."""
        if self.coeffs[0] != 1:
            raise ValueError("sqrt is only supported for series with constant term 1")
        t = self.truncation_order
        out = [Fraction(0)] * (t + 1)
        out[0] = Fraction(1)
        # from (sum b_i s^i)^2 = self: a_m = 2 b_0 b_m + sum_{i=1}^{m-1} b_i b_{m-i}
        for m in range(1, t + 1):
            acc = Fraction(0)
            for i in range(1, m):
                acc += out[i] * out[m - i]
            out[m] = (self.coeffs[m] - acc) / 2
        return PowerSeries(out)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner(s)); the inner series must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("composition requires zero constant term in the inner series")
        t = min(self.truncation_order, inner.truncation_order)
        result = PowerSeries.constant(self.coeffs[t], t)
        # Horner in the inner series
        for i in range(t - 1, -1, -1):
            result = result * inner.truncate(t) + PowerSeries.constant(self.coeffs[i], t)
        return result

    def evaluate(self, s: Fraction | int) -> Fraction:
        """Exact evaluation of the truncated polynomial at a rational point."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc


def one_minus_4s(order: int) -> PowerSeries:
    """The polynomial 1 - 4s as a series of the given order."""
    coeffs = [Fraction(0)] * (order + 1)
    coeffs[0] = Fraction(1)
    if order >= 1:
        coeffs[1] = Fraction(-4)
    return PowerSeries(coeffs)
