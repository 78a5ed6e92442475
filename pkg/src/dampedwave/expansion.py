"""Exact symbolic derivative families behind the asymptotic profiles.

Two families of closed-form derivatives are constructed here, both exact:

* the *wave* family: repeated c-derivatives of cos(t*sqrt(r^2 - c)) at
  c = 0, carried as trigonometric polynomials I_k with F_k = I_k / r^(2k-1);
* the *diffusive* family: repeated a-derivatives at a = 0 of
  g(r,a,t) = exp(-2tr^2 / (1 + sqrt(1-4ar^2))) and of h = g / sqrt(1-4ar^2),
  carried as polynomial coefficients against the monomials
  r^(2k) (t r^2)^j e^(-t r^2).

The module also builds the alternative double/triple-sum expansion obtained
by Taylor-expanding the solution formula coefficient functions phi_j, psi
("Takeda expansion" below), and checks coefficient-level equivalence of the
two diffusive representations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Literal, Optional

from .exact import (
    PowerSeries,
    double_factorial,
    enumerate_faa_partitions,
    faa_di_bruno_coefficient,
    l_constant,
    one_minus_4s,
)

Phase = Literal["sin", "cos"]

_FACT = [1]
for _i in range(1, 64):
    _FACT.append(_FACT[-1] * _i)


class TrigPoly:
    """Sum of coeff * t^p * r^q * {sin|cos}(t r), over a common denominator r^d.

    Terms live in ``terms``: a dict mapping (t_power, r_power, phase) to a
    nonzero Fraction.  Zero coefficients are never stored.
    """

    __slots__ = ("terms", "denominator_r_power")

    def __init__(
        self,
        terms: dict[tuple[int, int, Phase], Fraction] | None = None,
        denominator_r_power: int = 0,
    ) -> None:
        self.terms: dict[tuple[int, int, Phase], Fraction] = {}
        self.denominator_r_power = denominator_r_power
        if terms:
            for key, value in terms.items():
                self._add_term(key, Fraction(value))

    def _add_term(self, key: tuple[int, int, Phase], value: Fraction) -> None:
        if value == 0:
            return
        current = self.terms.get(key)
        if current is None:
            self.terms[key] = value
        else:
            total = current + value
            if total == 0:
                del self.terms[key]
            else:
                self.terms[key] = total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return (
            self.terms == other.terms
            and self.denominator_r_power == other.denominator_r_power
        )

    def __repr__(self) -> str:
        body = " + ".join(
            f"({c})*t^{p}*r^{q}*{ph}(tr)" for (p, q, ph), c in sorted(self.terms.items())
        )
        if self.denominator_r_power:
            return f"[{body}] / r^{self.denominator_r_power}"
        return body or "0"

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        if self.denominator_r_power != other.denominator_r_power:
            raise ValueError("denominator powers must match for addition")
        out = TrigPoly(dict(self.terms), self.denominator_r_power)
        for key, value in other.terms.items():
            out._add_term(key, value)
        return out

    def scale(self, factor: Fraction | int) -> "TrigPoly":
        f = Fraction(factor)
        if f == 0:
            return TrigPoly({}, self.denominator_r_power)
        return TrigPoly(
            {k: c * f for k, c in self.terms.items()}, self.denominator_r_power
        )

    def mul_monomial(self, t_power: int, r_power: int) -> "TrigPoly":
        """Multiply by t^a r^b; negative exponents must stay nonnegative termwise."""
        out: dict[tuple[int, int, Phase], Fraction] = {}
        for (p, q, ph), c in self.terms.items():
            np_, nq = p + t_power, q + r_power
            if np_ < 0 or nq < 0:
                raise ValueError("monomial multiplication produced a negative exponent")
            out[(np_, nq, ph)] = c
        return TrigPoly(out, self.denominator_r_power)

    def with_denominator(self, d: int) -> "TrigPoly":
        return TrigPoly(dict(self.terms), d)

    def derivative_r(self) -> "TrigPoly":
        """d/dr of the numerator (requires denominator_r_power == 0)."""
        if self.denominator_r_power:
            raise ValueError("derivative_r only implemented for polynomial TrigPoly")
        out = TrigPoly()
        for (p, q, ph), c in self.terms.items():
            if q > 0:
                out._add_term((p, q - 1, ph), c * q)
            # d/dr sin(tr) = t cos(tr); d/dr cos(tr) = -t sin(tr)
            if ph == "sin":
                out._add_term((p + 1, q, "cos"), c)
            else:
                out._add_term((p + 1, q, "sin"), -c)
        return out

    def divide_by_r(self) -> "TrigPoly":
        """Divide a polynomial TrigPoly by r, termwise; fails on r^0 terms."""
        if self.denominator_r_power:
            raise ValueError("divide_by_r only implemented for polynomial TrigPoly")
        out: dict[tuple[int, int, Phase], Fraction] = {}
        for (p, q, ph), c in self.terms.items():
            if q == 0:
                raise ValueError("term without an r factor; not divisible by r")
            out[(p, q - 1, ph)] = c
        return TrigPoly(out, 0)

    def series_in_r(self, max_r_power: int) -> dict[tuple[int, int], Fraction]:
        """Expand sin/cos(tr) into Maclaurin series; collect the numerator as a
        bivariate polynomial {(t_power, r_power): coeff} up to r^max_r_power.
        """
        out: dict[tuple[int, int], Fraction] = {}
        for (p, q, ph), c in self.terms.items():
            start = 1 if ph == "sin" else 0
            i = 0
            while True:
                power = 2 * i + start
                rp = q + power
                if rp > max_r_power:
                    break
                coeff = c * Fraction((-1) ** i, _FACT[power])
                key = (p + power, rp)
                total = out.get(key, Fraction(0)) + coeff
                if total == 0:
                    out.pop(key, None)
                else:
                    out[key] = total
                i += 1
        return out

    def evaluate(self, r: float, t: float) -> float:
        """Plain float evaluation; no small-r safeguards (see multipliers for
        the numerically safe path)."""
        num = 0.0
        for (p, q, ph), c in self.terms.items():
            trig = math.sin(t * r) if ph == "sin" else math.cos(t * r)
            num += float(c) * t**p * r**q * trig
        if self.denominator_r_power:
            num /= r**self.denominator_r_power
        return num

    def to_json_dict(self) -> dict:
        return {
            "denominator_r_power": self.denominator_r_power,
            "terms": [
                {
                    "coeff": f"{c.numerator}/{c.denominator}",
                    "t_power": p,
                    "r_power": q,
                    "phase": ph,
                }
                for (p, q, ph), c in sorted(self.terms.items())
            ],
        }


class DiffusivePoly:
    """Sum of coeff * r^(2k) * (t r^2)^j * e^(-t r^2), stored sparsely.

    ``terms`` maps (k, j) to a nonzero Fraction.  The sign conventions are
    explicit: a monomial printed as (-t r^2)^j contributes (-1)^j here.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction] | None = None) -> None:
        self.terms: dict[tuple[int, int], Fraction] = {}
        if terms:
            for key, value in terms.items():
                self.add_term(key, Fraction(value))

    def add_term(self, key: tuple[int, int], value: Fraction) -> None:
        if value == 0:
            return
        total = self.terms.get(key, Fraction(0)) + value
        if total == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffusivePoly):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        body = " + ".join(
            f"({c})*r^{2 * k}*(tr^2)^{j}" for (k, j), c in sorted(self.terms.items())
        )
        return f"[{body or '0'}] * exp(-t r^2)"

    def __add__(self, other: "DiffusivePoly") -> "DiffusivePoly":
        out = DiffusivePoly(dict(self.terms))
        for key, value in other.terms.items():
            out.add_term(key, value)
        return out

    def __sub__(self, other: "DiffusivePoly") -> "DiffusivePoly":
        out = DiffusivePoly(dict(self.terms))
        for key, value in other.terms.items():
            out.add_term(key, -value)
        return out

    def scale(self, factor: Fraction | int) -> "DiffusivePoly":
        f = Fraction(factor)
        if f == 0:
            return DiffusivePoly()
        return DiffusivePoly({k: c * f for k, c in self.terms.items()})

    def evaluate(self, r: float, t: float) -> float:
        x = t * r * r
        damp = math.exp(-x)
        if damp == 0.0:
            return 0.0
        acc = 0.0
        for (k, j), c in self.terms.items():
            acc += float(c) * r ** (2 * k) * x**j
        return acc * damp

    def to_json_dict(self) -> dict:
        return {
            "terms": [
                {
                    "coeff": f"{c.numerator}/{c.denominator}",
                    "r_even_power": k,
                    "tr2_power": j,
                }
                for (k, j), c in sorted(self.terms.items())
            ]
        }


# ---------------------------------------------------------------------------
# Wave family: I_k and F_k = I_k / r^(2k-1)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def wave_Ik(k: int) -> TrigPoly:
    """I_k as an exact trigonometric polynomial (denominator power 0).

    Built from the three-term recurrence
    I_{k+1} = ((2k-1)/2) I_k - (t^2 r^2 / 4) I_{k-1}, k >= 2,
    with I_1 = (t/2) sin(tr) and I_2 = (t/4) sin(tr) - (t^2 r/4) cos(tr).
    """
    if k < 1:
        raise ValueError(f"wave_Ik requires k >= 1, got {k}")
    if k == 1:
        return TrigPoly({(1, 0, "sin"): Fraction(1, 2)})
    if k == 2:
        return TrigPoly({(1, 0, "sin"): Fraction(1, 4), (2, 1, "cos"): Fraction(-1, 4)})
    prev2 = wave_Ik(k - 2)
    prev1 = wave_Ik(k - 1)
    # recurrence index: I_k = ((2(k-1)-1)/2) I_{k-1} - (t^2 r^2/4) I_{k-2}
    return prev1.scale(Fraction(2 * k - 3, 2)) + prev2.mul_monomial(2, 2).scale(
        Fraction(-1, 4)
    )


def wave_Fk_trigpoly(k: int) -> TrigPoly:
    """F_k(r, 0, t) = I_k / r^(2k-1) as a TrigPoly with denominator."""
    if k == 0:
        return TrigPoly({(0, 0, "cos"): Fraction(1)}, 0)
    return wave_Ik(k).with_denominator(2 * k - 1)


def wave_Fk_via_faa(k: int) -> TrigPoly:
    """F_k(r,0,t) assembled directly from the higher-order chain rule.

    Independent of the recurrence: sums multinomial weights times
    derivatives of cos at tr times products of the sqrt-derivative
    monomials L_j r^-(2j-1).  Returned over the common denominator
    r^(2k-1) so it is directly comparable with ``wave_Fk_trigpoly``.
    """
    if k < 1:
        raise ValueError(f"wave_Fk_via_faa requires k >= 1, got {k}")
    out = TrigPoly({}, 2 * k - 1)
    for part in enumerate_faa_partitions(k):
        weight = faa_di_bruno_coefficient(part, k)
        total_blocks = part.block_count
        coeff = weight
        for j, p in enumerate(part.multiplicities, start=1):
            coeff *= l_constant(j) ** p
        # d^m/dx^m cos(x): cycle (cos, -sin, -cos, sin)
        m = total_blocks % 4
        phase: Phase = "cos" if m % 2 == 0 else "sin"
        sign = 1 if m in (0, 3) else -1
        # r-power in the numerator: -2k + total_blocks + (2k - 1)
        out._add_term(
            (total_blocks, total_blocks - 1, phase), coeff * sign
        )
    return out


def wave_Fk_general(k: int, r: float, c: float, t: float) -> float:
    """Numeric k-th c-derivative of cos(t sqrt(r^2 - c)) via the three-term
    recurrence F_k = (1/(4(r^2-c))) (-t^2 F_{k-2} + 2(2k-3) F_{k-1}).

    Only the trigonometric branch r^2 > c is supported.
    """
    if k < 0:
        raise ValueError(f"derivative order must be >= 0, got {k}")
    w = r * r - c
    if w <= 0:
        raise ValueError(f"need r^2 > c, got r^2 - c = {w}")
    z = math.sqrt(w)
    f_prev2 = math.cos(t * z)
    if k == 0:
        return f_prev2
    f_prev1 = t / (2.0 * z) * math.sin(t * z)
    if k == 1:
        return f_prev1
    for kk in range(2, k + 1):
        f_next = (-(t * t) * f_prev2 + 2.0 * (2 * kk - 3) * f_prev1) / (4.0 * w)
        f_prev2, f_prev1 = f_prev1, f_next
    return f_prev1


def even_series(poly: TrigPoly, n_terms: int) -> tuple[int, tuple[Fraction, ...]]:
    """Expand a TrigPoly (with denominator r^d) into its even power series

        poly(r, t) = sum_m  c_m * t^(tbase + 2m) * r^(2m),  m = 0..n_terms-1,

    by Maclaurin-expanding sin/cos and cancelling the denominator exactly.
    Raises if the expansion has terms below r^d, odd offsets, or more than
    one t-power per r-power; all kernels built here satisfy the structure.
    """
    d = poly.denominator_r_power
    max_r = d + 2 * (n_terms - 1)
    expanded = poly.series_in_r(max_r)
    coeffs = [Fraction(0)] * n_terms
    tbase: Optional[int] = None
    for (tp, rp), c in sorted(expanded.items(), key=lambda kv: kv[0][1]):
        if rp < d:
            raise AssertionError(f"expansion has a low-order term r^{rp} below r^{d}")
        m, rem = divmod(rp - d, 2)
        if rem:
            raise AssertionError(f"expansion has an odd offset r^{rp}")
        if tbase is None:
            tbase = tp - 2 * m
        elif tp != tbase + 2 * m:
            raise AssertionError(f"mixed t-powers at r^{rp}: {tp} vs {tbase + 2 * m}")
        coeffs[m] += c
    if tbase is None:
        tbase = 0
    return tbase, tuple(coeffs)


@lru_cache(maxsize=None)
def fk_series_coefficients(k: int, n_terms: int) -> tuple[Fraction, ...]:
    """Even-series coefficients of F_k in r at fixed t:

    F_k(r, 0, t) = sum_m  c_m * t^(2(k+m)) * r^(2m),  m = 0..n_terms-1.

    c_0 recovers the r -> 0 limit.
    """
    tbase, coeffs = even_series(wave_Fk_trigpoly(k), n_terms)
    if k > 0 and tbase != 2 * k:
        raise AssertionError(f"unexpected base t-power {tbase} for F_{k}")
    return coeffs


def sing_limit(k: int) -> tuple[int, Fraction]:
    """The r -> 0 limit of F_k(r, 0, t) as (t_power, coefficient), computed
    from the series expansion of I_k (not from the closed form)."""
    if k < 1:
        raise ValueError(f"sing_limit requires k >= 1, got {k}")
    coeff = fk_series_coefficients(k, 1)[0]
    return (2 * k, coeff)


def wave_profile(i: int, b: int) -> list[tuple[Fraction, TrigPoly]]:
    """Taylor-in-c profile multipliers as weighted exact kernels.

    i = 1: sum_{k=0}^{b-1} (1/4)^k / k! * F_k(r, 0, t); the k = 0 kernel is
    cos(tr).  i = 2: 2 t^-1 sum_{k=0}^{b-2} (1/4)^k / k! * F_{k+1}; the
    t^-1 is absorbed into each kernel (every I_k term carries t^1 at least),
    so the weights stay rational.  For i = 2, b = 1 the sum is empty.
    """
    if i not in (1, 2):
        raise ValueError(f"profile index must be 1 or 2, got {i}")
    if b < 1:
        raise ValueError(f"profile order must be >= 1, got {b}")
    out: list[tuple[Fraction, TrigPoly]] = []
    if i == 1:
        for k in range(b):
            weight = Fraction(1, 4**k * _FACT[k])
            out.append((weight, wave_Fk_trigpoly(k)))
    else:
        for k in range(b - 1):
            weight = Fraction(2, 4**k * _FACT[k])
            kernel = wave_Ik(k + 1).mul_monomial(-1, 0).with_denominator(2 * k + 1)
            out.append((weight, kernel))
    return out


# ---------------------------------------------------------------------------
# Diffusive family: a-derivatives of g and h at a = 0
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _inv_one_plus_sqrt_series(order: int) -> PowerSeries:
    """(1 + sqrt(1-4s))^-1 as an exact series in s."""
    one = PowerSeries.constant(1, order)
    return (one + one_minus_4s(order).sqrt()).reciprocal()


def inv_sqrt_shift_coefficient(k: int) -> Fraction:
    """d^k/da^k (1 + sqrt(1-4ar^2))^-1 at a = 0 equals this times r^(2k)."""
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    return _inv_one_plus_sqrt_series(k).derivative_at_zero(k)


@lru_cache(maxsize=None)
def diffusive_derivative(which: str, k: int) -> DiffusivePoly:
    """Exact a-derivative of order k, at a = 0, of g (plain exponential) or
    h (exponential divided by sqrt(1-4ar^2)).

    g route: higher-order chain rule over exp(-2tr^2 * u) with
    u = (1+sqrt(1-4ar^2))^-1, whose a-derivatives at 0 are
    inv_sqrt_shift_coefficient(j) * r^(2j).
    h route: Leibniz rule over (1-4ar^2)^(-1/2) * g, using
    d^i/da^i (1-4ar^2)^(-1/2) |_0 = 2^i (2i-1)!! r^(2i).
    """
    if which not in ("g", "h"):
        raise ValueError(f"which must be 'g' or 'h', got {which!r}")
    if k < 0:
        raise ValueError(f"derivative order must be >= 0, got {k}")
    if k == 0:
        return DiffusivePoly({(0, 0): Fraction(1)})
    if which == "g":
        out = DiffusivePoly()
        for part in enumerate_faa_partitions(k):
            weight = faa_di_bruno_coefficient(part, k)
            blocks = part.block_count
            coeff = weight * Fraction(-2) ** blocks
            for j, p in enumerate(part.multiplicities, start=1):
                coeff *= inv_sqrt_shift_coefficient(j) ** p
            out.add_term((k, blocks), coeff)
        return out
    out = DiffusivePoly()
    for j in range(k + 1):
        binom = Fraction(_FACT[k], _FACT[j] * _FACT[k - j])
        front = Fraction(2 ** (k - j) * double_factorial(2 * (k - j) - 1))
        inner = diffusive_derivative("g", j)
        for (kk, jj), c in inner.terms.items():
            out.add_term((kk + (k - j), jj), binom * front * c)
    return out


def diffusive_profile(i: int, ell: int) -> DiffusivePoly:
    """Taylor-in-a profile: sum_{k<ell} (1/k!) of the k-th derivative of g
    (i = 1, with a global 1/2) or of h (i = 2)."""
    if i not in (1, 2):
        raise ValueError(f"profile index must be 1 or 2, got {i}")
    if ell < 1:
        raise ValueError(f"profile order must be >= 1, got {ell}")
    which = "g" if i == 1 else "h"
    out = DiffusivePoly()
    for k in range(ell):
        out = out + diffusive_derivative(which, k).scale(Fraction(1, _FACT[k]))
    if i == 1:
        out = out.scale(Fraction(1, 2))
    return out


# ---------------------------------------------------------------------------
# Takeda expansion and the equivalence checker
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TakedaCoefficients:
    """alpha[(j, k)] for j + k <= max_order and beta[l] for l <= max_order."""

    alpha: dict[tuple[int, int], Fraction]
    beta: dict[int, Fraction]
    max_order: int


@lru_cache(maxsize=None)
def _phi1_series(order: int) -> PowerSeries:
    """phi_1(s) = (1/2 + sqrt(1/4 - s))^-2 = 4 (1 + sqrt(1-4s))^-2."""
    inv = _inv_one_plus_sqrt_series(order)
    return (inv * inv).scale(4)


@lru_cache(maxsize=None)
def _psi_series(order: int) -> PowerSeries:
    """psi(s) = 1/(2 sqrt(1/4 - s)) = (1-4s)^(-1/2)."""
    return one_minus_4s(order).sqrt().reciprocal()


def takeda_coefficients(m: int) -> TakedaCoefficients:
    """All alpha_{j,k} (j + k <= m) and beta_l (l <= m), exactly.

    alpha_{j,k} = (1/j!) [s^k] phi_1(s)^j with phi_j = phi_1^j, and
    beta_l = [s^l] psi(s).
    """
    if m < 0:
        raise ValueError(f"order must be >= 0, got {m}")
    alpha: dict[tuple[int, int], Fraction] = {}
    beta: dict[int, Fraction] = {}
    psi = _psi_series(m) if m >= 1 else _psi_series(1)
    for ell in range(m + 1):
        beta[ell] = psi.coefficient(ell)
    phi1 = _phi1_series(m) if m >= 1 else _phi1_series(1)
    phi_power = PowerSeries.constant(1, phi1.truncation_order)
    for j in range(m + 1):
        inv_jfact = Fraction(1, _FACT[j])
        for k in range(m - j + 1):
            alpha[(j, k)] = phi_power.coefficient(k) * inv_jfact
        phi_power = phi_power * phi1
    return TakedaCoefficients(alpha=alpha, beta=beta, max_order=m)


def takeda_expansion(m: int) -> tuple[DiffusivePoly, DiffusivePoly]:
    """Order-m double sum (acting on the first datum, with the global 1/2)
    and triple sum (acting on the shifted datum) of the alternative
    expansion, rewritten in the r^(2K) (t r^2)^j basis:
    (-t)^j |xi|^(2(2j+k)) = (-1)^j (t r^2)^j r^(2(j+k)).
    """
    coeffs = takeda_coefficients(m)
    u0_part = DiffusivePoly()
    u1_part = DiffusivePoly()
    for j in range(m + 1):
        sign = Fraction((-1) ** j)
        for k in range(m - j + 1):
            a = coeffs.alpha[(j, k)]
            if a == 0:
                continue
            u0_part.add_term((j + k, j), Fraction(1, 2) * sign * a)
            for ell in range(m - j - k + 1):
                u1_part.add_term((j + k + ell, j), sign * a * coeffs.beta[ell])
    return u0_part, u1_part


@dataclass(frozen=True)
class EquivalenceReport:
    order: int
    equal: bool
    side: Optional[str] = None  # 'g' or 'h' when a mismatch is found
    monomial: Optional[tuple[int, int]] = None
    taylor_value: Optional[Fraction] = None
    takeda_value: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.equal


def _first_mismatch(a: DiffusivePoly, b: DiffusivePoly) -> Optional[tuple[int, int]]:
    keys = sorted(set(a.terms) | set(b.terms))
    for key in keys:
        if a.terms.get(key, Fraction(0)) != b.terms.get(key, Fraction(0)):
            return key
    return None


def check_equivalence(m: int) -> EquivalenceReport:
    """Exact coefficient-level comparison, at order m, of the Taylor-in-a
    diffusive sums against the alternative double/triple-sum expansion."""
    if m < 0:
        raise ValueError(f"order must be >= 0, got {m}")
    u0_takeda, u1_takeda = takeda_expansion(m)
    # Taylor sums through k = m correspond to profile order m + 1.
    taylor_g = diffusive_profile(1, m + 1)
    taylor_h = diffusive_profile(2, m + 1)
    for side, taylor, takeda in (("g", taylor_g, u0_takeda), ("h", taylor_h, u1_takeda)):
        key = _first_mismatch(taylor, takeda)
        if key is not None:
            return EquivalenceReport(
                order=m,
                equal=False,
                side=side,
                monomial=key,
                taylor_value=taylor.terms.get(key, Fraction(0)),
                takeda_value=takeda.terms.get(key, Fraction(0)),
            )
    return EquivalenceReport(order=m, equal=True)


def iter_equivalence(m_max: int) -> Iterator[EquivalenceReport]:
    for m in range(m_max + 1):
        yield check_equivalence(m)
