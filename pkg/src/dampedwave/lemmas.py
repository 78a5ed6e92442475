"""Named verification suites for the identities behind the profile
construction.  Each suite returns a LemmaResult; the CLI prints one
pass/fail line per suite and tests assert on them individually.

The suites mix three kinds of evidence:

* exact symbolic identities (Fraction equality, no tolerances);
* extended-precision finite-difference cross-checks (:mod:`.oracles`);
* bounded-grid checks standing in for non-constructive constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import expansion as ex
from . import multipliers as mult
from . import oracles
from .exact import double_factorial
from .norms import moment_bound_check


@dataclass(frozen=True)
class LemmaResult:
    name: str
    passed: bool
    detail: str = ""
    counterexample: dict = field(default_factory=dict)


def _result(name: str, passed: bool, detail: str = "", **counter) -> LemmaResult:
    return LemmaResult(name=name, passed=passed, detail=detail, counterexample=counter)


# --- wave family -------------------------------------------------------------


def check_base_kernels() -> LemmaResult:
    """I_1..I_3 against their frozen closed forms."""
    want = {
        1: ex.TrigPoly({(1, 0, "sin"): Fraction(1, 2)}),
        2: ex.TrigPoly({(1, 0, "sin"): Fraction(1, 4), (2, 1, "cos"): Fraction(-1, 4)}),
        3: ex.TrigPoly(
            {
                (1, 0, "sin"): Fraction(3, 8),
                (2, 1, "cos"): Fraction(-3, 8),
                (3, 2, "sin"): Fraction(-1, 8),
            }
        ),
    }
    for k, poly in want.items():
        if ex.wave_Ik(k) != poly:
            return _result("wave-base-kernels", False, f"I_{k} differs", k=k)
    return _result("wave-base-kernels", True, "I_1..I_3 match the closed forms")


def check_recurrence_vs_direct(max_k: int = 8, corrupt: bool = False) -> LemmaResult:
    """Three-term recurrence versus the chain-rule assembly, exactly."""
    for k in range(1, max_k + 1):
        via_rec = ex.wave_Fk_trigpoly(k)
        via_faa = ex.wave_Fk_via_faa(k)
        if corrupt and k == max_k:
            corrupted = ex.TrigPoly(dict(via_faa.terms), via_faa.denominator_r_power)
            key = sorted(corrupted.terms)[0]
            corrupted.terms[key] = -corrupted.terms[key]
            via_faa = corrupted
        if via_rec != via_faa:
            return _result(
                "recurrence-vs-direct",
                False,
                f"F_{k}: recurrence and chain-rule assemblies differ",
                k=k,
            )
    return _result("recurrence-vs-direct", True, f"exact match through k={max_k}")


def check_kernel_vanishes_at_zero(max_k: int = 8) -> LemmaResult:
    """I_k(0, t) = 0: no constant-in-r cosine term, and the sine series
    carries r everywhere (minimum r-power of the expansion >= 1)."""
    for k in range(1, max_k + 1):
        poly = ex.wave_Ik(k)
        bad = [key for key in poly.terms if key[1] == 0 and key[2] == "cos"]
        if bad:
            return _result(
                "wave-kernel-vanishes-at-zero", False, f"I_{k} has an r-free cosine term", k=k
            )
        expanded = poly.series_in_r(2 * k + 3)
        if expanded and min(rp for (_tp, rp) in expanded) < 1:
            return _result(
                "wave-kernel-vanishes-at-zero", False, f"I_{k} expansion has an r^0 term", k=k
            )
    return _result("wave-kernel-vanishes-at-zero", True, f"holds through k={max_k}")


def check_radial_derivative_recurrence(max_k: int = 8) -> LemmaResult:
    """(1/r) d/dr I_k = (t^2/2) I_{k-1} as an exact symbolic identity."""
    for k in range(2, max_k + 1):
        lhs = ex.wave_Ik(k).derivative_r().divide_by_r()
        rhs = ex.wave_Ik(k - 1).mul_monomial(2, 0).scale(Fraction(1, 2))
        if lhs != rhs:
            return _result("radial-derivative-recurrence", False, f"fails at k={k}", k=k)
    return _result("radial-derivative-recurrence", True, f"exact for 2 <= k <= {max_k}")


def check_small_r_limit(max_k: int = 8) -> LemmaResult:
    """Series limit of F_k at r -> 0 equals t^(2k) / (2^k (2k-1)!!)."""
    for k in range(1, max_k + 1):
        t_pow, coeff = ex.sing_limit(k)
        want = Fraction(1, 2**k * double_factorial(2 * k - 1))
        if t_pow != 2 * k or coeff != want:
            return _result(
                "small-r-limit",
                False,
                f"k={k}: got t^{t_pow} * {coeff}, want t^{2 * k} * {want}",
                k=k,
            )
    return _result("small-r-limit", True, f"matches the double-factorial form through k={max_k}")


def check_cos_recurrence_oracle(seed: int = 1234) -> LemmaResult:
    """Numeric recurrence for the c-derivatives of cos(t sqrt(r^2-c)) against
    extended-precision finite differences at general c."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(6):
        for _ in range(6):
            r = rng.uniform(0.8, 4.0)
            c = rng.uniform(0.0, 0.25)
            t = rng.uniform(0.5, 8.0)
            got = ex.wave_Fk_general(k, r, c, t)
            ref = oracles.f_c_derivative(k, r, c, t)
            worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    passed = worst <= 1e-6
    return _result(
        "cos-derivative-recurrence-oracle", passed, f"worst relative error {worst:.2e}"
    )


def check_cos_derivative_bound() -> LemmaResult:
    """sup |d^b/dc^b cos(t sqrt(r^2-c))| r^b / t^b over the sampled grid is
    finite and essentially saturated by t = 50: extending the time grid to
    100 may only refine the oscillation sampling (a grid sup over more
    points cannot decrease), not reveal power-law growth, so the extension
    is capped at a 1.3x increase (a t^(1/2) trend would give ~1.41x)."""
    rs = np.arange(1.0, 8.01, 0.5)
    cs = [0.0, 1 / 16, 1 / 8, 3 / 16, 1 / 4]
    base_ts = [1.0, 2.0, 5.0, 10.0, 25.0, 50.0]
    sups = []
    for b in range(1, 6):

        def grid_sup(ts):
            return max(
                abs(ex.wave_Fk_general(b, r, c, t)) * r**b / t**b
                for r in rs
                for c in cs
                for t in ts
            )

        sup50 = grid_sup(base_ts)
        sup100 = grid_sup(base_ts + [60.0, 75.0, 90.0, 100.0])
        sups.append(sup100)
        if not math.isfinite(sup50) or sup100 > 1.3 * sup50:
            return _result(
                "cos-derivative-bound",
                False,
                f"b={b}: sup grew from {sup50:.3e} to {sup100:.3e} at t=100",
                b=b,
            )
    report = ", ".join(f"b={b}: {s:.3e}" for b, s in enumerate(sups, start=1))
    return _result("cos-derivative-bound", True, f"normalized sups ({report})")


def check_wave_oracle(seed: int = 1234, max_k: int = 5) -> LemmaResult:
    """Symbolic F_k values against finite differences at random (r, t)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(1, max_k + 1):
        lowered = mult.lower_trig_kernel(ex.wave_Fk_trigpoly(k))
        for _ in range(20):
            r = rng.uniform(0.05, 3.0)
            t = rng.uniform(0.5, 10.0)
            got = float(lowered(np.array([r]), t)[0])
            ref = oracles.f_c_derivative(k, r, 0.0, t)
            worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    passed = worst <= 1e-6
    return _result("wave-derivative-oracle", passed, f"worst relative error {worst:.2e}")


# --- diffusive family --------------------------------------------------------


def check_sqrt_shift_derivatives(max_k: int = 8, seed: int = 1234) -> LemmaResult:
    """Derivatives of (1 + sqrt(1-4ar^2))^-1 at a = 0: nonzero rational
    multiples of r^(2k), cross-checked by finite differences; the same
    quantity stays bounded by a constant times r^(2k) on [0,1/3] x [0,1]."""
    rng = np.random.default_rng(seed)
    for k in range(1, max_k + 1):
        coeff = ex.inv_sqrt_shift_coefficient(k)
        if coeff == 0:
            return _result("sqrt-shift-derivatives", False, f"k={k}: coefficient is zero", k=k)
    worst = 0.0
    for k in range(1, 6):
        coeff = float(ex.inv_sqrt_shift_coefficient(k))
        for _ in range(5):
            r = rng.uniform(0.05, 0.33)
            ref = oracles.inv_one_plus_sqrt_a_derivative(k, r, 0.0)
            got = coeff * r ** (2 * k)
            worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
        # bounded on the strip: sampled sup of |FD at interior a| / r^(2k)
        sup = 0.0
        for r in (0.05, 0.15, 0.25, 1 / 3):
            for a in (0.0, 0.5, 1.0):
                val = abs(oracles.inv_one_plus_sqrt_a_derivative(k, r, a)) / r ** (2 * k)
                sup = max(sup, val)
        if not math.isfinite(sup):
            return _result("sqrt-shift-derivatives", False, f"k={k}: unbounded on the strip", k=k)
    passed = worst <= 1e-6
    return _result("sqrt-shift-derivatives", passed, f"worst relative error {worst:.2e}")


def check_exp_derivative_structure(max_k: int = 8) -> LemmaResult:
    """a-derivatives of the exponential factor: support exactly
    {(k, j): 1 <= j <= k} and the first two orders match the closed table."""
    want1 = ex.DiffusivePoly({(1, 1): Fraction(-1)})
    want2 = ex.DiffusivePoly({(2, 1): Fraction(-4), (2, 2): Fraction(1)})
    if ex.diffusive_derivative("g", 1) != want1 or ex.diffusive_derivative("g", 2) != want2:
        return _result("exp-derivative-structure", False, "low-order tables differ")
    for k in range(1, max_k + 1):
        poly = ex.diffusive_derivative("g", k)
        if any(kk != k or not (1 <= j <= k) for (kk, j) in poly.terms):
            return _result(
                "exp-derivative-structure", False, f"k={k}: support outside (k, 1..k)", k=k
            )
    return _result("exp-derivative-structure", True, f"band structure holds through k={max_k}")


def check_product_derivative_structure(max_k: int = 8) -> LemmaResult:
    """a-derivatives of the product form: support {(k, j): 0 <= j <= k},
    the j = 0 coefficient equals 2^k (2k-1)!!, and distinct coefficients
    per j in general (the first two orders match the closed table)."""
    want1 = ex.DiffusivePoly({(1, 0): Fraction(2), (1, 1): Fraction(-1)})
    want2 = ex.DiffusivePoly(
        {(2, 0): Fraction(12), (2, 1): Fraction(-8), (2, 2): Fraction(1)}
    )
    if ex.diffusive_derivative("h", 1) != want1 or ex.diffusive_derivative("h", 2) != want2:
        return _result("product-derivative-structure", False, "low-order tables differ")
    for k in range(1, max_k + 1):
        poly = ex.diffusive_derivative("h", k)
        if any(kk != k or not (0 <= j <= k) for (kk, j) in poly.terms):
            return _result(
                "product-derivative-structure", False, f"k={k}: support outside (k, 0..k)", k=k
            )
        want_j0 = Fraction(2**k * double_factorial(2 * k - 1))
        if poly.terms.get((k, 0)) != want_j0:
            return _result(
                "product-derivative-structure",
                False,
                f"k={k}: j=0 coefficient {poly.terms.get((k, 0))} != {want_j0}",
                k=k,
            )
    return _result("product-derivative-structure", True, f"holds through k={max_k}")


def check_diffusive_oracle(seed: int = 1234, max_k: int = 5) -> LemmaResult:
    """Exact a-derivatives of both diffusive factors against finite
    differences at random (r, t)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(1, max_k + 1):
        dg = ex.diffusive_derivative("g", k)
        dh = ex.diffusive_derivative("h", k)
        for _ in range(20):
            r = rng.uniform(0.05, 3.0)
            t = rng.uniform(0.5, 10.0)
            refg = oracles.g_a_derivative(k, r, 0.0, t)
            refh = oracles.h_a_derivative(k, r, 0.0, t)
            worst = max(worst, abs(dg.evaluate(r, t) - refg) / max(abs(refg), 1e-300))
            worst = max(worst, abs(dh.evaluate(r, t) - refh) / max(abs(refh), 1e-300))
    passed = worst <= 1e-6
    return _result("diffusive-derivative-oracle", passed, f"worst relative error {worst:.2e}")


def check_moment_decay() -> LemmaResult:
    """Unit-ball Gaussian moment norms track (1+t)^(-n/4-k/2): the ratio is
    bounded over t and stabilizes at large t."""
    for k, n in ((0, 1), (1, 2), (2, 3)):
        ratios = [moment_bound_check(k, n, t)[1] for t in (1.0, 10.0, 100.0, 1000.0)]
        if not all(math.isfinite(x) and x > 0 for x in ratios):
            return _result("moment-decay", False, f"(k={k}, n={n}): ratio not finite", k=k, n=n)
        if max(ratios) > 4.0 * min(ratios):
            return _result(
                "moment-decay", False, f"(k={k}, n={n}): ratio varies by > 4x", k=k, n=n
            )
        if abs(ratios[-1] - ratios[-2]) > 0.2 * ratios[-2]:
            return _result(
                "moment-decay", False, f"(k={k}, n={n}): ratio has not stabilized", k=k, n=n
            )
    return _result("moment-decay", True, "ratios bounded and stable through t=1000")


# --- multiplier identities -----------------------------------------------------


def check_branch_continuity() -> LemmaResult:
    """No implementation jump at r = 1/2: the centered second difference
    across the branch point (which cancels the smooth slope) stays below
    1e-8, and the exact branch-point values are reproduced."""
    eps = 1e-5
    for t in (1.0, 10.0, 50.0):
        for f in (mult.k0_hat, mult.k1_hat):
            second = abs(f(0.5 + eps, t) + f(0.5 - eps, t) - 2.0 * f(0.5, t))
            if second > 1e-8:
                return _result(
                    "branch-continuity", False, f"t={t}: second difference {second:.2e}", t=t
                )
        if abs(mult.k1_hat(0.5, t) - t * math.exp(-0.5 * t)) > 1e-12:
            return _result("branch-continuity", False, f"t={t}: branch-point value off", t=t)
    return _result("branch-continuity", True, "smooth across r = 1/2 for t in {1, 10, 50}")


def check_symbol_identities() -> LemmaResult:
    """Closed forms at r = 0: k1 = 1 - e^-t and k0 = (1 + e^-t)/2."""
    for t in (0.5, 1.0, 5.0, 20.0, 80.0):
        if abs(mult.k1_hat(0.0, t) - (1.0 - math.exp(-t))) > 1e-12:
            return _result("symbol-identities", False, f"k1(0, {t}) off", t=t)
        if abs(mult.k0_hat(0.0, t) - 0.5 * (1.0 + math.exp(-t))) > 1e-12:
            return _result("symbol-identities", False, f"k0(0, {t}) off", t=t)
    return _result("symbol-identities", True, "r = 0 closed forms to 1e-12")


def check_cutoff_partition() -> LemmaResult:
    family = mult.cutoffs()
    r = np.linspace(0.0, 5.0, 10_000)
    dev = float(np.max(np.abs(family.chi_L(r) + family.chi_M(r) + family.chi_H(r) - 1.0)))
    rng_ok = all(
        float(np.min(chi(r))) >= 0.0 and float(np.max(chi(r))) <= 1.0
        for chi in (family.chi_L, family.chi_M, family.chi_H)
    )
    passed = dev <= 1e-15 and rng_ok
    return _result("cutoff-partition", passed, f"max |sum - 1| = {dev:.2e}")


def check_remainder_consistency(seed: int = 1234) -> LemmaResult:
    """remainder + e^(-t/2) W + D reassembles the exact multiplier to 1e-12
    at 100 random points, for both pieces."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.0, 4.0, size=100)
    t = rng.uniform(0.5, 50.0, size=100)
    for i, b, ell in ((1, 2, 1), (2, 3, 2)):
        rem = mult.remainder_multiplier(i, b, ell, "ALL")
        wave = mult.wave_profile_multiplier(i, b)
        diff = mult.diffusive_profile_multiplier(i, ell)
        exact = mult.k0_hat if i == 1 else mult.k1_hat
        for rr, tt in zip(r, t):
            lhs = rem(rr, tt) + math.exp(-0.5 * tt) * wave(rr, tt) + diff(rr, tt)
            if abs(lhs - exact(rr, tt)) > 1e-12:
                return _result(
                    "remainder-consistency",
                    False,
                    f"i={i}: |sum - exact| = {abs(lhs - exact(rr, tt)):.2e} at (r={rr:.4f}, t={tt:.4f})",
                    i=i,
                    r=rr,
                    t=tt,
                )
    return _result("remainder-consistency", True, "reassembles the exact symbols to 1e-12")


def check_split_identity() -> LemmaResult:
    """Low-frequency split: e^(-t/2) cosh(t sqrt(1/4 - r^2)) minus half the
    a = 1 exponential equals half of e^(-t(1/2 + sqrt(1/4 - r^2)))."""
    for t in (1.0, 5.0, 20.0, 100.0):
        for r in np.linspace(0.0, 1.0 / 3.0, 30):
            s = math.sqrt(0.25 - r * r)
            lhs = math.exp(-0.5 * t) * math.cosh(t * s) if t * s < 700 else None
            if lhs is None:
                continue
            g1 = math.exp(-2.0 * t * r * r / (1.0 + math.sqrt(1.0 - 4.0 * r * r)))
            rhs = 0.5 * math.exp(-t * (0.5 + s))
            if abs(lhs - 0.5 * g1 - rhs) > 1e-12:
                return _result(
                    "low-frequency-split", False, f"off by {abs(lhs - 0.5 * g1 - rhs):.2e}", r=r, t=t
                )
    return _result("low-frequency-split", True, "identity holds to 1e-12 on [0, 1/3]")


# --- runner --------------------------------------------------------------------


def run_all(max_k: int = 8, seed: int = 1234, corrupt: bool = False) -> list[LemmaResult]:
    return [
        check_base_kernels(),
        check_recurrence_vs_direct(max_k, corrupt=corrupt),
        check_kernel_vanishes_at_zero(max_k),
        check_radial_derivative_recurrence(max_k),
        check_small_r_limit(max_k),
        check_cos_recurrence_oracle(seed),
        check_cos_derivative_bound(),
        check_wave_oracle(seed),
        check_sqrt_shift_derivatives(max_k, seed),
        check_exp_derivative_structure(max_k),
        check_product_derivative_structure(max_k),
        check_diffusive_oracle(seed),
        check_moment_decay(),
        check_branch_continuity(),
        check_symbol_identities(),
        check_cutoff_partition(),
        check_remainder_consistency(seed),
        check_split_identity(),
    ]
