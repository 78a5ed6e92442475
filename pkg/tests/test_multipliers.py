"""Exact solution multipliers, cutoffs, remainders, and backend parity."""

import math

import numpy as np
import pytest

from dampedwave import _evalcore, multipliers as M


class TestK0:
    def test_zero_frequency(self):
        for t in (0.5, 3.0, 40.0):
            assert M.k0_hat(0.0, t) == pytest.approx((1 + math.exp(-t)) / 2, rel=1e-14)

    def test_branch_point(self):
        assert M.k0_hat(0.5, 3.0) == pytest.approx(math.exp(-1.5), rel=1e-14)

    def test_trig_branch(self):
        want = math.exp(-1) * math.cos(math.sqrt(3.0))
        assert M.k0_hat(1.0, 2.0) == pytest.approx(want, rel=1e-13)

    def test_no_jump_at_branch(self):
        eps = 1e-5
        for t in (1.0, 10.0, 50.0):
            second = abs(M.k0_hat(0.5 + eps, t) + M.k0_hat(0.5 - eps, t) - 2 * M.k0_hat(0.5, t))
            assert second <= 1e-8

    def test_large_t_no_overflow(self):
        vals = M.k0_hat(np.linspace(0, 3, 50), 800.0)
        assert np.all(np.isfinite(vals))

    def test_extreme_t_stays_finite(self):
        r = np.linspace(0.0, 12.0, 200)
        for t in (2000.0, 1e4):
            for f in (M.k0_hat, M.k1_hat):
                vals = f(r, t)
                assert np.all(np.isfinite(vals))
        assert M.k0_hat(0.0, 1e4) == pytest.approx(0.5, rel=1e-15)
        assert M.k1_hat(0.0, 1e4) == pytest.approx(1.0, rel=1e-15)


class TestK1:
    def test_branch_point_limit(self):
        assert M.k1_hat(0.5, 4.0) == pytest.approx(4 * math.exp(-2.0), rel=1e-14)

    def test_zero_frequency_closed_form(self):
        for t in (0.5, 5.0, 30.0):
            assert abs(M.k1_hat(0.0, t) - (1 - math.exp(-t))) < 1e-12

    def test_no_jump_at_branch(self):
        eps = 1e-5
        for t in (1.0, 10.0, 50.0):
            second = abs(M.k1_hat(0.5 + eps, t) + M.k1_hat(0.5 - eps, t) - 2 * M.k1_hat(0.5, t))
            assert second <= 1e-8

    def test_smooth_across_branch_window(self):
        # the change over +/-1e-4 around the branch is the true slope
        # (~e^(-t/2) t^2 per unit w); the centered second difference sees only
        # the genuine curvature (~1e-7 here), far above any switch jump
        t = 10.0
        left, mid, right = (M.k1_hat(r, t) for r in (0.4999, 0.5, 0.5001))
        assert left > mid > right  # decreasing through the branch
        assert abs(left + right - 2 * mid) < 1e-6


class TestCutoffs:
    def test_plateaus(self):
        fam = M.cutoffs()
        assert fam.chi_L(0.2) == 1.0
        assert fam.chi_L(0.25) == 1.0
        assert fam.chi_L(0.34) == 0.0
        assert fam.chi_H(2.5) == 1.0
        assert fam.chi_H(0.9) == 0.0

    def test_partition_of_unity(self):
        fam = M.cutoffs()
        r = np.linspace(0.0, 5.0, 10_000)
        total = fam.chi_L(r) + fam.chi_M(r) + fam.chi_H(r)
        assert float(np.max(np.abs(total - 1.0))) <= 1e-15

    def test_values_in_unit_interval(self):
        fam = M.cutoffs()
        r = np.linspace(0.0, 5.0, 2001)
        for chi in (fam.chi_L, fam.chi_M, fam.chi_H):
            v = chi(r)
            assert np.min(v) >= 0.0 and np.max(v) <= 1.0


class TestRemainders:
    def test_zero_frequency_low_remainder(self):
        # second piece at b = l = 1: k1(0,t) - 0 - 1 = -e^-t
        t = 2.0
        rem = M.remainder_multiplier(2, 1, 1, "L")
        assert rem(0.0, t) == pytest.approx(-math.exp(-t), rel=1e-12)

    def test_high_region_assembly(self):
        # chi_H(3) * [e^-1 cos(2 sqrt(8.75)) - e^-1 cos(6) - (1/2) e^-18]
        # (the first diffusive profile carries a global 1/2)
        r, t = 3.0, 2.0
        rem = M.remainder_multiplier(1, 1, 1, "H")
        chi = M.cutoffs().chi_H(r)
        want = chi * (
            math.exp(-1.0) * math.cos(2 * math.sqrt(8.75))
            - math.exp(-1.0) * math.cos(6.0)
            - 0.5 * math.exp(-2 * 9.0)
        )
        assert rem(r, t) == pytest.approx(want, rel=1e-12)

    def test_regions_sum_to_all(self):
        r, t = 0.7, 5.0
        for i, b, ell in ((1, 1, 1), (2, 3, 2)):
            total = sum(
                M.remainder_multiplier(i, b, ell, reg)(r, t) for reg in ("L", "M", "H")
            )
            assert total == pytest.approx(
                M.remainder_multiplier(i, b, ell, "ALL")(r, t), abs=1e-15
            )

    def test_reassembles_exact_symbol(self, rng):
        for i, b, ell in ((1, 2, 1), (2, 3, 2)):
            rem = M.remainder_multiplier(i, b, ell, "ALL")
            wave = M.wave_profile_multiplier(i, b)
            diff = M.diffusive_profile_multiplier(i, ell)
            exact = M.k0_hat if i == 1 else M.k1_hat
            for _ in range(100):
                r = rng.uniform(0.0, 4.0)
                t = rng.uniform(0.5, 50.0)
                lhs = rem(r, t) + math.exp(-0.5 * t) * wave(r, t) + diff(r, t)
                assert abs(lhs - exact(r, t)) <= 1e-12

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            M.remainder_multiplier(3, 1, 1)
        with pytest.raises(ValueError):
            M.remainder_multiplier(1, 0, 1)
        with pytest.raises(ValueError):
            M.remainder_multiplier(1, 1, 1, "X")


class TestSplitIdentity:
    def test_low_frequency_split(self):
        for t in (1.0, 5.0, 20.0, 100.0):
            for r in np.linspace(0.0, 1 / 3, 25):
                s = math.sqrt(0.25 - r * r)
                lhs = math.exp(-0.5 * t) * math.cosh(t * s)
                g1 = math.exp(-2 * t * r * r / (1 + math.sqrt(1 - 4 * r * r)))
                rhs = 0.5 * math.exp(-t * (0.5 + s))
                assert abs(lhs - 0.5 * g1 - rhs) <= 1e-12


class TestComparisonMultipliers:
    def test_heat_at_zero(self):
        comp = M.comparison_multipliers()
        assert comp["heat_hat"](0.0, 7.0) == 1.0

    def test_sinc_limit(self):
        comp = M.comparison_multipliers()
        t = 3.5
        assert comp["w1_hat"](0.0, t) == pytest.approx(t, rel=1e-15)
        assert comp["w1_hat"](1e-12, t) == pytest.approx(t, rel=1e-10)

    def test_wave_value(self):
        comp = M.comparison_multipliers()
        assert comp["w0_hat"](1.0, math.pi) == pytest.approx(-1.0, rel=1e-15)


@pytest.fixture(scope="module")
def backends():
    numpy_impls = _evalcore.backend_impls("numpy")
    try:
        numba_impls = _evalcore.backend_impls("numba")
    except Exception:
        pytest.skip("numba unavailable")
    return numpy_impls, numba_impls


class TestBackendParity:
    """The numba and numpy implementations agree to a few ulps (summation
    order and pow lowering differ between the paths)."""

    def test_k_kernels(self, backends, rng):
        np_impl, nb_impl = backends
        r = np.sort(rng.uniform(0.0, 4.0, size=512))
        r[0] = 0.0
        r[1] = 0.5
        for t in (0.5, 7.0, 80.0):
            for name in ("k0", "k1"):
                a = np_impl[name](r, t)
                b = nb_impl[name](r, t)
                np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-300)

    def test_cutoffs(self, backends, rng):
        np_impl, nb_impl = backends
        r = np.sort(rng.uniform(0.0, 3.0, size=512))
        for name in ("cutoff_low", "cutoff_high"):
            np.testing.assert_allclose(
                np_impl[name](r), nb_impl[name](r), rtol=1e-11, atol=1e-15
            )

    def test_trig_kernel(self, backends, rng):
        from dampedwave.expansion import wave_Fk_trigpoly
        from dampedwave.multipliers import lower_trig_kernel

        np_impl, nb_impl = backends
        r = np.sort(rng.uniform(1e-6, 4.0, size=512))
        for k in (0, 1, 4, 7):
            low = lower_trig_kernel(wave_Fk_trigpoly(k))
            for t in (0.7, 12.0):
                a = np_impl["trig_kernel"](
                    r, t, low.coef, low.tpow, low.rpow, low.issin, low.dpow,
                    low.sercoef, low.tbase, low.xswitch,
                )
                b = nb_impl["trig_kernel"](
                    r, t, low.coef, low.tpow, low.rpow, low.issin, low.dpow,
                    low.sercoef, low.tbase, low.xswitch,
                )
                np.testing.assert_allclose(a, b, rtol=1e-13)

    def test_diffusive_kernel(self, backends, rng):
        from dampedwave.multipliers import _lowered_diffusive_profile

        np_impl, nb_impl = backends
        r = np.sort(rng.uniform(0.0, 4.0, size=512))
        low = _lowered_diffusive_profile(2, 3)
        for t in (0.5, 30.0, 700.0):
            a = np_impl["diffusive"](r, t, low.karr, low.jarr, low.carr)
            b = nb_impl["diffusive"](r, t, low.karr, low.jarr, low.carr)
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)

    def test_selection_reporting(self):
        assert _evalcore.backend_name() in ("numba", "numpy")
        with pytest.raises(ValueError):
            _evalcore.backend_impls("fortran")

    def test_env_flag_selects_numpy(self):
        import os
        import subprocess
        import sys

        env = dict(os.environ, DWAVE_BACKEND="numpy")
        proc = subprocess.run(
            [
                sys.executable,
                "-c",
                "from dampedwave import _evalcore; print(_evalcore.backend_name())",
            ],
            capture_output=True,
            text=True,
            env=env,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == "numpy"

    def test_env_flag_rejects_unknown(self):
        import os
        import subprocess
        import sys

        env = dict(os.environ, DWAVE_BACKEND="fortran")
        proc = subprocess.run(
            [sys.executable, "-c", "import dampedwave._evalcore"],
            capture_output=True,
            text=True,
            env=env,
        )
        assert proc.returncode != 0
        assert "DWAVE_BACKEND" in proc.stderr
