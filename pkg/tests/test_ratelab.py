"""Rate fitting and the decay-rate verification machinery."""

import numpy as np
import pytest

from dampedwave import ratelab as R
from dampedwave.norms import data_library, l2_norm_radial


class TestFitRate:
    def test_exact_power_law(self):
        t = np.geomspace(1.0, 100.0, 10)
        sweep = R.SweepResult(times=t, values=7.0 * t**-2.0)
        fit = R.fit_rate(sweep)
        assert fit.slope == pytest.approx(-2.0, abs=1e-12)
        assert fit.max_residual <= 1e-12

    def test_perturbed_power_law(self):
        t = np.geomspace(100.0, 1000.0, 12)
        sweep = R.SweepResult(times=t, values=t**-1.0 * (1.0 + 0.1 / t))
        fit = R.fit_rate(sweep)
        assert fit.slope == pytest.approx(-1.0, abs=0.01)

    def test_constant(self):
        t = np.geomspace(1.0, 50.0, 8)
        fit = R.fit_rate(R.SweepResult(times=t, values=np.full(8, 3.0)))
        assert fit.slope == pytest.approx(0.0, abs=1e-13)

    @pytest.mark.parametrize("exponent", (-0.25, -1.25, -1.5, -2.75))
    def test_synthetic_recovery(self, exponent):
        t = np.geomspace(10.0, 500.0, 15)
        fit = R.fit_rate(R.SweepResult(times=t, values=4.2 * t**exponent))
        assert abs(fit.slope - exponent) <= 1e-10

    def test_window_restriction(self):
        t = np.geomspace(1.0, 1000.0, 20)
        values = np.where(t < 50.0, t**-3.0, t**-1.0) * 2.0
        fit = R.fit_rate(R.SweepResult(times=t, values=values), window=(100.0, 1000.0))
        assert fit.slope == pytest.approx(-1.0, abs=1e-6)

    def test_too_few_samples(self):
        t = np.geomspace(1.0, 10.0, 4)
        with pytest.raises(ValueError):
            R.fit_rate(R.SweepResult(times=t, values=t**-1.0))

    def test_nonpositive_rejected(self):
        t = np.geomspace(1.0, 10.0, 6)
        values = t**-1.0
        values[3] = 0.0
        with pytest.raises(ValueError):
            R.fit_rate(R.SweepResult(times=t, values=values))


class TestSweep:
    def test_heat_control_slope(self, gaussian, rule):
        # E(t) = (pi/(2(t+1)))^(1/4): fitted slope ~ -1/4
        times = R.geometric_times(50.0, 800.0, 12)
        values = np.array(
            [
                l2_norm_radial(lambda r, tt: np.exp(-tt * r * r), gaussian, 1, t, rule)
                for t in times
            ]
        )
        fit = R.fit_rate(R.SweepResult(times=times, values=values))
        assert abs(fit.slope - (-0.25)) <= 0.02

    def test_config_echo_and_monotone_decay(self, gaussian, rule):
        times = R.geometric_times(10.0, 400.0, 8)
        sweep = R.sweep("both", 2, 1, "ALL", 1, gaussian, gaussian, times, rule)
        assert sweep.config["b"] == 2 and sweep.config["region"] == "ALL"
        assert np.all(sweep.values > 0)
        assert np.all(np.diff(sweep.values) < 0)

    def test_region_cauchy_schwarz(self, gaussian, rule):
        times = R.geometric_times(10.0, 200.0, 6)
        pieces = {
            reg: R.sweep("both", 1, 1, reg, 1, gaussian, gaussian, times, rule)
            for reg in ("L", "M", "H", "ALL")
        }
        lhs = pieces["ALL"].values ** 2
        rhs = 3.0 * (
            pieces["L"].values ** 2 + pieces["M"].values ** 2 + pieces["H"].values ** 2
        )
        assert np.all(lhs <= rhs * (1.0 + 1e-12))

    def test_bad_piece(self, gaussian):
        with pytest.raises(ValueError):
            R.sweep(3, 1, 1, "ALL", 1, gaussian, gaussian, [1.0, 2.0, 4.0])


class TestTheorem1:
    def test_requires_b_above_half_n(self, gaussian):
        with pytest.raises(ValueError):
            R.check_theorem1(3, 1, 1, gaussian, gaussian)

    def test_window_robustness(self, gaussian, rule):
        T = 50.0
        s1 = R.sweep("both", 1, 1, "ALL", 1, gaussian, gaussian, R.geometric_times(T, 8 * T, 12), rule)
        s2 = R.sweep(
            "both", 1, 1, "ALL", 1, gaussian, gaussian, R.geometric_times(2 * T, 16 * T, 12), rule
        )
        assert abs(R.fit_rate(s1).slope - R.fit_rate(s2).slope) < 0.05

    def test_dominance_ordering(self, gaussian, rule):
        times = R.geometric_times(50.0, 800.0, 12)
        slopes = []
        for ell in (1, 2, 3):
            sweep = R.sweep("both", 1, ell, "ALL", 1, gaussian, gaussian, times, rule)
            slopes.append(R.fit_rate(sweep).slope)
        for higher, lower in zip(slopes[1:], slopes[:-1]):
            assert lower - higher == pytest.approx(1.0, abs=0.2)

    def test_box_data_smoke(self, rule):
        # rate conclusions must be data robust
        box = data_library("box", radius=1.0)
        times = R.geometric_times(50.0, 800.0, 10)
        sweep = R.sweep("both", 1, 1, "ALL", 1, box, box, times, rule)
        fit = R.fit_rate(sweep)
        assert abs(fit.slope - (-1.25)) <= 0.15


class TestMiddleRegion:
    def test_middle_band_dies_at_its_supported_rate(self, gaussian, rule):
        # chi_M lives from r = 1/4 on, where the heat factor decays like
        # e^(-t/16): that weighting stays bounded (monotone decreasing here)
        times = R.geometric_times(10.0, 200.0, 10)
        for piece in (1, 2):
            sweep = R.sweep(piece, 1, 1, "M", 1, gaussian, gaussian, times, rule)
            weighted = sweep.values * np.exp(times / 16.0)
            assert np.all(np.isfinite(weighted))
            assert float(weighted[-1]) <= float(np.max(weighted[:3]))

    @pytest.mark.xfail(
        reason="a middle cutoff supported from r = 1/4 only decays like "
        "e^(-t/16); the e^(t/9) weighting grows",
        strict=True,
    )
    def test_middle_band_with_ninth_weighting(self, gaussian, rule):
        times = R.geometric_times(10.0, 200.0, 10)
        sweep = R.sweep(1, 1, 1, "M", 1, gaussian, gaussian, times, rule)
        weighted = sweep.values * np.exp(times / 9.0)
        assert float(weighted[-1]) <= 1.5 * float(np.max(weighted[:3]))


class TestDecomposition:
    def test_n1_report(self, gaussian, rule):
        report = R.check_decomposition(1, gaussian, gaussian, rule=rule)
        assert report.passed
        by_name = {c.name: c for c in report.checks}
        assert by_name["remainder-slope"].observed <= -1.1
        assert abs(by_name["heat-slope"].observed + 0.25) <= 0.05

    def test_n3_report(self, gaussian, rule):
        report = R.check_decomposition(3, gaussian, gaussian, rule=rule)
        assert report.passed
        by_name = {c.name: c for c in report.checks}
        assert by_name["wtilde-steepening"].observed <= -0.4

    def test_n3_variants_coincide_late(self, gaussian, rule):
        t = 100.0
        a = R.decomposition_remainder_norm(3, t, gaussian, gaussian, True, rule)
        b = R.decomposition_remainder_norm(3, t, gaussian, gaussian, False, rule)
        assert abs(a - b) <= 1e-9 * a

    def test_invalid_dimension(self, gaussian):
        with pytest.raises(ValueError):
            R.check_decomposition(2, gaussian, gaussian)
