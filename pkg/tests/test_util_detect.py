# -*- coding: utf-8 -*-
"""Tests for interference cancellation, the energy statistic, thresholds and combining."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import optimize, stats

from utils.util_analysis import ber_closed_form
from utils.util_bd import BdConfig, backscatter, bd_waveform
from utils.util_channel import Cir, apply_channel
from utils.util_detect import (CombinerWeights, DetectorConfig, LinkStats, benchmark_energy_detect,
                               benchmark_energy_level, combine_statistics, combined_ber, combiner_weights,
                               conventional_weights, detect_combined, detector_config, differential_encode,
                               difference_signal, gaussian_intersection, ml_detect, multiantenna_threshold,
                               optimal_threshold, optimal_weights, train_energy_threshold)
from utils.util_detect import test_statistic as energy_statistic
from utils.util_gen import (ComplexSignal, ConfigurationError, DimensionError, DomainError, GeometryError,
                            InvariantError, cscg, superpose)
from utils.util_ofdm import generate_ofdm_frame

F_TAPS = [0.9, 0.4 - 0.2j, 0.2j, 0.1]
H_TAPS = [1.0, 0.5j, 0.3, -0.2, 0.1j, 0.05]


def intersection_oracle(mu0, var0, mu1, var1):
    """Root of the log-density difference between the two means."""
    diff = lambda x: stats.norm.logpdf(x, mu0, np.sqrt(var0)) - stats.norm.logpdf(x, mu1, np.sqrt(var1))
    return optimize.brentq(diff, mu0, mu1, xtol=1e-14, rtol=1e-15)


def received(ofdm, geometry, bit, rng, alpha=0.3 + 0.4j, g=0.7 - 0.2j):
    """Noiseless direct plus backscatter signal for one BD symbol sent at origin 0."""
    s = generate_ofdm_frame(ofdm, 2, rng)
    y_d = apply_channel(s, Cir(F_TAPS, geometry.Df))
    c = apply_channel(s, Cir(H_TAPS, geometry.Dh))
    y_b = backscatter(c, bd_waveform([bit], BdConfig(alpha=alpha), ofdm, start_index=geometry.Dh), alpha)
    return superpose(y_d, apply_channel(y_b, Cir([g], geometry.Dg))), c


class TestTypes:
    def test_link_stats(self):
        stats_ = LinkStats(sigma2=0.5, sigma_u2=[3.0, 1.0])
        assert stats_.sigma_v2 == 1.0
        assert_allclose(stats_.gamma, [3.0, 1.0])
        with pytest.raises(DomainError):
            LinkStats(sigma2=0.0, sigma_u2=1.0)

    def test_detector_config(self, geometry):
        det = detector_config(geometry, K=3, period=576)
        assert det.J_total == 177
        with pytest.raises(ConfigurationError):
            DetectorConfig(J=10, window=(0, 5), K=1, period=576)
        with pytest.raises(GeometryError):
            DetectorConfig(J=0, window=(0, 0), K=1, period=576)

    def test_weights_on_unit_sphere(self):
        assert CombinerWeights([0.6, 0.8]).M == 2
        with pytest.raises(InvariantError):
            CombinerWeights([1.0, 1.0])
        with pytest.raises(InvariantError):
            CombinerWeights([-0.6, 0.8])


class TestDifferenceSignal:
    def test_bit_zero_cancels_everything(self, ofdm, geometry, rng):
        y, _ = received(ofdm, geometry, 0, rng)
        det = detector_config(geometry, 1, ofdm.period)
        z = difference_signal(y, ofdm.N, det, 0, origin=0)
        assert len(z) == 59
        assert z.start_index == 21
        assert np.max(np.abs(z.samples)) < 1e-12

    def test_bit_one_keeps_twice_the_backscatter(self, ofdm, geometry, rng):
        alpha, g = 0.3 + 0.4j, 0.7 - 0.2j
        y, c = received(ofdm, geometry, 1, rng, alpha, g)
        det = detector_config(geometry, 1, ofdm.period)
        z = difference_signal(y, ofdm.N, det, 0, origin=0)
        assert_allclose(z.samples, 2 * alpha * g * c.window(21, 80), atol=1e-12)


class TestStatistic:
    def test_zero_windows(self):
        assert energy_statistic([np.zeros(59)], 59, 1.0) == 0.0

    def test_pools_several_windows(self):
        assert energy_statistic([np.ones(2), 1j * np.ones(3)], 5, 0.5) == pytest.approx(2.0)

    def test_sample_count_must_match(self):
        with pytest.raises(DimensionError):
            energy_statistic([np.ones(58)], 59, 1.0)
        with pytest.raises(GeometryError):
            energy_statistic([], 0, 1.0)

    @pytest.mark.slow
    def test_moments_under_both_hypotheses(self, rng):
        J, sigma_v2, gamma, trials = 59, 2.0, 3.0, 100000
        noise = cscg(rng, (trials, J), sigma_v2)
        signal = cscg(rng, (trials, J), gamma * sigma_v2)
        r0 = np.array([energy_statistic([row], J, sigma_v2) for row in noise])
        r1 = np.array([energy_statistic([row], J, sigma_v2) for row in noise + signal])
        assert_allclose([r0.mean(), r0.var()], [1.0, 1.0 / J], rtol=0.03)
        assert_allclose([r1.mean(), r1.var()], [gamma + 1, (gamma + 1) ** 2 / J], rtol=0.03)


class TestThreshold:
    def test_large_J_limit(self):
        assert optimal_threshold(2.0, 1e12) == pytest.approx(1.5, abs=1e-5)

    def test_small_gamma_limit(self):
        limit = 0.5 * (1 + np.sqrt(1 + 4 / 59))
        assert optimal_threshold(1e-6, 59) == pytest.approx(limit, abs=1e-5)
        assert optimal_threshold(0.0, 59) == pytest.approx(limit, abs=1e-15)

    @pytest.mark.parametrize("gamma", [0.1, 3.0, 30.0, 1000.0])
    def test_matches_density_crossing(self, gamma):
        J = 59
        oracle = intersection_oracle(1.0, 1.0 / J, gamma + 1, (gamma + 1) ** 2 / J)
        assert optimal_threshold(gamma, J) == pytest.approx(oracle, rel=1e-9)

    def test_minimizes_ber(self):
        gamma, J = 3.0, 59
        eps = optimal_threshold(gamma, J)
        best = ber_closed_form(gamma, J, eps).p_e
        for delta in (-1e-2, -1e-3, 1e-3, 1e-2):
            assert best <= ber_closed_form(gamma, J, eps + delta).p_e

    def test_domain(self):
        with pytest.raises(DomainError):
            optimal_threshold(-1.0, 59)

    def test_intersection_broadcasts(self):
        out = gaussian_intersection([1.0, 1.0], [0.1, 0.1], [2.0, 3.0], [0.1, 0.4])
        assert out.shape == (2,)
        assert out[0] == pytest.approx(1.5)
        assert out[1] == pytest.approx(intersection_oracle(1.0, 0.1, 3.0, 0.4), rel=1e-9)

    def test_ml_detect(self):
        assert ml_detect(1.0, 1.5) == 0
        assert ml_detect(1.5, 1.5) == 1
        assert ml_detect(3.2, 1.5) == 1


class TestCombining:
    def test_combine_statistics(self):
        assert combine_statistics([2.0], [1.0]) == 2.0
        s = 1 / np.sqrt(2)
        assert combine_statistics([1.0, 3.0], [s, s]) == pytest.approx(2 * np.sqrt(2))
        with pytest.raises(InvariantError):
            combine_statistics([1.0, 3.0], [1.0, 1.0])
        with pytest.raises(DimensionError):
            combine_statistics([1.0, 3.0, 2.0], [s, s])

    def test_conventional_weights(self):
        assert_allclose(conventional_weights("egc", [1, 2]).theta, [1 / np.sqrt(2)] * 2)
        assert_allclose(conventional_weights("sc", [1, 5, 5]).theta, [0, 1, 0])
        assert_allclose(conventional_weights("mrc", [3, 4]).theta, [0.6, 0.8])
        assert_allclose(conventional_weights("mrc", [0, 0]).theta, [1 / np.sqrt(2)] * 2)
        with pytest.raises(ConfigurationError):
            conventional_weights("max", [1, 2])

    def test_single_antenna_weight(self):
        assert_allclose(optimal_weights([5.0], 59).theta, [1.0])

    def test_equal_branches_get_equal_weights(self):
        assert_allclose(optimal_weights([3.0, 3.0], 59).theta, [1 / np.sqrt(2)] * 2, atol=1e-3)

    def test_optimal_beats_conventional(self):
        gamma_m, J = np.array([10.0, 0.1]), 59
        ber = lambda w: float(np.sum(combined_ber(w.theta, gamma_m, J)[:2]) / 2)
        best = ber(optimal_weights(gamma_m, J))
        for scheme in ("mrc", "egc", "sc"):
            assert best <= ber(conventional_weights(scheme, gamma_m)) * (1 + 1e-4)

    def test_grid_optimum_matches_finer_scan(self):
        gamma_m, J = np.array([10.0, 0.1]), 59
        angles = np.linspace(0.0, 0.5 * np.pi, 20001)
        theta = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        p_fa, p_md, _ = combined_ber(theta, gamma_m, J)
        oracle = float(np.min(0.5 * (p_fa + p_md)))
        w = optimal_weights(gamma_m, J)
        p_fa, p_md, _ = combined_ber(w.theta, gamma_m, J)
        assert 0.5 * (p_fa + p_md) <= oracle * (1 + 1e-3)

    @pytest.mark.slow
    def test_coarse_to_fine_search(self):
        w = optimal_weights([2.0, 2.0, 2.0, 2.0], 59)
        assert_allclose(w.theta, [0.5] * 4, atol=5e-3)

    def test_grid_step_range(self):
        with pytest.raises(ConfigurationError):
            optimal_weights([1.0, 1.0], 59, grid_step=0.0)


class TestMultiantennaThreshold:
    @pytest.mark.parametrize("gamma", [0.5, 3.0, 40.0])
    def test_single_antenna_reduces(self, gamma):
        assert multiantenna_threshold([1.0], [gamma], 59) == pytest.approx(optimal_threshold(gamma, 59), rel=1e-9)

    def test_zero_snr_midpoint(self):
        s = 1 / np.sqrt(2)
        assert multiantenna_threshold([s, s], [0.0, 0.0], 59) == pytest.approx(2 * s)

    def test_matches_density_crossing(self):
        s, J = 1 / np.sqrt(2), 59
        oracle = intersection_oracle(np.sqrt(2), 1.0 / J, 4 * np.sqrt(2), 16.0 / J)
        assert multiantenna_threshold([s, s], [3.0, 3.0], J) == pytest.approx(oracle, rel=1e-9)

    def test_detect_combined(self):
        bit, weights, eps = detect_combined([4.0, 4.2], [3.0, 3.0], 59, combiner="egc")
        assert bit == 1
        assert weights.M == 2
        bit, _, _ = detect_combined([1.0, 0.95], [3.0, 3.0], 59, combiner="egc")
        assert bit == 0

    def test_named_combiners(self):
        assert_allclose(combiner_weights("sc", [1.0, 2.0], 59).theta, [0, 1])


class TestBenchmark:
    def test_noise_stays_below_trained_threshold(self, ofdm, rng):
        sigma2 = 1.0
        for _ in range(20):
            y = ComplexSignal(cscg(rng, ofdm.period, sigma2), 0)
            assert benchmark_energy_detect(y, ofdm, 1, 2 * sigma2) == 0

    def test_reflect_versus_absorb(self, ofdm, rng):
        incident = generate_ofdm_frame(ofdm, 4, rng)
        on = ComplexSignal(0.5 * incident.samples, incident.start_index)
        levels_on = [benchmark_energy_level(on, ofdm, 1, origin=k * ofdm.period) for k in range(2)]
        levels_off = [0.0, 0.0]
        threshold = train_energy_threshold(levels_off, levels_on)
        assert benchmark_energy_detect(on, ofdm, 1, threshold, origin=2 * ofdm.period) == 1
        assert benchmark_energy_detect(on, ofdm, 1, threshold, origin=2 * ofdm.period, previous_level=1) == 0
        assert benchmark_energy_detect([on, on], ofdm, 1, threshold, origin=3 * ofdm.period) == 1

    def test_training_needs_both_levels(self):
        with pytest.raises(DimensionError):
            train_energy_threshold([], [1.0])

    def test_differential_encode(self):
        assert differential_encode([1, 0, 1, 1]) == [0, 1, 1, 0, 1]
        assert differential_encode([0], initial_state=1) == [1, 1]
