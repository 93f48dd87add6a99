# -*- coding: utf-8 -*-
"""Tests for channel sampling, path loss and the repeating-window geometry."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

import settings
from utils.util_channel import (Cir, ChannelSet, apply_channel, derive_geometry, discrete_delay,
                                pathloss_gain, power_delay_profile, sample_channels, sample_rayleigh_cir)
from utils.util_gen import ComplexSignal, ConfigurationError, DimensionError, DomainError, GeometryError, cscg
from utils.util_ofdm import OfdmConfig


class TestGeometry:
    def test_default_deployment(self, geometry):
        assert (geometry.Lf, geometry.Lb) == (20, 22)
        assert (geometry.D, geometry.L, geometry.J) == (16, 22, 59)
        assert geometry.window == (21, 80)

    def test_zero_delay_single_tap_repeats_whole_cp(self, ofdm):
        geo = derive_geometry(ofdm, Df=0, Dh=0, Dg=0, tau_f=1, tau_h=1, tau_g=1)
        assert geo.J == ofdm.Nc
        assert geo.window == (0, ofdm.Nc)

    def test_short_cp_is_rejected(self):
        cfg = OfdmConfig(N=56, Nc=8)
        with pytest.raises(GeometryError):
            derive_geometry(cfg, Df=0, Dh=16, Dg=0, tau_f=4, tau_h=6, tau_g=1)

    def test_invalid_tap_counts(self, ofdm):
        with pytest.raises(ConfigurationError):
            derive_geometry(ofdm, Df=0, Dh=0, Dg=0, tau_f=0, tau_h=1, tau_g=1)


class TestCir:
    def test_spread_and_energy(self):
        cir = Cir([1.0, 1j, 0.5], delay=4)
        assert cir.spread == 7
        assert cir.energy == pytest.approx(2.25)

    def test_rejects_empty_and_negative_delay(self):
        with pytest.raises(ConfigurationError):
            Cir([], 0)
        with pytest.raises(ConfigurationError):
            Cir([1.0], -1)

    def test_apply_channel_to_impulse(self):
        taps = np.array([0.5, -0.25j, 0.1])
        out = apply_channel(ComplexSignal([1.0], start_index=10), Cir(taps, delay=3))
        assert out.start_index == 13
        assert_allclose(out.samples, taps)

    def test_apply_channel_matches_direct_sum(self, rng):
        x = ComplexSignal(rng.standard_normal(50) + 1j * rng.standard_normal(50), 0)
        cir = Cir([1.0, 0.3 - 0.2j], delay=2)
        out = apply_channel(x, cir)
        n = 20
        expected = cir.taps[0] * x.samples[n - 2] + cir.taps[1] * x.samples[n - 3]
        assert out.window(n, n + 1)[0] == pytest.approx(expected)

    def test_apply_channel_is_linear(self, rng):
        a = ComplexSignal(cscg(rng, 80), 5)
        b = ComplexSignal(cscg(rng, 80), 5)
        cir = Cir(cscg(rng, 4), delay=7)
        combined = apply_channel(ComplexSignal(2.0 * a.samples - 0.5j * b.samples, 5), cir)
        assert_allclose(combined.samples,
                        2.0 * apply_channel(a, cir).samples - 0.5j * apply_channel(b, cir).samples, atol=1e-12)

    def test_apply_channel_commutes_with_shift(self, rng):
        x = cscg(rng, 80)
        cir = Cir(cscg(rng, 4), delay=7)
        early = apply_channel(ComplexSignal(x, 0), cir)
        late = apply_channel(ComplexSignal(x, 33), cir)
        assert late.start_index == early.start_index + 33
        assert_array_equal(late.samples, early.samples)


class TestSampling:
    def test_profile_sums_to_mean_gain(self):
        profile = power_delay_profile(6, 2.0, mean_gain=3.0)
        assert profile.sum() == pytest.approx(3.0)
        assert np.all(np.diff(profile) < 0)

    def test_profile_decays_by_e_per_tap(self):
        profile = power_delay_profile(4, 1.0)
        assert_allclose(profile / profile[0], np.exp(-np.arange(4)), rtol=1e-12)

    def test_rayleigh_mean_energy(self, rng):
        energies = [sample_rayleigh_cir(6, 2.0, 0.7, 0, rng).energy for _ in range(20000)]
        assert_allclose(np.mean(energies), 0.7, rtol=0.03)

    def test_sample_channels_shapes(self, geometry, rng):
        channels = sample_channels(geometry, 3, 4, 6, 2.0, 1.0, 1.0, 0.1, rng)
        assert channels.M == 3
        assert len(channels.f) == 3
        assert channels.h.delay == geometry.Dh and channels.h.taps.size == 6
        assert all(f.delay == geometry.Df and f.taps.size == 4 for f in channels.f)
        assert channels.g_cir(1).delay == geometry.Dg

    def test_channel_set_antenna_mismatch(self, geometry):
        with pytest.raises(DimensionError):
            ChannelSet(h=Cir([1.0]), f=(Cir([1.0]),), g=[1.0, 1.0], geometry=geometry)


class TestPropagation:
    def test_pathloss_formula(self):
        expected = settings.SPEED_OF_LIGHT ** 2 / (4 * np.pi * 0.5 ** 2 * 900e6 ** 2)
        assert pathloss_gain(0.5, 900e6) == pytest.approx(expected)

    def test_pathloss_inverse_square(self):
        assert pathloss_gain(1.0, 900e6) / pathloss_gain(2.0, 900e6) == pytest.approx(4.0)

    def test_pathloss_domain(self):
        with pytest.raises(DomainError):
            pathloss_gain(0.0, 900e6)

    def test_discrete_delay(self):
        assert discrete_delay(0.5, 10e6) == 0
        assert discrete_delay(30.0, 10e6) == 1
        assert_array_equal([discrete_delay(d, 10e6) for d in (0.0, 29.0, 61.0)], [0, 0, 2])
