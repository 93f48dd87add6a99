# -*- coding: utf-8 -*-
"""Tests for OFDM source generation and the CP repetition."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from utils.util_gen import ComplexSignal, ConfigurationError, RangeError, cscg
from utils.util_ofdm import (OfdmConfig, cp_window_equal, demodulate_symbols, generate_ofdm_frame,
                             spectral_flatness_pvalue)


class TestOfdmConfig:
    def test_defaults(self, ofdm):
        assert (ofdm.N, ofdm.Nc, ofdm.period) == (512, 64, 576)

    @pytest.mark.parametrize("kwargs", [
        dict(N=512, Nc=63),
        dict(N=64, Nc=64),
        dict(N=0, Nc=64),
        dict(p=0.0),
        dict(fs=-1.0),
    ])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(ConfigurationError):
            OfdmConfig(**kwargs)


class TestGenerateFrame:
    def test_length_and_start(self, ofdm, rng):
        frame = generate_ofdm_frame(ofdm, 3, rng, start_index=40)
        assert len(frame) == 3 * 576
        assert frame.start_index == 40

    def test_average_power_scales_with_p(self, rng):
        cfg = OfdmConfig(p=4.0)
        frame = generate_ofdm_frame(cfg, 200, rng)
        assert_allclose(np.mean(np.abs(frame.samples) ** 2), 4.0, rtol=0.02)

    def test_cp_repeats_body_tail(self, ofdm, rng):
        frame = generate_ofdm_frame(ofdm, 5, rng)
        for k in range(5):
            assert cp_window_equal(frame, ofdm, k, (0, ofdm.Nc))

    def test_body_does_not_repeat(self, ofdm, rng):
        frame = generate_ofdm_frame(ofdm, 2, rng)
        assert not cp_window_equal(frame, ofdm, 0, (ofdm.Nc, 2 * ofdm.Nc))

    def test_rejects_empty_frame(self, ofdm, rng):
        with pytest.raises(ConfigurationError):
            generate_ofdm_frame(ofdm, 0, rng)

    def test_demodulated_symbols_are_unit_power(self, ofdm, rng):
        frame = generate_ofdm_frame(OfdmConfig(p=2.0), 50, rng)
        symbols = demodulate_symbols(frame, OfdmConfig(p=2.0), 50)
        assert symbols.shape == (50, ofdm.N)
        assert_allclose(np.mean(np.abs(symbols) ** 2), 1.0, rtol=0.02)


class TestSpectralFlatness:
    def test_generated_frames_are_flat(self, ofdm):
        frames = [generate_ofdm_frame(ofdm, 1000, np.random.default_rng(seed)) for seed in range(5)]
        pvalues = [spectral_flatness_pvalue(frame, ofdm, 1000) for frame in frames]
        assert sum(p >= 0.01 for p in pvalues) >= 4

    def test_boosted_subcarriers_are_rejected(self, ofdm, rng):
        freq = cscg(rng, (1000, ofdm.N))
        freq[:, :8] *= 1.2
        body = np.fft.ifft(freq, axis=1, norm="ortho")
        framed = np.concatenate([body[:, ofdm.N - ofdm.Nc:], body], axis=1)
        assert spectral_flatness_pvalue(ComplexSignal(framed.reshape(-1), 0), ofdm, 1000) < 1e-6

    def test_rejects_empty_block(self, ofdm, rng):
        with pytest.raises(ConfigurationError):
            spectral_flatness_pvalue(generate_ofdm_frame(ofdm, 2, rng), ofdm, 0)


class TestCpWindow:
    def test_window_outside_period(self, ofdm, rng):
        frame = generate_ofdm_frame(ofdm, 2, rng)
        with pytest.raises(RangeError):
            cp_window_equal(frame, ofdm, 0, (-1, 10))
        with pytest.raises(RangeError):
            cp_window_equal(frame, ofdm, 0, (10, 577))
