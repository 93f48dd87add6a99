# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

from dataclasses import dataclass

import numpy as np
from scipy import stats

from utils.util_gen import ComplexSignal, ConfigurationError, RangeError, cscg
from utils.util_log import logger

log = logger()

CP_RTOL = 1e-12


@dataclass(frozen=True)
class OfdmConfig:
    """
    Ambient OFDM source parameters.

    Attributes:
        N (int): Subcarriers, i.e. samples per useful OFDM body.
        Nc (int): Cyclic prefix length in samples.
        fs (float): Sampling rate in Hz.
        p (float): Average transmit power (linear, reference 1.0).
    """
    N: int = 512
    Nc: int = 64
    fs: float = 10e6
    p: float = 1.0

    def __post_init__(self):
        if self.N <= 0 or self.Nc <= 0:
            raise ConfigurationError(f"N and Nc must be positive, got N={self.N}, Nc={self.Nc}")
        if (self.N + self.Nc) % 2:
            raise ConfigurationError(f"N + Nc must be even, got {self.N} + {self.Nc}")
        if self.Nc >= self.N:
            raise ConfigurationError(f"CP must be shorter than the body, got Nc={self.Nc} >= N={self.N}")
        if self.p <= 0 or self.fs <= 0:
            raise ConfigurationError(f"p and fs must be positive, got p={self.p}, fs={self.fs}")

    @property
    def period(self):
        """OFDM symbol period N + Nc in samples."""
        return self.N + self.Nc


def generate_ofdm_frame(cfg, num_symbols, rng, start_index=0):
    """
    Generate a baseband OFDM frame with cyclic prefix.

    Frequency-domain data are i.i.d. CN(0, 1) on every subcarrier; the orthonormal
    inverse DFT keeps unit power in time, which is then scaled by sqrt(p).

    Args:
        cfg (OfdmConfig): Source parameters.
        num_symbols (int): OFDM symbols in the frame.
        rng (np.random.Generator): Random stream owned by the caller.
        start_index (int): Global index of the first CP sample.

    Returns:
        ComplexSignal: num_symbols * (N + Nc) samples.
    """
    if num_symbols < 1:
        raise ConfigurationError(f"num_symbols must be >= 1, got {num_symbols}")
    freq = cscg(rng, (num_symbols, cfg.N))
    body = np.fft.ifft(freq, axis=1, norm="ortho")
    framed = np.concatenate([body[:, cfg.N - cfg.Nc:], body], axis=1) * np.sqrt(cfg.p)
    return ComplexSignal(framed.reshape(-1), start_index)


def demodulate_symbols(sig, cfg, num_symbols, origin=None):
    """
    Strip the CP and return the per-subcarrier symbols (inverse of generate_ofdm_frame up to sqrt(p)).

    Returns:
        np.ndarray: (num_symbols, N) frequency-domain symbols.
    """
    origin = sig.start_index if origin is None else origin
    block = sig.window(origin, origin + num_symbols * cfg.period).reshape(num_symbols, cfg.period)
    return np.fft.fft(block[:, cfg.Nc:], axis=1, norm="ortho") / np.sqrt(cfg.p)


def spectral_flatness_pvalue(sig, cfg, num_symbols, origin=None):
    """
    Chi-square test that the source energy is spread evenly over the subcarriers.

    Per-subcarrier energy summed over num_symbols symbols has mean and variance num_symbols
    for a flat CN(0, 1) spectrum, so the Pearson statistic against the common mean is
    approximately chi-square with N - 1 degrees of freedom.

    Returns:
        float: p-value; small values reject a flat spectrum.
    """
    if num_symbols < 1:
        raise ConfigurationError(f"num_symbols must be >= 1, got {num_symbols}")
    energy = np.sum(np.abs(demodulate_symbols(sig, cfg, num_symbols, origin)) ** 2, axis=0)
    return float(stats.chisquare(energy).pvalue)


def cp_window_equal(sig, cfg, symbol_index, window, origin=None):
    """
    Check the CP repetition sig[n] == sig[n + N] over a window of one OFDM symbol.

    Args:
        sig (ComplexSignal): Signal to inspect.
        cfg (OfdmConfig): Source parameters.
        symbol_index (int): OFDM symbol counted from origin.
        window (tuple): (first, stop) offsets within the symbol period.
        origin (int): Global index of symbol 0 (defaults to the signal start).

    Returns:
        bool: True when the two windows agree to 1e-12 relative.
    """
    first, stop = window
    if first < 0 or stop > cfg.period or stop <= first:
        raise RangeError(f"window [{first}, {stop}) not inside one symbol period of {cfg.period}")
    origin = sig.start_index if origin is None else origin
    base = origin + symbol_index * cfg.period
    head = sig.window(base + first, base + stop)
    tail = sig.window(base + first + cfg.N, base + stop + cfg.N)
    scale = max(np.max(np.abs(head)), np.max(np.abs(tail)), np.finfo(float).tiny)
    return bool(np.all(np.abs(head - tail) <= CP_RTOL * scale))
