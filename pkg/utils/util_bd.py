# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

from dataclasses import dataclass

import numpy as np

import settings
from utils.util_gen import AlignmentError, ComplexSignal, ConfigurationError, RangeError
from utils.util_log import logger

log = logger()

SYNC_METRICS = ("coherent", "ratio")


@dataclass(frozen=True)
class BdConfig:
    """
    Backscatter device parameters.

    Attributes:
        alpha (complex): Reflection coefficient.
        K (int): BD symbol length in OFDM symbols.
    """
    alpha: complex = 0.3 + 0.4j
    K: int = 1

    def __post_init__(self):
        if abs(self.alpha) > 1.0:
            raise ConfigurationError(f"|alpha| must be <= 1 for a passive device, got {abs(self.alpha):.4f}")
        if self.K < 1:
            raise ConfigurationError(f"K must be >= 1, got {self.K}")


@dataclass(frozen=True)
class ProtocolSchedule:
    """
    Durations in samples of the phases of one BD frame.

    WUPT (wake-up), BTS (BD timing sync, K1 symbols), TPT (training, K2 all-ones symbols),
    the power pilot (one bit-1 symbol) and DDT (data, K symbols per bit).
    """
    Tw: int
    Tb: int
    Tt: int
    Tp: int
    Td: int

    def __post_init__(self):
        if min(self.Tw, self.Tb, self.Tt, self.Tp, self.Td) < 0:
            raise ConfigurationError(f"phase durations must be >= 0, got {self}")

    @property
    def Tf(self):
        return self.Tw + self.Tb + self.Tt + self.Tp + self.Td

    @property
    def bts_start(self):
        return self.Tw

    @property
    def tpt_start(self):
        return self.Tw + self.Tb

    @property
    def pilot_start(self):
        return self.Tw + self.Tb + self.Tt

    @property
    def ddt_start(self):
        return self.Tw + self.Tb + self.Tt + self.Tp


def frame_schedule(cfg, bd, K1, K2, num_bits=1, wake_symbols=1):
    """
    Build the frame schedule for one BD frame.

    Args:
        cfg (OfdmConfig): Source parameters.
        bd (BdConfig): Device parameters (K sets the DDT symbol length).
        K1 (int): BTS length in OFDM symbols.
        K2 (int): TPT length in OFDM symbols.
        num_bits (int): Data bits carried in the DDT phase.
        wake_symbols (int): OFDM symbols of the wake-up phase, one preamble bit each.

    Returns:
        ProtocolSchedule: Phase durations in samples.
    """
    if K1 < 1 or K2 < 1 or num_bits < 1:
        raise ConfigurationError(f"K1, K2 and num_bits must be >= 1, got {K1}, {K2}, {num_bits}")
    period = cfg.period
    return ProtocolSchedule(Tw=wake_symbols * period, Tb=K1 * period, Tt=K2 * period, Tp=period,
                            Td=num_bits * bd.K * period)


def bd_waveform(bits, bd, cfg, start_index=0):
    """
    Binary BD waveform over {-1, +1}.

    Each bit lasts K OFDM symbol periods. Bit 0 is constant +1; bit 1 is +1 on the first half
    and -1 on the second half of every OFDM symbol period.

    Args:
        bits (sequence): BD bits.
        bd (BdConfig): Device parameters.
        cfg (OfdmConfig): Source parameters.
        start_index (int): Global index where the device starts switching.

    Returns:
        ComplexSignal: Real-valued waveform of len(bits) * K * (N + Nc) samples.
    """
    bits = np.asarray(bits, dtype=int).reshape(-1)
    if bits.size == 0:
        raise ConfigurationError("bd_waveform needs at least one bit")
    if cfg.period % 2:
        raise ConfigurationError(f"N + Nc must be even for a mid-symbol transition, got {cfg.period}")
    half = cfg.period // 2
    flip = np.concatenate([np.ones(half), -np.ones(half)])
    per_symbol = np.where(bits[:, None] == 1, flip[None, :], 1.0)
    return ComplexSignal(np.repeat(per_symbol, bd.K, axis=0).reshape(-1), start_index)


def backscatter(incident, waveform, alpha):
    """
    Reflect the incident signal: alpha * c[n] * x[n] over the waveform's extent.

    Raises:
        AlignmentError: when the incident signal does not cover the whole waveform.
    """
    if waveform.start_index < incident.start_index or waveform.stop_index > incident.stop_index:
        raise AlignmentError(f"waveform [{waveform.start_index}, {waveform.stop_index}) not covered by "
                             f"incident signal [{incident.start_index}, {incident.stop_index})")
    product = incident.window(waveform.start_index, waveform.stop_index) * waveform.samples
    return ComplexSignal(alpha * product, waveform.start_index)


def cp_autocorrelation(sig, cfg, num_symbols, origin=None, metric="coherent"):
    """
    Per-offset CP autocorrelation metric used for blind timing estimation.

    For each offset d in [0, Nc) and each OFDM symbol k the Nc-sample windows starting at
    origin + d + k(N + Nc) and N samples later are compared; the metric is averaged over k.

    metric="coherent": |sum a b*| / sqrt(sum |a|^2 sum |b|^2), equal to 1 on an exact repetition.
    metric="ratio": mean over the window of |a b*| / |b|^2.

    Returns:
        np.ndarray: Nc metric values.
    """
    if metric not in SYNC_METRICS:
        raise ConfigurationError(f"unknown sync metric {metric!r}, expected one of {SYNC_METRICS}")
    if num_symbols < 1:
        raise ConfigurationError(f"the autocorrelation needs at least one symbol, got {num_symbols}")
    origin = sig.start_index if origin is None else origin
    stop = origin + (num_symbols - 1) * cfg.period + cfg.N + 2 * cfg.Nc - 1
    if origin < sig.start_index or stop > sig.stop_index:
        raise RangeError(f"autocorrelation over {num_symbols} symbols needs [{origin}, {stop}), "
                         f"signal spans [{sig.start_index}, {sig.stop_index})")

    base = origin - sig.start_index
    offsets = (np.arange(num_symbols)[:, None, None] * cfg.period
               + np.arange(cfg.Nc)[None, :, None] + np.arange(cfg.Nc)[None, None, :])
    a = sig.samples[base + offsets]
    b = sig.samples[base + offsets + cfg.N]
    if metric == "coherent":
        num = np.abs(np.sum(a * np.conj(b), axis=2))
        den = np.sqrt(np.sum(np.abs(a) ** 2, axis=2) * np.sum(np.abs(b) ** 2, axis=2))
        values = num / np.maximum(den, settings.DENOM_FLOOR)
    else:
        values = np.mean(np.abs(a * np.conj(b)) / np.maximum(np.abs(b) ** 2, settings.DENOM_FLOOR), axis=2)
    return values.mean(axis=0)


def estimate_dh_blind(c, cfg, K1, origin=None, metric="coherent"):
    """
    Blind estimate of the source-to-BD delay from the CP repetition of the incident signal.

    Args:
        c (ComplexSignal): Signal received at the BD, covering the BTS phase.
        cfg (OfdmConfig): Source parameters.
        K1 (int): BTS length in OFDM symbols.
        origin (int): Global index of the first BTS symbol as sent by the source.
        metric (str): "coherent" or "ratio".

    Returns:
        int: Delay estimate in [0, Nc); ties go to the smallest delay.
    """
    values = cp_autocorrelation(c, cfg, K1, origin, metric)
    estimate = int(np.argmax(values))
    log.debug(f"BD timing estimate {estimate} (metric {metric}, peak {values[estimate]:.4f})")
    return estimate


def wake_up_preamble(length_bits):
    """Alternating 1, 0, 1, ... wake-up sequence."""
    if length_bits < 1:
        raise ConfigurationError(f"preamble length must be >= 1, got {length_bits}")
    return tuple(int(i % 2 == 0) for i in range(length_bits))
