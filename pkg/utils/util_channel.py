# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

import math
from dataclasses import dataclass

import numpy as np

import settings
from utils.util_gen import (ComplexSignal, ConfigurationError, DimensionError, DomainError, GeometryError,
                            cscg)
from utils.util_log import logger

log = logger()


@dataclass(frozen=True, eq=False)
class Cir:
    """
    Discrete channel impulse response: taps[l] arrives delay + l samples after transmission.
    """
    taps: np.ndarray
    delay: int = 0

    def __post_init__(self):
        taps = np.atleast_1d(np.asarray(self.taps, dtype=np.complex128))
        if taps.size == 0:
            raise ConfigurationError("a channel needs at least one tap")
        if self.delay < 0:
            raise ConfigurationError(f"propagation delay must be >= 0, got {self.delay}")
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "delay", int(self.delay))

    @property
    def spread(self):
        """Total spread: propagation delay plus tap count."""
        return self.delay + self.taps.size

    @property
    def energy(self):
        return float(np.sum(np.abs(self.taps) ** 2))


@dataclass(frozen=True)
class ChannelGeometry:
    """Delays, total spreads and the repeating length J of one deployment."""
    Df: int
    Dh: int
    Dg: int
    Db: int
    Lf: int
    Lh: int
    Lg: int
    Lb: int
    D: int
    L: int
    J: int

    @property
    def window(self):
        """Repeating window [L-1, Nc+D-1] as a half-open offset range within an OFDM symbol."""
        return self.L - 1, self.L - 1 + self.J


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """
    One channel realization: h (source->BD), f[m] (source->antenna m), g[m] (BD->antenna m, single path).
    """
    h: Cir
    f: tuple
    g: np.ndarray
    geometry: ChannelGeometry

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.g, dtype=np.complex128))
        if len(self.f) != g.size:
            raise DimensionError(f"antenna counts differ: {len(self.f)} direct channels, {g.size} BD channels")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "f", tuple(self.f))

    @property
    def M(self):
        return self.g.size

    def g_cir(self, m):
        return Cir([self.g[m]], self.geometry.Dg)


def sample_rayleigh_cir(num_taps, decay, mean_gain, delay, rng):
    """
    Draw a Rayleigh-fading CIR with an exponential power delay profile.

    Tap l is CN(0, v_l) with v_l proportional to exp(-l / decay) and sum(v_l) = mean_gain.

    Args:
        num_taps (int): Number of taps.
        decay (float): Profile constant in taps.
        mean_gain (float): Expected total tap energy E[sum |taps|^2].
        delay (int): Propagation delay in samples.
        rng (np.random.Generator): Random stream.

    Returns:
        Cir: The sampled channel.
    """
    if num_taps < 1:
        raise ConfigurationError(f"num_taps must be >= 1, got {num_taps}")
    if decay <= 0 or mean_gain <= 0:
        raise ConfigurationError(f"decay and mean_gain must be positive, got {decay}, {mean_gain}")
    return Cir(cscg(rng, num_taps, power_delay_profile(num_taps, decay, mean_gain)), delay)


def power_delay_profile(num_taps, decay, mean_gain=1.0):
    """Per-tap variances exp(-l / decay), normalized to sum to mean_gain."""
    profile = np.exp(-np.arange(num_taps) / decay)
    return mean_gain * profile / profile.sum()


def pathloss_gain(distance_m, fc_hz):
    """
    Mean power gain c^2 / (4 pi d^2 fc^2) of the BD-to-receiver link.
    """
    if distance_m <= 0 or fc_hz <= 0:
        raise DomainError(f"distance and carrier frequency must be positive, got {distance_m}, {fc_hz}")
    return settings.SPEED_OF_LIGHT ** 2 / (4.0 * math.pi * distance_m ** 2 * fc_hz ** 2)


def discrete_delay(distance_m, fs_hz):
    """Propagation delay floor(d * fs / c) in samples."""
    return int(math.floor(distance_m * fs_hz / settings.SPEED_OF_LIGHT))


def apply_channel(sig, cir):
    """
    Pass a signal through a channel: out[n] = sum_l taps[l] * sig[n - delay - l].

    The output keeps the full convolution tail and starts cir.delay samples later.
    """
    if len(sig) == 0:
        raise DimensionError("cannot filter an empty signal")
    return ComplexSignal(np.convolve(sig.samples, cir.taps), sig.start_index + cir.delay)


def derive_geometry(cfg, Df, Dh, Dg, tau_f, tau_h, tau_g):
    """
    Compute delays, spreads and the repeating length J = Nc + D - L + 1.

    tau_* count taps; the backscatter cascade h * g has tau_h + tau_g - 1 taps.

    Args:
        cfg (OfdmConfig): Source parameters (Nc is used).
        Df, Dh, Dg (int): Propagation delays in samples.
        tau_f, tau_h, tau_g (int): Tap counts.

    Returns:
        ChannelGeometry: All derived quantities.

    Raises:
        GeometryError: when the CP is too short for the deployment (J < 1).
    """
    if min(Df, Dh, Dg) < 0 or min(tau_f, tau_h, tau_g) < 1:
        raise ConfigurationError(f"invalid delays/tap counts {Df, Dh, Dg, tau_f, tau_h, tau_g}")
    Db = Dh + Dg
    Lf = Df + tau_f
    Lh = Dh + tau_h
    Lg = Dg + tau_g
    Lb = Db + tau_h + tau_g - 1
    D = min(Df, Db)
    L = max(Lf, Lb)
    J = cfg.Nc + D - L + 1
    if J < 1:
        raise GeometryError(f"CP of {cfg.Nc} samples is too short: L - D = {L - D} leaves no repeating window")
    return ChannelGeometry(Df=Df, Dh=Dh, Dg=Dg, Db=Db, Lf=Lf, Lh=Lh, Lg=Lg, Lb=Lb, D=D, L=L, J=J)


def sample_channels(geometry, M, tau_f, tau_h, decay, gain_f, gain_h, gain_g, rng):
    """
    Draw an independent channel realization for every link of the deployment.

    Args:
        geometry (ChannelGeometry): Delays used for the drawn CIRs.
        M (int): Receive antennas.
        tau_f, tau_h (int): Tap counts of f and h.
        decay (float): Power delay profile constant.
        gain_f, gain_h, gain_g (float): Mean total gains E[sum|f|^2], E[sum|h|^2], E[|g|^2].
        rng (np.random.Generator): Random stream.

    Returns:
        ChannelSet: h, f[0..M-1], g[0..M-1].
    """
    h = sample_rayleigh_cir(tau_h, decay, gain_h, geometry.Dh, rng)
    f = tuple(sample_rayleigh_cir(tau_f, decay, gain_f, geometry.Df, rng) for _ in range(M))
    g = cscg(rng, M, gain_g)
    return ChannelSet(h=h, f=f, g=g, geometry=geometry)
