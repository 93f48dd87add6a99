# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

from dataclasses import dataclass

import numpy as np

from utils.util_bd import cp_autocorrelation
from utils.util_gen import ConfigurationError, DomainError, GeometryError, RangeError
from utils.util_log import logger

log = logger()


@dataclass(frozen=True)
class SyncEstimates:
    """Receiver-side estimates of the minimum delay D, the maximum spread L and the backscatter power."""
    D_hat: int
    L_hat: int
    sigma_u2_hat: float
    Nc: int
    sigma_u2_raw: float = float("nan")

    def __post_init__(self):
        if not 0 <= self.D_hat < self.Nc:
            raise ConfigurationError(f"D_hat must lie in [0, {self.Nc}), got {self.D_hat}")
        if not 0 <= self.L_hat <= self.Nc:
            raise ConfigurationError(f"L_hat must lie in [0, {self.Nc}], got {self.L_hat}")
        if self.sigma_u2_hat < 0:
            raise ConfigurationError(f"power estimate must be >= 0, got {self.sigma_u2_hat}")

    def repeating_length(self):
        return self.Nc + self.D_hat - self.L_hat + 1

    def window(self, guard=(0, 0)):
        return estimated_window(self.L_hat, self.D_hat, self.Nc, guard)


def estimated_window(L_hat, D_hat, Nc, guard=(0, 0)):
    """
    Detection window [L_hat - 1, Nc + D_hat) trimmed by (head, tail) guard samples.

    The guards shrink the window against estimation error at both edges: the tail guard covers
    a D_hat past the true minimum delay, where the direct link of the next symbol leaks in, and
    the head guard the weak late taps that the spread estimate lets through. Guards are cut
    back, head first, so that at least one sample remains.

    Returns:
        tuple: (first, stop) half-open offsets from the symbol start.
    """
    first, stop = L_hat - 1, Nc + D_hat
    if L_hat < 1 or stop <= first:
        raise GeometryError(f"estimated window [{first}, {stop}) is empty")
    head, tail = (int(v) for v in guard)
    if head < 0 or tail < 0:
        raise ConfigurationError(f"guards must be >= 0, got {guard}")
    spare = stop - first - 1
    tail = min(tail, spare)
    head = min(head, spare - tail)
    return first + head, stop - tail


def estimate_d_min(y, cfg, K1, origin=None, metric="coherent"):
    """
    Minimum-delay estimate from the CP autocorrelation of the received signal.

    Same contract as the BD-side timing estimate; origin is the first symbol used.
    """
    values = cp_autocorrelation(y, cfg, K1, origin, metric)
    return int(np.argmax(values))


def _difference_energy(y, cfg, K2, origin):
    """|y[n] - y[n+N]|^2 for n in [0, Nc) of each of K2 symbols, shape (K2, Nc)."""
    if K2 < 1:
        raise ConfigurationError(f"K2 must be >= 1, got {K2}")
    origin = y.start_index if origin is None else origin
    stop = origin + (K2 - 1) * cfg.period + cfg.N + cfg.Nc
    if origin < y.start_index or stop > y.stop_index:
        raise RangeError(f"training window [{origin}, {stop}) outside signal span "
                         f"[{y.start_index}, {y.stop_index})")
    base = origin - y.start_index
    idx = base + np.arange(K2)[:, None] * cfg.period + np.arange(cfg.Nc)[None, :]
    return np.abs(y.samples[idx] - y.samples[idx + cfg.N]) ** 2


def q_metric_profile(y, cfg, K2, origin=None):
    """Q[l] for every l in [0, Nc)."""
    energy = _difference_energy(y, cfg, K2, origin).sum(axis=0)
    tail = np.cumsum(energy[::-1])[::-1]
    return tail / (K2 * (cfg.Nc - np.arange(cfg.Nc)))


def q_metric(y, l, cfg, K2, origin=None):
    """
    Q[l] = 1/(K2 (Nc - l)) sum_k sum_{n=0}^{Nc-l-1} |y[n+l+k(N+Nc)] - y[n+l+N+k(N+Nc)]|^2.

    Args:
        y (ComplexSignal): Received training signal.
        l (int): Candidate spread in [0, Nc).
        cfg (OfdmConfig): Source parameters.
        K2 (int): Training symbols.
        origin (int): Global index of the first training symbol as sent.

    Returns:
        float: Metric value.
    """
    if not 0 <= l < cfg.Nc:
        raise RangeError(f"l must lie in [0, {cfg.Nc}), got {l}")
    return float(q_metric_profile(y, cfg, K2, origin)[l])


def q_metric_moments(l, Lf, Lb, Nc, K2, gamma, gamma_d, sigma2):
    """
    Mean and variance of Q[l] under independent CSCG difference samples.

    In [l, Nc) the direct link does not repeat on max(Lf - 1 - l, 0) samples and the backscatter
    link on max(Lb - 1 - l, 0) samples; gamma and gamma_d are the per-sample SNRs of the two
    difference components there. A sample with SNRs a, b, ... has mean 2 sigma2 (1 + a + b + ...).

    Returns:
        tuple: (mean, variance).
    """
    if not 0 <= l < Nc:
        raise RangeError(f"l must lie in [0, {Nc}), got {l}")
    if min(gamma, gamma_d) < 0 or sigma2 < 0:
        raise DomainError(f"SNRs and noise power must be >= 0, got {gamma}, {gamma_d}, {sigma2}")
    count = Nc - l
    n_direct = min(max(Lf - 1 - l, 0), count)
    n_back = min(max(Lb - 1 - l, 0), count)
    both = min(n_direct, n_back)
    levels = np.array([gamma_d + gamma + 1.0, gamma + 1.0, gamma_d + 1.0, 1.0])
    counts = np.array([both, n_back - both, n_direct - both, count - max(n_direct, n_back)])
    mean = 2.0 * sigma2 * float(counts @ levels) / count
    variance = 4.0 * sigma2 ** 2 * float(counts @ levels ** 2) / (K2 * count ** 2)
    return mean, variance


def estimate_L(y, cfg, K2, epsilon, sigma2, origin=None):
    """
    Maximum-spread estimate from the Q[l] profile.

    Q[l] reaches the noise floor at l = L - 1, the first offset whose [l, Nc) window repeats
    exactly, so the estimate is (first l with Q[l] <= 2 epsilon sigma2) + 1, or Nc when no
    l qualifies.

    Args:
        y (ComplexSignal): Received training signal (BD reflecting all-ones).
        cfg (OfdmConfig): Source parameters.
        K2 (int): Training symbols.
        epsilon (float): Threshold factor above the noise floor (> 1).
        sigma2 (float): Noise power.
        origin (int): Global index of the first training symbol as sent.

    Returns:
        int: L_hat in [1, Nc].
    """
    profile = q_metric_profile(y, cfg, K2, origin)
    qualifying = np.flatnonzero(profile <= 2.0 * epsilon * sigma2)
    if qualifying.size == 0:
        log.debug(f"no offset reached the noise floor, L_hat set to Nc={cfg.Nc}")
        return cfg.Nc
    return int(qualifying[0]) + 1


def estimate_sigma_u2(y, L_hat, D_hat, cfg, sigma_v2, origin=None, guard=(0, 0)):
    """
    Backscatter power from the bit-1 power pilot.

    Averages |y[n] - y[n+N]|^2 over the estimated repeating window of the pilot symbol
    (see estimated_window), where the direct link cancels.

    Returns:
        tuple: (raw, signal_only) with signal_only = max(raw - sigma_v2, 0).
    """
    first, stop = estimated_window(L_hat, D_hat, cfg.Nc, guard)
    origin = y.start_index if origin is None else origin
    start = origin + first
    z = y.window(start, origin + stop) - y.window(start + cfg.N, origin + stop + cfg.N)
    raw = float(np.mean(np.abs(z) ** 2))
    return raw, max(raw - sigma_v2, 0.0)
