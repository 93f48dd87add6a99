# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

from dataclasses import dataclass

import numpy as np
from scipy import special

import settings
from utils.util_gen import (ComplexSignal, ConfigurationError, DimensionError, DomainError, GeometryError,
                            InvariantError)
from utils.util_log import logger

log = logger()

COMBINERS = ("optimal", "mrc", "egc", "sc")
WEIGHT_TOL = 1e-9


# ----------------------------------------------
# Types
@dataclass(frozen=True, eq=False)
class LinkStats:
    """
    Per-antenna link quality seen by the detector.

    Attributes:
        sigma2 (float): Noise power per antenna.
        sigma_u2 (np.ndarray): Backscatter difference-signal power per antenna.
    """
    sigma2: float
    sigma_u2: np.ndarray

    def __post_init__(self):
        sigma_u2 = np.atleast_1d(np.asarray(self.sigma_u2, dtype=float))
        if self.sigma2 <= 0:
            raise DomainError(f"noise power must be positive, got {self.sigma2}")
        if np.any(sigma_u2 < 0):
            raise DomainError(f"backscatter power must be >= 0, got {sigma_u2}")
        object.__setattr__(self, "sigma_u2", sigma_u2)

    @property
    def sigma_v2(self):
        return 2.0 * self.sigma2

    @property
    def gamma(self):
        """Detection SNR per antenna."""
        return self.sigma_u2 / self.sigma_v2


@dataclass(frozen=True)
class DetectorConfig:
    """
    Detection window within one OFDM symbol.

    Attributes:
        J (int): Repeating length.
        window (tuple): (L - 1, Nc + D) half-open offsets from the symbol start.
        K (int): BD symbol length in OFDM symbols.
        period (int): OFDM symbol period N + Nc.
    """
    J: int
    window: tuple
    K: int
    period: int

    def __post_init__(self):
        first, stop = self.window
        if self.J < 1:
            raise GeometryError(f"repeating length must be >= 1, got {self.J}")
        if stop - first != self.J or first < 0:
            raise ConfigurationError(f"window {self.window} does not hold J={self.J} samples")

    @property
    def J_total(self):
        return self.K * self.J


def detector_config(geometry, K, period):
    """DetectorConfig for a channel geometry (true or estimated)."""
    return DetectorConfig(J=geometry.J, window=geometry.window, K=K, period=period)


@dataclass(frozen=True, eq=False)
class CombinerWeights:
    """Nonnegative antenna weights on the unit sphere."""
    theta: np.ndarray

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        if theta.ndim != 1 or theta.size == 0:
            raise DimensionError(f"weights must be a nonempty vector, got shape {theta.shape}")
        if np.any(theta < -WEIGHT_TOL):
            raise InvariantError(f"weights must be nonnegative, got {theta}")
        if abs(np.sum(theta ** 2) - 1.0) > WEIGHT_TOL:
            raise InvariantError(f"weights must have unit sum of squares, got {np.sum(theta ** 2):.12f}")
        object.__setattr__(self, "theta", np.clip(theta, 0.0, None))

    @property
    def M(self):
        return self.theta.size


def _as_weights(theta):
    return theta if isinstance(theta, CombinerWeights) else CombinerWeights(theta)


# ----------------------------------------------
# Statistics
def difference_signal(y, N, det, symbol_index, origin=None):
    """
    Interference-cancelling difference z[n] = y[n] - y[n + N] over the detection window.

    Args:
        y (ComplexSignal): Received signal of one antenna.
        N (int): Subcarriers (repetition lag).
        det (DetectorConfig): Window and period.
        symbol_index (int): OFDM symbol within the BD symbol.
        origin (int): Global index where the BD symbol starts at the source (defaults to y start).

    Returns:
        ComplexSignal: J samples of z starting at the first window index.
    """
    origin = y.start_index if origin is None else origin
    first, stop = det.window
    start = origin + symbol_index * det.period + first
    z = y.window(start, start + det.J) - y.window(start + N, start + N + det.J)
    return ComplexSignal(z, start)


def test_statistic(z_windows, J_total, sigma_v2):
    """
    Energy statistic R = sum |z[n]|^2 / (J_total * sigma_v2) over every window of one BD symbol.
    """
    if J_total <= 0:
        raise GeometryError(f"J_total must be positive, got {J_total}")
    if sigma_v2 <= 0:
        raise DomainError(f"difference-noise power must be positive, got {sigma_v2}")
    windows = [z.samples if isinstance(z, ComplexSignal) else np.asarray(z) for z in z_windows]
    count = sum(w.size for w in windows)
    if count != J_total:
        raise DimensionError(f"windows hold {count} samples, expected J_total={J_total}")
    energy = sum(float(np.sum(np.abs(w) ** 2)) for w in windows)
    return energy / (J_total * sigma_v2)


# ----------------------------------------------
# Thresholds
def gaussian_intersection(mu0, var0, mu1, var1):
    """
    Crossing point between mu0 and mu1 of the densities N(mu0, var0) and N(mu1, var1), var1 >= var0.

    Written as mu0 + (d^2 + var1 ln C) / (sqrt(C d^2 + (C - 1) var1 ln C) + d) with d = mu1 - mu0
    and C = var1 / var0, which stays accurate when C -> 1. Where |C - 1| < SINGULAR_TOL the
    midpoint (mu0 + mu1) / 2 is returned. Broadcasts over array inputs.
    """
    mu0, var0, mu1, var1 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (mu0, var0, mu1, var1)))
    delta = mu1 - mu0
    ratio = var1 / var0
    log_ratio = np.log(ratio)
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(ratio * delta ** 2 + (ratio - 1.0) * var1 * log_ratio)
        crossing = mu0 + (delta ** 2 + var1 * log_ratio) / (root + delta)
    out = np.where(np.abs(ratio - 1.0) < settings.SINGULAR_TOL, mu0 + 0.5 * delta, crossing)
    return float(out) if out.ndim == 0 else out


def optimal_threshold(gamma, J):
    """
    Minimum-BER threshold of the single-antenna ML energy detector.

    eps* = (g+1)/(g(g+2)) * (g + sqrt(g^2 + 2g(g+2)ln(g+1)/J)), evaluated as
    (g+1)/(g+2) * (1 + sqrt(1 + 2(1 + 2/g)ln(1+g)/J)). Below GAMMA_GUARD the
    g -> 0 limit (1 + sqrt(1 + 4/J)) / 2 is returned.

    Args:
        gamma (float): Detection SNR (linear).
        J (int): Samples pooled into the statistic.

    Returns:
        float: Threshold eps*.
    """
    if gamma < 0 or J < 1:
        raise DomainError(f"threshold needs gamma >= 0 and J >= 1, got {gamma}, {J}")
    if gamma < settings.GAMMA_GUARD:
        return 0.5 * (1.0 + np.sqrt(1.0 + 4.0 / J))
    spread = 2.0 * (1.0 + 2.0 / gamma) * np.log1p(gamma) / J
    return float((gamma + 1.0) / (gamma + 2.0) * (1.0 + np.sqrt(1.0 + spread)))


def ml_detect(R, epsilon):
    """ML decision: 0 below the threshold, 1 at or above it."""
    return int(R >= epsilon)


# ----------------------------------------------
# Multi-antenna combining
def combined_moments(theta, gamma_m, J):
    """
    Means and variances of the combined statistic under both hypotheses.

    theta may be a single weight vector or a (points, M) array of candidates.

    Returns:
        tuple: (mu0, var0, mu1, var1).
    """
    theta = np.asarray(theta, dtype=float)
    gamma_m = np.asarray(gamma_m, dtype=float)
    if theta.shape[-1] != gamma_m.size:
        raise DimensionError(f"{theta.shape[-1]} weights for {gamma_m.size} antennas")
    mu0 = theta.sum(axis=-1)
    var0 = (theta ** 2).sum(axis=-1) / J
    mu1 = theta @ (gamma_m + 1.0)
    var1 = (theta ** 2) @ ((gamma_m + 1.0) ** 2) / J
    return mu0, var0, mu1, var1


def combined_ber(theta, gamma_m, J):
    """
    Minimum BER of the combined detector at its optimal threshold, vectorized over weight candidates.

    Returns:
        tuple: (p_fa, p_md, epsilon) arrays shaped like theta without its last axis.
    """
    mu0, var0, mu1, var1 = combined_moments(theta, gamma_m, J)
    epsilon = gaussian_intersection(mu0, var0, mu1, var1)
    p_fa = 0.5 * special.erfc((epsilon - mu0) / np.sqrt(2.0 * var0))
    p_md = 0.5 * special.erfc((mu1 - epsilon) / np.sqrt(2.0 * var1))
    return p_fa, p_md, epsilon


def combine_statistics(R_m, theta):
    """Weighted sum of per-antenna statistics."""
    weights = _as_weights(theta)
    R_m = np.atleast_1d(np.asarray(R_m, dtype=float))
    if R_m.size != weights.M:
        raise DimensionError(f"{R_m.size} statistics for {weights.M} weights")
    return float(weights.theta @ R_m)


def conventional_weights(scheme, gamma_m):
    """
    SNR-based weights: "egc" equal, "sc" best branch (lowest index on ties), "mrc" proportional to gamma_m.
    """
    gamma_m = np.atleast_1d(np.asarray(gamma_m, dtype=float))
    if gamma_m.size == 0:
        raise DimensionError("conventional_weights needs at least one antenna")
    if np.any(gamma_m < 0):
        raise DomainError(f"branch SNRs must be >= 0, got {gamma_m}")
    scheme = scheme.lower()
    M = gamma_m.size
    if scheme == "egc":
        return CombinerWeights(np.full(M, 1.0 / np.sqrt(M)))
    if scheme == "sc":
        theta = np.zeros(M)
        theta[int(np.argmax(gamma_m))] = 1.0
        return CombinerWeights(theta)
    if scheme == "mrc":
        norm = np.sqrt(np.sum(gamma_m ** 2))
        if norm == 0:
            return conventional_weights("egc", gamma_m)
        return CombinerWeights(gamma_m / norm)
    raise ConfigurationError(f"unknown combining scheme {scheme!r}, expected mrc, egc or sc")


def spherical_to_weights(angles):
    """
    Map spherical angles in [0, pi/2]^(M-1) onto the nonnegative unit sphere.

    theta_1 = cos a_1, theta_2 = sin a_1 cos a_2, ..., theta_M = sin a_1 ... sin a_(M-1).
    """
    angles = np.atleast_2d(angles)
    points, dims = angles.shape
    theta = np.ones((points, dims + 1))
    sines = np.ones(points)
    for i in range(dims):
        theta[:, i] = sines * np.cos(angles[:, i])
        sines = sines * np.sin(angles[:, i])
    theta[:, dims] = sines
    return np.clip(theta, 0.0, None)


def _grid_search(axes, gamma_m, J):
    """Best point of the product grid over the given angle axes, evaluated in chunks."""
    shape = tuple(axis.size for axis in axes)
    total = int(np.prod(shape))
    best_ber, best_angles = np.inf, None
    for start in range(0, total, settings.GRID_CHUNK):
        idx = np.unravel_index(np.arange(start, min(start + settings.GRID_CHUNK, total)), shape)
        angles = np.stack([axis[i] for axis, i in zip(axes, idx)], axis=1)
        p_fa, p_md, _ = combined_ber(spherical_to_weights(angles), gamma_m, J)
        ber = 0.5 * (p_fa + p_md)
        k = int(np.argmin(ber))
        if ber[k] < best_ber:
            best_ber, best_angles = float(ber[k]), angles[k]
    return best_ber, best_angles


def optimal_weights(gamma_m, J, grid_step=0.001):
    """
    Weights minimizing the combined detector's minimum BER.

    The (M-1) spherical angles are searched over [0, pi/2] at grid_step. When the full grid would
    exceed MAX_GRID_POINTS, a coarse grid within the cap is refined around its best point until
    the angular step reaches grid_step.

    Args:
        gamma_m (array): Per-antenna detection SNRs.
        J (int): Samples pooled per antenna.
        grid_step (float): Angular resolution in radians, in (0, 1].

    Returns:
        CombinerWeights: Best grid point.
    """
    gamma_m = np.atleast_1d(np.asarray(gamma_m, dtype=float))
    if not 0 < grid_step <= 1:
        raise ConfigurationError(f"grid_step must be in (0, 1], got {grid_step}")
    M = gamma_m.size
    if M == 1:
        return CombinerWeights([1.0])

    dims = M - 1
    half_pi = 0.5 * np.pi
    per_axis = int(np.ceil(half_pi / grid_step)) + 1
    if per_axis ** dims <= settings.MAX_GRID_POINTS:
        axes = [np.linspace(0.0, half_pi, per_axis)] * dims
        ber, angles = _grid_search(axes, gamma_m, J)
    else:
        per_axis = max(int(settings.MAX_GRID_POINTS ** (1.0 / dims)), 4)
        step = half_pi / (per_axis - 1)
        axes = [np.linspace(0.0, half_pi, per_axis)] * dims
        ber, angles = _grid_search(axes, gamma_m, J)
        while step > grid_step:
            lower = np.maximum(angles - step, 0.0)
            upper = np.minimum(angles + step, half_pi)
            axes = [np.linspace(lo, hi, per_axis) for lo, hi in zip(lower, upper)]
            step = float(np.max(upper - lower)) / (per_axis - 1)
            ber, angles = _grid_search(axes, gamma_m, J)
        log.debug(f"coarse-to-fine combiner search for M={M} ended at step {step:.2e}")
    theta = spherical_to_weights(angles)[0]
    return CombinerWeights(theta / np.linalg.norm(theta))


def combiner_weights(combiner, gamma_m, J, grid_step=0.001):
    """Weights for a named combining scheme."""
    if combiner == "optimal":
        return optimal_weights(gamma_m, J, grid_step)
    return conventional_weights(combiner, gamma_m)


def multiantenna_threshold(theta, gamma_m, J):
    """
    Minimum-BER threshold of the combined statistic.

    Intersection of N(mu0, sum(theta^2)/J) and N(mu1, sum(theta^2 (gamma_m + 1)^2)/J); equal variances
    (all gamma_m ~ 0) fall back to the midpoint.
    """
    weights = _as_weights(theta)
    gamma_m = np.atleast_1d(np.asarray(gamma_m, dtype=float))
    if np.any(gamma_m < 0) or J < 1:
        raise DomainError(f"threshold needs gamma_m >= 0 and J >= 1, got {gamma_m}, {J}")
    return gaussian_intersection(*combined_moments(weights.theta, gamma_m, J))


def detect_combined(R_m, gamma_m, J, combiner="optimal", grid_step=0.001):
    """
    Combine per-antenna statistics and decide.

    Returns:
        tuple: (bit, CombinerWeights, threshold).
    """
    weights = combiner_weights(combiner, gamma_m, J, grid_step)
    epsilon = multiantenna_threshold(weights, gamma_m, J)
    return ml_detect(combine_statistics(R_m, weights), epsilon), weights, epsilon


# ----------------------------------------------
# Conventional energy detector
def benchmark_energy_level(y, cfg, K, origin=None):
    """
    Average received energy over one BD symbol, averaged across antennas when y is a list.
    """
    signals = [y] if isinstance(y, ComplexSignal) else list(y)
    energies = []
    for sig in signals:
        start = sig.start_index if origin is None else origin
        energies.append(np.mean(np.abs(sig.window(start, start + K * cfg.period)) ** 2))
    return float(np.mean(energies))


def train_energy_threshold(levels_off, levels_on):
    """Midpoint between the mean energies observed with the BD absorbing and reflecting."""
    levels_off, levels_on = np.atleast_1d(levels_off), np.atleast_1d(levels_on)
    if levels_off.size == 0 or levels_on.size == 0:
        raise DimensionError("energy training needs observations of both levels")
    return 0.5 * (float(np.mean(levels_off)) + float(np.mean(levels_on)))


def benchmark_energy_detect(y, cfg, K, trained_threshold, origin=None, previous_level=None):
    """
    Energy-level detector of the conventional receiver.

    The energy level is 1 above trained_threshold. With previous_level given the bit is
    differentially decoded: a level change is bit 1.
    """
    level = int(benchmark_energy_level(y, cfg, K, origin) > trained_threshold)
    if previous_level is None:
        return level
    return level ^ int(previous_level)


def differential_encode(bits, initial_state=0):
    """Reflect/absorb states s_k = s_(k-1) XOR b_k, starting from initial_state."""
    states = [int(initial_state)]
    for bit in bits:
        states.append(states[-1] ^ int(bit))
    return states

