# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

from dataclasses import dataclass

import numpy as np
from scipy import special

from utils.util_detect import combined_moments, multiantenna_threshold, optimal_threshold
from utils.util_gen import ConfigurationError, DomainError, InvariantError
from utils.util_log import logger

log = logger()


@dataclass(frozen=True)
class BerBreakdown:
    """False alarm, missed detection and their equiprobable average."""
    p_fa: float
    p_md: float

    def __post_init__(self):
        for name in ("p_fa", "p_md"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvariantError(f"{name} must be a probability, got {value}")

    @property
    def p_e(self):
        return 0.5 * (self.p_fa + self.p_md)


def q_function(x):
    """Upper tail of the standard normal, 0.5 erfc(x / sqrt(2))."""
    value = 0.5 * special.erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))
    return float(value) if np.ndim(value) == 0 else value


def statistic_moments(gamma, J):
    """
    Gaussian moments of R under both hypotheses.

    Returns:
        tuple: (mu0, var0, mu1, var1) = (1, 1/J, gamma+1, (gamma+1)^2/J).
    """
    if gamma < 0 or J < 1:
        raise DomainError(f"moments need gamma >= 0 and J >= 1, got {gamma}, {J}")
    return 1.0, 1.0 / J, gamma + 1.0, (gamma + 1.0) ** 2 / J


def ber_closed_form(gamma, J, epsilon):
    """BER of the single-antenna energy detector at threshold epsilon."""
    mu0, var0, mu1, var1 = statistic_moments(gamma, J)
    p_fa = q_function((epsilon - mu0) / np.sqrt(var0))
    p_md = q_function((mu1 - epsilon) / np.sqrt(var1))
    return BerBreakdown(p_fa, p_md)


def threshold_margins(gamma, J):
    """
    Normalized distances f1 = sqrt(J)(eps* - 1) and f2 = sqrt(J)(1 - eps*/(gamma+1)) of the optimal threshold.

    At the threshold f1^2 = f2^2 + 2 ln(gamma + 1).
    """
    epsilon = optimal_threshold(gamma, J)
    return np.sqrt(J) * (epsilon - 1.0), np.sqrt(J) * (1.0 - epsilon / (gamma + 1.0))


def min_ber_single(gamma, J):
    """
    Minimum BER of the single-antenna detector, i.e. the BER at the optimal threshold.

    Depends on the subcarrier count only through J.
    """
    f1, f2 = threshold_margins(gamma, J)
    return BerBreakdown(q_function(f1), q_function(f2))


def multi_threshold_margins(theta, gamma_m, J):
    """f1 and f2 of the combined statistic; f1^2 = f2^2 + ln(var1/var0) at the threshold."""
    theta = getattr(theta, "theta", theta)
    mu0, var0, mu1, var1 = combined_moments(np.asarray(theta, dtype=float), gamma_m, J)
    epsilon = multiantenna_threshold(theta, gamma_m, J)
    return (epsilon - mu0) / np.sqrt(var0), (mu1 - epsilon) / np.sqrt(var1)


def min_ber_multi(theta, gamma_m, J):
    """Minimum BER of the combined detector for the given weights."""
    f1, f2 = multi_threshold_margins(theta, gamma_m, J)
    return BerBreakdown(q_function(f1), q_function(f2))


def ber_approximations(gamma, J):
    """
    High-SNR approximations of the minimum-BER components.

    Returns:
        tuple: (Q(sqrt(J + 2 ln(gamma+1))), Q(sqrt(J))).
    """
    if gamma < 0 or J < 1:
        raise DomainError(f"approximations need gamma >= 0 and J >= 1, got {gamma}, {J}")
    return q_function(np.sqrt(J + 2.0 * np.log1p(gamma))), q_function(np.sqrt(J))


def bd_rate(fs, N, Nc, K):
    """BD bit rate fs / (K (N + Nc)) in bits per second."""
    if min(fs, N, Nc, K) <= 0:
        raise ConfigurationError(f"rate needs positive fs, N, Nc, K, got {fs}, {N}, {Nc}, {K}")
    return fs / (K * (N + Nc))


def chi2_false_alarm(epsilon, J):
    """
    Exact false-alarm probability P(R >= epsilon | B=0).

    Under B=0, J * R is a sum of J unit-mean exponentials, so the tail is the regularized
    upper incomplete gamma function Q(J, J epsilon).
    """
    if J < 1:
        raise DomainError(f"J must be >= 1, got {J}")
    return float(special.gammaincc(J, J * max(epsilon, 0.0)))
