# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

from dataclasses import dataclass

import numpy as np

from utils.util_log import logger

log = logger()


# ----------------------------------------------
# Errors
class AmbcError(ValueError):
    """Base class of every error raised by the simulator."""


class ConfigurationError(AmbcError):
    """Invalid parameter set (violated type invariant or unknown key)."""


class RangeError(AmbcError):
    """Index window outside the available samples."""


class DomainError(AmbcError):
    """Argument outside the mathematical domain of a formula."""


class GeometryError(AmbcError):
    """Channel geometry leaves no repeating window (CP too short for the deployment)."""


class AlignmentError(AmbcError):
    """Signals that must overlap on the global timeline do not."""


class DimensionError(AmbcError):
    """Vector lengths that must agree do not."""


class InvariantError(AmbcError):
    """A value violates a documented invariant (e.g. non-unit combiner weights)."""


# ----------------------------------------------
# Signal carrier
@dataclass(frozen=True, eq=False)
class ComplexSignal:
    """
    Complex baseband samples placed on the global discrete timeline n.

    samples[i] is the sample at n = start_index + i.
    """
    samples: np.ndarray
    start_index: int = 0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1:
            raise DimensionError(f"signal must be one-dimensional, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise InvariantError("signal contains NaN or Inf samples")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "start_index", int(self.start_index))

    def __len__(self):
        return self.samples.size

    @property
    def stop_index(self):
        """One past the last sample on the global timeline."""
        return self.start_index + self.samples.size

    def window(self, start, stop):
        """
        Samples for n in [start, stop) on the global timeline.

        Raises:
            RangeError: when [start, stop) is not covered by the signal.
        """
        if start < self.start_index or stop > self.stop_index or stop < start:
            raise RangeError(f"window [{start}, {stop}) outside signal span "
                             f"[{self.start_index}, {self.stop_index})")
        return self.samples[start - self.start_index:stop - self.start_index]


def superpose(*signals):
    """
    Sum signals on the global timeline; samples missing from a signal count as zero.

    Returns:
        ComplexSignal: spanning the union of the input spans.
    """
    if not signals:
        raise DimensionError("superpose needs at least one signal")
    start = min(sig.start_index for sig in signals)
    stop = max(sig.stop_index for sig in signals)
    out = np.zeros(stop - start, dtype=np.complex128)
    for sig in signals:
        out[sig.start_index - start:sig.stop_index - start] += sig.samples
    return ComplexSignal(out, start)


# ----------------------------------------------
# Random streams and units
def trial_rng(seed, point=0, trial=0):
    """
    Counter-based stream for one Monte Carlo trial.

    The stream depends only on (seed, point, trial), so results do not depend on
    how trials are chunked or on the number of worker processes.
    """
    return np.random.default_rng([int(seed), int(point), int(trial)])


def cscg(rng, size, variance=1.0):
    """Circularly symmetric complex Gaussian draws with the given variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def db_to_linear(value_db):
    if np.isscalar(value_db):
        return 10.0 ** (float(value_db) / 10.0)
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(value)
