# -*- coding: utf-8 -*-
"""Shared fixtures: seeded streams and the default link configuration."""

import numpy as np
import pytest

from utils.util_bd import BdConfig
from utils.util_channel import derive_geometry
from utils.util_ofdm import OfdmConfig
from utils.util_simulate import ExperimentConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20171010)


@pytest.fixture
def ofdm():
    return OfdmConfig()


@pytest.fixture
def bd():
    return BdConfig()


@pytest.fixture
def geometry(ofdm):
    """Default deployment: D = 16, L = 22, J = 59."""
    return derive_geometry(ofdm, Df=16, Dh=16, Dg=0, tau_f=4, tau_h=6, tau_g=1)


@pytest.fixture
def cfg():
    return ExperimentConfig(trials=10, chunk_size=4, snr_grid=(10.0,))


@pytest.fixture
def flat_cfg():
    """Single-tap channels, where the sync estimators are exact at high SNR."""
    return ExperimentConfig(tau_f=1, tau_h=1, trials=4, chunk_size=2, snr_grid=(150.0,))
