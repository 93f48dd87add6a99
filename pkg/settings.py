
# -*- coding: utf-8 -*-

__author__ = 'Ishafizan'
__date__: "19 Oct 2026"

"""
Default parameters of the ambient backscatter link simulator.
Every key of SCENARIO_CONFIG can be overridden from a YAML file (--config) or a CLI flag.
"""

TOOL_VERSION = "1.0.0"

# ----------------------------------------------
# Logging
LOG_LEVEL = "INFO"  # DEBUG prints per-trial details

# ----------------------------------------------
# Physical constants
SPEED_OF_LIGHT = 3e8  # m/s

# ----------------------------------------------
# Numerical guards
GAMMA_GUARD = 1e-9  # below this detection SNR the threshold takes its gamma -> 0 limit
SINGULAR_TOL = 1e-9  # |C - 1| below this is treated as equal hypothesis variances
DENOM_FLOOR = 1e-30  # floor for autocorrelation denominators
MAX_GRID_POINTS = 10 ** 7  # full-grid cap for the optimal combiner search
GRID_CHUNK = 200000  # grid points evaluated per vectorized block

# ----------------------------------------------
# Monte Carlo harness
TRIALS = 100000  # per grid point
SEED = 20171010
WORKERS = 1  # >1 runs trial chunks in a process pool
CHUNK_SIZE = 2000  # trials per chunk; fixes the aggregation order
OUTPUT_DIR = "results"
TARGET_BER = 1e-3  # BER level at which SNR gains are read off

# ----------------------------------------------
# Choose the scenario preset
# Options: "default", "flat"
SCENARIO = "default"
SCENARIO_CONFIG = {
    "default": {
        # OFDM source
        "N": 512,  # subcarriers
        "Nc": 64,  # cyclic prefix length (samples)
        "fs": 10e6,  # sampling rate (Hz)
        "p": 1.0,  # average transmit power
        # Deployment
        "fc": 900e6,  # carrier frequency (Hz)
        "D_rd": 0.5,  # BD-to-receiver distance (m)
        "Df": 16,  # source->receiver delay (samples)
        "Dh": 16,  # source->BD delay (samples)
        "tau_f": 4,  # taps of f
        "tau_h": 6,  # taps of h
        "tau_g": 1,  # taps of g (single path)
        "pdp_decay": 1.0,  # exponential power delay profile constant (taps)
        # Backscatter device
        "alpha": 0.3 + 0.4j,  # reflection coefficient, |alpha|^2 = 0.25
        "K": 1,  # BD symbol length in OFDM symbols
        # Receiver
        "M": 1,  # receive antennas
        "detector": "proposed",  # proposed | benchmark
        "combiner": "optimal",  # optimal | mrc | egc | sc
        "grid_step": 0.001,  # angular step of the optimal combiner search
        # Synchronization
        "sync_mode": "genie",  # genie | estimated
        "sync_metric": "coherent",  # coherent | ratio (BD/receiver autocorrelation metric)
        "K1": 1,  # BTS length in OFDM symbols
        "K2": 1,  # TPT all-ones preamble length in OFDM symbols
        "epsilon_L": 1.5,  # spread estimate threshold, in units of the noise floor
        "guard_head": 2,  # samples dropped after L_hat - 1 in the estimated window
        "guard_tail": 8,  # samples dropped before Nc + D_hat in the estimated window
        "wake_bits": 2,  # wake-up preamble bits, one OFDM symbol each
        # SNR calibration
        "snr_grid": [0, 5, 10, 15, 20, 25, 30],  # average detection SNR (dB)
        "direct_margin_db": 3.0,  # direct-link SNR above detection SNR
        "bd_snr_margin_db": 20.0,  # SNR at the BD above detection SNR
        "distance_ref_snr_db": 30.0,  # average SNR at D_rd = 0.5 m for distance sweeps
        "distances": [0.5, 1.0, 1.4, 2.0, 4.0, 6.0, 8.0, 14.0],  # m
        # Benchmark energy detector
        "benchmark_training": 2,  # BD symbols per energy level in the TPT phase
    },
    "flat": {
        # Single-tap channels, used for exactness checks of the estimators
        "Df": 16,
        "Dh": 16,
        "tau_f": 1,
        "tau_h": 1,
        "tau_g": 1,
    },
}

# ----------------------------------------------
# Sweep presets (acceptance experiments)
SWEEP_CONFIG = {
    "ber-sweep": {"K": [1, 2, 3]},
    "combiner-sweep": {"M": 2, "combiners": ["optimal", "mrc", "egc", "sc"]},
    "antenna-sweep": {"M": [1, 2, 4, 6], "combiner": "egc"},
    "mse-sweep": {"K2": [1, 2, 3]},
}
