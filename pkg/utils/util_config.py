# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

import yaml

import settings
from utils.util_bd import BdConfig
from utils.util_gen import AmbcError, ConfigurationError
from utils.util_log import logger
from utils.util_ofdm import OfdmConfig
from utils.util_simulate import ExperimentConfig

log = logger()

HARNESS_KEYS = ("trials", "seed", "workers", "chunk_size")
OFDM_KEYS = ("N", "Nc", "fs", "p")
BD_KEYS = ("alpha", "K")
INT_KEYS = ("N", "Nc", "Df", "Dh", "tau_f", "tau_h", "tau_g", "K", "M", "K1", "K2", "benchmark_training",
            "guard_head", "guard_tail", "wake_bits",
            "trials", "seed", "workers", "chunk_size")
FLOAT_KEYS = ("fs", "p", "fc", "D_rd", "pdp_decay", "grid_step", "epsilon_L", "direct_margin_db", "bd_snr_margin_db",
              "distance_ref_snr_db")


def _as_int(value):
    """Integer from YAML, accepting strings such as "1e5"."""
    if isinstance(value, str) and any(c in value for c in ".eE"):
        value = float(value)
    return int(value)


def known_keys():
    return set(settings.SCENARIO_CONFIG["default"]) | set(HARNESS_KEYS)


def parse_alpha(value):
    """
    Reflection coefficient from YAML: a number, a string such as "0.3+0.4j", or [re, im].
    """
    try:
        if isinstance(value, (list, tuple)):
            re, im = value
            return complex(float(re), float(im))
        if isinstance(value, str):
            return complex(value.replace(" ", ""))
        return complex(value)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"cannot read alpha from {value!r}: {e}")


def load_yaml(path):
    """Read a YAML key-value file into a dict."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
    except (OSError, yaml.YAMLError) as e:
        log.error(f"Failed to read config file {path}: {e}")
        raise ConfigurationError(f"cannot read config file {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a mapping, got {type(data).__name__}")
    return data


def _check_keys(params, source):
    unknown = sorted(set(params) - known_keys())
    if unknown:
        raise ConfigurationError(f"unknown keys in {source}: {', '.join(unknown)}")


def resolve_params(scenario=None, config_path=None, overrides=None):
    """
    Layer the parameter set: settings preset, then the YAML file, then CLI overrides.

    Args:
        scenario (str): Name in settings.SCENARIO_CONFIG (a "scenario" key in the file wins).
        config_path (str): Optional YAML file.
        overrides (dict): CLI values; None entries are ignored.

    Returns:
        dict: Flat parameter set.
    """
    file_params = load_yaml(config_path) if config_path else {}
    scenario = file_params.pop("scenario", None) or scenario or settings.SCENARIO
    if scenario not in settings.SCENARIO_CONFIG:
        raise ConfigurationError(f"unknown scenario {scenario!r}, expected one of {sorted(settings.SCENARIO_CONFIG)}")

    params = dict(settings.SCENARIO_CONFIG["default"])
    params.update(settings.SCENARIO_CONFIG[scenario])
    params.update(trials=settings.TRIALS, seed=settings.SEED, workers=settings.WORKERS,
                  chunk_size=settings.CHUNK_SIZE)
    _check_keys(file_params, config_path)
    params.update(file_params)

    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    _check_keys(overrides, "command line")
    params.update(overrides)
    log.debug(f"resolved parameters (scenario {scenario}): {params}")
    return params


def make_experiment(params):
    """Build the typed ExperimentConfig from a flat parameter set."""
    params = dict(params)
    _check_keys(params, "parameters")
    try:
        for key in INT_KEYS:
            if key in params:
                params[key] = _as_int(params[key])
        for key in FLOAT_KEYS:
            if key in params:
                params[key] = float(params[key])
        ofdm = OfdmConfig(**{k: params.pop(k) for k in OFDM_KEYS if k in params})
        bd_params = {k: params.pop(k) for k in BD_KEYS if k in params}
        if "alpha" in bd_params:
            bd_params["alpha"] = parse_alpha(bd_params["alpha"])
        bd = BdConfig(**bd_params)
        return ExperimentConfig(ofdm=ofdm, bd=bd, **params)
    except (TypeError, ValueError) as e:
        if isinstance(e, AmbcError):
            raise
        raise ConfigurationError(f"invalid parameter value: {e}")


def build_config(scenario=None, config_path=None, overrides=None):
    """resolve_params followed by make_experiment."""
    return make_experiment(resolve_params(scenario, config_path, overrides))
