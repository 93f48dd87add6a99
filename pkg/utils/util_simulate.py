# -*- coding: utf-8 -*-
from __future__ import division
from __future__ import print_function
from __future__ import unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

"""
Monte Carlo engine: one trial of the backscatter link end to end, and the sweeps built on it.
"""

import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
import pandas as pd
from scipy import optimize
from tqdm import tqdm

import settings
from utils.util_analysis import (ber_approximations, bd_rate, chi2_false_alarm, min_ber_multi, min_ber_single,
                                 threshold_margins)
from utils.util_bd import BdConfig, backscatter, bd_waveform, estimate_dh_blind, frame_schedule, wake_up_preamble
from utils.util_channel import apply_channel, derive_geometry, discrete_delay, pathloss_gain, sample_channels
from utils.util_detect import (COMBINERS, DetectorConfig, LinkStats, benchmark_energy_detect,
                               benchmark_energy_level, combiner_weights, detect_combined, detector_config,
                               difference_signal, differential_encode, ml_detect, optimal_threshold,
                               test_statistic, train_energy_threshold)
from utils.util_gen import (ComplexSignal, ConfigurationError, cscg, db_to_linear, linear_to_db,
                            superpose, trial_rng)
from utils.util_log import logger
from utils.util_ofdm import OfdmConfig, cp_window_equal, generate_ofdm_frame, spectral_flatness_pvalue
from utils.util_sync import SyncEstimates, estimate_L, estimate_d_min, estimate_sigma_u2

log = logger()

DETECTORS = ("proposed", "benchmark")
SYNC_MODES = ("genie", "estimated")

TrialOutcome = namedtuple("TrialOutcome", ["sent", "detected", "ber_analytic", "gamma", "p_fa_chi2"])
SyncOutcome = namedtuple("SyncOutcome", ["Dh_hat", "D_hat", "L_hat", "sigma_u2_hat", "sigma_u2"])
LinkBudget = namedtuple("LinkBudget", ["snr_db", "sigma2", "sigma2_bd", "gain_f", "gain_h", "gain_g"])


# ----------------------------------------------
# Experiment configuration
@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything one sweep needs; built by util_config from settings, a YAML file and CLI flags.
    """
    ofdm: OfdmConfig = field(default_factory=OfdmConfig)
    bd: BdConfig = field(default_factory=BdConfig)
    fc: float = 900e6
    D_rd: float = 0.5
    Df: int = 16
    Dh: int = 16
    tau_f: int = 4
    tau_h: int = 6
    tau_g: int = 1
    pdp_decay: float = 1.0
    M: int = 1
    detector: str = "proposed"
    combiner: str = "optimal"
    grid_step: float = 0.001
    sync_mode: str = "genie"
    sync_metric: str = "coherent"
    K1: int = 1
    K2: int = 1
    epsilon_L: float = 1.5
    snr_grid: tuple = (0, 5, 10, 15, 20, 25, 30)
    direct_margin_db: float = 3.0
    bd_snr_margin_db: float = 20.0
    distance_ref_snr_db: float = 30.0
    distances: tuple = (0.5, 1.0, 1.4, 2.0, 4.0, 6.0, 8.0, 14.0)
    benchmark_training: int = 2
    guard_head: int = 2
    guard_tail: int = 8
    wake_bits: int = 2
    trials: int = settings.TRIALS
    seed: int = settings.SEED
    workers: int = settings.WORKERS
    chunk_size: int = settings.CHUNK_SIZE

    def __post_init__(self):
        object.__setattr__(self, "snr_grid", tuple(float(v) for v in self.snr_grid))
        object.__setattr__(self, "distances", tuple(float(v) for v in self.distances))
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if not self.snr_grid:
            raise ConfigurationError("snr_grid must not be empty")
        if self.M < 1:
            raise ConfigurationError(f"M must be >= 1, got {self.M}")
        if self.detector not in DETECTORS:
            raise ConfigurationError(f"detector must be one of {DETECTORS}, got {self.detector!r}")
        if self.combiner not in COMBINERS:
            raise ConfigurationError(f"combiner must be one of {COMBINERS}, got {self.combiner!r}")
        if self.sync_mode not in SYNC_MODES:
            raise ConfigurationError(f"sync_mode must be one of {SYNC_MODES}, got {self.sync_mode!r}")
        if self.tau_g != 1:
            raise ConfigurationError(f"the BD-to-receiver link is single-path, got tau_g={self.tau_g}")
        if self.K1 < 1 or self.K2 < 1 or self.benchmark_training < 1:
            raise ConfigurationError("K1, K2 and benchmark_training must be >= 1")
        if self.guard_head < 0 or self.guard_tail < 0:
            raise ConfigurationError(f"guards must be >= 0, got {self.guard_head}, {self.guard_tail}")
        if self.wake_bits < 1:
            raise ConfigurationError(f"wake_bits must be >= 1, got {self.wake_bits}")
        if self.workers < 1 or self.chunk_size < 1:
            raise ConfigurationError("workers and chunk_size must be >= 1")

    @property
    def geometry(self):
        Dg = discrete_delay(self.D_rd, self.ofdm.fs)
        return derive_geometry(self.ofdm, self.Df, self.Dh, Dg, self.tau_f, self.tau_h, self.tau_g)

    @property
    def K(self):
        return self.bd.K

    def to_dict(self):
        """Flat, YAML-safe view used for metadata and run ids."""
        params = asdict(self)
        params.update(params.pop("ofdm"))
        params.update(params.pop("bd"))
        params["alpha"] = str(self.bd.alpha)
        params["snr_grid"] = list(self.snr_grid)
        params["distances"] = list(self.distances)
        return params


# ----------------------------------------------
# Link budget
def _reflected_power(cfg, gain_g):
    """2 p |alpha|^2 E|g|^2 E[sum|h|^2]; an absorbing BD (alpha = 0) is calibrated as |alpha| = 1."""
    alpha2 = abs(cfg.bd.alpha) ** 2 or 1.0
    return 2.0 * cfg.ofdm.p * alpha2 * gain_g * 1.0


def link_budget(cfg, snr_db):
    """
    Noise and mean channel gains for an average detection SNR.

    sigma2 makes E[gamma] equal snr_db, the direct link sits direct_margin_db above it
    and the BD receives at snr_db + bd_snr_margin_db.
    """
    snr = db_to_linear(snr_db)
    gain_g = pathloss_gain(cfg.D_rd, cfg.fc)
    reflected = _reflected_power(cfg, gain_g)
    return LinkBudget(
        snr_db=float(snr_db),
        sigma2=reflected / snr,
        sigma2_bd=cfg.ofdm.p / (snr * db_to_linear(cfg.bd_snr_margin_db)),
        gain_f=reflected / cfg.ofdm.p * db_to_linear(cfg.direct_margin_db),
        gain_h=1.0,
        gain_g=gain_g,
    )


def distance_budget(cfg, distance_m):
    """
    Link budget at another BD-to-receiver distance.

    Noise, direct link and BD-side SNR stay as calibrated at cfg.D_rd for distance_ref_snr_db;
    only the BD-to-receiver pathloss changes.
    """
    ref = link_budget(cfg, cfg.distance_ref_snr_db)
    gain_g = pathloss_gain(distance_m, cfg.fc)
    snr_db = cfg.distance_ref_snr_db + float(linear_to_db(gain_g / ref.gain_g))
    return ref._replace(snr_db=snr_db, gain_g=gain_g)


# ----------------------------------------------
# One trial
def _noisy(sig, sigma2, rng):
    return ComplexSignal(sig.samples + cscg(rng, len(sig), sigma2), sig.start_index)


def _receive(cfg, channels, s, reflected, sigma2, rng):
    """Received signal of every antenna: direct link + BD link + AWGN."""
    ys = []
    for m in range(channels.M):
        direct = apply_channel(s, channels.f[m])
        ys.append(_noisy(superpose(direct, apply_channel(reflected, channels.g_cir(m))), sigma2, rng))
    return ys


def _true_gamma(cfg, channels, sigma2):
    """Per-antenna detection SNR 4 p |alpha|^2 |g_m|^2 sum|h|^2 / (2 sigma2)."""
    sigma_u2 = 4.0 * cfg.ofdm.p * abs(cfg.bd.alpha) ** 2 * np.abs(channels.g) ** 2 * channels.h.energy
    return LinkStats(sigma2=sigma2, sigma_u2=sigma_u2)


def _statistics(ys, det, origin, N, sigma_v2):
    return np.array([test_statistic([difference_signal(y, N, det, q, origin) for q in range(det.K)],
                                    det.J_total, sigma_v2) for y in ys])


def _estimated_link(cfg, budget, channels, sent, rng):
    """
    Run the protocol frame: wake-up, BD timing sync, training, power pilot and one data bit.

    The source keeps transmitting one symbol past the data phase, the BD stays silent there.

    Returns:
        tuple: (received signals, schedule, Dh_hat, SyncEstimates, per-antenna power estimates).
    """
    ofdm, bd = cfg.ofdm, cfg.bd
    schedule = frame_schedule(ofdm, bd, cfg.K1, cfg.K2, wake_symbols=cfg.wake_bits)
    s = generate_ofdm_frame(ofdm, schedule.Tf // ofdm.period + 1, rng)
    incident = apply_channel(s, channels.h)
    wake = bd_waveform(wake_up_preamble(cfg.wake_bits), BdConfig(bd.alpha, 1), ofdm, incident.start_index)
    Dh_hat = estimate_dh_blind(_noisy(incident, budget.sigma2_bd, rng), ofdm, cfg.K1,
                               origin=schedule.bts_start, metric=cfg.sync_metric)

    training = bd_waveform([0] * cfg.K2 + [1], BdConfig(bd.alpha, 1), ofdm, schedule.tpt_start + Dh_hat)
    data = bd_waveform([sent], bd, ofdm, schedule.ddt_start + Dh_hat)
    ys = _receive(cfg, channels, s, backscatter(incident, superpose(wake, training, data), bd.alpha),
                  budget.sigma2, rng)

    D_hat = estimate_d_min(ys[0], ofdm, cfg.K2, origin=schedule.tpt_start, metric=cfg.sync_metric)
    L_hat = estimate_L(ys[0], ofdm, cfg.K2, cfg.epsilon_L, budget.sigma2, origin=schedule.tpt_start)
    guard = (cfg.guard_head, cfg.guard_tail)
    powers = [estimate_sigma_u2(y, L_hat, D_hat, ofdm, 2.0 * budget.sigma2, origin=schedule.pilot_start,
                                guard=guard)
              for y in ys]
    sync = SyncEstimates(D_hat=D_hat, L_hat=L_hat, sigma_u2_hat=powers[0][1], Nc=ofdm.Nc,
                         sigma_u2_raw=powers[0][0])
    log.debug(f"sync: Dh_hat={Dh_hat} D_hat={D_hat} L_hat={L_hat} sigma_u2_hat={sync.sigma_u2_hat:.3e}")
    return ys, schedule, Dh_hat, sync, np.array([p[1] for p in powers])


def _benchmark_trial(cfg, budget, channels, sent, rng):
    """
    Conventional energy detector with differential encoding.

    The BD absorbs for state 0 and reflects for state 1; benchmark_training symbols of each state
    train the threshold, then the states s0 and s0 XOR sent carry the bit.
    """
    ofdm, bd, geometry = cfg.ofdm, cfg.bd, cfg.geometry
    span = bd.K * ofdm.period
    training = cfg.benchmark_training
    s0 = int(rng.integers(2))
    states = [0] * training + [1] * training + differential_encode([sent], s0)
    s = generate_ofdm_frame(ofdm, 1 + len(states) * bd.K, rng)
    waveform = ComplexSignal(np.repeat(np.asarray(states, dtype=float), span), ofdm.period + geometry.Dh)
    reflected = backscatter(apply_channel(s, channels.h), waveform, bd.alpha)
    ys = _receive(cfg, channels, s, reflected, budget.sigma2, rng)

    origin = ofdm.period + geometry.D
    levels = [benchmark_energy_level(ys, ofdm, bd.K, origin + j * span) for j in range(2 * training)]
    threshold = train_energy_threshold(levels[:training], levels[training:])
    previous = benchmark_energy_detect(ys, ofdm, bd.K, threshold, origin + 2 * training * span)
    detected = benchmark_energy_detect(ys, ofdm, bd.K, threshold, origin + (2 * training + 1) * span,
                                       previous_level=previous)
    gamma = float(np.mean(_true_gamma(cfg, channels, budget.sigma2).gamma))
    return TrialOutcome(sent, detected, float("nan"), gamma, float("nan"))


def run_trial(cfg, budget, rng, sent=None):
    """
    One BD bit through the whole link.

    Draws channels and the bit, builds the received signal of every antenna, detects and
    evaluates the analytic minimum BER at the realized SNR.

    Args:
        cfg (ExperimentConfig): Experiment parameters.
        budget (LinkBudget): Noise and mean gains (link_budget or distance_budget).
        rng (np.random.Generator): Trial stream.
        sent (int): Force the BD bit (random when None).

    Returns:
        TrialOutcome: sent and detected bits, analytic BER, mean realized gamma, exact false-alarm rate.
    """
    ofdm, bd, geometry = cfg.ofdm, cfg.bd, cfg.geometry
    channels = sample_channels(geometry, cfg.M, cfg.tau_f, cfg.tau_h, cfg.pdp_decay,
                               budget.gain_f, budget.gain_h, budget.gain_g, rng)
    sent = int(rng.integers(2)) if sent is None else int(sent)
    if cfg.detector == "benchmark":
        return _benchmark_trial(cfg, budget, channels, sent, rng)

    truth = _true_gamma(cfg, channels, budget.sigma2)
    true_det = detector_config(geometry, bd.K, ofdm.period)
    if cfg.sync_mode == "genie":
        s = generate_ofdm_frame(ofdm, 1 + bd.K, rng)
        origin = ofdm.period
        waveform = bd_waveform([sent], bd, ofdm, origin + geometry.Dh)
        ys = _receive(cfg, channels, s, backscatter(apply_channel(s, channels.h), waveform, bd.alpha),
                      budget.sigma2, rng)
        det, gamma_m = true_det, truth.gamma
    else:
        ys, schedule, _, sync, sigma_u2_hat = _estimated_link(cfg, budget, channels, sent, rng)
        origin = schedule.ddt_start
        first, stop = sync.window((cfg.guard_head, cfg.guard_tail))
        det = DetectorConfig(J=stop - first, window=(first, stop), K=bd.K, period=ofdm.period)
        gamma_m = sigma_u2_hat / truth.sigma_v2

    R_m = _statistics(ys, det, origin, ofdm.N, truth.sigma_v2)
    if cfg.M == 1:
        epsilon = optimal_threshold(float(gamma_m[0]), det.J_total)
        detected = ml_detect(R_m[0], epsilon)
        ber_analytic = min_ber_single(float(truth.gamma[0]), true_det.J_total).p_e
        p_fa_chi2 = chi2_false_alarm(epsilon, det.J_total)
    else:
        detected, weights, _ = detect_combined(R_m, gamma_m, det.J_total, cfg.combiner, cfg.grid_step)
        if cfg.sync_mode != "genie":
            weights = combiner_weights(cfg.combiner, truth.gamma, true_det.J_total, cfg.grid_step)
        ber_analytic = min_ber_multi(weights, truth.gamma, true_det.J_total).p_e
        p_fa_chi2 = float("nan")
    log.debug(f"trial: sent={sent} detected={detected} R={np.round(R_m, 4)} gamma={np.round(truth.gamma, 3)}")
    return TrialOutcome(sent, detected, ber_analytic, float(np.mean(truth.gamma)), p_fa_chi2)


def run_sync_trial(cfg, budget, rng):
    """One protocol frame; returns the BD and receiver estimates with the true backscatter power."""
    channels = sample_channels(cfg.geometry, cfg.M, cfg.tau_f, cfg.tau_h, cfg.pdp_decay,
                               budget.gain_f, budget.gain_h, budget.gain_g, rng)
    sent = int(rng.integers(2))
    _, _, Dh_hat, sync, _ = _estimated_link(cfg, budget, channels, sent, rng)
    sigma_u2 = float(_true_gamma(cfg, channels, budget.sigma2).sigma_u2[0])
    return SyncOutcome(Dh_hat, sync.D_hat, sync.L_hat, sync.sigma_u2_hat, sigma_u2)


# ----------------------------------------------
# Chunked execution
def _run_chunk(task):
    """
    Trials [start, stop) of one grid point, reduced to sums.

    Each trial draws from trial_rng(seed, point, trial), so the sums do not depend on chunking.
    """
    cfg, budget, point, start, stop, kind = task
    if kind == "ber":
        sums = dict(n=0, errors=0, analytic=0.0, analytic_n=0, gamma=0.0, chi2=0.0, chi2_n=0)
        for trial in range(start, stop):
            outcome = run_trial(cfg, budget, trial_rng(cfg.seed, point, trial))
            sums["n"] += 1
            sums["errors"] += int(outcome.sent != outcome.detected)
            sums["gamma"] += outcome.gamma
            if not math.isnan(outcome.ber_analytic):
                sums["analytic"] += outcome.ber_analytic
                sums["analytic_n"] += 1
            if not math.isnan(outcome.p_fa_chi2):
                sums["chi2"] += outcome.p_fa_chi2
                sums["chi2_n"] += 1
        return sums

    geometry = cfg.geometry
    truth = {"D_h": geometry.Dh, "D": geometry.D, "L": geometry.L}
    sums = {name: [0.0, 0.0] for name in list(truth) + ["sigma_u2"]}
    sums["n"] = 0
    for trial in range(start, stop):
        outcome = run_sync_trial(cfg, budget, trial_rng(cfg.seed, point, trial))
        errors = {
            "D_h": (outcome.Dh_hat - truth["D_h"]) ** 2 / truth["D_h"] ** 2,
            "D": (outcome.D_hat - truth["D"]) ** 2 / truth["D"] ** 2,
            "L": (outcome.L_hat - truth["L"]) ** 2 / truth["L"] ** 2,
            "sigma_u2": ((outcome.sigma_u2_hat - outcome.sigma_u2) ** 2 / outcome.sigma_u2 ** 2
                         if outcome.sigma_u2 > 0 else 0.0),
        }
        for name, value in errors.items():
            sums[name][0] += value
            sums[name][1] += value ** 2
        sums["n"] += 1
    return sums


def _merge(parts):
    total = None
    for part in parts:
        if total is None:
            total = {k: (list(v) if isinstance(v, list) else v) for k, v in part.items()}
            continue
        for key, value in part.items():
            if isinstance(value, list):
                total[key] = [a + b for a, b in zip(total[key], value)]
            else:
                total[key] += value
    return total


def run_point(cfg, budget, point, kind="ber", executor=None):
    """All trials of one grid point, in fixed-size chunks (process pool when given)."""
    tasks = [(cfg, budget, point, start, min(start + cfg.chunk_size, cfg.trials), kind)
             for start in range(0, cfg.trials, cfg.chunk_size)]
    parts = executor.map(_run_chunk, tasks) if executor is not None else map(_run_chunk, tasks)
    return _merge(parts)


class _Runner(object):
    """Context manager handing out a process pool when cfg.workers > 1."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.pool = None

    def __enter__(self):
        if self.cfg.workers > 1:
            self.pool = ProcessPoolExecutor(max_workers=self.cfg.workers)
        return self.pool

    def __exit__(self, *exc):
        if self.pool is not None:
            self.pool.shutdown()
        return False


# ----------------------------------------------
# Sweeps
@dataclass
class SweepResult:
    """Rows of one sweep plus the notes that go into the metadata sidecar."""
    rows: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def extend(self, other):
        self.rows.extend(other.rows)
        self.notes.update(other.notes)
        return self

    def to_frame(self):
        return pd.DataFrame(self.rows)


def ci_halfwidth(p, n):
    """95% normal-approximation half-width 1.96 sqrt(p(1-p)/n)."""
    return 1.96 * math.sqrt(p * (1.0 - p) / n) if n > 0 else float("nan")


def _ber_row(cfg, x_value, x_unit, sums, series):
    ber = sums["errors"] / sums["n"]
    return {
        "series": series,
        "x_value": x_value,
        "x_unit": x_unit,
        "ber_empirical": ber,
        "ber_analytic": sums["analytic"] / sums["analytic_n"] if sums["analytic_n"] else float("nan"),
        "trials": sums["n"],
        "ci_halfwidth": ci_halfwidth(ber, sums["n"]),
        "gamma_mean_db": float(linear_to_db(sums["gamma"] / sums["n"])) if sums["gamma"] > 0 else float("nan"),
        "p_fa_chi2": sums["chi2"] / sums["chi2_n"] if sums["chi2_n"] else float("nan"),
        "detector": cfg.detector,
        "combiner": cfg.combiner if cfg.M > 1 else "none",
        "K": cfg.K,
        "M": cfg.M,
        "seed": cfg.seed,
    }


def _series_name(cfg):
    if cfg.detector == "benchmark":
        return f"benchmark K={cfg.K} M={cfg.M}"
    if cfg.M > 1:
        return f"{cfg.combiner} K={cfg.K} M={cfg.M}"
    return f"proposed K={cfg.K}"


def run_ber_sweep(cfg, series=None):
    """
    BER versus average detection SNR over cfg.snr_grid.

    Returns:
        SweepResult: One row per SNR point with the fading-averaged analytic overlay.
    """
    series = series or _series_name(cfg)
    result = SweepResult()
    with _Runner(cfg) as executor:
        for point, snr_db in enumerate(tqdm(cfg.snr_grid, desc=series, leave=False)):
            sums = run_point(cfg, link_budget(cfg, snr_db), point, "ber", executor)
            row = _ber_row(cfg, snr_db, "dB", sums, series)
            log.info(f"[{series}] SNR {snr_db:5.1f} dB: BER {row['ber_empirical']:.3e} "
                     f"(analytic {row['ber_analytic']:.3e}, {row['trials']} trials)")
            result.rows.append(row)
    return result


def run_distance_sweep(cfg, distances=None):
    """BER versus BD-to-receiver distance at fixed noise and direct-link power."""
    distances = tuple(distances or cfg.distances)
    series = f"{_series_name(cfg)} distance"
    result = SweepResult()
    with _Runner(cfg) as executor:
        for point, distance in enumerate(tqdm(distances, desc=series, leave=False)):
            local = replace(cfg, D_rd=distance)
            budget = distance_budget(cfg, distance)
            sums = run_point(local, budget, point, "ber", executor)
            row = _ber_row(local, distance, "m", sums, series)
            row["snr_db"] = budget.snr_db
            log.info(f"[{series}] {distance:5.2f} m (avg SNR {budget.snr_db:5.1f} dB): "
                     f"BER {row['ber_empirical']:.3e} (analytic {row['ber_analytic']:.3e})")
            result.rows.append(row)
    result.notes["distance_reference"] = (f"noise and direct link calibrated for {cfg.distance_ref_snr_db} dB "
                                          f"average SNR at {cfg.D_rd} m")
    return result


def run_mse_sweep(cfg):
    """Normalized MSE of the BD timing, minimum delay, maximum spread and power estimates versus SNR."""
    local = replace(cfg, sync_mode="estimated")
    geometry = local.geometry
    if min(geometry.Dh, geometry.D, geometry.L) == 0:
        raise ConfigurationError("normalized MSE needs nonzero true D_h, D and L")
    result = SweepResult()
    with _Runner(local) as executor:
        for point, snr_db in enumerate(tqdm(local.snr_grid, desc=f"mse K2={local.K2}", leave=False)):
            sums = run_point(local, link_budget(local, snr_db), point, "sync", executor)
            n = sums["n"]
            for name in ("D_h", "D", "L", "sigma_u2"):
                first, second = sums[name]
                mse = first / n
                spread = math.sqrt(max(second / n - mse ** 2, 0.0))
                result.rows.append({
                    "series": f"{name} K1={local.K1} K2={local.K2}",
                    "x_value": snr_db,
                    "x_unit": "dB",
                    "mse": mse,
                    "ber_analytic": float("nan"),
                    "trials": n,
                    "ci_halfwidth": 1.96 * spread / math.sqrt(n),
                    "detector": local.detector,
                    "combiner": local.combiner if local.M > 1 else "none",
                    "K": local.K,
                    "M": local.M,
                    "seed": local.seed,
                })
            log.info(f"[mse K2={local.K2}] SNR {snr_db:5.1f} dB: "
                     + ", ".join(f"{name} {sums[name][0] / n:.3e}" for name in ("D_h", "D", "L")))
    result.notes["mse_convention"] = "normalized MSE = mean((estimate - true)^2) / true^2"
    return result


def run_combiner_sweep(cfg, combiners=None, M=2):
    """BER of every combining scheme at M antennas, plus the single-antenna reference."""
    combiners = combiners or list(COMBINERS)
    result = run_ber_sweep(replace(cfg, M=1))
    reference = result.to_frame()
    optimal = None
    for combiner in combiners:
        sweep = run_ber_sweep(replace(cfg, M=M, combiner=combiner))
        result.extend(sweep)
        frame = sweep.to_frame()
        if combiner == "optimal":
            optimal = frame
            log.info(f"optimal combining, M={M}: SNR gain {snr_gain_db(reference, frame):.2f} dB over M=1")
        elif optimal is not None:
            log.info(f"{combiner}, M={M}: SNR loss {-snr_gain_db(optimal, frame):.2f} dB versus optimal")
    return result


def run_antenna_sweep(cfg, antennas=(1, 2, 4, 6), combiner="egc"):
    """BER versus SNR for several antenna counts with one combining scheme."""
    result = SweepResult()
    reference = None
    for M in antennas:
        sweep = run_ber_sweep(replace(cfg, M=M, combiner=combiner))
        result.extend(sweep)
        frame = sweep.to_frame()
        if reference is None:
            reference = frame
        else:
            log.info(f"{combiner}, M={M}: SNR gain {snr_gain_db(reference, frame):.2f} dB over M={antennas[0]}")
    return result


# ----------------------------------------------
# Reading gains off BER curves
def snr_at_ber(frame, target=settings.TARGET_BER, column="ber_empirical"):
    """
    SNR (dB) at which a BER curve first falls to target, interpolated linearly in (dB, log10 BER).

    Returns:
        float: NaN when the curve never crosses the target.
    """
    data = frame[["x_value", column]].dropna().sort_values("x_value")
    data = data[data[column] > 0]
    x = data["x_value"].to_numpy(dtype=float)
    logs = np.log10(data[column].to_numpy(dtype=float))
    goal = math.log10(target)
    for i in range(len(x)):
        if logs[i] <= goal:
            if i == 0:
                return float(x[0])
            weight = (logs[i - 1] - goal) / (logs[i - 1] - logs[i])
            return float(x[i - 1] + weight * (x[i] - x[i - 1]))
    return float("nan")


def snr_gain_db(reference, candidate, target=settings.TARGET_BER, column="ber_empirical"):
    """SNR saved by candidate over reference at the target BER."""
    return snr_at_ber(reference, target, column) - snr_at_ber(candidate, target, column)


# ----------------------------------------------
# Closed-form tables
def fading_gamma_samples(cfg, snr_db, count, rng):
    """Realized single-antenna detection SNRs of `count` independent channel draws."""
    budget = link_budget(cfg, snr_db)
    profile = np.exp(-np.arange(cfg.tau_h) / cfg.pdp_decay)
    h = cscg(rng, (count, cfg.tau_h), budget.gain_h * profile / profile.sum())
    g = cscg(rng, count, budget.gain_g)
    sigma_u2 = 4.0 * cfg.ofdm.p * abs(cfg.bd.alpha) ** 2 * np.abs(g) ** 2 * np.sum(np.abs(h) ** 2, axis=1)
    return sigma_u2 / (2.0 * budget.sigma2)


def analytic_table(cfg, K_values=(1, 2, 3), fading_draws=5000):
    """
    Closed-form single-antenna figures per SNR grid point and BD symbol length.

    ber_analytic is the minimum BER at the average SNR; ber_fading averages it over
    fading_draws channel realizations, which is what a BER sweep overlays.
    """
    J = cfg.geometry.J
    rows = []
    for K in K_values:
        J_total = K * J
        rng = trial_rng(cfg.seed, K)
        for snr_db in cfg.snr_grid:
            gamma = float(db_to_linear(snr_db))
            epsilon = optimal_threshold(gamma, J_total)
            ber = min_ber_single(gamma, J_total)
            p_fa_approx, p_md_approx = ber_approximations(gamma, J_total)
            draws = fading_gamma_samples(cfg, snr_db, fading_draws, rng)
            rows.append({
                "series": f"analytic K={K}",
                "x_value": snr_db,
                "x_unit": "dB",
                "threshold": epsilon,
                "p_fa": ber.p_fa,
                "p_md": ber.p_md,
                "ber_analytic": ber.p_e,
                "ber_fading": float(np.mean([min_ber_single(g, J_total).p_e for g in draws])),
                "p_fa_approx": p_fa_approx,
                "p_md_approx": p_md_approx,
                "p_fa_chi2": chi2_false_alarm(epsilon, J_total),
                "J_total": J_total,
                "rate_bps": bd_rate(cfg.ofdm.fs, cfg.ofdm.N, cfg.ofdm.Nc, K),
                "K": K,
                "M": 1,
                "seed": cfg.seed,
            })
    return SweepResult(rows=rows)


# ----------------------------------------------
# Self test
def _intersection_oracle(mu0, var0, mu1, var1):
    """Root of log N(x; mu0, var0) = log N(x; mu1, var1) above mu0, by bracketing."""
    def gap(x):
        return ((x - mu1) ** 2 / (2 * var1) - (x - mu0) ** 2 / (2 * var0)
                + 0.5 * math.log(var1 / var0))
    upper = mu1 + 20.0 * math.sqrt(var1) + 1.0
    return optimize.brentq(gap, mu0, upper, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def run_selftest(cfg, draws=50):
    """
    Deterministic invariant checks of the link model and the closed forms.

    Returns:
        list: (name, passed, detail) per check.
    """
    checks = []
    rng = trial_rng(cfg.seed)
    ofdm, geometry = cfg.ofdm, cfg.geometry

    frame = generate_ofdm_frame(ofdm, 4, rng)
    ok = all(cp_window_equal(frame, ofdm, k, (0, ofdm.Nc)) for k in range(4))
    checks.append(("cp repetition", ok, "4 symbols"))

    pvalue = spectral_flatness_pvalue(generate_ofdm_frame(ofdm, 1000, rng), ofdm, 1000)
    checks.append(("spectral flatness", pvalue >= 1e-3, f"chi-square p = {pvalue:.3f}"))

    det = detector_config(geometry, cfg.K, ofdm.period)
    budget = link_budget(cfg, 20.0)
    worst = 0.0
    for _ in range(draws):
        channels = sample_channels(geometry, 1, cfg.tau_f, cfg.tau_h, cfg.pdp_decay,
                                   budget.gain_f, budget.gain_h, budget.gain_g, rng)
        s = generate_ofdm_frame(ofdm, 1 + cfg.K, rng)
        waveform = bd_waveform([0], cfg.bd, ofdm, ofdm.period + geometry.Dh)
        reflected = backscatter(apply_channel(s, channels.h), waveform, cfg.bd.alpha)
        y = superpose(apply_channel(s, channels.f[0]), apply_channel(reflected, channels.g_cir(0)))
        z = np.concatenate([difference_signal(y, ofdm.N, det, q, ofdm.period).samples for q in range(cfg.K)])
        worst = max(worst, float(np.max(np.abs(z)) / np.max(np.abs(y.samples))))
    checks.append(("interference cancellation", worst <= 1e-12, f"max |z|/max |y| = {worst:.2e}"))

    x = bd_waveform([1], cfg.bd, ofdm).samples.reshape(-1, ofdm.period)
    half = ofdm.period // 2
    checks.append(("waveform sign structure", bool(np.all(x[:, :half] == -x[:, half:])), "bit 1"))

    worst = 0.0
    for gamma in np.logspace(-2, 3, 10):
        for J in (10, 20, 40, 59, 80, 100, 150, 200, 300, 500):
            oracle = _intersection_oracle(1.0, 1.0 / J, gamma + 1.0, (gamma + 1.0) ** 2 / J)
            worst = max(worst, abs(optimal_threshold(gamma, J) - oracle))
    checks.append(("threshold oracle", worst <= 1e-9, f"max deviation {worst:.2e}"))

    worst = 0.0
    for gamma in (0.1, 1.0, 3.0, 10.0, 1000.0):
        for J in (10, 59, 200):
            f1, f2 = threshold_margins(gamma, J)
            worst = max(worst, abs(f1 ** 2 - f2 ** 2 - 2.0 * math.log1p(gamma)))
    checks.append(("margin identity", worst <= 1e-9, f"max deviation {worst:.2e}"))

    Js = np.arange(10, 201, 10)
    ok = all(np.all(np.diff([optimal_threshold(g, J) for J in Js]) <= 1e-15) for g in (0.5, 2.0, 30.0))
    ok = ok and abs(optimal_threshold(2.0, 10 ** 12) - 1.5) < 1e-5
    checks.append(("threshold limit and decrease in J", ok, "gamma in {0.5, 2, 30}"))

    ok = all(np.all(np.diff([min_ber_single(g, J).p_e for J in Js]) <= 0) for g in (0.5, 2.0, 30.0))
    checks.append(("minimum BER decreases in J", ok, "J = 10..200"))

    rates = [bd_rate(ofdm.fs, ofdm.N, ofdm.Nc, K) for K in (1, 2, 3)]
    ok = math.isclose(rates[0], 2 * rates[1]) and math.isclose(rates[0], 3 * rates[2])
    checks.append(("rate scaling", ok, f"{rates[0]:.1f} bps at K=1"))

    first = run_trial(cfg, budget, trial_rng(cfg.seed, 0, 0))
    second = run_trial(cfg, budget, trial_rng(cfg.seed, 0, 0))
    same = np.array_equal(np.asarray(first, dtype=float), np.asarray(second, dtype=float), equal_nan=True)
    checks.append(("determinism", same, str(first)))

    for name, passed, detail in checks:
        (log.info if passed else log.error)(f"selftest {name}: {'ok' if passed else 'FAILED'} ({detail})")
    return checks
