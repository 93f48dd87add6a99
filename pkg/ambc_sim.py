# -*- coding: utf-8 -*-
from __future__ import division, print_function, unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"
__version__ = 1
"""
AmBC link simulator: Monte Carlo and closed-form study of ambient backscatter over OFDM carriers.

A passive backscatter device (BD) flips its reflection in the middle of every OFDM symbol to send
bit 1, so the receiver can cancel the direct-link interference through the cyclic prefix and
detect the bit with an energy test.

Key Features:
- BER versus SNR for the proposed detector (K = 1, 2, 3) and the conventional energy detector.
- BER versus BD-to-receiver distance at fixed noise.
- Normalized MSE of the blind timing, delay, spread and power estimates.
- Multi-antenna combining (optimal, MRC, EGC, SC) and antenna-count sweeps with SNR gains at a target BER.
- Closed-form tables (threshold, minimum BER, high-SNR approximations, BD rate) and an invariant self test.
- Results written as CSV with a YAML metadata sidecar; parameters from settings.py, a YAML file and flags.
"""

import argparse
import sys
from dataclasses import replace

import settings
from utils import util_config, util_log, util_simulate, util_store
from utils.util_gen import AmbcError

log = util_log.logger()

COMMANDS = ("ber-sweep", "distance-sweep", "mse-sweep", "combiner-sweep", "antenna-sweep", "analytic", "selftest")


def build_parser():
    """
    Command line: one subcommand per experiment, shared flags on each.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML file of parameter overrides")
    common.add_argument("--scenario", choices=sorted(settings.SCENARIO_CONFIG), help="settings preset")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--trials", type=int, help="trials per grid point")
    common.add_argument("--out", default=settings.OUTPUT_DIR, help="output directory")
    common.add_argument("--workers", type=int, help="worker processes")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING ...")
    common.add_argument("--log-file", default=None, help="also append log records to this file")
    common.add_argument("--snr", type=float, nargs="+", help="average SNR grid in dB")
    common.add_argument("--K", type=int, help="BD symbol length in OFDM symbols")
    common.add_argument("--M", type=int, help="receive antennas")
    common.add_argument("--K2", type=int, help="training length in OFDM symbols")
    common.add_argument("--detector", choices=util_simulate.DETECTORS)
    common.add_argument("--combiner", choices=("optimal", "mrc", "egc", "sc"))
    common.add_argument("--sync-mode", choices=util_simulate.SYNC_MODES)

    parser = argparse.ArgumentParser(prog="ambc_sim", description="Ambient backscatter link simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        cmd = sub.add_parser(command, parents=[common])
        if command == "distance-sweep":
            cmd.add_argument("--distances", type=float, nargs="+", help="BD-to-receiver distances in m")
    return parser


def overrides_from(args):
    return {
        "seed": args.seed,
        "trials": args.trials,
        "workers": args.workers,
        "snr_grid": args.snr,
        "K": args.K,
        "M": args.M,
        "K2": args.K2,
        "detector": args.detector,
        "combiner": args.combiner,
        "sync_mode": args.sync_mode,
    }


def with_K(cfg, K):
    return replace(cfg, bd=replace(cfg.bd, K=K))


def ber_sweep(cfg, args):
    """Proposed detector for each K (unless --K/--detector pin one series) plus the energy-detector baseline."""
    if args.K or args.detector:
        return util_simulate.run_ber_sweep(cfg)
    result = util_simulate.SweepResult()
    frames = {}
    for K in settings.SWEEP_CONFIG["ber-sweep"]["K"]:
        sweep = util_simulate.run_ber_sweep(with_K(cfg, K))
        frames[K] = sweep.to_frame()
        result.extend(sweep)
    result.extend(util_simulate.run_ber_sweep(replace(with_K(cfg, 1), detector="benchmark")))
    base = min(frames)
    for K, frame in frames.items():
        if K != base:
            log.info(f"K={K}: SNR gain {util_simulate.snr_gain_db(frames[base], frame):.2f} dB over K={base} "
                     f"at BER {settings.TARGET_BER:g}")
    return result


def mse_sweep(cfg, args):
    K2_values = [args.K2] if args.K2 else settings.SWEEP_CONFIG["mse-sweep"]["K2"]
    result = util_simulate.SweepResult()
    for K2 in K2_values:
        result.extend(util_simulate.run_mse_sweep(replace(cfg, K2=K2)))
    return result


def combiner_sweep(cfg, args):
    preset = settings.SWEEP_CONFIG["combiner-sweep"]
    combiners = [args.combiner] if args.combiner else preset["combiners"]
    return util_simulate.run_combiner_sweep(cfg, combiners, M=args.M or preset["M"])


def antenna_sweep(cfg, args):
    preset = settings.SWEEP_CONFIG["antenna-sweep"]
    antennas = [1, args.M] if args.M and args.M > 1 else preset["M"]
    return util_simulate.run_antenna_sweep(cfg, antennas, combiner=args.combiner or preset["combiner"])


def analytic(cfg, args):
    K_values = [args.K] if args.K else settings.SWEEP_CONFIG["ber-sweep"]["K"]
    return util_simulate.analytic_table(cfg, K_values)


def run(args):
    """Dispatch one subcommand; returns the process exit code."""
    util_log.configure(args.log_level, args.log_file)
    cfg = util_config.build_config(args.scenario, args.config, overrides_from(args))
    log.info(f"{args.command}: J={cfg.geometry.J}, trials={cfg.trials}, seed={cfg.seed}, workers={cfg.workers}")

    if args.command == "selftest":
        checks = util_simulate.run_selftest(cfg)
        failed = [name for name, passed, _ in checks if not passed]
        log.info(f"selftest: {len(checks) - len(failed)}/{len(checks)} checks passed")
        return 1 if failed else 0

    if args.command == "ber-sweep":
        result = ber_sweep(cfg, args)
    elif args.command == "distance-sweep":
        result = util_simulate.run_distance_sweep(cfg, args.distances)
    elif args.command == "mse-sweep":
        result = mse_sweep(cfg, args)
    elif args.command == "combiner-sweep":
        result = combiner_sweep(cfg, args)
    elif args.command == "antenna-sweep":
        result = antenna_sweep(cfg, args)
    else:
        result = analytic(cfg, args)
    util_store.write_results(result, cfg, args.command, args.out)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except AmbcError as e:
        log.error(f"{args.command} failed: {e}")
        return 2
    except KeyboardInterrupt:
        log.info("Program terminated by user.")
        return 130


if __name__ == "__main__":
    sys.exit(main())
