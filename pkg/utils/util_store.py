# -*- coding: utf-8 -*-
from __future__ import division, print_function, unicode_literals

__author__ = 'Ishafizan'
__date__ = "19 Oct 2026"

import hashlib
import json
import os

import yaml

import settings
from utils.util_analysis import bd_rate
from utils.util_log import logger

log = logger()

# Leading columns of every results CSV; sweep-specific extras follow
CSV_COLUMNS = ["series", "x_value", "x_unit", "ber_empirical", "mse", "ber_analytic", "trials", "ci_halfwidth",
               "detector", "combiner", "K", "M", "seed"]


def generate_run_id(params, command):
    """
    Generate a short identifier for a run from the resolved parameters and the subcommand.
    Identical configurations map to the same id, so re-runs overwrite their own files.

    Parameters:
    - params (dict): Resolved parameter set (ExperimentConfig.to_dict()).
    - command (str): CLI subcommand, e.g. "ber-sweep".

    Returns:
    - str: First 8 characters of the MD5 hash.
    """
    combined = f"{command}|{json.dumps(params, sort_keys=True, default=str)}"
    run_id = hashlib.md5(combined.encode('utf-8')).hexdigest()[:8]
    log.debug(f"Generated run ID: {run_id} for {command}")
    return run_id


def build_metadata(cfg, command, run_id, notes=None):
    """
    Sidecar contents: resolved config, tool version and the conventions a reader needs.

    Parameters:
    - cfg (ExperimentConfig): Resolved configuration.
    - command (str): CLI subcommand.
    - run_id (str): Run identifier.
    - notes (dict): Sweep-specific notes (SweepResult.notes).

    Returns:
    - dict: YAML-safe metadata.
    """
    ofdm = cfg.ofdm
    rates = {f"K={K}": round(bd_rate(ofdm.fs, ofdm.N, ofdm.Nc, K), 1) for K in (1, 2, 3)}
    meta = {
        "tool_version": settings.TOOL_VERSION,
        "command": command,
        "run_id": run_id,
        "config": cfg.to_dict(),
        "geometry": dict(vars(cfg.geometry)),
        "conventions": {
            "snr_axis": "ensemble-average linear detection SNR over fading, reported in dB",
            "ber_analytic": "minimum-BER closed form at each trial's realized SNR, averaged over trials",
            "normalized_mse": "mean((estimate - true)^2) / true^2",
            "ci_halfwidth": "1.96 * sqrt(p (1 - p) / trials) for BER rows",
            "bd_rate": (f"fs / (K (N + Nc)) gives {rates} bps; rates quoted as fs / (K N) "
                        f"exclude the CP and come out higher"),
        },
    }
    meta.update(notes or {})
    return meta


def write_results(result, cfg, command, out_dir=None):
    """
    Write a sweep to <out_dir>/<command>-<run_id>.csv plus a .meta.yaml sidecar.

    Parameters:
    - result (SweepResult): Rows and notes of the sweep.
    - cfg (ExperimentConfig): Resolved configuration.
    - command (str): CLI subcommand.
    - out_dir (str): Output directory (settings.OUTPUT_DIR when None).

    Returns:
    - tuple: (csv path, metadata path).
    """
    out_dir = out_dir or settings.OUTPUT_DIR
    run_id = generate_run_id(cfg.to_dict(), command)
    try:
        os.makedirs(out_dir, exist_ok=True)
        frame = result.to_frame()
        ordered = [c for c in CSV_COLUMNS if c in frame.columns]
        frame = frame[ordered + [c for c in frame.columns if c not in ordered]]
        csv_path = os.path.join(out_dir, f"{command}-{run_id}.csv")
        frame.to_csv(csv_path, index=False, encoding='utf-8')

        meta_path = os.path.join(out_dir, f"{command}-{run_id}.meta.yaml")
        with open(meta_path, "w", encoding="utf-8") as handle:
            yaml.safe_dump(build_metadata(cfg, command, run_id, result.notes), handle, sort_keys=False)
    except OSError as e:
        log.error(f"Failed to write results to {out_dir}: {e}")
        raise
    log.info(f"Wrote {len(frame)} rows to {csv_path}")
    log_output_size([csv_path, meta_path])
    return csv_path, meta_path


def format_size(bytes_size):
    """
    Convert bytes to a human-readable format (B, KB, MB, etc.).

    Parameters:
    - bytes_size (int): Size in bytes.

    Returns:
    - str: Human-readable size (e.g., "1.23 MB").
    """
    for unit in ['B', 'KB', 'MB', 'GB', 'TB']:
        if bytes_size < 1024.0:
            return f"{bytes_size:.2f} {unit}"
        bytes_size /= 1024.0
    return f"{bytes_size:.2f} TB"  # Fallback for very large sizes


def log_output_size(paths):
    """Log the number and total size of the files a run produced."""
    try:
        total = sum(os.path.getsize(path) for path in paths)
        log.info(f"Output size: {len(paths)} files ({format_size(total)})")
    except OSError as e:
        log.error(f"Failed to read output size: {e}")
