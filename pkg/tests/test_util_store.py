# -*- coding: utf-8 -*-
"""Tests for run ids and the CSV / YAML result files."""

import pandas as pd
import yaml

import settings
from utils.util_simulate import SweepResult
from utils.util_store import CSV_COLUMNS, build_metadata, format_size, generate_run_id, write_results


def sample_result():
    row = {"gamma_mean_db": 9.8, "series": "proposed K=1", "x_value": 10.0, "x_unit": "dB",
           "ber_empirical": 0.01, "ber_analytic": 0.012, "trials": 100, "ci_halfwidth": 0.02,
           "detector": "proposed", "combiner": "none", "K": 1, "M": 1, "seed": 1}
    return SweepResult(rows=[row], notes={"extra": "note"})


class TestRunId:
    def test_stable_and_command_specific(self, cfg):
        params = cfg.to_dict()
        assert generate_run_id(params, "ber-sweep") == generate_run_id(dict(params), "ber-sweep")
        assert generate_run_id(params, "ber-sweep") != generate_run_id(params, "mse-sweep")
        assert len(generate_run_id(params, "ber-sweep")) == 8


class TestWriteResults:
    def test_csv_and_sidecar(self, cfg, tmp_path):
        csv_path, meta_path = write_results(sample_result(), cfg, "ber-sweep", str(tmp_path))
        frame = pd.read_csv(csv_path)
        assert list(frame.columns[:5]) == CSV_COLUMNS[:4] + ["ber_analytic"]
        assert frame.columns[-1] == "gamma_mean_db"
        with open(meta_path, encoding="utf-8") as handle:
            meta = yaml.safe_load(handle)
        assert meta["tool_version"] == settings.TOOL_VERSION
        assert meta["command"] == "ber-sweep"
        assert meta["config"]["trials"] == cfg.trials
        assert meta["geometry"]["J"] == 59
        assert meta["extra"] == "note"

    def test_metadata_quotes_rates(self, cfg):
        meta = build_metadata(cfg, "analytic", "abcd1234")
        assert "17361.1" in meta["conventions"]["bd_rate"]


class TestFormatSize:
    def test_units(self):
        assert format_size(512) == "512.00 B"
        assert format_size(2048) == "2.00 KB"
        assert format_size(3 * 1024 ** 2) == "3.00 MB"
