# -*- coding: utf-8 -*-
"""Tests for the signal carrier, random streams and unit helpers."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from utils.util_gen import (AmbcError, ComplexSignal, DimensionError, InvariantError, RangeError, cscg,
                            db_to_linear, linear_to_db, superpose, trial_rng)


class TestComplexSignal:
    def test_window_on_global_timeline(self):
        sig = ComplexSignal(np.arange(10), start_index=100)
        assert_array_equal(sig.window(102, 105), [2, 3, 4])
        assert sig.stop_index == 110
        assert len(sig) == 10

    def test_window_outside_span_raises(self):
        sig = ComplexSignal(np.arange(10), start_index=100)
        with pytest.raises(RangeError):
            sig.window(99, 105)
        with pytest.raises(RangeError):
            sig.window(105, 111)

    def test_rejects_nan_and_matrices(self):
        with pytest.raises(InvariantError):
            ComplexSignal([1.0, np.nan])
        with pytest.raises(DimensionError):
            ComplexSignal(np.ones((2, 2)))

    def test_errors_share_a_base(self):
        assert issubclass(RangeError, AmbcError)
        assert issubclass(AmbcError, ValueError)


class TestSuperpose:
    def test_union_span_with_zero_fill(self):
        a = ComplexSignal([1, 1, 1], 0)
        b = ComplexSignal([2, 2], 4)
        out = superpose(a, b)
        assert out.start_index == 0
        assert_array_equal(out.samples, [1, 1, 1, 0, 2, 2])

    def test_overlap_adds(self):
        out = superpose(ComplexSignal([1, 1], 0), ComplexSignal([1j, 1j], 1))
        assert_array_equal(out.samples, [1, 1 + 1j, 1j])

    def test_needs_input(self):
        with pytest.raises(DimensionError):
            superpose()


class TestStreams:
    def test_trial_rng_depends_only_on_counters(self):
        a = trial_rng(7, 2, 11).standard_normal(4)
        b = trial_rng(7, 2, 11).standard_normal(4)
        c = trial_rng(7, 2, 12).standard_normal(4)
        assert_array_equal(a, b)
        assert not np.allclose(a, c)

    def test_cscg_variance_and_circularity(self, rng):
        x = cscg(rng, 200000, variance=3.0)
        assert_allclose(np.mean(np.abs(x) ** 2), 3.0, rtol=0.02)
        assert abs(np.mean(x ** 2)) < 0.05

    def test_db_conversions(self):
        assert db_to_linear(30) == pytest.approx(1000.0)
        assert_allclose(db_to_linear([0, 10]), [1.0, 10.0])
        assert linear_to_db(100.0) == pytest.approx(20.0)
