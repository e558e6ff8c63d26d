# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from internal.precision import chunk_bounds, neumaier_sum, tree_sum


# ============================================================
# Section 1: Compensated sums
# ============================================================
def test_neumaier_recovers_cancelled_terms():
    assert neumaier_sum([1.0, 1e100, 1.0, -1e100]) == 2.0


def test_chunk_bounds_match_array_split():
    for size, chunks in [(10, 3), (7, 7), (1000, 4), (5, 1)]:
        expected = [len(c) for c in np.array_split(np.zeros(size), chunks)]
        assert list(np.diff(chunk_bounds(size, chunks))) == expected


# ============================================================
# Section 2: Parallel reduction
# ============================================================
def test_serial_tree_sum_matches_python_loop():
    rng = np.random.default_rng(3)
    values = rng.standard_normal(10_001) * 1e3
    assert tree_sum(values, 1) == neumaier_sum(values.tolist())


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_parallel_tree_sum_is_repeatable(workers):
    rng = np.random.default_rng(5)
    values = np.log1p(-rng.random(50_000) * 0.9)
    first = tree_sum(values, workers)
    assert tree_sum(values, workers) == first
    assert first == pytest.approx(math.fsum(values), abs=1e-9)


def test_tree_sum_edge_sizes():
    assert tree_sum(np.array([]), 4) == 0.0
    assert tree_sum(np.array([2.5]), 4) == 2.5
