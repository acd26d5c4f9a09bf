#!/usr/bin/env python
# -*- coding: utf-8 -*-

# The MIT License (MIT)

# Copyright (c) 2024 The bargainmatch developers

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.


# =============================================================================
# DOC
# =============================================================================

"""bargainmatch.verify Tests"""


# =============================================================================
# IMPORTS
# =============================================================================

import math

from bargainmatch import verify
from bargainmatch.matching import Matching, PreferenceLists

import numpy as np

import pytest


# =============================================================================
# HELPERS
# =============================================================================


def nobody_matched(preferences):
    return Matching(
        assignment={},
        held={s: () for s in preferences.server_prefs},
        rejected=tuple(preferences.tasks),
    )


# =============================================================================
# INSTANCES
# =============================================================================


def test_random_corridor():
    rng = np.random.default_rng(0)
    world, tasks, links, mobility = verify.random_corridor(rng, 6, 2)
    assert len(world.vehicles) == len(tasks) == 6
    assert len(world.servers) == 2
    assert world.config.road_length == 2 * world.config.server_radius * 2
    assert set(links) <= {t.task_id for t in tasks}
    assert mobility.server_count == 2


def test_random_market():
    rng = np.random.default_rng(1)
    for synthetic in (True, False):
        for _ in range(5):
            market = verify.random_market(rng, 6, 3, synthetic=synthetic)
            assert isinstance(market, PreferenceLists)
            assert len(market.tasks) <= 6
            assert 1 <= len(market.capacity) <= 3


def test_random_market_with_budgets():
    rng = np.random.default_rng(1)
    for _ in range(5):
        market = verify.random_market(
            rng, 6, 3, synthetic=True, budgets=True
        )
        largest = max((d.f for d in market.deals.values()), default=0)
        for cores, budget in market.capacity.values():
            assert 1 <= cores <= 3
            assert math.isfinite(budget)
            assert largest <= budget


# =============================================================================
# SUITES
# =============================================================================


def test_check_stability():
    report = verify.check_stability(np.random.default_rng(2), 20)
    assert report.passed
    assert report.checked == 20
    assert report.name == "stability"


def test_check_stability_catches_a_broken_matcher():
    report = verify.check_stability(
        np.random.default_rng(2), 20, matcher=nobody_matched
    )
    assert not report.passed
    assert 0 < report.failures <= 20
    assert 1 <= len(report.examples) <= 5
    assert "FAILED" in report.summary()


def test_check_weak_pareto():
    rng = np.random.default_rng(3)
    assert verify.check_weak_pareto(rng, 30).passed
    broken = verify.check_weak_pareto(rng, 30, matcher=nobody_matched)
    assert not broken.passed


def test_check_deal_soundness():
    report = verify.check_deal_soundness(np.random.default_rng(4), 60)
    assert report.passed
    assert report.examples == ()


def test_check_stationarity():
    report = verify.check_stationarity(np.random.default_rng(5), 30)
    assert report.passed
    assert report.checked == 60


@pytest.mark.filterwarnings(
    "ignore::bargainmatch.core.PartitionMonotonicityWarning"
)
def test_check_partitions():
    report = verify.check_partitions((5, 5, (1, 10, 1000)))
    assert report.passed
    assert report.checked == 5 * 5 * 3 * 2 + 3


def test_run_verification():
    reports = verify.run_verification(scale=0.002, seed=0)
    assert [r.name for r in reports] == [
        "stability",
        "weak_pareto",
        "deal_soundness",
        "stationarity",
        "partitions",
    ]
    assert all(r.passed for r in reports)
    assert all("ok" in r.summary() for r in reports)


def test_run_verification_with_a_broken_matcher():
    reports = verify.run_verification(scale=0.01, matcher=nobody_matched)
    by_name = {r.name: r for r in reports}
    assert not by_name["stability"].passed
    assert by_name["deal_soundness"].passed


def test_run_verification_invalid_scale():
    with pytest.raises(ValueError):
        verify.run_verification(scale=0)
