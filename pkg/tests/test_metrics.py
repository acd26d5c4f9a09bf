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

"""bargainmatch.metrics Tests"""


# =============================================================================
# IMPORTS
# =============================================================================

import math

from bargainmatch import metrics
from bargainmatch.core import ContractViolation

from matplotlib.testing.decorators import check_figures_equal

import numpy as np

import pytest


# =============================================================================
# FIXTURES
# =============================================================================


def record(task_id, completed=True, c_req=1e9, d_in=1e6, delay=2.0):
    return metrics.TaskRecord(
        task_id=task_id,
        owner=0,
        gen_slot=0,
        d_in=d_in,
        c_req=c_req,
        completed=completed,
        kind="edge" if completed else None,
        server=0 if completed else None,
        delay=delay if completed else math.nan,
        completion_slot=int(delay * 10) if completed else None,
        reason="" if completed else "no deal",
    )


@pytest.fixture
def run_metrics():
    sink = metrics.MetricsSink()
    for slot, (sw_i, sw_j) in enumerate([(0.5, 0.25), (0.0, 0.0), (1, 0.5)]):
        sink.add_slot(
            metrics.SlotRecord(
                slot=slot,
                sw=sw_i + sw_j,
                vehicle_utility=sw_i,
                server_utility=sw_j,
                generated=1,
                committed=1 if sw_i else 0,
                failed=0 if sw_i else 1,
                runtime=2.0,
            )
        )
    sink.add_task(record(2, delay=1.0, c_req=3e9))
    sink.add_task(record(0))
    sink.add_task(record(1, completed=False))
    return sink.finalize("BARGAIN_MATCH", 7, runtime=10.0, clamp_events=1)


# =============================================================================
# METRICS
# =============================================================================


def test_apr_single_task():
    assert metrics.apr([record(0)]) == 5e8
    assert metrics.apr([record(0)], mode="bits") == 5e5


def test_apr_ignores_failed_tasks():
    records = [record(0), record(1, completed=False), record(2, delay=2.0)]
    assert metrics.apr(records) == pytest.approx(2e9 / 4.0)


def test_apr_invalid_mode():
    with pytest.raises(ContractViolation):
        metrics.apr([record(0)], mode="joules")


def test_acd():
    records = [record(0, delay=1.0), record(1, delay=3.0), record(2, False)]
    assert metrics.acd(records) == 2.0


def test_acr():
    records = [record(i, completed=i != 3) for i in range(4)]
    assert metrics.acr(records) == 0.75


def test_undefined_metrics_are_nan():
    failed = [record(0, completed=False)]
    for values in ([], failed):
        assert math.isnan(metrics.apr(values))
        assert math.isnan(metrics.acd(values))
    assert math.isnan(metrics.acr([]))
    assert metrics.acr(failed) == 0


def test_streaming_apr_matches_the_batch_value():
    sink = metrics.MetricsSink()
    records = [record(0), record(1, c_req=4e9, delay=0.5), record(2, False)]
    for r in records:
        sink.add_task(r)
    np.testing.assert_allclose(sink.streaming_apr(), metrics.apr(records))
    np.testing.assert_allclose(
        sink.streaming_apr("bits"), metrics.apr(records, "bits")
    )
    assert math.isnan(metrics.MetricsSink().streaming_apr())


# =============================================================================
# RUN METRICS
# =============================================================================


def test_finalize(run_metrics):
    assert [t.task_id for t in run_metrics.tasks] == [0, 1, 2]
    assert run_metrics.n_gen == 3
    assert run_metrics.n_succ == 2
    np.testing.assert_allclose(run_metrics.apr, 4e9 / 3.0)
    np.testing.assert_allclose(run_metrics.acd, 1.5)
    np.testing.assert_allclose(run_metrics.acr, 2 / 3)
    assert run_metrics.sw_total == 2.25
    assert run_metrics.mean_slot_runtime == 2.0
    np.testing.assert_array_equal(
        run_metrics.cumulative_sw(), [0.75, 0.75, 2.25]
    )
    assert "BARGAIN_MATCH" in repr(run_metrics)


def test_as_dict(run_metrics):
    summary = run_metrics.as_dict()
    assert summary["scheme"] == "BARGAIN_MATCH"
    assert summary["seed"] == 7
    assert summary["slots"] == 3
    assert summary["veh_util"] == 1.5
    assert summary["srv_util"] == 0.75
    assert summary["n_succ"] == 2
    assert summary["runtime_ms"] == 10.0
    assert summary["clamp_events"] == 1


def test_as_dataframe(run_metrics):
    df = run_metrics.as_dataframe()
    assert list(df.columns) == list(metrics.SLOT_COLUMNS)
    assert list(df.slot) == [0, 1, 2]
    np.testing.assert_array_equal(df.sw_cum, [0.75, 0.75, 2.25])
    np.testing.assert_array_equal(df.failed, [0, 1, 0])


def test_tasks_dataframe(run_metrics):
    df = run_metrics.tasks_dataframe()
    assert len(df) == 3
    assert list(df.completed) == [True, False, True]
    assert df.reason[1] == "no deal"


def test_summarize(run_metrics):
    other = metrics.RunMetrics(
        scheme="BARGAIN_MATCH",
        seed=8,
        slots=(),
        tasks=(),
        apr=math.nan,
        apr_mode="cycles",
        acd=math.nan,
        acr=0.5,
    )
    summary = metrics.summarize([run_metrics, other])
    assert len(summary) == 1
    row = summary.iloc[0]
    assert row.scheme == "BARGAIN_MATCH"
    np.testing.assert_allclose(row.acr_mean, (2 / 3 + 0.5) / 2)
    np.testing.assert_allclose(row.sw_cum_mean, 2.25 / 2)
    assert row.sw_cum_std > 0


def test_summarize_by_sweep_value():
    rows = [
        {"scheme": "ELO", "param_value": v, "sw_cum": s, "acr": 1.0}
        for v, s in (("50", 1.0), ("50", 3.0), ("100", 5.0))
    ]
    summary = metrics.summarize(rows, by=("param_value", "scheme"))
    assert list(summary.param_value) == ["100", "50"]
    np.testing.assert_allclose(summary.sw_cum_mean, [5.0, 2.0])
    assert "apr_mean" not in summary.columns


def test_summarize_empty():
    assert metrics.summarize([]).empty


# =============================================================================
# PLOTS
# =============================================================================


@check_figures_equal()
def test_plot_sw_cum(fig_test, fig_ref, run_metrics):
    test_ax = fig_test.subplots()
    run_metrics.plot(ax=test_ax)

    exp_ax = fig_ref.subplots()
    exp_ax.plot([0, 1, 2], [0.75, 0.75, 2.25], label="BARGAIN_MATCH")
    exp_ax.set_ylabel("Cumulative social welfare")
    exp_ax.set_xlabel("Slot")
    exp_ax.set_title("BARGAIN_MATCH (seed 7)")
    exp_ax.legend()


@check_figures_equal()
def test_plot_parties(fig_test, fig_ref, run_metrics):
    test_ax = fig_test.subplots()
    run_metrics.plot("parties", ax=test_ax, ls="--")

    exp_ax = fig_ref.subplots()
    exp_ax.plot([0, 1, 2], [0.5, 0.0, 1.0], label="vehicles", ls="--")
    exp_ax.plot([0, 1, 2], [0.25, 0.0, 0.5], label="servers", ls="--")
    exp_ax.set_ylabel("Utility")
    exp_ax.set_xlabel("Slot")
    exp_ax.set_title("BARGAIN_MATCH (seed 7)")
    exp_ax.legend()


def test_plot_invalid_kind(run_metrics):
    with pytest.raises(ValueError):
        run_metrics.plot("pie")
