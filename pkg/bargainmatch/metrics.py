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
# DOCS
# =============================================================================

"""Per task and per slot records of a run and the metrics computed from them.

* **APR** (average processing rate): work processed per second of completion
  delay, ``sum(X) / sum(T_cmp - T_req)`` over the completed tasks. ``X`` is
  the required cycles (``mode="cycles"``) or the input bits
  (``mode="bits"``).
* **ACD** (average completion delay): mean completion delay of the
  completed tasks.
* **ACR** (average completion ratio): completed over generated tasks.

Undefined values (no completed or no generated task) are ``nan``.

"""

__all__ = [
    "TaskRecord",
    "SlotRecord",
    "MetricsSink",
    "RunMetrics",
    "apr",
    "acd",
    "acr",
    "summarize",
]


# =============================================================================
# IMPORTS
# =============================================================================

import math

import attr

import matplotlib.pyplot as plt

import numpy as np

import pandas as pd

from .config import APR_MODES
from .core import ContractViolation


# =============================================================================
# CONSTANTS
# =============================================================================

#: Columns of the per slot table, in order.
SLOT_COLUMNS = (
    "slot",
    "sw",
    "sw_cum",
    "veh_util",
    "srv_util",
    "generated",
    "committed",
    "failed",
    "runtime_ms",
)

PLOT_KINDS = ("sw", "sw_cum", "parties")


# =============================================================================
# RECORDS
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class TaskRecord:
    """Outcome of one generated task.

    ``delay`` is the completion delay (generation to result delivery) of a
    completed task and ``nan`` otherwise.

    """

    task_id: int
    owner: int
    gen_slot: int
    d_in: float
    c_req: float
    completed: bool
    kind: str = None
    server: int = None
    delay: float = math.nan
    completion_slot: int = None
    reason: str = ""


@attr.s(frozen=True, auto_attribs=True)
class SlotRecord:
    """What happened in one slot."""

    slot: int
    sw: float = 0.0
    vehicle_utility: float = 0.0
    server_utility: float = 0.0
    generated: int = 0
    committed: int = 0
    failed: int = 0
    runtime: float = 0.0


# =============================================================================
# METRICS
# =============================================================================


def _completed(records):
    return [r for r in records if r.completed]


def apr(records, mode="cycles"):
    """Average processing rate of the completed tasks.

    Parameters
    ----------
    records : iterable of TaskRecord
    mode : {"cycles", "bits"}

    Returns
    -------
    float
        Cycles/s or bits/s; ``nan`` without completed task.

    """
    if mode not in APR_MODES:
        raise ContractViolation(f"'mode' must be one of {APR_MODES}")
    done = _completed(records)
    elapsed = math.fsum(r.delay for r in done)
    if not done or elapsed <= 0:
        return math.nan
    attr_name = "c_req" if mode == "cycles" else "d_in"
    return math.fsum(getattr(r, attr_name) for r in done) / elapsed


def acd(records):
    """Average completion delay in seconds (``nan`` without completions)."""
    done = _completed(records)
    if not done:
        return math.nan
    return math.fsum(r.delay for r in done) / len(done)


def acr(records):
    """Ratio of generated tasks completed (``nan`` without tasks)."""
    records = list(records)
    if not records:
        return math.nan
    return len(_completed(records)) / len(records)


# =============================================================================
# STREAMING
# =============================================================================


class MetricsSink:
    """Accumulates the records emitted by the engine during a run."""

    def __init__(self):
        self.slots = []
        self.tasks = []
        self.sw_cumulative = 0.0
        self.n_succ = 0
        self.delay_sum = 0.0
        self.cycles_sum = 0.0
        self.bits_sum = 0.0

    def add_slot(self, record):
        self.slots.append(record)
        self.sw_cumulative += record.sw

    def add_task(self, record):
        self.tasks.append(record)
        if record.completed:
            self.n_succ += 1
            self.delay_sum += record.delay
            self.cycles_sum += record.c_req
            self.bits_sum += record.d_in

    def streaming_apr(self, mode="cycles"):
        if not self.n_succ or self.delay_sum <= 0:
            return math.nan
        work = self.cycles_sum if mode == "cycles" else self.bits_sum
        return work / self.delay_sum

    def finalize(self, scheme, seed, apr_mode="cycles", **extra):
        """Freeze the records into a :class:`RunMetrics`.

        The metrics are recomputed from the raw records.

        """
        tasks = tuple(sorted(self.tasks, key=lambda r: r.task_id))
        return RunMetrics(
            scheme=scheme,
            seed=seed,
            slots=tuple(self.slots),
            tasks=tasks,
            apr=apr(tasks, apr_mode),
            apr_mode=apr_mode,
            acd=acd(tasks),
            acr=acr(tasks),
            **extra,
        )


@attr.s(frozen=True, auto_attribs=True, repr=False)
class RunMetrics:
    """Results of one run.

    Attributes
    ----------
    scheme : str
    seed : int
    slots : tuple of SlotRecord
    tasks : tuple of TaskRecord
        One record per generated task.
    apr, acd, acr : float
    apr_mode : str
    runtime : float
        Wall clock time of the whole run in milliseconds.
    clamp_events : int
        Partition shares moved into ``[0, 1]`` during the run.

    """

    scheme: str
    seed: int
    slots: tuple
    tasks: tuple
    apr: float
    apr_mode: str
    acd: float
    acr: float
    runtime: float = 0.0
    clamp_events: int = 0

    def __repr__(self):
        return (
            f"RunMetrics(scheme={self.scheme}, seed={self.seed}, "
            f"slots={len(self.slots)}, sw_cum={self.sw_total:.6g}, "
            f"acr={self.acr:.4g})"
        )

    @property
    def n_gen(self):
        return len(self.tasks)

    @property
    def n_succ(self):
        return sum(1 for t in self.tasks if t.completed)

    @property
    def sw(self):
        return np.array([s.sw for s in self.slots], dtype=float)

    @property
    def vehicle_utility(self):
        return np.array([s.vehicle_utility for s in self.slots], dtype=float)

    @property
    def server_utility(self):
        return np.array([s.server_utility for s in self.slots], dtype=float)

    @property
    def sw_total(self):
        return math.fsum(s.sw for s in self.slots)

    def cumulative_sw(self):
        """Cumulative social welfare after every slot."""
        return np.cumsum(self.sw)

    @property
    def mean_slot_runtime(self):
        """Mean wall clock time of a slot in milliseconds."""
        if not self.slots:
            return math.nan
        return float(np.mean([s.runtime for s in self.slots]))

    def as_dict(self):
        """Aggregates of the run."""
        return {
            "scheme": self.scheme,
            "seed": self.seed,
            "slots": len(self.slots),
            "sw_cum": self.sw_total,
            "veh_util": float(self.vehicle_utility.sum()),
            "srv_util": float(self.server_utility.sum()),
            "apr": self.apr,
            "apr_mode": self.apr_mode,
            "acd": self.acd,
            "acr": self.acr,
            "n_gen": self.n_gen,
            "n_succ": self.n_succ,
            "runtime_ms": self.runtime,
            "clamp_events": self.clamp_events,
        }

    def as_dataframe(self):
        """Per slot series as a ``pandas.DataFrame`` (one row per slot)."""
        df = pd.DataFrame(
            {
                "slot": [s.slot for s in self.slots],
                "sw": self.sw,
                "sw_cum": self.cumulative_sw(),
                "veh_util": self.vehicle_utility,
                "srv_util": self.server_utility,
                "generated": [s.generated for s in self.slots],
                "committed": [s.committed for s in self.slots],
                "failed": [s.failed for s in self.slots],
                "runtime_ms": [s.runtime for s in self.slots],
            },
            columns=list(SLOT_COLUMNS),
        )
        return df

    def tasks_dataframe(self):
        """One row per generated task."""
        return pd.DataFrame(
            [attr.asdict(t) for t in self.tasks],
            columns=[f.name for f in attr.fields(TaskRecord)],
        )

    def plot(self, kind="sw_cum", ax=None, **plot_kws):
        """Draw a series of the run.

        Parameters
        ----------
        kind : {"sw", "sw_cum", "parties"}
            Social welfare per slot, cumulative social welfare or the
            vehicle and server utilities per slot.
        ax : matplotlib axes object, default None.
        `**plot_kws` : keywords
            Options to pass to the matplotlib plotting method.

        Returns
        -------
        ax : matplotlib.axes.Axes

        """
        if kind not in PLOT_KINDS:
            raise ValueError(f"'kind' must be one of {PLOT_KINDS}")
        ax = plt.gca() if ax is None else ax
        slots = [s.slot for s in self.slots]

        if kind == "sw":
            ax.plot(slots, self.sw, label=self.scheme, **plot_kws)
            ax.set_ylabel("Social welfare")
        elif kind == "sw_cum":
            ax.plot(slots, self.cumulative_sw(), label=self.scheme, **plot_kws)
            ax.set_ylabel("Cumulative social welfare")
        else:
            ax.plot(slots, self.vehicle_utility, label="vehicles", **plot_kws)
            ax.plot(slots, self.server_utility, label="servers", **plot_kws)
            ax.set_ylabel("Utility")

        ax.set_xlabel("Slot")
        ax.set_title(f"{self.scheme} (seed {self.seed})")
        ax.legend()
        return ax


# =============================================================================
# ACROSS RUNS
# =============================================================================


def summarize(runs, by=("scheme",)):
    """Mean and standard deviation of the run aggregates.

    Parameters
    ----------
    runs : iterable of RunMetrics or of dicts
        Dicts (e.g. sweep rows) may carry extra grouping keys.
    by : sequence of str
        Grouping columns.

    Returns
    -------
    pandas.DataFrame
        One row per group with ``<metric>_mean`` and ``<metric>_std``
        columns.

    """
    rows = [r.as_dict() if isinstance(r, RunMetrics) else r for r in runs]
    df = pd.DataFrame(rows)
    if df.empty:
        return df
    metrics = [
        c
        for c in ("sw_cum", "apr", "acd", "acr", "runtime_ms")
        if c in df.columns
    ]
    grouped = df.groupby(list(by), sort=True)[metrics].agg(["mean", "std"])
    grouped.columns = [f"{m}_{s}" for m, s in grouped.columns]
    return grouped.reset_index()
