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

"""Property oracles of the pricing and matching algorithms.

Every suite draws random instances, checks one property on each of them and
returns a :class:`PropertyReport`:

* ``stability``: the matching has no blocking pair, unless resource
  budgets leave the market without any stable matching.
* ``weak_pareto``: no matching makes every task strictly better off.
* ``deal_soundness``: every deal lies inside its price bounds, gives both
  parties a non negative utility and respects the payment budget; the
  bounds zero the utilities.
* ``stationarity``: the closed form allocation zeroes the derivative of the
  vehicle utility and agrees with a numeric maximizer.
* ``partitions``: the shares of both parties add up to one and converge to
  their infinite horizon value.

"""

__all__ = [
    "PropertyReport",
    "random_corridor",
    "random_market",
    "check_stability",
    "check_weak_pareto",
    "check_deal_soundness",
    "check_stationarity",
    "check_partitions",
    "run_verification",
]


# =============================================================================
# IMPORTS
# =============================================================================

import logging
import math
import time
import warnings

import attr

import numpy as np

from scipy import optimize

from .bargaining import negotiate, optimal_allocation, optimal_partitions
from .channel import sample_gains
from .config import ScenarioConfig
from .core import GHZ, PartitionMonotonicityWarning
from .engine import compute_links
from .matching import (
    PreferenceLists,
    build_preferences,
    find_stable_matching,
    run_matching,
    verify_stability,
    verify_weak_pareto,
)
from .mobility import MobilityModel
from .scenario import build_scenario, sample_tasks
from .utility import server_utility, vehicle_utility
from .world import TaskSpec, VehicleState


# =============================================================================
# CONSTANTS
# =============================================================================

logger = logging.getLogger(__name__)

#: Instances of every suite at scale 1.
SUITE_SIZES = {
    "stability": 1000,
    "weak_pareto": 500,
    "deal_soundness": 10000,
    "stationarity": 1000,
}

PARTITION_GRID = (50, 50, (1, 2, 3, 5, 10, 50, 200, 1000))

#: Infinite horizon share of the proposer when both factors are 0.9.
LIMIT_SHARE = 0.9 - 0.1 / 0.19


# =============================================================================
# REPORT
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class PropertyReport:
    """Outcome of one property suite."""

    name: str
    checked: int
    failures: int = 0
    examples: tuple = ()
    seconds: float = 0.0
    notes: tuple = ()

    @property
    def passed(self):
        return self.failures == 0

    def summary(self):
        status = "ok" if self.passed else "FAILED"
        line = (
            f"{self.name:<15} {status:<6} checked={self.checked} "
            f"failures={self.failures} ({self.seconds:.2f} s)"
        )
        extra = [f"    {e}" for e in self.examples + self.notes]
        return "\n".join([line] + extra)


class _Collector:
    def __init__(self, name, max_examples=5):
        self.name = name
        self.checked = 0
        self.failures = 0
        self.examples = []
        self.notes = []
        self.max_examples = max_examples
        self.started = time.perf_counter()

    def check(self, ok, message):
        self.checked += 1
        if not ok:
            self.failures += 1
            if len(self.examples) < self.max_examples:
                self.examples.append(message)

    def report(self):
        return PropertyReport(
            name=self.name,
            checked=self.checked,
            failures=self.failures,
            examples=tuple(self.examples),
            seconds=time.perf_counter() - self.started,
            notes=tuple(self.notes),
        )


# =============================================================================
# INSTANCES
# =============================================================================


def random_corridor(rng, n_vehicles, n_servers, busy=True):
    """A short corridor where every vehicle has a pending task.

    Parameters
    ----------
    rng : numpy.random.Generator
    n_vehicles, n_servers : int
    busy : bool, default True
        Occupy a random number of cores of every edge server.

    Returns
    -------
    world, tasks, links, mobility

    """
    base = ScenarioConfig()
    config = ScenarioConfig(
        road_length=2 * base.server_radius * n_servers,
        vehicle_count=n_vehicles,
        server_count=n_servers,
        task_gen_probability=1.0,
        horizon=1,
        rng_seed=int(rng.integers(2**32)),
    )
    world = build_scenario(config)
    if busy:
        for server in world.servers:
            for _ in range(int(rng.integers(0, server.cores))):
                server.occupy(0, server.core_capacity, 1)
    mobility = MobilityModel.from_config(config)
    tasks = sample_tasks(world, 0)
    gains = sample_gains(world)
    links, _, _ = compute_links(world, tasks, gains, mobility)
    return world, tasks, links, mobility


def _synthetic_market(rng, n_tasks, n_servers, budgets):
    table = {}
    for task in range(n_tasks):
        for server in range(n_servers):
            if rng.random() < 0.7:
                table[task, server] = (
                    rng.uniform(0.01, 1),
                    rng.uniform(0.01, 1),
                    rng.uniform(0.5, 2) * GHZ,
                )
    largest = max((f for _, _, f in table.values()), default=GHZ)
    capacity = {
        s: (
            int(rng.integers(1, 4)),
            rng.uniform(1, 3) * largest if budgets else math.inf,
        )
        for s in range(n_servers)
    }
    return PreferenceLists.from_utilities(table, capacity)


def random_market(
    rng, max_tasks=10, max_servers=4, synthetic=False, budgets=False
):
    """Preferences of a random instance.

    The realistic markets come from the deals negotiated in a random
    corridor (the cloud counts as one of the ``max_servers``); the synthetic
    ones draw the utilities directly, with core capacities only unless
    ``budgets`` also draws a resource budget between one and three times
    the largest request.

    Returns
    -------
    PreferenceLists

    """
    n_tasks = int(rng.integers(1, max_tasks + 1))
    if synthetic:
        n_servers = int(rng.integers(1, max_servers + 1))
        return _synthetic_market(rng, n_tasks, n_servers, budgets)
    n_servers = int(rng.integers(1, max_servers))
    world, tasks, links, mobility = random_corridor(rng, n_tasks, n_servers)
    return build_preferences(world, tasks, links, 0, mobility=mobility)


def _random_vehicle(rng):
    return VehicleState(
        vid=0,
        x=0.0,
        y=0.0,
        speed=10.0,
        heading=1,
        f_max=1 * GHZ,
        energy_budget=3600.0,
        payment_budget=20.0,
        weight=rng.uniform(0.2, 0.8),
        alpha=7.8e-21,
    )


def _random_task(rng):
    return TaskSpec(
        task_id=0,
        owner=0,
        gen_slot=0,
        d_in=rng.uniform(400, 1000) * 8000,
        d_out=rng.uniform(0.1, 1) * 8000,
        intensity=rng.uniform(500, 1500),
        t_max=rng.uniform(0.1, 5),
    )


# =============================================================================
# SUITES
# =============================================================================


def check_stability(rng, n=SUITE_SIZES["stability"], matcher=run_matching):
    """No blocking pair on ``n`` markets (≤10 tasks, ≤4 servers).

    Every fourth market is a small synthetic one with resource budgets,
    where a stable matching may not exist; a matching with blocking pairs
    passes there only when an exhaustive search finds no stable one.

    """
    col = _Collector("stability")
    without = 0
    for idx in range(n):
        budgets = idx % 4 == 3
        preferences = (
            random_market(rng, 6, 3, synthetic=True, budgets=True)
            if budgets
            else random_market(rng, 10, 4, synthetic=bool(idx % 2))
        )
        report = verify_stability(matcher(preferences), preferences)
        ok = report.stable
        if not ok and budgets and find_stable_matching(preferences) is None:
            without += 1
            ok = True
        col.check(ok, f"blocking pairs {report.blocking_pairs}")
    if without:
        col.notes.append(f"{without} budget markets without stable matching")
    return col.report()


def check_weak_pareto(
    rng, n=SUITE_SIZES["weak_pareto"], matcher=run_matching
):
    """No dominating matching on ``n`` markets (≤6 tasks, ≤3 servers)."""
    col = _Collector("weak_pareto")
    for idx in range(n):
        preferences = random_market(
            rng, 6, 3, synthetic=bool(idx % 2), budgets=idx % 4 == 3
        )
        report = verify_weak_pareto(matcher(preferences), preferences)
        col.check(report.weak_pareto, f"dominated by {report.dominating}")
    return col.report()


def _near_zero(value, scale, rtol=1e-9):
    return abs(value) <= rtol * max(abs(scale), 1e-300)


def check_deal_soundness(rng, n=SUITE_SIZES["deal_soundness"]):
    """Price bounds, utilities and budget of ``n`` random negotiations."""
    col = _Collector("deal_soundness")
    done = 0
    while done < n:
        world, tasks, links, mobility = random_corridor(
            rng, 10, int(rng.integers(1, 4))
        )
        energy_params = world.config.energy
        for task in tasks:
            vehicle = world.vehicle(task.owner)
            for server in world.all_servers:
                if done >= n:
                    break
                done += 1
                deal = negotiate(
                    world,
                    vehicle,
                    task,
                    server,
                    links.get(task.task_id),
                    0,
                    mobility,
                )
                if not deal.ok:
                    continue
                lo, hi = deal.bounds.c_min, deal.bounds.c_max
                tol = 1e-9 * max(abs(hi), abs(lo))
                col.check(
                    lo - tol <= deal.price <= hi + tol,
                    f"price {deal.price} outside [{lo}, {hi}]",
                )
                col.check(
                    deal.vehicle_utility >= 0 and deal.server_utility >= 0,
                    f"negative utility {deal}",
                )
                col.check(
                    deal.payment <= vehicle.payment_budget * (1 + 1e-12),
                    f"payment {deal.payment} above the budget",
                )
                at_min = server_utility(
                    task, deal.f, lo, server, energy_params
                )
                col.check(
                    _near_zero(
                        at_min.server_utility,
                        server.weight * at_min.server_revenue,
                    ),
                    f"U_j(c_min) = {at_min.server_utility}",
                )
                at_max = vehicle_utility(
                    vehicle,
                    task,
                    deal.kind,
                    deal.delay,
                    f=deal.f,
                    price=hi,
                )
                col.check(
                    _near_zero(
                        at_max.vehicle_utility,
                        vehicle.weight * at_max.satisfaction,
                    ),
                    f"U_i(c_max) = {at_max.vehicle_utility}",
                )
    return col.report()


def check_stationarity(rng, n=SUITE_SIZES["stationarity"]):
    """The closed form allocation is the maximizer of the vehicle utility."""
    col = _Collector("stationarity")
    for _ in range(n):
        vehicle, task = _random_vehicle(rng), _random_task(rng)
        var1 = rng.uniform(0, 0.5) * task.t_max
        price = 10 ** rng.uniform(-11, -8)
        w, budget = vehicle.weight, vehicle.payment_budget
        log_t = math.log1p(task.t_max)

        def utility(f):
            inner = task.t_max - var1 - task.c_req / f
            if inner <= -1:
                return -math.inf
            return w * math.log1p(inner) / log_t - (1 - w) * price * f / budget

        f_star = optimal_allocation(price, task, var1, vehicle)
        h = 1e-6 * f_star
        derivative = (utility(f_star + h) - utility(f_star - h)) / (2 * h)
        scale = (1 - w) * price / budget
        col.check(
            abs(derivative) <= 1e-6 * scale,
            f"dU/df = {derivative:.3g} at f* = {f_star:.6g}",
        )

        f_low = task.c_req / (1 + task.t_max - var1) * (1 + 1e-9)
        result = optimize.minimize_scalar(
            lambda f: -utility(f),
            bounds=(f_low, 10 * f_star),
            method="bounded",
            options={"xatol": 1e-9 * f_star},
        )
        col.check(
            abs(result.x - f_star) <= 1e-4 * f_star,
            f"numeric maximizer {result.x:.6g} vs f* = {f_star:.6g}",
        )
    return col.report()


def check_partitions(grid=PARTITION_GRID):
    """Identities, limit and monotonicity of the bargaining partitions.

    A proposer share decreasing in its own discount factor is only reported
    (with a :class:`PartitionMonotonicityWarning`), not counted as failure.

    """
    col = _Collector("partitions")
    n_i, n_j, horizons = grid
    eps_values_i = np.linspace(0.0, 0.98, n_i)
    eps_values_j = np.linspace(0.0, 0.98, n_j)
    breaches = 0
    for horizon in horizons:
        for eps_j in eps_values_j:
            previous = None
            for eps_i in eps_values_i:
                for clamp in (False, True):
                    p = optimal_partitions(eps_i, eps_j, horizon, clamp=clamp)
                    col.check(
                        abs(p.ii + p.ji - 1) <= 1e-12,
                        f"ii + ji = {p.ii + p.ji} at "
                        f"({eps_i:.3f}, {eps_j:.3f}, {horizon})",
                    )
                if previous is not None and p.ii < previous - 1e-12:
                    breaches += 1
                previous = p.ii

    for horizon in (200, 500, 1000):
        p = optimal_partitions(0.9, 0.9, horizon)
        col.check(
            abs(p.ii - LIMIT_SHARE) <= 1e-9,
            f"limit share {p.ii} at horizon {horizon}",
        )

    if breaches:
        msg = f"Proposer share not monotone in {breaches} grid steps"
        warnings.warn(msg, PartitionMonotonicityWarning)
        col.notes.append(msg)
    return col.report()


def run_verification(scale=1.0, seed=0, matcher=run_matching):
    """Run every property suite.

    Parameters
    ----------
    scale : float, default 1
        Fraction of the instances of every randomized suite.
    seed : int, default 0
    matcher : callable, default :func:`run_matching`
        Builds a matching from a :class:`PreferenceLists`.

    Returns
    -------
    list of PropertyReport

    """
    if scale <= 0:
        raise ValueError(f"'scale' must be positive. Found {scale}")
    rngs = [
        np.random.default_rng(child)
        for child in np.random.SeedSequence(seed).spawn(4)
    ]

    def size(name):
        return max(1, int(round(SUITE_SIZES[name] * scale)))

    reports = [
        check_stability(rngs[0], size("stability"), matcher),
        check_weak_pareto(rngs[1], size("weak_pareto"), matcher),
        check_deal_soundness(rngs[2], size("deal_soundness")),
        check_stationarity(rngs[3], size("stationarity")),
        check_partitions(),
    ]
    for report in reports:
        logger.info(report.summary())
    return reports
