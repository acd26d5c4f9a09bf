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

"""Utilities of vehicles and servers, social welfare and the constraint
checker of the offloading problem."""

__all__ = [
    "satisfaction",
    "UtilityBreakdown",
    "vehicle_utility",
    "server_energy",
    "server_utility",
    "social_welfare",
    "ConstraintReport",
    "check_constraints",
]


# =============================================================================
# IMPORTS
# =============================================================================

import math
from collections import Counter

import attr

from .core import CLOUD, ContractViolation, EDGE, LOCAL
from .costmodel import exec_energy


# =============================================================================
# CONSTANTS
# =============================================================================

#: Relative slack of the numeric comparisons of the checker.
RTOL = 1e-9

CONSTRAINTS = tuple(f"C{i}" for i in range(1, 13))


# =============================================================================
# UTILITIES
# =============================================================================


def satisfaction(t_total, t_max):
    """Normalized satisfaction ``log(1 + T_max - T) / log(1 + T_max)``.

    Equal to 1 for an instantaneous service and to 0 at the deadline. A
    delay beyond the deadline returns ``-inf``.

    .. code-block:: pycon

        >>> round(satisfaction(0.5, 1.0), 3)
        0.585

    """
    if t_max <= 0:
        raise ContractViolation(f"'t_max' must be positive. Found {t_max}")
    if t_total > t_max:
        return -math.inf
    return math.log1p(t_max - t_total) / math.log1p(t_max)


@attr.s(frozen=True, auto_attribs=True)
class UtilityBreakdown:
    """The terms behind a pair of utilities."""

    satisfaction: float
    vehicle_cost: float
    vehicle_utility: float
    server_revenue: float = 0.0
    server_cost: float = 0.0
    server_utility: float = 0.0


def vehicle_utility(
    vehicle, task, kind, t_total, energy=None, f=None, price=None
):
    """Utility of ``vehicle`` when ``task`` goes to a destination of ``kind``.

    The cost is the energy share of the budget when processed locally and
    the payment share of the budget when offloaded.

    Parameters
    ----------
    vehicle : VehicleState
    task : TaskSpec
    kind : str
        ``"local"``, ``"edge"`` or ``"cloud"``.
    t_total : float
        Delay since the task was generated.
    energy : float, optional
        Local execution energy (required for local).
    f, price : float, optional
        The deal (required for remote destinations).

    Returns
    -------
    UtilityBreakdown

    """
    psi = satisfaction(t_total, task.t_max)
    if kind == LOCAL:
        if energy is None:
            raise ContractViolation("Local utility needs the energy")
        cost = energy / vehicle.energy_budget
    elif kind in (EDGE, CLOUD):
        if f is None or price is None:
            raise ContractViolation("Remote utility needs a deal")
        cost = price * f / vehicle.payment_budget
    else:
        raise ContractViolation(f"Unknown destination {kind!r}")

    w = vehicle.weight
    utility = w * psi - (1 - w) * cost
    return UtilityBreakdown(
        satisfaction=psi, vehicle_cost=cost, vehicle_utility=utility
    )


def server_energy(task, f, server, energy_params):
    """Energy spent by ``server`` running ``task`` at ``f`` cycles/s."""
    return exec_energy(
        f / energy_params.frequency_unit,
        task.c_req,
        server.alpha,
        energy_params.tau,
    )


def server_utility(task, f, price, server, energy_params):
    """Utility of ``server`` selling ``f`` cycles/s at ``price`` per cycle/s.

    ``w_j * c f / (C_j^max f_j^max) - (1 - w_j) * E_j / E_j^max``.

    Returns
    -------
    UtilityBreakdown
        Only the server fields are filled.

    """
    revenue = price * f / (server.price_ceiling * server.f_max)
    cost = server_energy(task, f, server, energy_params) / server.energy_budget
    w = server.weight
    return UtilityBreakdown(
        satisfaction=math.nan,
        vehicle_cost=math.nan,
        vehicle_utility=math.nan,
        server_revenue=revenue,
        server_cost=cost,
        server_utility=w * revenue - (1 - w) * cost,
    )


def social_welfare(decisions):
    """Sum of vehicle and server utilities of the committed decisions.

    A local decision carries a zero server utility; failed decisions do not
    count.

    """
    return math.fsum(
        d.vehicle_utility + d.server_utility
        for d in decisions
        if d.committed
    )


# =============================================================================
# CONSTRAINTS
# =============================================================================


@attr.s(frozen=True, repr=False)
class ConstraintReport:
    """Outcome of :func:`check_constraints`.

    ``violations`` maps a constraint name (``"C1"`` ... ``"C12"``) to the
    ids of the offending tasks, vehicles or servers.

    """

    slot = attr.ib()
    violations = attr.ib(factory=dict)

    @property
    def ok(self):
        return not self.violations

    @property
    def passed(self):
        return tuple(c for c in CONSTRAINTS if c not in self.violations)

    def __repr__(self):
        if self.ok:
            return f"<ConstraintReport slot={self.slot} ok>"
        failed = ", ".join(
            f"{k}={list(v)}" for k, v in sorted(self.violations.items())
        )
        return f"<ConstraintReport slot={self.slot} {failed}>"


def _exceeds(value, limit):
    return value > limit + RTOL * max(1.0, abs(limit))


def check_constraints(world, decisions, slot):
    """Evaluate the twelve constraints of the problem on committed decisions.

    Parameters
    ----------
    world : WorldState
        The world after the decisions were committed.
    decisions : iterable
        Decision records of ``slot``.
    slot : int

    Returns
    -------
    ConstraintReport

    """
    config = world.config
    committed = [d for d in decisions if d.committed]
    violations = {}

    def flag(name, ident):
        violations.setdefault(name, []).append(ident)

    for d in committed:
        if d.kind not in (LOCAL, EDGE, CLOUD):
            flag("C1", d.task.task_id)

    for tid, n in Counter(d.task.task_id for d in committed).items():
        if n > 1:
            flag("C2", tid)

    generated = Counter(
        (d.task.owner, d.task.gen_slot)
        for d in decisions
        if d.task.gen_slot == slot
    )
    for (owner, _), n in generated.items():
        if n > 1:
            flag("C3", owner)

    for d in committed:
        tid = d.task.task_id
        if _exceeds(d.delay, d.task.t_max):
            flag("C4", tid)
        if d.kind == LOCAL:
            continue
        if _exceeds(d.t_tran, d.sojourn):
            flag("C5", tid)
        if _exceeds(d.t_dispatch, d.residual_sojourn):
            flag("C6", tid)
        if _exceeds(d.price * d.f, world.vehicle(d.task.owner).payment_budget):
            flag("C12", tid)

    lo, hi = config.speed_range
    for vehicle in world.vehicles:
        if vehicle.speed < lo - RTOL or vehicle.speed > hi + RTOL:
            flag("C7", vehicle.vid)
        if _exceeds(vehicle.energy_used, vehicle.energy_budget):
            flag("C10", vehicle.vid)

    per_server = Counter(d.server for d in committed if d.kind != LOCAL)
    for server in world.all_servers:
        if _exceeds(server.allocated(slot), server.f_max):
            flag("C8", server.sid)
        if (
            server.busy_cores(slot) > server.cores
            or per_server[server.sid] > server.cores
        ):
            flag("C9", server.sid)
        if _exceeds(server.energy_used, server.energy_budget):
            flag("C11", server.sid)

    return ConstraintReport(slot=slot, violations=violations)
