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

"""What a scheme sees and returns in one slot."""

__all__ = ["Decision", "CapacityLedger", "OffloadContext"]


# =============================================================================
# IMPORTS
# =============================================================================

import math

import attr

from .bargaining import negotiate
from .core import LOCAL
from .costmodel import exec_energy, local_delay
from .matching import build_preferences, may_meet_deadline
from .utility import vehicle_utility


# =============================================================================
# DECISION
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class Decision:
    """Where a task goes and on which terms.

    A failed decision has ``kind=None`` and ``committed=False``; ``reason``
    says why.

    """

    task: object
    kind: str = None
    server: int = None
    f: float = 0.0
    price: float = 0.0
    delay: float = math.nan
    t_tran: float = 0.0
    sojourn: float = math.inf
    t_dispatch: float = 0.0
    residual_sojourn: float = math.inf
    vehicle_energy: float = 0.0
    server_energy: float = 0.0
    vehicle_utility: float = 0.0
    server_utility: float = 0.0
    committed: bool = False
    reason: str = ""
    clamped: int = 0

    @classmethod
    def failed(cls, task, reason):
        return cls(task=task, reason=str(reason))

    @classmethod
    def from_deal(cls, task, deal):
        """Offload ``task`` on the terms of a negotiated deal."""
        return cls(
            task=task,
            kind=deal.kind,
            server=deal.server,
            f=deal.f,
            price=deal.price,
            delay=deal.terms.t_total,
            t_tran=deal.terms.t_tran,
            sojourn=deal.sojourn,
            t_dispatch=deal.terms.t_dispatch,
            residual_sojourn=deal.terms.residual,
            server_energy=deal.server_energy,
            vehicle_utility=deal.vehicle_utility,
            server_utility=deal.server_utility,
            committed=True,
            clamped=deal.clamped,
        )

    @property
    def welfare(self):
        if not self.committed:
            return 0.0
        return self.vehicle_utility + self.server_utility

    @property
    def payment(self):
        return self.price * self.f

    @property
    def t_comp(self):
        return self.task.c_req / self.f if self.f > 0 else math.inf


# =============================================================================
# LEDGER
# =============================================================================


class CapacityLedger:
    """Tentative reservations of the vehicle and server resources inside one
    slot.

    Failed decisions always fit and reserve nothing.

    """

    def __init__(self, world, slot):
        self.cores = {s.sid: s.idle_cores(slot) for s in world.all_servers}
        self.f_left = {s.sid: s.f_available(slot) for s in world.all_servers}
        self.energy_left = {s.sid: s.energy_left for s in world.all_servers}
        self.local_free = {
            v.vid: v.core_idle(slot) for v in world.vehicles
        }
        self.vehicle_energy_left = {
            v.vid: v.energy_left for v in world.vehicles
        }

    def fits(self, decision):
        if not decision.committed:
            return True
        if decision.kind == LOCAL:
            vid = decision.task.owner
            return (
                self.local_free[vid]
                and decision.vehicle_energy <= self.vehicle_energy_left[vid]
            )
        sid = decision.server
        return (
            self.cores[sid] > 0
            and decision.f <= self.f_left[sid] * (1 + 1e-12)
            and decision.server_energy <= self.energy_left[sid]
        )

    def reserve(self, decision):
        if not decision.committed:
            return
        if decision.kind == LOCAL:
            vid = decision.task.owner
            self.local_free[vid] = False
            self.vehicle_energy_left[vid] -= decision.vehicle_energy
            return
        sid = decision.server
        self.cores[sid] -= 1
        self.f_left[sid] -= decision.f
        self.energy_left[sid] -= decision.server_energy

    def try_reserve(self, decision):
        if self.fits(decision):
            self.reserve(decision)
            return True
        return False


# =============================================================================
# CONTEXT
# =============================================================================


@attr.s(auto_attribs=True, repr=False)
class OffloadContext:
    """Per slot view of the world handed to the schemes.

    Attributes
    ----------
    world : WorldState
    slot : int
    links : dict
        ``task_id -> LinkContext`` or None when the task can't upload in
        this slot (outside coverage or beyond the SIC capacity).
    attached : dict
        ``task_id -> server id`` currently covering the owner (or None).
    uplink_deferred : frozenset
        Tasks that could upload next slot.
    mobility : MobilityModel
    rng : numpy.random.Generator
        Stream reserved to the schemes.

    """

    world: object
    slot: int
    links: dict
    attached: dict
    uplink_deferred: frozenset
    mobility: object
    rng: object

    def __repr__(self):
        return f"<OffloadContext slot={self.slot} links={len(self.links)}>"

    @property
    def config(self):
        return self.world.config

    def vehicle(self, task):
        return self.world.vehicle(task.owner)

    def server(self, sid):
        return self.world.server(sid)

    def ledger(self):
        return CapacityLedger(self.world, self.slot)

    def local_option(self, task):
        """Process ``task`` on its own vehicle, or why that is impossible."""
        vehicle = self.vehicle(task)
        if not vehicle.core_idle(self.slot):
            return Decision.failed(task, "local core busy")
        energy_params = self.config.energy
        f = vehicle.f_max
        delay = task.waited + local_delay(task, f)
        if delay > task.t_max:
            return Decision.failed(task, "local deadline")
        energy = exec_energy(
            f / energy_params.frequency_unit,
            task.c_req,
            vehicle.alpha,
            energy_params.tau,
        )
        if energy > vehicle.energy_left:
            return Decision.failed(task, "local energy")
        utility = vehicle_utility(vehicle, task, LOCAL, delay, energy=energy)
        return Decision(
            task=task,
            kind=LOCAL,
            f=f,
            delay=delay,
            vehicle_energy=energy,
            vehicle_utility=utility.vehicle_utility,
            committed=True,
        )

    def local_or_fail(self, task, ledger, reason):
        """Fall back to local processing when it is feasible and not
        harmful; otherwise fail ``task`` with ``reason``."""
        local = self.local_option(task)
        if local.committed and local.vehicle_utility >= 0:
            if ledger.try_reserve(local):
                return local
        return Decision.failed(task, reason)

    def negotiate(self, task, server):
        """Deal of ``task`` with ``server`` (a :class:`NoDeal` if none)."""
        return negotiate(
            self.world,
            self.vehicle(task),
            task,
            server,
            self.links.get(task.task_id),
            self.slot,
            self.mobility,
        )

    def remote_options(self, task, servers=None):
        """Every successful deal of ``task``: ``server id -> Deal``."""
        servers = self.world.all_servers if servers is None else servers
        if self.links.get(task.task_id) is None:
            return {}
        link, options = self.links[task.task_id], {}
        for server in servers:
            if not may_meet_deadline(task, link, server, self.slot):
                continue
            deal = self.negotiate(task, server)
            if deal.ok:
                options[server.sid] = deal
        return options

    def preferences(self, tasks, servers=None):
        return build_preferences(
            self.world, tasks, self.links, self.slot, servers, self.mobility
        )
