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

"""State of the simulated corridor: tasks, vehicles, servers and the world.

Tasks are immutable values. Vehicles and servers are mutable records owned by
a single :class:`WorldState`; only the engine mutates them.

"""

__all__ = [
    "TaskSpec",
    "VehicleState",
    "ServerState",
    "InFlightTask",
    "WorldState",
]


# =============================================================================
# IMPORTS
# =============================================================================

import math

import attr

from .core import CLOUD, ContractViolation, EDGE


# =============================================================================
# TASKS
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class TaskSpec:
    """One computation task.

    Attributes
    ----------
    task_id : int
        Unique id inside a run.
    owner : int
        Id of the vehicle that generated the task.
    gen_slot : int
        Slot in which the task was generated.
    d_in, d_out : float
        Input and result size in bits.
    intensity : float
        Cycles needed per input bit.
    t_max : float
        Maximum acceptable delay in seconds.
    waited : float
        Seconds already spent waiting for an uplink slot.

    """

    task_id: int = attr.ib(converter=int)
    owner: int = attr.ib(converter=int)
    gen_slot: int = attr.ib(converter=int)
    d_in: float = attr.ib(converter=float)
    d_out: float = attr.ib(converter=float)
    intensity: float = attr.ib(converter=float)
    t_max: float = attr.ib(converter=float)
    waited: float = attr.ib(default=0.0, converter=float)

    def __attrs_post_init__(self):
        for name in ("d_in", "d_out", "intensity", "t_max"):
            if not getattr(self, name) > 0:
                raise ContractViolation(
                    f"Task '{name}' must be positive. "
                    f"Found {getattr(self, name)}"
                )

    @property
    def c_req(self):
        """Required CPU cycles ``d_in * intensity``."""
        return self.d_in * self.intensity

    @property
    def remaining_budget(self):
        """Deadline left after the time spent waiting."""
        return self.t_max - self.waited


# =============================================================================
# NODES
# =============================================================================


@attr.s(auto_attribs=True, repr=False)
class VehicleState:
    """A vehicle with a single CPU core.

    ``x_prev`` is the position one epoch ago expressed in the same frame as
    ``x`` (it is not wrapped), so distances before and after a wrap around
    stay comparable.

    """

    vid: int
    x: float
    y: float
    speed: float
    heading: int
    f_max: float
    energy_budget: float
    payment_budget: float
    weight: float
    alpha: float
    core_busy_until: int = 0
    x_prev: float = None
    energy_used: float = 0.0

    def __repr__(self):
        return (
            f"VehicleState(vid={self.vid}, x={self.x:.1f}, "
            f"speed={self.speed:.2f}, heading={self.heading:+d})"
        )

    def core_idle(self, slot):
        return self.core_busy_until <= slot

    @property
    def energy_left(self):
        return self.energy_budget - self.energy_used


@attr.s(auto_attribs=True, repr=False)
class ServerState:
    """An edge server (road side unit) or the cloud server.

    The CPU capacity ``f_max`` is split evenly across the cores and every
    task runs on one dedicated core, so the resource a new task can get is
    the smallest of the per core capacity and what is left unallocated.

    """

    sid: int
    kind: str
    x: float
    y: float
    radius: float
    f_max: float
    cores: int
    energy_budget: float
    price_ceiling: float
    weight: float
    alpha: float
    sic_capacity: int
    core_release: list = attr.ib(default=None)
    core_alloc: list = attr.ib(default=None)
    energy_used: float = 0.0

    def __attrs_post_init__(self):
        if self.kind not in (EDGE, CLOUD):
            raise ContractViolation(f"Unknown server kind {self.kind!r}")
        if self.core_release is None:
            self.core_release = [0] * self.cores
        if self.core_alloc is None:
            self.core_alloc = [0.0] * self.cores

    def __repr__(self):
        return (
            f"ServerState(sid={self.sid}, kind={self.kind}, "
            f"x={self.x:.1f}, f_max={self.f_max:.3g}, cores={self.cores})"
        )

    @property
    def is_cloud(self):
        return self.kind == CLOUD

    @property
    def core_capacity(self):
        return self.f_max / self.cores

    @property
    def energy_left(self):
        return self.energy_budget - self.energy_used

    def covers(self, x):
        return self.is_cloud or abs(x - self.x) <= self.radius

    def idle_cores(self, slot):
        return sum(1 for r in self.core_release if r <= slot)

    def busy_cores(self, slot):
        return self.cores - self.idle_cores(slot)

    def allocated(self, slot):
        return math.fsum(
            f for r, f in zip(self.core_release, self.core_alloc) if r > slot
        )

    def f_available(self, slot):
        return max(0.0, self.f_max - self.allocated(slot))

    def offer_capacity(self, slot):
        """Resource a new task can get in ``slot`` (0 without idle cores)."""
        if not self.idle_cores(slot):
            return 0.0
        return min(self.core_capacity, self.f_available(slot))

    def occupy(self, slot, f, release_slot):
        """Dedicate one idle core to a task until ``release_slot``."""
        for idx, release in enumerate(self.core_release):
            if release <= slot:
                self.core_release[idx] = release_slot
                self.core_alloc[idx] = f
                return idx
        raise ContractViolation(f"Server {self.sid} has no idle core")


# =============================================================================
# WORLD
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class InFlightTask:
    """A committed task waiting for its completion slot."""

    task: TaskSpec
    kind: str
    server: int
    f: float
    price: float
    delay: float
    completion_slot: int
    vehicle_utility: float
    server_utility: float


@attr.s(auto_attribs=True, repr=False)
class WorldState:
    """Everything a run mutates.

    ``servers`` holds the edge servers indexed by id (0 based along the
    road); the cloud server gets the id right after the last edge server.

    """

    config: object
    vehicles: list
    servers: list
    cloud: ServerState
    streams: dict
    slot: int = 0
    in_flight: list = attr.ib(factory=list)
    deferred: list = attr.ib(factory=list)
    sw_cumulative: float = 0.0
    next_task_id: int = 0
    clamp_events: int = 0

    def __repr__(self):
        return (
            f"WorldState(slot={self.slot}, vehicles={len(self.vehicles)}, "
            f"servers={len(self.servers)}, in_flight={len(self.in_flight)})"
        )

    @property
    def all_servers(self):
        return list(self.servers) + [self.cloud]

    def server(self, sid):
        if sid == self.cloud.sid:
            return self.cloud
        return self.servers[sid]

    def vehicle(self, vid):
        return self.vehicles[vid]
