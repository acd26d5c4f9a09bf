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

"""Pytest configuration"""


# =============================================================================
# IMPORTS
# =============================================================================

from bargainmatch import schemes
from bargainmatch.bargaining import LinkContext
from bargainmatch.config import ScenarioConfig
from bargainmatch.context import OffloadContext
from bargainmatch.core import CLOUD, EDGE, GHZ
from bargainmatch.mobility import MobilityModel
from bargainmatch.scenario import attached_server, build_scenario, make_streams
from bargainmatch.world import ServerState, TaskSpec, VehicleState, WorldState

import numpy as np

import pytest


# =============================================================================
# CONSTANTS
# =============================================================================

# FIX the random state
random = np.random.RandomState(42)

#: One server of 8 GHz and 4 cores covering [34, 366] on a 400 m road.
TINY = dict(road_length=400.0, server_count=1, vehicle_count=1, horizon=5)


# =============================================================================
# UTILS
# =============================================================================


class Bunch(dict):
    def __getattr__(self, k):
        return self[k]


def vehicle_state(**kwargs):
    values = dict(
        vid=0,
        x=200.0,
        y=0.0,
        speed=10.0,
        heading=1,
        f_max=1 * GHZ,
        energy_budget=3600.0,
        payment_budget=20.0,
        weight=0.5,
        alpha=7.8e-21,
    )
    values.update(kwargs)
    return VehicleState(**values)


def server_state(**kwargs):
    values = dict(
        sid=0,
        kind=EDGE,
        x=200.0,
        y=0.0,
        radius=166.0,
        f_max=8 * GHZ,
        cores=4,
        energy_budget=8 * 3600.0,
        price_ceiling=1 / GHZ,
        weight=0.5,
        alpha=7.8e-21,
        sic_capacity=4,
    )
    values.update(kwargs)
    return ServerState(**values)


def task_spec(**kwargs):
    # 500 KB at 1000 cycles/bit: 4e9 cycles, 4 s on a 1 GHz vehicle
    values = dict(
        task_id=0,
        owner=0,
        gen_slot=0,
        d_in=4e6,
        d_out=8000.0,
        intensity=1000.0,
        t_max=5.0,
    )
    values.update(kwargs)
    return TaskSpec(**values)


def cloud_state(sid, **kwargs):
    values = dict(
        sid=sid,
        kind=CLOUD,
        x=200.0,
        radius=float("inf"),
        f_max=30 * GHZ,
        cores=10,
        energy_budget=30 * 3600.0,
    )
    values.update(kwargs)
    return server_state(**values)


def make_world(vehicles=None, servers=None, cloud=None, **config_kwargs):
    """A hand built world; the config follows the number of nodes."""
    vehicles = [vehicle_state()] if vehicles is None else vehicles
    servers = [server_state()] if servers is None else servers
    cloud = cloud_state(len(servers)) if cloud is None else cloud
    values = dict(TINY)
    values.update(
        vehicle_count=len(vehicles),
        server_count=len(servers),
        rng_seed=0,
    )
    values.update(config_kwargs)
    config = ScenarioConfig(**values)
    return WorldState(
        config=config,
        vehicles=vehicles,
        servers=servers,
        cloud=cloud,
        streams=make_streams(config.rng_seed),
    )


def make_crowd(n, servers=None, cloud=None, **task_kwargs):
    """``n`` identical vehicles next to the server, one task each."""
    vehicles = [vehicle_state(vid=vid) for vid in range(n)]
    world = make_world(vehicles, servers, cloud)
    tasks = [task_spec(task_id=i, owner=i, **task_kwargs) for i in range(n)]
    return world, tasks, make_context(world, tasks)


def make_context(world, tasks, slot=0, rate=1e8):
    """Context where every covered vehicle uploads at ``rate``."""
    mobility = MobilityModel.from_config(world.config)
    links, attached = {}, {}
    for task in tasks:
        vehicle = world.vehicle(task.owner)
        sid = attached_server(world, vehicle)
        attached[task.task_id] = sid
        links[task.task_id] = (
            None
            if sid is None
            else LinkContext(
                rate=rate,
                j_cur=sid,
                sojourn=mobility.sojourn(vehicle, world.server(sid)),
            )
        )
    return OffloadContext(
        world=world,
        slot=slot,
        links=links,
        attached=attached,
        uplink_deferred=frozenset(),
        mobility=mobility,
        rng=world.streams["scheme"],
    )


# =============================================================================
# FIXTURES
# =============================================================================


@pytest.fixture
def config():
    # five servers of radius 166 m on 2 km
    return ScenarioConfig(
        road_length=2000.0,
        server_count=5,
        vehicle_count=20,
        horizon=20,
        task_gen_probability=0.2,
        rng_seed=7,
    )


@pytest.fixture
def world(config):
    return build_scenario(config)


@pytest.fixture
def mobility(config):
    return MobilityModel.from_config(config)


@pytest.fixture
def tiny():
    """One vehicle next to one server, with the task it wants to offload."""
    world = make_world()
    task = task_spec()
    return Bunch(
        world=world,
        vehicle=world.vehicles[0],
        server=world.servers[0],
        cloud=world.cloud,
        task=task,
        context=make_context(world, [task]),
    )


@pytest.fixture
def mock_schemes_register(monkeypatch):
    monkeypatch.setattr(schemes, "_schemes", {})


@pytest.fixture
def factories():
    return Bunch(
        vehicle=vehicle_state,
        server=server_state,
        cloud=cloud_state,
        task=task_spec,
        world=make_world,
        context=make_context,
        crowd=make_crowd,
    )
