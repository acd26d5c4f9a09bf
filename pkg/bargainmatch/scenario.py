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

"""World construction and task generation."""

__all__ = [
    "AppPreset",
    "APP_PRESETS",
    "load_app_preset",
    "make_streams",
    "build_scenario",
    "attached_server",
    "sample_tasks",
]


# =============================================================================
# IMPORTS
# =============================================================================

import logging

import attr

import numpy as np

from .core import BITS_PER_KB, CLOUD, EDGE, GHZ, JOULES_PER_WH, UnknownPreset
from .world import ServerState, TaskSpec, VehicleState, WorldState


# =============================================================================
# CONSTANTS
# =============================================================================

logger = logging.getLogger(__name__)

STREAMS = ("world", "tasks", "channel", "scheme")


# =============================================================================
# PRESETS
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class AppPreset:
    """Task distribution of a vehicular application.

    Sizes are in KB (1 KB = 1000 bytes), deadlines in seconds.

    """

    name: str
    task_size_kb: tuple
    deadline: tuple
    intensity: tuple = (1e3, 1e4)
    result_size_kb: tuple = (0.1, 1.0)


APP_PRESETS = {
    p.name: p
    for p in (
        AppPreset("collision_warning", (0.3, 1.0), (0.1, 0.1)),
        AppPreset("emergency_break", (0.2, 0.4), (0.12, 0.12)),
        AppPreset("traffic_jam", (0.3, 0.3), (2.0, 2.0)),
        AppPreset("hazardous_location", (0.3, 1.0), (1.0, 2.0)),
        AppPreset("hazardous_location_route", (0.3, 1.0), (10.0, 200.0)),
        AppPreset("speed_harmonization", (0.3, 1.0), (0.4, 1.5)),
    )
}


def load_app_preset(name):
    """Return the :class:`AppPreset` registered as ``name``.

    .. code-block:: pycon

        >>> load_app_preset("traffic_jam").deadline
        (2.0, 2.0)

    Raises
    ------
    UnknownPreset
        If there is no such preset.

    """
    try:
        return APP_PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"Unknown preset {name!r}. Available: {sorted(APP_PRESETS)}"
        )


# =============================================================================
# BUILD
# =============================================================================


def make_streams(seed):
    """Independent random generators of a run, all derived from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(len(STREAMS))
    return {
        name: np.random.default_rng(child)
        for name, child in zip(STREAMS, children)
    }


def _uniform(rng, bounds, size=None):
    lo, hi = bounds
    return rng.uniform(lo, hi, size=size)


def _build_servers(config, rng):
    servers = []
    spacing = config.road_length / config.server_count
    budget = config.energy.server_budget_wh_per_ghz * JOULES_PER_WH
    lo_cores, hi_cores = (int(round(c)) for c in config.server_cores)
    for sid in range(config.server_count):
        f_max = _uniform(rng, config.server_cpu_ghz) * GHZ
        servers.append(
            ServerState(
                sid=sid,
                kind=EDGE,
                x=(sid + 0.5) * spacing,
                y=0.0,
                radius=config.server_radius,
                f_max=f_max,
                cores=int(rng.integers(lo_cores, hi_cores + 1)),
                energy_budget=budget * f_max / GHZ,
                price_ceiling=config.pricing.server_ceiling_per_ghz / GHZ,
                weight=_uniform(rng, config.server_weight),
                alpha=config.energy.alpha_server,
                sic_capacity=config.sic_capacity,
            )
        )

    f_cloud = config.cloud_cpu_ghz * GHZ
    cloud = ServerState(
        sid=config.server_count,
        kind=CLOUD,
        x=config.road_length / 2.0,
        y=0.0,
        radius=float("inf"),
        f_max=f_cloud,
        cores=config.cloud_cores,
        energy_budget=budget * f_cloud / GHZ,
        price_ceiling=config.pricing.server_ceiling_per_ghz / GHZ,
        weight=_uniform(rng, config.server_weight),
        alpha=config.energy.alpha_server,
        sic_capacity=config.sic_capacity,
    )
    return servers, cloud


def _build_vehicles(config, rng):
    vehicles = []
    per_direction = max(1, config.lane_count // 2)
    lane_width = config.mobility.lane_width
    budget = config.energy.vehicle_budget_wh_per_ghz * JOULES_PER_WH
    for vid in range(config.vehicle_count):
        heading = 1 if rng.random() < 0.5 else -1
        lane = int(rng.integers(per_direction))
        f_max = _uniform(rng, config.vehicle_cpu_ghz) * GHZ
        vehicles.append(
            VehicleState(
                vid=vid,
                x=_uniform(rng, (0.0, config.road_length)),
                y=heading * (lane + 0.5) * lane_width,
                speed=_uniform(rng, config.speed_range),
                heading=heading,
                f_max=f_max,
                energy_budget=budget * f_max / GHZ,
                payment_budget=config.pricing.payment_budget,
                weight=_uniform(rng, config.vehicle_weight),
                alpha=config.energy.alpha_vehicle,
            )
        )
    return vehicles


def build_scenario(config):
    """Create the initial :class:`WorldState` of a run.

    Servers are evenly spaced along the road, vehicles are uniformly placed
    with uniform speeds and headings, and one cloud server sits behind the
    road side units. Everything is driven by ``config.rng_seed``.

    Parameters
    ----------
    config : ScenarioConfig

    Returns
    -------
    WorldState

    Raises
    ------
    UnknownPreset
        If ``config.app_preset`` names no preset.

    """
    if config.app_preset is not None:
        load_app_preset(config.app_preset)

    streams = make_streams(config.rng_seed)
    servers, cloud = _build_servers(config, streams["world"])
    vehicles = _build_vehicles(config, streams["world"])

    logger.debug(
        "Built scenario with %d vehicles and %d servers (seed=%d)",
        len(vehicles),
        len(servers),
        config.rng_seed,
    )
    return WorldState(
        config=config,
        vehicles=vehicles,
        servers=servers,
        cloud=cloud,
        streams=streams,
    )


def attached_server(world, vehicle):
    """Index of the edge server covering ``vehicle`` or None.

    With non overlapping coverages the only candidate is the server whose
    road segment contains the vehicle.

    """
    config = world.config
    spacing = config.road_length / config.server_count
    idx = int(np.clip(vehicle.x // spacing, 0, config.server_count - 1))
    if world.servers[idx].covers(vehicle.x):
        return idx
    return None


# =============================================================================
# TASKS
# =============================================================================


def _task_distribution(config):
    if config.app_preset is None:
        return (
            config.effective_task_size_kb,
            config.intensity,
            config.deadline,
            config.result_size_kb,
        )
    preset = load_app_preset(config.app_preset)
    return (
        preset.task_size_kb,
        preset.intensity,
        preset.deadline,
        preset.result_size_kb,
    )


def sample_tasks(world, slot, rng=None):
    """Tasks generated in ``slot``.

    Every vehicle draws its generation event and task attributes every slot,
    whether a task is emitted or not, so two schemes run with the same seed
    see exactly the same tasks. At most one task per vehicle is generated.

    Parameters
    ----------
    world : WorldState
    slot : int
    rng : numpy.random.Generator, optional
        Defaults to the task stream of the world.

    Returns
    -------
    list of TaskSpec

    """
    rng = world.streams["tasks"] if rng is None else rng
    config = world.config
    n = len(world.vehicles)
    size_kb, intensity, deadline, result_kb = _task_distribution(config)

    draws = rng.random(n)
    sizes = _uniform(rng, size_kb, n) * BITS_PER_KB
    intensities = _uniform(rng, intensity, n)
    deadlines = _uniform(rng, deadline, n)
    results = _uniform(rng, result_kb, n) * BITS_PER_KB

    tasks = []
    for vid in np.flatnonzero(draws < config.task_gen_probability):
        tasks.append(
            TaskSpec(
                task_id=world.next_task_id,
                owner=vid,
                gen_slot=slot,
                d_in=sizes[vid],
                d_out=results[vid],
                intensity=intensities[vid],
                t_max=deadlines[vid],
            )
        )
        world.next_task_id += 1
    return tasks
