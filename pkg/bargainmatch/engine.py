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

"""Slot by slot simulation of the corridor.

Each slot the engine collects the generated and deferred tasks, computes the
uplinks, lets the scheme decide, commits the decisions into the world,
checks the constraints of the problem, records the completed tasks and
finally moves the vehicles at the end of every epoch.

"""

__all__ = ["compute_links", "commit", "step", "drain", "run"]


# =============================================================================
# IMPORTS
# =============================================================================

import logging
import math
import time

import attr

from .bargaining import LinkContext
from .channel import noma_rates, sample_gains, schedule_uplink
from .context import OffloadContext
from .core import GHZ, InvariantError, LOCAL
from .metrics import MetricsSink, SlotRecord, TaskRecord
from .mobility import MobilityModel, advance_epoch
from .scenario import attached_server, build_scenario, sample_tasks
from .schemes import make_scheme
from .utility import check_constraints
from .utils import fmt_number, slots_for
from .world import InFlightTask


# =============================================================================
# CONSTANTS
# =============================================================================

logger = logging.getLogger(__name__)


# =============================================================================
# SLOT PHASES
# =============================================================================


def compute_links(world, tasks, gains, mobility, uses_uplink=True):
    """Uplink of every pending task.

    The vehicles covered by the same server share its band; the server
    decodes at most its SIC capacity of them and the weakest excess ones
    wait for the next slot.

    Returns
    -------
    links : dict
        ``task_id -> LinkContext`` or None.
    attached : dict
        ``task_id -> server id`` covering the owner or None.
    deferred : set
        Tasks pushed out of the uplink by the SIC capacity.

    """
    links, attached, uploaders = {}, {}, {}
    for task in tasks:
        vehicle = world.vehicle(task.owner)
        sid = attached_server(world, vehicle)
        attached[task.task_id] = sid
        links[task.task_id] = None
        if uses_uplink and sid is not None:
            uploaders.setdefault(sid, set()).add(vehicle.vid)

    power = world.config.channel.transmit_power
    rates, deferred_vids = {}, set()
    for sid, vids in sorted(uploaders.items()):
        server = world.server(sid)
        admitted, deferred = schedule_uplink(
            sorted(vids), gains, server.sic_capacity
        )
        rates.update(noma_rates(admitted, gains, power, world.config.channel))
        deferred_vids.update(deferred)

    deferred = set()
    for task in tasks:
        sid = attached[task.task_id]
        if sid is None or not uses_uplink:
            continue
        vehicle = world.vehicle(task.owner)
        if vehicle.vid in deferred_vids:
            deferred.add(task.task_id)
            continue
        links[task.task_id] = LinkContext(
            rate=rates[vehicle.vid],
            j_cur=sid,
            sojourn=mobility.sojourn(vehicle, world.server(sid)),
        )
    return links, attached, deferred


def commit(world, decisions, slot):
    """Apply the committed decisions to the world.

    Local tasks take the vehicle core, offloaded tasks take a server core
    with their resource; energies are drawn from the budgets.

    Returns
    -------
    list of InFlightTask

    Raises
    ------
    InvariantError
        If a decision does not fit the world anymore.

    """
    dt = world.config.slot_duration
    committed = []
    for d in decisions:
        if not d.committed:
            continue
        task = d.task
        release = slot + slots_for(d.t_comp, dt)
        if d.kind == LOCAL:
            vehicle = world.vehicle(task.owner)
            if not vehicle.core_idle(slot):
                raise InvariantError(
                    f"Task {task.task_id}: core of vehicle {vehicle.vid} busy"
                )
            vehicle.core_busy_until = release
            vehicle.energy_used += d.vehicle_energy
        else:
            server = world.server(d.server)
            if d.f > server.f_available(slot) * (1 + 1e-12):
                raise InvariantError(
                    f"Task {task.task_id}: server {server.sid} over allocated"
                )
            try:
                server.occupy(slot, d.f, release)
            except ValueError as err:
                raise InvariantError(f"Task {task.task_id}: {err}") from err
            server.energy_used += d.server_energy

        committed.append(
            InFlightTask(
                task=task,
                kind=d.kind,
                server=d.server,
                f=d.f,
                price=d.price,
                delay=d.delay,
                completion_slot=task.gen_slot + int(math.floor(d.delay / dt)),
                vehicle_utility=d.vehicle_utility,
                server_utility=d.server_utility,
            )
        )
    return committed


def _completed_record(flight):
    task = flight.task
    return TaskRecord(
        task_id=task.task_id,
        owner=task.owner,
        gen_slot=task.gen_slot,
        d_in=task.d_in,
        c_req=task.c_req,
        completed=True,
        kind=flight.kind,
        server=flight.server,
        delay=flight.delay,
        completion_slot=flight.completion_slot,
    )


def _failed_record(task, reason):
    return TaskRecord(
        task_id=task.task_id,
        owner=task.owner,
        gen_slot=task.gen_slot,
        d_in=task.d_in,
        c_req=task.c_req,
        completed=False,
        reason=reason,
    )


def _trace_lines(slot, decisions, scheme):
    lines = []
    for d in sorted(decisions, key=lambda d: d.task.task_id):
        tid = d.task.task_id
        if not d.committed:
            lines.append(f"slot {slot}: task {tid} failed ({d.reason})")
        elif d.kind == LOCAL:
            lines.append(
                f"slot {slot}: task {tid} -> local "
                f"delay={fmt_number(d.delay)}"
            )
        else:
            lines.append(
                f"slot {slot}: task {tid} -> {d.kind} {d.server} "
                f"f={fmt_number(d.f)} price={fmt_number(d.price * GHZ)}/GHz "
                f"delay={fmt_number(d.delay)}"
            )
    matching = getattr(scheme, "last_matching", None)
    if matching is not None:
        lines.extend(f"    {line}" for line in matching.trace)
    return lines


def step(world, slot, scheme, sink, mobility=None, trace=None):
    """Simulate one slot.

    Parameters
    ----------
    world : WorldState
    slot : int
    scheme : Scheme
    sink : MetricsSink
        Receives the :class:`SlotRecord` of the slot and the
        :class:`TaskRecord` of every task that completed or failed.
    mobility : MobilityModel, optional
    trace : list, optional
        Human readable decision lines are appended when given.

    Returns
    -------
    SlotRecord

    Raises
    ------
    InvariantError
        If the committed decisions break a constraint.

    """
    started = time.perf_counter()
    config = world.config
    mobility = mobility or MobilityModel.from_config(config)
    dt = config.slot_duration
    world.slot = slot

    # both streams advance every slot whatever the scheme does
    new = sample_tasks(world, slot)
    gains = sample_gains(world)

    pending, world.deferred = world.deferred + new, []
    links, attached, uplink_deferred = compute_links(
        world, pending, gains, mobility, scheme.uses_uplink()
    )
    context = OffloadContext(
        world=world,
        slot=slot,
        links=links,
        attached=attached,
        uplink_deferred=frozenset(uplink_deferred),
        mobility=mobility,
        rng=world.streams["scheme"],
    )
    decisions = scheme.run(pending, context) if pending else []

    world.in_flight.extend(commit(world, decisions, slot))
    report = check_constraints(world, decisions, slot)
    if not report.ok:
        raise InvariantError(f"{scheme.get_name()}: {report!r}")

    committed = [d for d in decisions if d.committed]
    veh_util = math.fsum(d.vehicle_utility for d in committed)
    srv_util = math.fsum(d.server_utility for d in committed)
    sw = veh_util + srv_util
    world.sw_cumulative += sw
    world.clamp_events += sum(d.clamped for d in committed)

    failed = 0
    for d in decisions:
        if d.committed:
            continue
        task = d.task
        waited = task.waited + dt
        if task.task_id in uplink_deferred and waited < task.t_max:
            world.deferred.append(attr.evolve(task, waited=waited))
        else:
            sink.add_task(_failed_record(task, d.reason))
            failed += 1

    running = []
    for flight in world.in_flight:
        if flight.completion_slot <= slot:
            sink.add_task(_completed_record(flight))
        else:
            running.append(flight)
    world.in_flight = running

    scheme.observe(world, slot, decisions)
    if (slot + 1) % config.epoch_length == 0:
        advance_epoch(world)

    if trace is not None:
        trace.extend(_trace_lines(slot, decisions, scheme))

    record = SlotRecord(
        slot=slot,
        sw=sw,
        vehicle_utility=veh_util,
        server_utility=srv_util,
        generated=len(new),
        committed=len(committed),
        failed=failed,
        runtime=(time.perf_counter() - started) * 1000,
    )
    sink.add_slot(record)
    logger.debug(
        "Slot %d: %d pending, %d committed, %d failed, SW=%.6g",
        slot,
        len(pending),
        len(committed),
        failed,
        sw,
    )
    return record


def drain(world, sink):
    """Close a run: in-flight tasks complete, deferred ones fail."""
    for flight in sorted(world.in_flight, key=lambda f: f.task.task_id):
        sink.add_task(_completed_record(flight))
    for task in world.deferred:
        sink.add_task(_failed_record(task, "horizon reached"))
    world.in_flight, world.deferred = [], []


# =============================================================================
# RUN
# =============================================================================


def run(config, scheme=None, trace=None):
    """Simulate ``config.horizon`` slots.

    Parameters
    ----------
    config : ScenarioConfig
    scheme : Scheme, optional
        Defaults to the scheme selected by ``config`` with its parameters.
    trace : list, optional
        Collects the decision lines of every slot.

    Returns
    -------
    RunMetrics

    """
    started = time.perf_counter()
    scheme = make_scheme(config) if scheme is None else scheme
    world = build_scenario(config)
    mobility = MobilityModel.from_config(config)
    sink = MetricsSink()
    scheme.reset(world)

    logger.info(
        "Running %s for %d slots (seed %d, %d vehicles, %d servers)",
        scheme.get_name(),
        config.horizon,
        config.rng_seed,
        config.vehicle_count,
        config.server_count,
    )
    for slot in range(config.horizon):
        step(world, slot, scheme, sink, mobility, trace)
    drain(world, sink)

    runtime = (time.perf_counter() - started) * 1000
    metrics = sink.finalize(
        scheme.get_name(),
        config.rng_seed,
        config.apr_mode,
        runtime=runtime,
        clamp_events=world.clamp_events,
    )
    logger.info(
        "%s done in %.1f ms: SW=%.6g ACR=%s",
        scheme.get_name(),
        runtime,
        metrics.sw_total,
        fmt_number(metrics.acr),
    )
    return metrics
