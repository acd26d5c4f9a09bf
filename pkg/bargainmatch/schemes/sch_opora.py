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

""""""

__all__ = ["OPORA"]


# =============================================================================
# IMPORTS
# =============================================================================

import logging
import math

from .core import Scheme, SchemeContractError
from ..bargaining import (
    Deal,
    NoDeal,
    NoDealReason,
    SERVER,
    opening_terms,
    price_bounds,
)
from ..context import Decision
from ..core import EDGE, GHZ
from ..matching import PreferenceLists, may_meet_deadline, run_matching
from ..utility import server_energy, server_utility, vehicle_utility


# =============================================================================
# CONSTANTS
# =============================================================================

logger = logging.getLogger(__name__)


# =============================================================================
# SCHEME CLASS
# =============================================================================


class OPORA(Scheme):
    """
    **OPORA** (one to one matching with price rising)

    Tasks are matched one to one with the edge servers; the cloud takes no
    part. A server offers all the resource a new task can get and prices it
    by rising: starting at the lowest price it accepts (or at
    ``start_price`` per GHz if higher), the price grows by ``step`` times
    the bid-ask spread until the server utility is positive. A price above
    the highest one the vehicle accepts ends the pair without deal.

    The offers feed a task proposing deferred acceptance with unit
    capacities. Every server that turned a task down raises the price of all
    its offers by one step and the matching runs again, until no server is
    over-requested. When a rise would price out every task of a server, the
    server keeps the task it prefers at the last accepted price.

    Parameters
    ----------
    step : float
        Fraction of the spread added at every rise; positive.
    start_price : float or None
        Opening price per GHz; None opens at the lowest accepted price.
    exclusive : bool
        A server stays matched to its task until the task is done, so it
        only takes a new task when all its cores are idle.

    """

    name = "OPORA"
    params = {"step": 0.1, "start_price": None, "exclusive": True}

    def validate_params(self):
        if not self.params["step"] > 0:
            raise SchemeContractError("'step' must be > 0")
        start = self.params["start_price"]
        if start is not None and start < 0:
            raise SchemeContractError("'start_price' must be >= 0")

    @property
    def max_rises(self):
        return math.ceil(1 / self.params["step"])

    def available(self, server, slot):
        """True if ``server`` can be matched to a new task in ``slot``."""
        if not server.idle_cores(slot):
            return False
        return not self.params["exclusive"] or not server.busy_cores(slot)

    def price_rising(self, task, server, context, price=None, rises=0):
        """Deal of ``task`` with ``server`` under the rising price rule.

        Parameters
        ----------
        task : TaskSpec
        server : ServerState
        context : OffloadContext
        price : float, optional
            Price per cycle/s to start from; the opening price by default.
        rises : int, default 0
            Rises already applied to the pair.

        Returns
        -------
        Deal or NoDeal

        """
        world, vehicle = context.world, context.vehicle(task)
        energy_params = context.config.energy
        opening = opening_terms(
            world,
            vehicle,
            task,
            server,
            context.links.get(task.task_id),
            context.slot,
            context.mobility,
        )
        if not isinstance(opening, tuple):
            return opening
        f, terms = opening

        def no_deal(reason):
            return NoDeal(
                vehicle=vehicle.vid, server=server.sid, reason=reason
            )

        bounds = price_bounds(
            f, task, server, vehicle, terms.t_total, energy_params
        )
        if bounds.spread < 0:
            return no_deal(NoDealReason.NO_SURPLUS)

        if price is None:
            price = bounds.c_min
            start = self.params["start_price"]
            if start is not None:
                price = max(price, start / GHZ)
        increment = self.params["step"] * bounds.spread
        while True:
            if price > bounds.c_max or rises > self.max_rises:
                return no_deal(NoDealReason.DISAGREEMENT)
            u_j = server_utility(
                task, f, price, server, energy_params
            ).server_utility
            if u_j > 0 or rises >= self.max_rises:
                break
            price += increment
            rises += 1

        u_i = vehicle_utility(
            vehicle, task, server.kind, terms.t_total, f=f, price=price
        ).vehicle_utility
        if not (u_i > 0 and u_j > 0):
            return no_deal(NoDealReason.DISAGREEMENT)
        if price * f > vehicle.payment_budget:
            return no_deal(NoDealReason.PAYMENT)
        energy = server_energy(task, f, server, energy_params)
        if energy > server.energy_left:
            return no_deal(NoDealReason.ENERGY)

        link = context.links[task.task_id]
        return Deal(
            vehicle=vehicle.vid,
            server=server.sid,
            kind=EDGE,
            f=f,
            price=price,
            vehicle_utility=u_i,
            server_utility=u_j,
            bounds=bounds,
            proposer=SERVER,
            rounds=rises,
            terms=terms,
            server_energy=energy,
            sojourn=link.sojourn,
        )

    def raise_prices(self, deals, server, tasks, context):
        """Offers of ``server`` after one rise.

        Parameters
        ----------
        deals : dict
            ``task_id -> Deal`` of the server.
        server : ServerState
        tasks : dict
            ``task_id -> TaskSpec``.
        context : OffloadContext

        Returns
        -------
        dict
            ``task_id -> Deal`` still acceptable to both sides.

        """
        raised = {}
        for tid, deal in deals.items():
            new = self.price_rising(
                tasks[tid],
                server,
                context,
                price=deal.price + self.params["step"] * deal.bounds.spread,
                rises=deal.rounds + 1,
            )
            if new.ok:
                raised[tid] = new
        if not raised and deals:
            tid = min(deals, key=lambda t: (-deals[t].server_utility, t))
            raised[tid] = deals[tid]
        return raised

    def match(self, deals, servers, tasks, context):
        """Alternate one to one matchings and price rises.

        Returns
        -------
        matching : Matching
        deals : dict
            ``(task_id, server_id) -> Deal`` at the final prices.

        """
        capacity = {s.sid: (1, s.f_available(context.slot)) for s in servers}
        by_sid = {s.sid: s for s in servers}
        rounds = 0
        while True:
            preferences = PreferenceLists.from_deals(
                deals, capacity, sorted(tasks)
            )
            matching = run_matching(preferences)
            crowded = set()
            for tid, prefs in preferences.task_prefs.items():
                for sid in prefs:
                    if sid == matching.server_of(tid):
                        break
                    crowded.add(sid)
            if not crowded:
                break

            rounds += 1
            for sid in crowded:
                offers = {t: d for (t, s), d in deals.items() if s == sid}
                for tid in offers:
                    del deals[tid, sid]
                raised = self.raise_prices(offers, by_sid[sid], tasks, context)
                deals.update(((tid, sid), d) for tid, d in raised.items())

        logger.debug(
            "Slot %d: %d price rising rounds, %d tasks matched",
            context.slot,
            rounds,
            len(matching.assignment),
        )
        return matching, deals

    def decide(self, tasks, context):
        slot = context.slot
        servers = [
            s for s in context.world.servers if self.available(s, slot)
        ]
        deals = {}
        for task in tasks:
            link = context.links.get(task.task_id)
            if link is None:
                continue
            for server in servers:
                if not may_meet_deadline(task, link, server, slot):
                    continue
                deal = self.price_rising(task, server, context)
                if deal.ok:
                    deals[task.task_id, server.sid] = deal

        by_tid = {t.task_id: t for t in tasks}
        matching, deals = self.match(deals, servers, by_tid, context)

        ledger = context.ledger()
        decisions = []
        for task in tasks:
            sid = matching.server_of(task.task_id)
            if sid is None:
                decisions.append(
                    context.local_or_fail(task, ledger, "no server left")
                )
                continue
            decision = Decision.from_deal(task, deals[task.task_id, sid])
            if not ledger.try_reserve(decision):
                decision = context.local_or_fail(task, ledger, "saturated")
            decisions.append(decision)
        return decisions
