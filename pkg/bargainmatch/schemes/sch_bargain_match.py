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

__all__ = ["BargainMatch"]


# =============================================================================
# IMPORTS
# =============================================================================

import logging

from .core import Scheme
from ..context import Decision
from ..matching import PreferenceLists, run_matching


# =============================================================================
# CONSTANTS
# =============================================================================

logger = logging.getLogger(__name__)


# =============================================================================
# SCHEME CLASS
# =============================================================================


class BargainMatch(Scheme):
    r"""
    **BARGAIN_MATCH**

    Joint pricing and offloading. Every pending task bargains the resource
    and the price with each reachable server; the resulting deals define the
    preferences of a task proposing deferred acceptance in which a server
    keeps the best tasks that fit its idle cores.

    A task whose local execution is feasible and strictly better for its
    vehicle than every predicted deal stays on the vehicle and never enters
    the market. Tasks rejected by every server fall back to local processing
    when it is feasible and yields a non negative utility; otherwise they
    fail.

    The last matching is kept in ``last_matching`` for tracing.

    """

    name = "BARGAIN_MATCH"

    def __init__(self, **cparams):
        super().__init__(**cparams)
        self.last_matching = None

    def screen(self, tasks, preferences, context):
        """Split ``tasks`` in the ones kept on the vehicle and the market.

        Returns
        -------
        local : dict
            ``task_id -> Decision`` of the screened out tasks.
        market : list
            Tasks entering the matching.

        """
        local, market = {}, []
        for task in tasks:
            option = context.local_option(task)
            servers = preferences.task_prefs.get(task.task_id, [])
            if not servers:
                if option.committed and option.vehicle_utility >= 0:
                    local[task.task_id] = option
                continue
            best_remote = preferences.task_value(task.task_id, servers[0])
            if option.committed and option.vehicle_utility > best_remote:
                local[task.task_id] = option
            else:
                market.append(task)
        return local, market

    def decide(self, tasks, context):
        preferences = context.preferences(tasks)
        local, market = self.screen(tasks, preferences, context)

        ids = {t.task_id for t in market}
        market_prefs = PreferenceLists.from_deals(
            {k: d for k, d in preferences.deals.items() if k[0] in ids},
            preferences.capacity,
            sorted(ids),
        )
        matching = run_matching(market_prefs)
        self.last_matching = matching
        logger.debug(
            "Slot %d: %d tasks screened local, %d matched of %d",
            context.slot,
            sum(1 for d in local.values() if d is not None),
            len(matching.assignment),
            len(market),
        )

        ledger = context.ledger()
        by_id = {t.task_id: t for t in market}
        decisions = {}

        # matched tasks in server preference order
        for sid in sorted(matching.held):
            for tid in matching.held[sid]:
                deal = market_prefs.deals[tid, sid]
                decision = Decision.from_deal(by_id[tid], deal)
                if ledger.try_reserve(decision):
                    decisions[tid] = decision

        for task in tasks:
            tid = task.task_id
            if tid in decisions:
                continue
            option = local.get(tid)
            if option is not None and ledger.try_reserve(option):
                decisions[tid] = option
                continue
            reason = (
                "rejected by every server" if tid in ids else "no deal"
            )
            decisions[tid] = context.local_or_fail(task, ledger, reason)
        return [decisions[t.task_id] for t in tasks]
