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

__all__ = ["NCO"]


# =============================================================================
# IMPORTS
# =============================================================================

import numpy as np

from .core import Scheme, SchemeContractError
from ..context import Decision
from ..scenario import attached_server


# =============================================================================
# SCHEME CLASS
# =============================================================================


class NCO(Scheme):
    """
    **NCO** (non cooperative offloading)

    Each vehicle keeps a probability of offloading to the server covering
    it. After every slot the probability moves towards the best response to
    the congestion observed at that server,

    .. math::

        p \\leftarrow p + lr \\left(
            \\mathrm{clip}(1 - response \\cdot busy, 0, 1) - p
        \\right)

    where ``busy`` is the fraction of occupied cores. An offloaded task is
    bargained with the covering server; a task not offloaded runs locally.

    It approximates a non cooperative offloading game; the update rule and
    its coefficients are parameters.

    Parameters
    ----------
    lr : float
        Step towards the best response, in ``(0, 1]``.
    response : float
        Sensitivity of the best response to the congestion.
    initial : float
        Probability before any observation.

    """

    name = "NCO"
    params = {"lr": 0.5, "response": 1.0, "initial": 0.5}

    def __init__(self, **cparams):
        super().__init__(**cparams)
        self.probability = {}

    def validate_params(self):
        if not 0 < self.params["lr"] <= 1:
            raise SchemeContractError("'lr' must be in (0, 1]")
        if self.params["response"] < 0:
            raise SchemeContractError("'response' must be >= 0")
        if not 0 <= self.params["initial"] <= 1:
            raise SchemeContractError("'initial' must be in [0, 1]")

    def reset(self, world):
        initial = self.params["initial"]
        self.probability = {v.vid: initial for v in world.vehicles}

    def offload_probability(self, vid):
        return self.probability.setdefault(vid, self.params["initial"])

    def decide(self, tasks, context):
        ledger = context.ledger()
        tasks = sorted(tasks, key=lambda t: t.task_id)
        draws = context.rng.random(len(tasks))
        decisions = []
        for task, draw in zip(tasks, draws):
            sid = context.attached.get(task.task_id)
            offload = (
                sid is not None
                and draw < self.offload_probability(task.owner)
            )
            if not offload:
                decisions.append(
                    context.local_or_fail(task, ledger, "local infeasible")
                )
                continue
            deal = context.negotiate(task, context.server(sid))
            decision = (
                Decision.from_deal(task, deal)
                if deal.ok
                else Decision.failed(task, deal.reason.value)
            )
            if not ledger.try_reserve(decision):
                decision = Decision.failed(task, "nearest server saturated")
            decisions.append(decision)
        return decisions

    def observe(self, world, slot, decisions):
        lr, response = self.params["lr"], self.params["response"]
        for vehicle in world.vehicles:
            sid = attached_server(world, vehicle)
            if sid is None:
                continue
            server = world.server(sid)
            busy = server.busy_cores(slot) / server.cores
            target = np.clip(1 - response * busy, 0.0, 1.0)
            p = self.offload_probability(vehicle.vid)
            self.probability[vehicle.vid] = float(
                np.clip(p + lr * (target - p), 0.0, 1.0)
            )
