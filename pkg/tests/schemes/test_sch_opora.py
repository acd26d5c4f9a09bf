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

"""bargainmatch.schemes.sch_opora Tests"""


# =============================================================================
# IMPORTS
# =============================================================================

import attr

from bargainmatch import engine
from bargainmatch.bargaining import NoDealReason, SERVER
from bargainmatch.config import ScenarioConfig
from bargainmatch.core import EDGE, GHZ
from bargainmatch.schemes import OPORA, SchemeContractError

import numpy as np

import pytest


# =============================================================================
# TESTS
# =============================================================================


@pytest.mark.parametrize("params", [{"step": 0}, {"start_price": -1.0}])
def test_opora_invalid_params(params):
    with pytest.raises(SchemeContractError):
        OPORA(**params)


@pytest.mark.parametrize("step, rises", [(0.1, 10), (0.3, 4), (2.0, 1)])
def test_opora_max_rises(step, rises):
    assert OPORA(step=step).max_rises == rises


def test_opora_price_rising(tiny):
    scheme = OPORA()
    deal = scheme.price_rising(tiny.task, tiny.server, tiny.context)
    assert deal.ok
    assert deal.proposer == SERVER
    assert deal.kind == EDGE
    assert deal.bounds.c_min <= deal.price <= deal.bounds.c_max
    assert deal.server_utility > 0
    assert deal.vehicle_utility > 0
    assert 0 <= deal.rounds <= scheme.max_rises
    assert deal.payment <= tiny.vehicle.payment_budget


def test_opora_price_above_the_vehicle_bound(tiny):
    scheme = OPORA(start_price=1e6)
    deal = scheme.price_rising(tiny.task, tiny.server, tiny.context)
    assert not deal.ok
    assert deal.reason == NoDealReason.DISAGREEMENT


def test_opora_start_price(tiny):
    low = OPORA().price_rising(tiny.task, tiny.server, tiny.context)
    bounds = low.bounds
    start = (bounds.c_min + 0.5 * bounds.spread) * GHZ
    deal = OPORA(start_price=start).price_rising(
        tiny.task, tiny.server, tiny.context
    )
    assert deal.ok
    assert deal.rounds == 0
    assert deal.price == pytest.approx(start / GHZ)


def test_opora_opening_checks(factories):
    world = factories.world([factories.vehicle(x=390.0)])
    task = factories.task()
    context = factories.context(world, [task])
    deal = OPORA().price_rising(task, world.servers[0], context)
    assert deal.reason == NoDealReason.OUT_OF_COVERAGE


def test_opora_one_new_task_per_server(factories):
    world, tasks, context = factories.crowd(4, t_max=3.0)
    decisions = OPORA().run(tasks, context)
    hosts = [d.server for d in decisions if d.committed]
    assert len(hosts) == len(set(hosts))
    assert set(hosts) <= {s.sid for s in world.servers}
    for decision in decisions:
        if not decision.committed:
            assert decision.reason == "no server left"


def test_opora_falls_back_to_local(factories):
    world, tasks, context = factories.crowd(3)
    decisions = OPORA().run(tasks, context)
    assert all(d.committed for d in decisions)


def test_opora_over_requested_server_raises_its_price(factories):
    world, tasks, context = factories.crowd(2)
    server = world.servers[0]
    opening = OPORA().price_rising(tasks[0], server, context)
    decisions = OPORA().run(tasks, context)

    # both vehicles bid alike, so the rise prices both out at once and
    # the server keeps the lower id at the last accepted price
    winner, loser = decisions
    assert winner.server == server.sid
    assert winner.price > opening.price
    assert winner.price <= opening.bounds.c_max
    assert loser.server is None


def test_opora_raise_prices(factories):
    world, tasks, context = factories.crowd(2)
    scheme, server = OPORA(step=0.25), world.servers[0]
    deals = {t.task_id: scheme.price_rising(t, server, context) for t in tasks}
    raised = scheme.raise_prices(
        deals, server, {t.task_id: t for t in tasks}, context
    )
    for tid, deal in raised.items():
        assert deal.rounds == deals[tid].rounds + 1
        assert deal.price == pytest.approx(
            deals[tid].price + 0.25 * deals[tid].bounds.spread
        )


@pytest.mark.parametrize("exclusive, host", [(True, None), (False, 0)])
def test_opora_exclusive_server(tiny, exclusive, host):
    tiny.server.occupy(0, GHZ, 50)
    scheme = OPORA(exclusive=exclusive)
    assert scheme.available(tiny.server, 0) is not exclusive
    (decision,) = scheme.run([tiny.task], tiny.context)
    assert decision.server == host


def test_opora_below_bargain_match():
    # 100 vehicles and 30 servers over a shortened horizon
    config = ScenarioConfig(horizon=80)
    wins, gaps = 0, []
    for seed in (1, 2, 3):
        seeded = attr.evolve(config, rng_seed=seed)
        bm = engine.run(attr.evolve(seeded, scheme="BARGAIN_MATCH"))
        opora = engine.run(attr.evolve(seeded, scheme="OPORA"))
        wins += bm.sw_total > opora.sw_total
        gaps.append(bm.sw_total - opora.sw_total)
    assert wins >= 2
    assert np.mean(gaps) > 0
