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

"""bargainmatch.bargaining Tests"""


# =============================================================================
# IMPORTS
# =============================================================================

import math

from bargainmatch import bargaining
from bargainmatch.bargaining import NoDealReason
from bargainmatch.config import EnergyParams
from bargainmatch.core import (
    CLOUD,
    ContractViolation,
    EDGE,
    GHZ,
    NoInteriorOptimum,
)
from bargainmatch.utility import server_utility, vehicle_utility

import numpy as np

import pytest


# =============================================================================
# PARTITIONS
# =============================================================================


def test_optimal_partitions_long_horizon():
    p = bargaining.optimal_partitions(0.9, 0.9, 1000)
    np.testing.assert_allclose(p.ii, 0.37368, atol=5e-6)
    np.testing.assert_allclose(p.ii, 0.9 - 0.1 / 0.19, atol=1e-12)
    assert p.clamped == 0


@pytest.mark.parametrize("horizon", [1, 2, 3, 10, 200])
@pytest.mark.parametrize("eps", [(0.1, 0.9), (0.5, 0.5), (0.95, 0.3)])
def test_optimal_partitions_shares_add_up(horizon, eps):
    p = bargaining.optimal_partitions(*eps, horizon, clamp=False)
    np.testing.assert_allclose(p.ii + p.ji, 1.0, atol=1e-12)


def test_optimal_partitions_clamp():
    raw = bargaining.optimal_partitions(0.0, 0.98, 1, clamp=False)
    np.testing.assert_allclose([raw.ii, raw.ji], [-1.0, 2.0])
    assert raw.clamped == 0

    clamped = bargaining.optimal_partitions(0.0, 0.98, 1)
    assert (clamped.ii, clamped.ji) == (0.0, 1.0)
    assert clamped.clamped == 2
    for share in (clamped.ii, clamped.ji, clamped.ij, clamped.jj):
        assert 0 <= share <= 1


@pytest.mark.parametrize(
    "args", [(1.0, 0.5, 10), (0.5, -0.1, 10), (0.5, 0.5, 0)]
)
def test_optimal_partitions_contract(args):
    with pytest.raises(ContractViolation):
        bargaining.optimal_partitions(*args)


def test_discount_factors(factories):
    task = factories.task(t_max=5.0)
    np.testing.assert_allclose(
        bargaining.discount_factors(task, 0.04, 2.0), (0.992, 0.6)
    )
    eps_i, eps_j = bargaining.discount_factors(task, 0.0, 6.0)
    assert eps_i < 1
    assert eps_j == 0


# =============================================================================
# PRICES
# =============================================================================


def test_optimal_price():
    bounds = bargaining.PriceBounds(1.0, 3.0)
    parts = bargaining.Partitions(ii=0.25, ji=0.75, ij=0.5, jj=0.5)
    assert bounds.spread == 2.0
    assert bargaining.optimal_price(bounds, parts, bargaining.VEHICLE) == 2.5
    assert bargaining.optimal_price(bounds, parts, bargaining.SERVER) == 2.0


def test_optimal_price_contract():
    parts = bargaining.Partitions(ii=0.25, ji=0.75, ij=0.5, jj=0.5)
    with pytest.raises(ContractViolation):
        bargaining.optimal_price(
            bargaining.PriceBounds(3.0, 1.0), parts, bargaining.VEHICLE
        )
    with pytest.raises(ContractViolation):
        bargaining.optimal_price(
            bargaining.PriceBounds(1.0, 3.0), parts, "referee"
        )


def test_price_bounds_zero_the_utilities(factories):
    vehicle, server = factories.vehicle(), factories.server()
    task, params = factories.task(), EnergyParams()
    bounds = bargaining.price_bounds(2e9, task, server, vehicle, 2.04, params)
    assert 0 < bounds.c_min < bounds.c_max

    at_min = server_utility(task, 2e9, bounds.c_min, server, params)
    np.testing.assert_allclose(
        server.weight * at_min.server_revenue,
        (1 - server.weight) * at_min.server_cost,
        rtol=1e-9,
    )
    at_max = vehicle_utility(
        vehicle, task, EDGE, 2.04, f=2e9, price=bounds.c_max
    )
    np.testing.assert_allclose(at_max.vehicle_utility, 0, atol=1e-12)


def test_price_bounds_contract(factories):
    vehicle, server = factories.vehicle(), factories.server()
    task, params = factories.task(), EnergyParams()
    with pytest.raises(ContractViolation):
        bargaining.price_bounds(0.0, task, server, vehicle, 1.0, params)
    with pytest.raises(ContractViolation):
        bargaining.price_bounds(1e9, task, server, vehicle, 6.0, params)


# =============================================================================
# ALLOCATION
# =============================================================================


def test_optimal_allocation_maximizes_the_vehicle_utility(factories):
    vehicle, task = factories.vehicle(), factories.task()
    price, var1 = 2e-10, 0.04

    def utility(f):
        psi = math.log1p(task.t_max - var1 - task.c_req / f)
        return (
            vehicle.weight * psi / math.log1p(task.t_max)
            - (1 - vehicle.weight) * price * f / vehicle.payment_budget
        )

    f_star = bargaining.optimal_allocation(price, task, var1, vehicle)
    assert f_star > task.c_req / (1 + task.t_max - var1)
    assert utility(f_star) > utility(f_star * 0.999)
    assert utility(f_star) > utility(f_star * 1.001)


def test_optimal_allocation_decreases_with_the_price(factories):
    vehicle, task = factories.vehicle(), factories.task()
    allocations = [
        bargaining.optimal_allocation(c, task, 0.04, vehicle)
        for c in (1e-10, 1e-9, 1e-8)
    ]
    assert allocations == sorted(allocations, reverse=True)


def test_optimal_allocation_without_optimum(factories):
    task = factories.task(t_max=5.0)
    with pytest.raises(NoInteriorOptimum):
        bargaining.optimal_allocation(
            1e-9, task, 0.0, factories.vehicle(weight=0.0)
        )
    with pytest.raises(NoInteriorOptimum):
        bargaining.optimal_allocation(1e-9, task, 7.0, factories.vehicle())
    with pytest.raises(ContractViolation):
        bargaining.optimal_allocation(0.0, task, 0.0, factories.vehicle())


# =============================================================================
# NEGOTIATION
# =============================================================================


def test_opening_terms(tiny):
    cap, terms = bargaining.opening_terms(
        tiny.world,
        tiny.vehicle,
        tiny.task,
        tiny.server,
        tiny.context.links[0],
        0,
        tiny.context.mobility,
    )
    assert cap == 2 * GHZ
    np.testing.assert_allclose(terms.t_tran, 0.04)
    np.testing.assert_allclose(terms.t_comp, 2.0)
    np.testing.assert_allclose(terms.t_total, 2.04)
    assert terms.j_arr == 0
    assert terms.t_dispatch == 0


def test_negotiate_edge(tiny):
    deal = tiny.context.negotiate(tiny.task, tiny.server)
    assert deal.ok
    assert deal.kind == EDGE
    assert (deal.vehicle, deal.server) == (0, 0)
    assert 0 < deal.f <= 2 * GHZ
    assert deal.bounds.c_min <= deal.price <= deal.bounds.c_max
    assert deal.vehicle_utility > 0
    assert deal.server_utility > 0
    assert deal.payment <= tiny.vehicle.payment_budget
    assert deal.delay <= tiny.task.t_max
    assert 1 <= deal.rounds <= tiny.world.config.bargain.horizon
    np.testing.assert_allclose(deal.price_per_ghz, deal.price * 1e9)
    np.testing.assert_allclose(
        deal.welfare, deal.vehicle_utility + deal.server_utility
    )


def test_negotiate_cloud(tiny):
    deal = tiny.context.negotiate(tiny.task, tiny.cloud)
    assert deal.ok
    assert deal.kind == CLOUD
    assert deal.server == tiny.cloud.sid
    assert deal.delay > 0.08


def test_negotiate_is_deterministic(tiny):
    assert tiny.context.negotiate(tiny.task, tiny.server) == (
        tiny.context.negotiate(tiny.task, tiny.server)
    )


def test_negotiate_out_of_coverage(tiny):
    deal = bargaining.negotiate(
        tiny.world, tiny.vehicle, tiny.task, tiny.server, None
    )
    assert not deal.ok
    assert deal.reason is NoDealReason.OUT_OF_COVERAGE


def test_negotiate_without_idle_core(tiny):
    for _ in range(tiny.server.cores):
        tiny.server.occupy(0, 1e9, 10)
    deal = tiny.context.negotiate(tiny.task, tiny.server)
    assert deal.reason is NoDealReason.NO_CORE


def test_negotiate_without_energy(tiny):
    tiny.server.energy_used = tiny.server.energy_budget
    deal = tiny.context.negotiate(tiny.task, tiny.server)
    assert deal.reason is NoDealReason.ENERGY


def test_negotiate_short_sojourn(tiny):
    link = bargaining.LinkContext(rate=1e8, j_cur=0, sojourn=0.01)
    deal = bargaining.negotiate(
        tiny.world, tiny.vehicle, tiny.task, tiny.server, link
    )
    assert deal.reason is NoDealReason.SOJOURN


def test_negotiate_tight_deadline(tiny, factories):
    task = factories.task(t_max=0.5)
    deal = tiny.context.negotiate(task, tiny.server)
    assert deal.reason is NoDealReason.DEADLINE
