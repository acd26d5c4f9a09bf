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

"""bargainmatch.schemes.sch_eco Tests"""


# =============================================================================
# IMPORTS
# =============================================================================

from bargainmatch.bargaining import NoDealReason
from bargainmatch.core import CLOUD
from bargainmatch.schemes import ECO


# =============================================================================
# TESTS
# =============================================================================


def test_eco_goes_to_the_cloud(tiny):
    (decision,) = ECO().run([tiny.task], tiny.context)
    assert decision.committed
    assert decision.kind == CLOUD
    assert decision.server == tiny.cloud.sid
    assert decision.vehicle_utility > 0
    assert decision.server_utility > 0


def test_eco_cloud_saturated(factories):
    world, tasks, context = factories.crowd(2)
    cloud = world.cloud
    for _ in range(cloud.cores - 1):
        cloud.occupy(0, cloud.core_capacity, 10)
    decisions = ECO().run(tasks, context)
    assert [d.committed for d in decisions] == [True, False]
    assert decisions[1].reason == "cloud saturated"


def test_eco_without_uplink(factories):
    world, tasks, context = factories.crowd(1)
    world.vehicles[0].x = 390.0
    context.links[0] = None
    (decision,) = ECO().run(tasks, context)
    assert not decision.committed
    assert decision.reason == NoDealReason.OUT_OF_COVERAGE.value
