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

"""bargainmatch.schemes.sch_nvo Tests"""


# =============================================================================
# IMPORTS
# =============================================================================

from bargainmatch.bargaining import NoDealReason
from bargainmatch.core import EDGE
from bargainmatch.schemes import NVO


# =============================================================================
# TESTS
# =============================================================================


def test_nvo_goes_to_the_covering_server(tiny):
    (decision,) = NVO().run([tiny.task], tiny.context)
    assert decision.committed
    assert (decision.kind, decision.server) == (EDGE, tiny.server.sid)
    assert decision.t_dispatch == 0


def test_nvo_out_of_coverage(factories):
    world = factories.world([factories.vehicle(x=390.0)])
    task = factories.task()
    context = factories.context(world, [task])
    (decision,) = NVO().run([task], context)
    assert not decision.committed
    assert decision.reason == "out of coverage"


def test_nvo_server_saturated(factories):
    world, tasks, context = factories.crowd(3)
    server = world.servers[0]
    for _ in range(server.cores - 1):
        server.occupy(0, server.core_capacity, 10)
    decisions = NVO().run(tasks, context)
    assert [d.committed for d in decisions] == [True, False, False]
    assert {d.reason for d in decisions[1:]} == {"nearest server saturated"}


def test_nvo_no_deal(factories):
    world, tasks, context = factories.crowd(1, t_max=0.5)
    (decision,) = NVO().run(tasks, context)
    assert not decision.committed
    assert decision.reason == NoDealReason.DEADLINE.value
