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

__all__ = ["ECO"]


# =============================================================================
# IMPORTS
# =============================================================================

from .core import Scheme
from ..context import Decision


# =============================================================================
# SCHEME CLASS
# =============================================================================


class ECO(Scheme):
    """
    **ECO** (entirely cloud offloading)

    Every task is bargained with the cloud server only; tasks without a deal
    or beyond the cloud cores fail.

    """

    name = "ECO"

    def decide(self, tasks, context):
        ledger = context.ledger()
        cloud = context.world.cloud
        decisions = []
        for task in sorted(tasks, key=lambda t: t.task_id):
            deal = context.negotiate(task, cloud)
            if not deal.ok:
                decisions.append(Decision.failed(task, deal.reason.value))
                continue
            decision = Decision.from_deal(task, deal)
            if not ledger.try_reserve(decision):
                decision = Decision.failed(task, "cloud saturated")
            decisions.append(decision)
        return decisions
