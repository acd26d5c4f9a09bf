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

__all__ = ["EXO"]


# =============================================================================
# IMPORTS
# =============================================================================

from .core import Scheme
from ..context import Decision


# =============================================================================
# SCHEME CLASS
# =============================================================================


class EXO(Scheme):
    """
    **EXO** (exhaustive offloading)

    Each task evaluates every destination on its own (local processing and a
    negotiated deal with every server) and ranks them by the welfare they
    produce, ignoring the other tasks. Tasks are then served first come
    first served by id; a task whose best destination is already full takes
    its next one.

    """

    name = "EXO"

    def options(self, task, context):
        """Feasible decisions of ``task`` sorted by welfare, best first."""
        options = [
            Decision.from_deal(task, deal)
            for deal in context.remote_options(task).values()
        ]
        local = context.local_option(task)
        if local.committed and local.vehicle_utility >= 0:
            options.append(local)
        options.sort(
            key=lambda d: (
                -d.welfare,
                -1 if d.server is None else d.server,
            )
        )
        return options

    def decide(self, tasks, context):
        ledger = context.ledger()
        decisions = []
        for task in sorted(tasks, key=lambda t: t.task_id):
            options = self.options(task, context)
            chosen = next((d for d in options if ledger.try_reserve(d)), None)
            if chosen is None:
                reason = "every destination full" if options else "no option"
                chosen = Decision.failed(task, reason)
            decisions.append(chosen)
        return decisions
