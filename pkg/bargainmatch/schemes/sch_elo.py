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

__all__ = ["ELO"]


# =============================================================================
# IMPORTS
# =============================================================================

from .core import Scheme


# =============================================================================
# SCHEME CLASS
# =============================================================================


class ELO(Scheme):
    """
    **ELO** (entirely local offloading)

    Every task runs on its own vehicle. Tasks the vehicle can't finish
    before the deadline (or while its core is busy) fail.

    """

    name = "ELO"
    uses_uplink = False

    def decide(self, tasks, context):
        ledger = context.ledger()
        decisions = []
        for task in tasks:
            decision = context.local_option(task)
            if decision.committed and not ledger.try_reserve(decision):
                decision = decision.failed(task, "local core busy")
            decisions.append(decision)
        return decisions
