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
# DOCS
# =============================================================================

"""bargainmatch: slot-based simulator of a vehicular edge computing corridor.

Vehicles driving along a multi-lane road generate computation tasks that can
run on the vehicle itself, on one of the edge servers placed at the road side
units, or on a remote cloud server. Every slot the simulator collects the new
tasks, predicts for each (task, server) pair the resources and the price both
parties would agree on through an alternating-offers bargaining game, and then
places the tasks with a capacity constrained many-to-one deferred acceptance
matching. Six comparison schemes (all-local, exhaustive, nearest-server,
all-cloud, probabilistic and one-to-one price-rising) share the same delay,
energy and utility models, so their social welfare, processing rate,
completion delay and completion ratio can be compared seed by seed.

The package also ships the property oracles used to check the algorithm
claims: stability and weak Pareto optimality of the matching, stationarity of
the closed form resource allocation and the identities of the bargaining
partitions.

"""


# =============================================================================
# CONSTANTS
# =============================================================================

__version__ = ("0", "1", "0")

NAME = "bargainmatch"

DOC = __doc__

VERSION = ".".join(__version__)

AUTHORS = "The bargainmatch developers"

EMAIL = "bargainmatch@example.org"

URL = "https://github.com/bargainmatch/bargainmatch"

LICENSE = "MIT"

KEYWORDS = (
    "vehicular-edge-computing",
    "task-offloading",
    "bargaining",
    "stable-matching",
    "simulation",
)


# =============================================================================
# IMPORTS
# =============================================================================

import os  # noqa

if os.getenv("BARGAINMATCH_IN_SETUP") != "True":
    from .core import *  # noqa
    from .config import *  # noqa
    from .engine import *  # noqa
    from .metrics import *  # noqa
    from .schemes import *  # noqa

del os
