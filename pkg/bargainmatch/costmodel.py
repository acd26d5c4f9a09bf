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

"""Service delay and execution energy of the three destinations."""

__all__ = [
    "local_delay",
    "edge_transfer_delay",
    "cloud_transfer_delay",
    "edge_delay",
    "cloud_delay",
    "exec_energy",
]


# =============================================================================
# IMPORTS
# =============================================================================

import math
import warnings

from .core import PhysicalRangeWarning


# =============================================================================
# CONSTANTS
# =============================================================================

#: Energies above this value (joules) for a single task are reported.
ENERGY_WARNING_THRESHOLD = 1e6


# =============================================================================
# DELAYS
# =============================================================================


def local_delay(task, f):
    """``C_req / f``; an idle CPU (``f = 0``) gives an infinite delay."""
    if f <= 0:
        return math.inf
    return task.c_req / f


def edge_transfer_delay(task, rate, handover, dispatch, backhaul):
    """Everything but the computation of an edge offload.

    Upload, plus the two fiber hops through the controller for the input
    when the task is migrated (``handover``) and for the result when the
    vehicle is attached elsewhere when it finishes (``dispatch``).

    """
    delay = task.d_in / rate
    if handover:
        delay += 2 * task.d_in / backhaul.fiber_rate
    if dispatch:
        delay += 2 * task.d_out / backhaul.fiber_rate
    return delay


def cloud_transfer_delay(task, rate, backhaul):
    """Upload plus the edge to cloud round trip of input and result."""
    return task.d_in / rate + (task.d_in + task.d_out) / backhaul.cloud_rate


def edge_delay(task, rate, f, j_cur, j, j_arr, backhaul):
    """Total delay of a task processed by edge server ``j``.

    Parameters
    ----------
    task : TaskSpec
    rate : float
        Uplink rate toward ``j_cur`` (bit/s).
    f : float
        Allocated resource (cycles/s).
    j_cur, j, j_arr : int
        Attached server now, processing server and server attached when
        the result is ready.
    backhaul : BackhaulParams

    """
    transfer = edge_transfer_delay(
        task, rate, j != j_cur, j != j_arr, backhaul
    )
    return transfer + task.c_req / f


def cloud_delay(task, rate, f, backhaul):
    """Total delay of a task processed by the cloud server."""
    return cloud_transfer_delay(task, rate, backhaul) + task.c_req / f


# =============================================================================
# ENERGY
# =============================================================================


def exec_energy(f, c_req, alpha, tau):
    """``alpha * f**(tau - 1) * c_req``.

    The function is unit agnostic: ``f`` must be expressed in the unit
    ``alpha`` was calibrated for. A :class:`PhysicalRangeWarning` is issued
    for energies above one megajoule.

    """
    energy = alpha * f ** (tau - 1) * c_req
    if energy > ENERGY_WARNING_THRESHOLD:
        warnings.warn(
            f"Execution energy of {energy:.3g} J for a single task",
            PhysicalRangeWarning,
        )
    return energy
