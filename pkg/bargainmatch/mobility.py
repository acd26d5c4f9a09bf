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

"""Vehicle mobility: direction, sojourn time and arrival server prediction.

Two conventions are available for the arrival server:

``literal``
    The step count divides the distance travelled after leaving the current
    cell by the vehicle speed and moves in the direction of the indicator.
    The step is never negative.

``corrected`` (default)
    The distance travelled after leaving the road segment of the current
    server is divided by the cell pitch ``road_length / E`` (``2R`` when the
    coverages tile the road) and the vehicle moves along its heading. The
    sojourn time uses the geometric approach sign: ``-1`` when moving away
    from the server, ``+1`` when approaching it.

"""

__all__ = [
    "direction_indicator",
    "approach_sign",
    "sojourn_time",
    "arrival_server",
    "residual_sojourn",
    "advance_epoch",
    "MobilityModel",
]


# =============================================================================
# IMPORTS
# =============================================================================

import logging
import math
import warnings

import attr

import numpy as np

from .core import SojournClampWarning


# =============================================================================
# CONSTANTS
# =============================================================================

logger = logging.getLogger(__name__)


# =============================================================================
# FUNCTIONS
# =============================================================================


def _prior(vehicle, params):
    if params is None or params.prior == "heading":
        confidence = 1.0 if params is None else params.prior_confidence
        return vehicle.heading * confidence
    return vehicle.heading * (2.0 * params.markov_stay - 1.0)


def direction_indicator(vehicle, server, x_prev=None, params=None):
    """Direction indicator of ``vehicle`` with respect to ``server``.

    Returns ``+1`` when the distance to the server grew since the previous
    epoch, ``-1`` when it shrank. Without a previous position, or when the
    distance did not change, the configured mobility prior is returned.

    Parameters
    ----------
    vehicle : VehicleState
    server : ServerState
    x_prev : float, optional
        Position at the previous epoch; defaults to ``vehicle.x_prev``.
    params : MobilityParams, optional
        Prior settings; without them the heading prior with full confidence
        is used.

    """
    x_prev = vehicle.x_prev if x_prev is None else x_prev
    if x_prev is None:
        return _prior(vehicle, params)
    delta = abs(vehicle.x - server.x) - abs(x_prev - server.x)
    if delta > 0:
        return 1.0
    if delta < 0:
        return -1.0
    return _prior(vehicle, params)


def approach_sign(vehicle, server):
    """``-1`` if the vehicle moves away from the server, ``+1`` otherwise."""
    offset = vehicle.heading * (vehicle.x - server.x)
    return -1.0 if offset > 0 else 1.0


def sojourn_time(vehicle, server, zeta):
    """Remaining time of ``vehicle`` inside the coverage of ``server``.

    ``(R + zeta * |X_i - X_j|) / v``. A parked vehicle never leaves; a
    negative value (fractional indicator) is clamped to zero with a
    :class:`SojournClampWarning`.

    Parameters
    ----------
    vehicle : VehicleState
    server : ServerState
    zeta : float
        ``-1`` when the vehicle moves away from the server and ``+1`` when
        it approaches it, as returned by :func:`approach_sign`. The direction
        indicator has the opposite sign and is only passed in literal mode
        (see :meth:`MobilityModel.sojourn_zeta`).

    """
    if server.is_cloud:
        return math.inf
    if vehicle.speed <= 0:
        return math.inf
    value = (server.radius + zeta * abs(vehicle.x - server.x)) / vehicle.speed
    if value < 0:
        warnings.warn(
            f"Negative sojourn time {value:.4g} s for vehicle {vehicle.vid} "
            f"at server {server.sid} clamped to 0",
            SojournClampWarning,
        )
        return 0.0
    return value


def arrival_server(
    vehicle,
    server,
    t_move,
    server_count,
    zeta=None,
    mode="corrected",
    pitch=None,
):
    """Index of the server ``vehicle`` is attached to after ``t_move``.

    Parameters
    ----------
    vehicle : VehicleState
    server : ServerState
        The server currently covering the vehicle.
    t_move : float
        Seconds until the result is ready.
    server_count : int
        Number of edge servers; the result is clamped to ``[0, E - 1]``.
    zeta : float, optional
        Indicator used in the formula. Defaults to :func:`approach_sign`.
    mode : {"corrected", "literal"}
    pitch : float, optional
        Distance between neighbour servers, used by the corrected mode.
        Defaults to the coverage diameter ``2R``.

    """
    if t_move < 0:
        raise ValueError(f"'t_move' can't be negative. Found {t_move}")
    if zeta is None:
        zeta = approach_sign(vehicle, server)
    if vehicle.speed <= 0:
        return server.sid

    distance = abs(vehicle.x - server.x)
    travel = vehicle.speed * t_move
    if mode == "literal":
        direction = 1 if zeta >= 0 else -1
        excess = travel - (server.radius + zeta * distance)
        steps = math.ceil(excess / vehicle.speed)
    else:
        pitch = 2.0 * server.radius if pitch is None else pitch
        direction = vehicle.heading
        excess = travel - (pitch / 2.0 + zeta * distance)
        steps = math.ceil(excess / pitch)

    arrival = server.sid + direction * max(0, steps)
    return int(np.clip(arrival, 0, server_count - 1))


def residual_sojourn(vehicle, server, t_move):
    """Time left inside ``server`` coverage once ``t_move`` has elapsed.

    The position is extrapolated along the heading; zero if the vehicle is
    then outside the coverage.

    """
    if server.is_cloud or vehicle.speed <= 0:
        return math.inf
    x_future = vehicle.x + vehicle.heading * vehicle.speed * t_move
    distance = abs(x_future - server.x)
    if distance > server.radius:
        return 0.0
    moving_away = vehicle.heading * (x_future - server.x) > 0
    zeta = -1.0 if moving_away else 1.0
    return (server.radius + zeta * distance) / vehicle.speed


def advance_epoch(world, slots=None):
    """Move every vehicle along its heading.

    Parameters
    ----------
    world : WorldState
    slots : int, optional
        Number of slots covered by the move; defaults to the epoch length.

    Positions wrap around the road ends. The previous position is stored in
    the frame of the new one (not wrapped).

    """
    config = world.config
    slots = config.epoch_length if slots is None else slots
    span = slots * config.slot_duration
    for vehicle in world.vehicles:
        dx = vehicle.heading * vehicle.speed * span
        x_new = vehicle.x + dx
        wrapped = x_new % config.road_length
        vehicle.x_prev = wrapped - dx
        vehicle.x = wrapped


# =============================================================================
# MODEL
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class MobilityModel:
    """The mobility predictions of a run bundled with its settings."""

    params: object
    server_count: int
    pitch: float = None

    @classmethod
    def from_config(cls, config):
        return cls(
            params=config.mobility,
            server_count=config.server_count,
            pitch=config.road_length / config.server_count,
        )

    @property
    def mode(self):
        return self.params.arrival_mode

    def direction(self, vehicle, server):
        return direction_indicator(vehicle, server, params=self.params)

    def sojourn_zeta(self, vehicle, server):
        """Direction indicator in literal mode, approach sign otherwise."""
        if self.mode == "literal":
            return self.direction(vehicle, server)
        return approach_sign(vehicle, server)

    def sojourn(self, vehicle, server):
        zeta = self.sojourn_zeta(vehicle, server)
        return sojourn_time(vehicle, server, zeta)

    def arrival(self, vehicle, server, t_move):
        zeta = self.sojourn_zeta(vehicle, server)
        j_arr = arrival_server(
            vehicle,
            server,
            t_move,
            self.server_count,
            zeta,
            self.mode,
            self.pitch,
        )
        if logger.isEnabledFor(logging.DEBUG):
            other = "corrected" if self.mode == "literal" else "literal"
            other_zeta = (
                approach_sign(vehicle, server)
                if other == "corrected"
                else self.direction(vehicle, server)
            )
            j_other = arrival_server(
                vehicle,
                server,
                t_move,
                self.server_count,
                other_zeta,
                other,
                self.pitch,
            )
            if j_other != j_arr:
                logger.debug(
                    "Arrival server of vehicle %d: %s=%d %s=%d",
                    vehicle.vid,
                    self.mode,
                    j_arr,
                    other,
                    j_other,
                )
        return j_arr
