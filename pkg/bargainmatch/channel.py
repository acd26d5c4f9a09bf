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

"""Uplink channel between vehicles and road side units.

The gain of a link mixes a line of sight and a non line of sight component,
each with Nakagami small scale fading, log-distance path loss and log-normal
shadowing. Vehicles attached to the same server share the band (NOMA) and
the server decodes them by successive interference cancellation, strongest
first.

"""

__all__ = [
    "sample_small_scale",
    "path_loss",
    "channel_gain",
    "sample_gains",
    "sic_order",
    "noma_uplink_rate",
    "noma_rates",
    "schedule_uplink",
]


# =============================================================================
# IMPORTS
# =============================================================================

import math

import numpy as np

from .core import ContractViolation


# =============================================================================
# FADING AND PATH LOSS
# =============================================================================


def sample_small_scale(m, rng, p_bar=1.0, size=None):
    """Nakagami-m fading amplitude.

    The power ``h**2`` follows ``Gamma(shape=m, scale=p_bar / m)`` so its
    mean is ``p_bar``. With ``m = 1`` this is Rayleigh fading.

    """
    if not 0.5 <= m <= 5:
        raise ContractViolation(f"Nakagami 'm' must be in [0.5, 5]. Found {m}")
    return np.sqrt(rng.gamma(shape=m, scale=p_bar / m, size=size))


def path_loss(d, params, los):
    """Linear attenuation ``(4 pi d0 fc / c)**2 * (d / d0)**beta``.

    Distances below the reference distance are clamped to it.

    Raises
    ------
    ValueError
        If any distance is not positive.

    """
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("Distances must be positive")
    beta = params.beta_los if los else params.beta_nlos
    d0 = params.ref_distance
    free_space = (4 * np.pi * d0 * params.carrier / params.light_speed) ** 2
    loss = free_space * (np.maximum(d, d0) / d0) ** beta
    return float(loss) if loss.ndim == 0 else loss


def _component(distance, params, los, rng, size=None):
    m = params.m_los if los else params.m_nlos
    sigma = params.sigma_los if los else params.sigma_nlos
    h = sample_small_scale(m, rng, params.fading_power, size=size)
    shadowing = rng.normal(0.0, sigma, size=size)
    return h**2 / path_loss(distance, params, los) * 10 ** (-shadowing / 10)


def channel_gain(vehicle, server, params, rng):
    """Gain of the link from ``vehicle`` to ``server`` in the current slot.

    ``g = p_L * g_L + (1 - p_L) * g_NL`` with both components drawn.

    """
    distance = math.hypot(vehicle.x - server.x, vehicle.y - server.y)
    p_los = params.los_probability_at(distance)
    g_los = _component(distance, params, True, rng)
    g_nlos = _component(distance, params, False, rng)
    return float(p_los * g_los + (1 - p_los) * g_nlos)


def sample_gains(world, rng=None):
    """Gain of every vehicle toward the nearest edge server.

    One draw per vehicle and component every slot, so the stream does not
    depend on which vehicles upload.

    Returns
    -------
    numpy.ndarray
        One gain per vehicle, indexed by vehicle id.

    """
    rng = world.streams["channel"] if rng is None else rng
    n = len(world.vehicles)
    if not n:
        return np.empty(0)
    params = world.config.channel
    spacing = world.config.road_length / len(world.servers)

    xs = np.array([v.x for v in world.vehicles])
    ys = np.array([v.y for v in world.vehicles])
    nearest = np.clip(xs // spacing, 0, len(world.servers) - 1).astype(int)
    sx = np.array([world.servers[j].x for j in nearest])
    sy = np.array([world.servers[j].y for j in nearest])
    distance = np.maximum(np.hypot(xs - sx, ys - sy), 1e-9)

    p_los = np.array([params.los_probability_at(d) for d in distance])
    g_los = _component(distance, params, True, rng, size=n)
    g_nlos = _component(distance, params, False, rng, size=n)
    return p_los * g_los + (1 - p_los) * g_nlos


# =============================================================================
# NOMA
# =============================================================================


def sic_order(uploaders, gains):
    """Uploaders sorted by decreasing gain, lower id first on ties."""
    return sorted(uploaders, key=lambda vid: (-gains[vid], vid))


def _power(powers, vid):
    return powers if np.isscalar(powers) else powers[vid]


def noma_rates(uploaders, gains, powers, params):
    """Uplink rate of every uploader of one server.

    Parameters
    ----------
    uploaders : iterable of int
        Vehicle ids uploading to the same server.
    gains : mapping or array
        Gain per vehicle id.
    powers : float or mapping
        Transmit power in watts (one value for all or one per vehicle).
    params : ChannelParams

    Returns
    -------
    dict
        Rate in bit/s per vehicle id.

    """
    order = sic_order(uploaders, gains)
    received = [_power(powers, vid) * gains[vid] for vid in order]
    rates, interference = {}, 0.0
    for vid, rx in zip(reversed(order), reversed(received)):
        sinr = rx / (params.noise_power + interference)
        rates[vid] = params.bandwidth * math.log2(1 + sinr)
        interference += rx
    return rates


def noma_uplink_rate(uploaders, target, gains, powers, params):
    """Rate of ``target`` when decoded among ``uploaders``.

    Only the uploaders weaker than ``target`` interfere: the stronger ones
    were already decoded and cancelled.

    Raises
    ------
    ContractViolation
        If ``target`` is not one of the uploaders.

    """
    uploaders = list(uploaders)
    if target not in uploaders:
        raise ContractViolation(f"Vehicle {target} is not uploading")
    order = sic_order(uploaders, gains)
    weaker = order[order.index(target) + 1 :]
    interference = math.fsum(
        _power(powers, vid) * gains[vid] for vid in weaker
    )
    sinr = (
        _power(powers, target)
        * gains[target]
        / (params.noise_power + interference)
    )
    return params.bandwidth * math.log2(1 + sinr)


def schedule_uplink(candidates, gains, sic_capacity):
    """Split the vehicles wanting to upload to one server.

    The server decodes at most ``sic_capacity`` uploaders; the weakest
    excess ones wait for the next slot.

    Returns
    -------
    tuple of lists
        ``(admitted, deferred)`` both in decoding order.

    """
    order = sic_order(candidates, gains)
    return order[:sic_capacity], order[sic_capacity:]
