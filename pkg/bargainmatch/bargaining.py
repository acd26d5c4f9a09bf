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

"""Resource allocation and pricing between one vehicle and one server.

The vehicle (buyer) requests the amount of resource that maximizes its
utility at the current price; the server (seller) and the vehicle split the
bid-ask spread ``[c_min, c_max]`` through a finite horizon alternating
offers game whose discount factors come from the delays. As the requested
resource depends on the price and the price bounds depend on the resource,
both are refined alternately until the price settles or the horizon is
reached.

Prices are expressed per cycle/s (currency per Hz).

"""

__all__ = [
    "VEHICLE",
    "SERVER",
    "NoDealReason",
    "PriceBounds",
    "Partitions",
    "LinkContext",
    "Deal",
    "NoDeal",
    "optimal_allocation",
    "price_bounds",
    "discount_factors",
    "optimal_partitions",
    "optimal_price",
    "delay_terms",
    "opening_terms",
    "negotiate",
]


# =============================================================================
# IMPORTS
# =============================================================================

import enum
import math

import attr

from .core import CLOUD, ContractViolation, EDGE, GHZ, NoInteriorOptimum
from .costmodel import cloud_transfer_delay, edge_transfer_delay
from .mobility import MobilityModel, residual_sojourn
from .utility import server_energy, server_utility, vehicle_utility


# =============================================================================
# CONSTANTS
# =============================================================================

VEHICLE = "vehicle"
SERVER = "server"

#: Discount factors are kept below 1 by this margin.
EPSILON_MARGIN = 1e-9


class NoDealReason(enum.Enum):
    """Why a vehicle and a server did not trade."""

    NO_CORE = "no idle core"
    OUT_OF_COVERAGE = "vehicle outside any coverage"
    DEADLINE = "deadline can't be met"
    SOJOURN = "upload longer than the sojourn time"
    HANDOVER = "result dispatch longer than the residual sojourn"
    NO_SURPLUS = "empty bargaining set"
    NO_OPTIMUM = "no interior resource optimum"
    DISAGREEMENT = "utilities not positive"
    PAYMENT = "payment above the budget"
    ENERGY = "server energy budget exhausted"


# =============================================================================
# VALUES
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class PriceBounds:
    """Lowest price accepted by the server and highest paid by the vehicle."""

    c_min: float
    c_max: float

    @property
    def spread(self):
        return self.c_max - self.c_min


@attr.s(frozen=True, auto_attribs=True)
class Partitions:
    """Shares of the spread in the two kinds of period.

    ``ii`` and ``ji`` are the shares of the vehicle and of the server when
    the vehicle proposes; ``ij`` and ``jj`` the same shares when the server
    proposes. ``clamped`` counts the shares moved into ``[0, 1]``.

    """

    ii: float
    ji: float
    ij: float
    jj: float
    clamped: int = 0


@attr.s(frozen=True, auto_attribs=True)
class LinkContext:
    """What the vehicle knows about its uplink in the current slot."""

    rate: float
    j_cur: int
    sojourn: float


@attr.s(frozen=True, auto_attribs=True)
class DelayTerms:
    var1: float
    t_tran: float
    t_comp: float
    t_dispatch: float
    j_arr: int
    residual: float

    @property
    def t_total(self):
        return self.var1 + self.t_comp


@attr.s(frozen=True, auto_attribs=True)
class Deal:
    """A negotiated allocation ``f`` (cycles/s) at ``price`` per cycle/s."""

    vehicle: int
    server: int
    kind: str
    f: float
    price: float
    vehicle_utility: float
    server_utility: float
    bounds: PriceBounds
    proposer: str
    rounds: int
    terms: DelayTerms
    server_energy: float
    sojourn: float
    clamped: int = 0

    ok = True

    @property
    def payment(self):
        return self.price * self.f

    @property
    def price_per_ghz(self):
        return self.price * GHZ

    @property
    def delay(self):
        return self.terms.t_total

    @property
    def welfare(self):
        return self.vehicle_utility + self.server_utility


@attr.s(frozen=True, auto_attribs=True)
class NoDeal:
    """The outcome of a failed negotiation."""

    vehicle: int
    server: int
    reason: NoDealReason

    ok = False


# =============================================================================
# CLOSED FORMS
# =============================================================================


def optimal_allocation(c, task, var1, vehicle):
    """Resource maximizing the vehicle utility at price ``c``.

    Parameters
    ----------
    c : float
        Price per cycle/s; must be positive.
    task : TaskSpec
    var1 : float
        Every delay term but the computation (waiting, upload, migrations).
    vehicle : VehicleState

    Returns
    -------
    float
        ``f*`` in cycles/s.

    Raises
    ------
    NoInteriorOptimum
        If the deadline leaves no room for the computation or the vehicle
        does not value the delay at all.

    """
    if c <= 0:
        raise ContractViolation(f"The price must be positive. Found {c}")
    w, budget, c_req = vehicle.weight, vehicle.payment_budget, task.c_req
    log_t = math.log1p(task.t_max)
    room = 1.0 + task.t_max - var1
    x = c * log_t * (1 - w)
    if w <= 0 or room <= 0 or x <= 0:
        raise NoInteriorOptimum(
            f"No interior optimum (w={w}, 1 + T_max - var1={room})"
        )
    radicand = x * (x * c_req + 4 * budget * w * room) / c_req
    if radicand < 0:
        raise NoInteriorOptimum(f"Negative radicand {radicand}")

    # 2 w C / (F - x) rationalized: same value without the cancellation.
    return c_req * (math.sqrt(radicand) + x) / (2 * x * room)


def price_bounds(f, task, server, vehicle, t_total, energy_params):
    """Price range of a trade of ``f`` cycles/s.

    ``c_min`` zeroes the server utility and ``c_max`` the vehicle utility.

    Raises
    ------
    ContractViolation
        If ``t_total`` exceeds the deadline (no upper bound exists).

    """
    if f <= 0:
        raise ContractViolation(f"'f' must be positive. Found {f}")
    if t_total > task.t_max:
        raise ContractViolation(
            f"Delay {t_total:.4g} s beyond the deadline {task.t_max:.4g} s"
        )
    w_j, w_i = server.weight, vehicle.weight
    energy = server_energy(task, f, server, energy_params)
    c_min = (
        (1 - w_j)
        * energy
        * server.price_ceiling
        * server.f_max
        / (w_j * server.energy_budget * f)
    )
    c_max = (
        w_i
        * math.log1p(task.t_max - t_total)
        * vehicle.payment_budget
        / ((1 - w_i) * f * math.log1p(task.t_max))
    )
    return PriceBounds(c_min=c_min, c_max=c_max)


def discount_factors(task, t_tran, t_comp):
    """Patience of the vehicle and of the server.

    ``1 - T_tran / T_max`` and ``1 - T_comp / T_max`` kept inside
    ``[0, 1 - 1e-9]``.

    """
    top = 1.0 - EPSILON_MARGIN

    def clip(value):
        return min(max(value, 0.0), top)

    return clip(1 - t_tran / task.t_max), clip(1 - t_comp / task.t_max)


def optimal_partitions(eps_i, eps_j, horizon, clamp=True):
    """Subgame perfect shares of a ``horizon`` periods bargaining game.

    .. code-block:: pycon

        >>> p = optimal_partitions(0.9, 0.9, 1000)
        >>> round(p.ii, 5)
        0.37368

    Parameters
    ----------
    eps_i, eps_j : float
        Discount factors in ``[0, 1)``.
    horizon : int
        Number of bargaining periods.
    clamp : bool, default True
        Move every share into ``[0, 1]``.

    """
    for name, eps in (("eps_i", eps_i), ("eps_j", eps_j)):
        if not 0 <= eps < 1:
            raise ContractViolation(f"'{name}' must be in [0, 1). Found {eps}")
    if horizon < 1:
        raise ContractViolation(f"'horizon' must be >= 1. Found {horizon}")

    prod = eps_i * eps_j
    tail = prod ** math.ceil(horizon / 2)
    den = 1 - prod
    shares = (
        eps_i - (1 - eps_i) * (1 - tail) / den,
        (1 - eps_i) * (2 - prod - tail) / den,
        (1 - eps_j) * (1 - tail) / den,
        (eps_j * (1 - eps_i) - (1 - eps_j) * tail) / den,
    )
    clamped = 0
    if clamp:
        fixed = tuple(min(max(s, 0.0), 1.0) for s in shares)
        clamped = sum(1 for a, b in zip(shares, fixed) if a != b)
        shares = fixed
    return Partitions(*shares, clamped=clamped)


def optimal_price(bounds, partitions, proposer):
    """Price agreed when ``proposer`` makes the offer.

    The vehicle keeps its share of the spread below ``c_max``.

    Raises
    ------
    ContractViolation
        If the spread is negative (nothing to bargain on).

    """
    if bounds.spread < 0:
        raise ContractViolation("Empty bargaining set: c_max < c_min")
    if proposer == VEHICLE:
        share = partitions.ii
    elif proposer == SERVER:
        share = partitions.ij
    else:
        raise ContractViolation(f"Unknown proposer {proposer!r}")
    return bounds.c_max - bounds.spread * share


# =============================================================================
# NEGOTIATION
# =============================================================================


def delay_terms(world, mobility, vehicle, task, server, link, f):
    """Delay decomposition of ``task`` served by ``server`` at ``f``."""
    backhaul = world.config.backhaul
    t_up = task.d_in / link.rate
    t_comp = task.c_req / f
    current = world.server(link.j_cur)

    if server.is_cloud:
        t_in = t_up + task.d_in / backhaul.cloud_rate
        j_arr = mobility.arrival(vehicle, current, t_in + t_comp)
        var1 = task.waited + cloud_transfer_delay(task, link.rate, backhaul)
        t_dispatch = task.d_out / backhaul.cloud_rate
    else:
        handover = server.sid != link.j_cur
        t_in = t_up + (2 * task.d_in / backhaul.fiber_rate if handover else 0)
        j_arr = mobility.arrival(vehicle, current, t_in + t_comp)
        dispatch = server.sid != j_arr
        var1 = task.waited + edge_transfer_delay(
            task, link.rate, handover, dispatch, backhaul
        )
        t_dispatch = 2 * task.d_out / backhaul.fiber_rate if dispatch else 0.0

    residual = residual_sojourn(vehicle, world.server(j_arr), t_in + t_comp)
    return DelayTerms(
        var1=var1,
        t_tran=task.waited + t_up,
        t_comp=t_comp,
        t_dispatch=t_dispatch,
        j_arr=j_arr,
        residual=residual,
    )


def _next_proposer(u_i, u_j, previous):
    if u_i > 0 and u_j <= 0:
        return VEHICLE
    if u_i <= 0 and u_j > 0:
        return SERVER
    return SERVER if previous == VEHICLE else VEHICLE


def _feasible(task, terms):
    return terms.t_total <= task.t_max and terms.t_dispatch <= terms.residual


def opening_terms(world, vehicle, task, server, link, slot, mobility):
    """Checks shared by every pricing mechanism before the first offer.

    Returns
    -------
    tuple or NoDeal
        ``(capacity, DelayTerms at that capacity)`` when the pair can trade.

    """

    def no_deal(reason):
        return NoDeal(vehicle=vehicle.vid, server=server.sid, reason=reason)

    if link is None or link.rate <= 0:
        return no_deal(NoDealReason.OUT_OF_COVERAGE)
    cap = server.offer_capacity(slot)
    if cap <= 0:
        return no_deal(NoDealReason.NO_CORE)
    if server.energy_left <= 0:
        return no_deal(NoDealReason.ENERGY)
    if task.d_in / link.rate > link.sojourn:
        return no_deal(NoDealReason.SOJOURN)

    terms = delay_terms(world, mobility, vehicle, task, server, link, cap)
    if terms.t_total > task.t_max:
        return no_deal(NoDealReason.DEADLINE)
    if terms.t_dispatch > terms.residual:
        return no_deal(NoDealReason.HANDOVER)
    return cap, terms


def negotiate(world, vehicle, task, server, link, slot=None, mobility=None):
    """Bargain the resource and the price of ``task`` on ``server``.

    The server first offers all the resource a new task can get. Each round
    prices the current allocation, lets the vehicle re-request its optimal
    amount at that price and reprices; the proposer of a round follows the
    sign of both utilities. Rounds stop when the price moves less than the
    configured tolerance or after the bargaining horizon.

    Parameters
    ----------
    world : WorldState
    vehicle : VehicleState
    task : TaskSpec
    server : ServerState
    link : LinkContext or None
        Uplink of the vehicle; None when it is outside any coverage.
    slot : int, optional
        Defaults to the world clock.
    mobility : MobilityModel, optional

    Returns
    -------
    Deal or NoDeal

    """
    config = world.config
    slot = world.slot if slot is None else slot
    mobility = mobility or MobilityModel.from_config(config)
    bargain, energy_params = config.bargain, config.energy

    def no_deal(reason):
        return NoDeal(vehicle=vehicle.vid, server=server.sid, reason=reason)

    opening = opening_terms(
        world, vehicle, task, server, link, slot, mobility
    )
    if not isinstance(opening, tuple):
        return opening
    cap, terms = opening

    def quote(f, terms, proposer):
        bounds = price_bounds(
            f, task, server, vehicle, terms.t_total, energy_params
        )
        if bounds.spread < 0:
            return bounds, None, 0
        eps = discount_factors(task, terms.t_tran, terms.t_comp)
        parts = optimal_partitions(*eps, bargain.horizon, bargain.clamp)
        return bounds, optimal_price(bounds, parts, proposer), parts.clamped

    def utilities(f, price, terms):
        u_i = vehicle_utility(
            vehicle, task, server.kind, terms.t_total, f=f, price=price
        ).vehicle_utility
        u_j = server_utility(
            task, f, price, server, energy_params
        ).server_utility
        return u_i, u_j

    f, proposer = cap, VEHICLE
    bounds, price, clamped = quote(f, terms, proposer)
    if price is None:
        return no_deal(NoDealReason.NO_SURPLUS)
    u_i, u_j = utilities(f, price, terms)

    rounds = 0
    for rounds in range(1, bargain.horizon + 1):
        if price > 0:
            try:
                f_req = optimal_allocation(price, task, terms.var1, vehicle)
            except NoInteriorOptimum:
                return no_deal(NoDealReason.NO_OPTIMUM)
            f_new = min(cap, f_req)
        else:
            f_new = cap

        new_terms = delay_terms(
            world, mobility, vehicle, task, server, link, f_new
        )
        if not _feasible(task, new_terms):
            break
        if not (u_i > 0 and u_j > 0):
            proposer = _next_proposer(u_i, u_j, proposer)
        new_bounds, new_price, n_clamped = quote(f_new, new_terms, proposer)
        if new_price is None:
            break

        moved = abs(new_price - price)
        f, terms, bounds, price = f_new, new_terms, new_bounds, new_price
        clamped += n_clamped
        u_i, u_j = utilities(f, price, terms)
        if moved <= bargain.tolerance * abs(price) and u_i > 0 and u_j > 0:
            break

    if not (u_i > 0 and u_j > 0):
        return no_deal(NoDealReason.DISAGREEMENT)
    if price * f > vehicle.payment_budget:
        return no_deal(NoDealReason.PAYMENT)
    energy = server_energy(task, f, server, energy_params)
    if energy > server.energy_left:
        return no_deal(NoDealReason.ENERGY)

    return Deal(
        vehicle=vehicle.vid,
        server=server.sid,
        kind=CLOUD if server.is_cloud else EDGE,
        f=f,
        price=price,
        vehicle_utility=u_i,
        server_utility=u_j,
        bounds=bounds,
        proposer=proposer,
        rounds=rounds,
        terms=terms,
        server_energy=energy,
        sojourn=link.sojourn,
        clamped=clamped,
    )
