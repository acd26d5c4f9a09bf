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

"""Many-to-one matching between pending tasks and servers.

Tasks rank servers by the utility their vehicle gets from the predicted deal
and servers rank tasks by their own utility. Tasks propose in rounds; every
server keeps the most preferred proposals that fit its idle cores and its
unallocated resource and rejects the others, which propose again to their
next choice. A task a server turned down for lack of resource is taken back
when a later displacement frees enough of it.

"""

__all__ = [
    "Offer",
    "PreferenceLists",
    "Matching",
    "StabilityReport",
    "ParetoReport",
    "may_meet_deadline",
    "build_preferences",
    "run_matching",
    "verify_stability",
    "verify_weak_pareto",
    "find_stable_matching",
]


# =============================================================================
# IMPORTS
# =============================================================================

import itertools as it
import logging
import math

import attr

from .bargaining import negotiate
from .core import EnumerationTooLarge


# =============================================================================
# CONSTANTS
# =============================================================================

logger = logging.getLogger(__name__)

#: Largest instance accepted by the weak Pareto enumeration.
MAX_PARETO_TASKS = 6
MAX_PARETO_SERVERS = 3


# =============================================================================
# PREFERENCES
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class Offer:
    """The part of a deal the matching looks at."""

    f: float
    vehicle_utility: float
    server_utility: float


@attr.s(frozen=True, auto_attribs=True)
class PreferenceLists:
    """Preferences of tasks and servers built from predicted deals.

    Attributes
    ----------
    deals : dict
        ``(task_id, server_id) -> Deal`` for every acceptable pair.
    task_prefs : dict
        ``task_id -> [server_id, ...]`` best first.
    server_prefs : dict
        ``server_id -> [task_id, ...]`` best first.
    capacity : dict
        ``server_id -> (idle cores, unallocated resource)``.

    """

    deals: dict
    task_prefs: dict
    server_prefs: dict
    capacity: dict

    @classmethod
    def from_deals(cls, deals, capacity, tasks=()):
        """Sort the acceptable deals; ties go to the lower id."""
        deals = {
            k: d
            for k, d in deals.items()
            if d.vehicle_utility > 0 and d.server_utility > 0
        }
        task_prefs = {t: [] for t in tasks}
        server_prefs = {s: [] for s in capacity}
        for (task, server), deal in deals.items():
            task_prefs.setdefault(task, []).append(server)
            server_prefs.setdefault(server, []).append(task)
        for task, servers in task_prefs.items():
            servers.sort(key=lambda s: (-deals[task, s].vehicle_utility, s))
        for server, tasks_ in server_prefs.items():
            tasks_.sort(key=lambda t: (-deals[t, server].server_utility, t))
        return cls(
            deals=deals,
            task_prefs=task_prefs,
            server_prefs=server_prefs,
            capacity=dict(capacity),
        )

    @classmethod
    def from_utilities(cls, table, capacity):
        """Build preferences from ``{(task, server): (u_task, u_server, f)}``.

        Handy to set up instances by hand.

        """
        deals = {k: Offer(f, u_i, u_j) for k, (u_i, u_j, f) in table.items()}
        tasks = sorted({k for k, _ in table})
        return cls.from_deals(deals, capacity, tasks)

    @property
    def tasks(self):
        return sorted(self.task_prefs)

    @property
    def servers(self):
        return sorted(self.server_prefs)

    def task_rank(self, task, server):
        """Position of ``server`` in the list of ``task`` (None if absent)."""
        try:
            return self.task_prefs[task].index(server)
        except ValueError:
            return None

    def task_value(self, task, server):
        if server is None:
            return 0.0
        return self.deals[task, server].vehicle_utility

    def server_value(self, task, server):
        return self.deals[task, server].server_utility


def may_meet_deadline(task, link, server, slot):
    """Quick prune: False when not even the upload plus the computation on
    the resource ``server`` can offer fit the deadline."""
    cap = server.offer_capacity(slot)
    if cap <= 0:
        return False
    return task.d_in / link.rate + task.c_req / cap <= task.remaining_budget


def build_preferences(
    world, tasks, links, slot=None, servers=None, mobility=None
):
    """Negotiate every (task, server) pair and rank the outcomes.

    Parameters
    ----------
    world : WorldState
    tasks : iterable of TaskSpec
        The pending tasks.
    links : mapping
        ``task_id -> LinkContext`` (or None outside coverage).
    slot : int, optional
    servers : iterable of ServerState, optional
        Candidate servers; all edge servers plus the cloud by default.
    mobility : MobilityModel, optional

    Returns
    -------
    PreferenceLists

    """
    slot = world.slot if slot is None else slot
    servers = world.all_servers if servers is None else list(servers)
    capacity = {
        s.sid: (s.idle_cores(slot), s.f_available(slot)) for s in servers
    }
    deals = {}
    tasks = list(tasks)
    for task in tasks:
        link = links.get(task.task_id)
        if link is None:
            continue
        vehicle = world.vehicle(task.owner)
        for server in servers:
            if not may_meet_deadline(task, link, server, slot):
                continue
            deal = negotiate(
                world, vehicle, task, server, link, slot, mobility
            )
            if deal.ok:
                deals[task.task_id, server.sid] = deal
    return PreferenceLists.from_deals(
        deals, capacity, [t.task_id for t in tasks]
    )


# =============================================================================
# DEFERRED ACCEPTANCE
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class Matching:
    """Assignment of tasks to servers.

    Attributes
    ----------
    assignment : dict
        ``task_id -> server_id`` of the matched tasks.
    held : dict
        ``server_id -> tuple of task_id`` in server preference order.
    rejected : tuple
        Tasks rejected by every acceptable server.
    proposals : int
        Number of proposals made.
    trace : tuple
        Human readable log of the rounds.

    """

    assignment: dict
    held: dict
    rejected: tuple
    proposals: int = 0
    trace: tuple = ()

    def server_of(self, task):
        return self.assignment.get(task)


def _fits(preferences, server, tasks):
    cores, budget = preferences.capacity[server]
    used = math.fsum(preferences.deals[t, server].f for t in tasks)
    return len(tasks) <= cores and used <= budget * (1 + 1e-12)


def _admit(preferences, server, candidates):
    """Greedy by server preference under the core and resource budgets."""
    cores, budget = preferences.capacity[server]
    ranked = sorted(
        candidates, key=lambda t: (-preferences.server_value(t, server), t)
    )
    kept, rejected, used = [], [], 0.0
    for task in ranked:
        f = preferences.deals[task, server].f
        if len(kept) < cores and used + f <= budget * (1 + 1e-12):
            kept.append(task)
            used += f
        else:
            rejected.append(task)
    return kept, rejected


def _settle(preferences, proposers, held, where, trace, round_):
    """Re-run every server's admission until no held set changes.

    A server considers each task that ever proposed to it and is not held
    at a server the task ranks higher, so a task rejected for lack of
    resource comes back once a displacement frees enough of it.

    """
    rank = preferences.task_rank
    seen = set()
    changed = True
    while changed:
        changed = False
        for server in sorted(held):
            pool = [
                t
                for t in proposers[server]
                if where.get(t) is None
                or rank(t, where[t]) >= rank(t, server)
            ]
            kept, _ = _admit(preferences, server, pool)
            if kept == held[server]:
                continue
            changed = True
            for task in held[server]:
                if task not in kept:
                    del where[task]
                    trace.append(
                        f"round {round_}: server {server} rejects {task}"
                    )
            for task in kept:
                previous = where.get(task)
                if previous is not None and previous != server:
                    held[previous].remove(task)
                    trace.append(
                        f"round {round_}: server {server} takes back "
                        f"{task} from server {previous}"
                    )
                where[task] = server
            held[server] = kept

        state = tuple(sorted(where.items()))
        if changed and state in seen:
            logger.warning("Admission cycle in round %d", round_)
            break
        seen.add(state)


def run_matching(preferences):
    """Task proposing deferred acceptance with capacities.

    Every task proposes down its list. After each round of proposals the
    servers re-run their greedy admission over all the tasks that proposed
    to them and are not held at a server they like more.

    Returns
    -------
    Matching

    """
    next_choice = {t: 0 for t in preferences.task_prefs}
    held = {s: [] for s in preferences.server_prefs}
    proposers = {s: set() for s in preferences.server_prefs}
    where = {}
    free = sorted(t for t, p in preferences.task_prefs.items() if p)
    exhausted = set()
    trace, proposals, round_ = [], 0, 0

    while free:
        round_ += 1
        offers = {}
        for task in free:
            prefs = preferences.task_prefs[task]
            server = prefs[next_choice[task]]
            next_choice[task] += 1
            proposers[server].add(task)
            offers[task] = server
            proposals += 1
            trace.append(f"round {round_}: task {task} -> server {server}")

        _settle(preferences, proposers, held, where, trace, round_)
        for task, server in offers.items():
            if task not in where:
                trace.append(
                    f"round {round_}: server {server} rejects {task}"
                )

        free = []
        for task, prefs in sorted(preferences.task_prefs.items()):
            if task in where:
                continue
            if next_choice[task] < len(prefs):
                free.append(task)
            elif task not in exhausted:
                exhausted.add(task)
                trace.append(f"round {round_}: task {task} exhausted")

    logger.debug(
        "Matching done in %d rounds with %d proposals", round_, proposals
    )
    return Matching(
        assignment=dict(where),
        held={s: tuple(ts) for s, ts in held.items()},
        rejected=tuple(
            sorted(t for t in preferences.task_prefs if t not in where)
        ),
        proposals=proposals,
        trace=tuple(trace),
    )


# =============================================================================
# ORACLES
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class StabilityReport:
    blocking_pairs: tuple
    checked: int

    @property
    def stable(self):
        return not self.blocking_pairs


@attr.s(frozen=True, auto_attribs=True)
class ParetoReport:
    dominating: dict
    enumerated: int

    @property
    def weak_pareto(self):
        return self.dominating is None


def verify_stability(matching, preferences):
    """Look for blocking pairs.

    ``(k, j)`` blocks when task ``k`` strictly prefers ``j`` to its current
    server and ``j`` could host ``k`` together with the tasks it holds and
    ranks above ``k``.

    Returns
    -------
    StabilityReport

    """
    blocking, checked = [], 0
    for task, servers in preferences.task_prefs.items():
        current = matching.server_of(task)
        for server in servers:
            if server == current:
                break
            checked += 1
            mine = preferences.server_value(task, server)
            better = [
                t
                for t in matching.held.get(server, ())
                if (-preferences.server_value(t, server), t) < (-mine, task)
            ]
            if _fits(preferences, server, better + [task]):
                blocking.append((task, server))
    return StabilityReport(blocking_pairs=tuple(blocking), checked=checked)


def verify_weak_pareto(
    matching,
    preferences,
    max_tasks=MAX_PARETO_TASKS,
    max_servers=MAX_PARETO_SERVERS,
):
    """Search a matching in which every task is strictly better off.

    Only the options a task strictly prefers to its current one are
    enumerated.

    Raises
    ------
    EnumerationTooLarge
        If the instance exceeds ``max_tasks`` tasks or ``max_servers``
        servers.

    """
    tasks, servers = preferences.tasks, preferences.servers
    if len(tasks) > max_tasks or len(servers) > max_servers:
        raise EnumerationTooLarge(
            f"Instance with {len(tasks)} tasks and {len(servers)} servers "
            f"exceeds {max_tasks}x{max_servers}"
        )
    if not tasks:
        return ParetoReport(dominating=None, enumerated=0)

    options = []
    for task in tasks:
        current = preferences.task_value(task, matching.server_of(task))
        options.append(
            [
                s
                for s in preferences.task_prefs[task]
                if preferences.task_value(task, s) > current
            ]
        )

    enumerated = 0
    for choice in it.product(*options):
        enumerated += 1
        load = {}
        for task, server in zip(tasks, choice):
            load.setdefault(server, []).append(task)
        if all(_fits(preferences, s, ts) for s, ts in load.items()):
            return ParetoReport(
                dominating=dict(zip(tasks, choice)), enumerated=enumerated
            )
    return ParetoReport(dominating=None, enumerated=enumerated)


def find_stable_matching(
    preferences,
    max_tasks=MAX_PARETO_TASKS,
    max_servers=MAX_PARETO_SERVERS,
):
    """Enumerate the feasible matchings and return a stable one.

    With resource budgets a market may have no stable matching at all;
    None is returned then.

    Raises
    ------
    EnumerationTooLarge
        If the instance exceeds ``max_tasks`` tasks or ``max_servers``
        servers.

    """
    tasks, servers = preferences.tasks, preferences.servers
    if len(tasks) > max_tasks or len(servers) > max_servers:
        raise EnumerationTooLarge(
            f"Instance with {len(tasks)} tasks and {len(servers)} servers "
            f"exceeds {max_tasks}x{max_servers}"
        )

    options = [[None] + list(preferences.task_prefs[t]) for t in tasks]
    for choice in it.product(*options):
        load = {s: [] for s in servers}
        for task, server in zip(tasks, choice):
            if server is not None:
                load[server].append(task)
        if not all(_fits(preferences, s, ts) for s, ts in load.items()):
            continue
        held = {
            s: tuple(
                sorted(ts, key=lambda t: (-preferences.server_value(t, s), t))
            )
            for s, ts in load.items()
        }
        candidate = Matching(
            assignment={t: s for t, s in zip(tasks, choice) if s is not None},
            held=held,
            rejected=tuple(t for t, s in zip(tasks, choice) if s is None),
        )
        if verify_stability(candidate, preferences).stable:
            return candidate
    return None
