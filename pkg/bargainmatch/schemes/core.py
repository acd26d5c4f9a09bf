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

"""Offloading schemes base classes"""

__all__ = [
    "SchemeBadDefinedError",
    "SchemeContractError",
    "SchemeConf",
    "Scheme",
]


# =============================================================================
# IMPORTS
# =============================================================================

from collections import namedtuple

from ..config import SCHEMES


# =============================================================================
# EXCEPTIONS
# =============================================================================


class SchemeBadDefinedError(Exception):
    """The scheme class is not properly defined."""


class SchemeContractError(ValueError):
    """The scheme got parameters or returned decisions it should not."""


# =============================================================================
# BASE CLASSES
# =============================================================================

SchemeConf = namedtuple("SchemeConf", ["name", "params", "uses_uplink"])


class SchemeMeta(type):
    def __new__(mcls, name, bases, namespace):
        cls = super(SchemeMeta, mcls).__new__(mcls, name, bases, namespace)

        try:
            cls != Scheme
        except NameError:
            return cls

        if not hasattr(cls, "name"):
            msg = "'{}' must redefine {}"
            raise SchemeBadDefinedError(msg.format(cls, "name attribute"))
        if cls.name not in SCHEMES:
            msg = "'name' must be one of {}. Found '{}'"
            raise SchemeBadDefinedError(msg.format(SCHEMES, cls.name))

        if cls.decide == Scheme.decide:
            msg = "'{}' must redefine {}"
            raise SchemeBadDefinedError(msg.format(cls, "decide method"))

        if not hasattr(cls, "params"):
            cls.params = {}
        for p in cls.params:
            if not isinstance(p, str):
                msg = "Params names must be an instance of string. Found {}"
                raise SchemeBadDefinedError(msg.format(type(p)))

        # the base class defines a uses_uplink classmethod
        uses_uplink = namespace.get("uses_uplink", True)

        cls._conf = SchemeConf(
            name=cls.name,
            params=tuple(cls.params.items()),
            uses_uplink=bool(uses_uplink),
        )

        if not cls.__doc__:
            cls.__doc__ = ""

        del cls.name, cls.params
        if "uses_uplink" in namespace:
            del cls.uses_uplink

        return cls


class Scheme(metaclass=SchemeMeta):
    """Base class of the offloading schemes.

    A scheme receives the pending tasks of a slot and returns one
    :class:`bargainmatch.context.Decision` per task. The engine commits the
    decisions in the returned order.

    """

    # This is only a place holder
    _conf = None

    @classmethod
    def get_name(cls):
        return cls._conf.name

    @classmethod
    def get_default_params(cls):
        """The default values of the available configuration parameters."""
        return dict(cls._conf.params)

    @classmethod
    def uses_uplink(cls):
        """False if the scheme never offloads (no uplink to schedule)."""
        return cls._conf.uses_uplink

    def __init__(self, **cparams):
        self.name = self.get_name()
        self.params = self.get_default_params()

        not_allowed = set(cparams).difference(self.params)
        if not_allowed:
            msg = "Scheme '{}' not allow the parameters: {}".format(
                self.name, ", ".join(sorted(not_allowed))
            )
            raise SchemeContractError(msg)

        self.params.update(cparams)
        self.validate_params()

    def __repr__(self):
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}({params})"

    def validate_params(self):
        """Check the configured parameters. Redefine when needed."""

    def reset(self, world):
        """Called once before the first slot of a run."""

    def observe(self, world, slot, decisions):
        """Called after the decisions of ``slot`` were committed."""

    def decide(self, tasks, context):
        """Decide where each task goes. Please redefine it!"""
        raise NotImplementedError()

    def run(self, tasks, context):
        """Execute :meth:`decide` and check one decision per task came back."""
        decisions = list(self.decide(tasks, context))
        expected = sorted(t.task_id for t in tasks)
        found = sorted(d.task.task_id for d in decisions)
        if expected != found:
            raise SchemeContractError(
                f"Scheme '{self.name}' must decide each task exactly once"
            )
        return decisions
