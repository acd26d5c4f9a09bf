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

"""Offloading schemes classes and register utilities"""

__all__ = [
    "register_scheme",
    "registered_schemes",
    "is_registered",
    "available_schemes",
    "scheme_of",
    "make_scheme",
    "SchemeBadDefinedError",
    "SchemeContractError",
    "Scheme",
]

# =============================================================================
# IMPORTS
# =============================================================================

import inspect

from .core import Scheme, SchemeBadDefinedError, SchemeContractError

# =============================================================================
# REGISTER UTILITY
# =============================================================================

_schemes = {}


def register_scheme(cls):
    """Register a given scheme class under its name."""
    if not inspect.isclass(cls) or not issubclass(cls, Scheme):
        msg = "'cls' must be a subclass of Scheme. Found: {}"
        raise TypeError(msg.format(cls))
    name = cls.get_name()
    if name in _schemes and _schemes[name] is not cls:
        msg = "Scheme '{}' already registered by {}"
        raise SchemeBadDefinedError(msg.format(name, _schemes[name]))
    _schemes[name] = cls
    return cls


def registered_schemes():
    """Returns all the available scheme classes as a dictionary where the key
    is the name of the scheme."""
    return dict(_schemes)


def is_registered(obj):
    """Check if a given scheme class (or name) is already registered."""
    if isinstance(obj, str):
        return obj.upper() in _schemes
    elif not inspect.isclass(obj) or not issubclass(obj, Scheme):
        msg = "'cls' must be a subclass of Scheme. Found: {}"
        raise TypeError(msg.format(obj))
    return _schemes.get(obj.get_name()) is obj


def available_schemes():
    """Names of the registered schemes."""
    return sorted(_schemes)


def scheme_of(name):
    """Retrieve the registered scheme class of the given name."""
    return _schemes[name.upper()]


def make_scheme(config):
    """Instance of the scheme selected by ``config`` with its parameters."""
    cls = scheme_of(config.scheme)
    params = config.scheme_params.get(cls.get_name().lower(), {})
    return cls(**params)


# =============================================================================
# REGISTERS
# =============================================================================

from .sch_bargain_match import *  # noqa
from .sch_eco import *  # noqa
from .sch_elo import *  # noqa
from .sch_exo import *  # noqa
from .sch_nco import *  # noqa
from .sch_nvo import *  # noqa
from .sch_opora import *  # noqa

for cls in Scheme.__subclasses__():
    register_scheme(cls)

del cls
