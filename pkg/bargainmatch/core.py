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

"""Core exceptions, warnings and constants of bargainmatch."""

__all__ = [
    "ConfigurationError",
    "ContractViolation",
    "NoInteriorOptimum",
    "EnumerationTooLarge",
    "InvariantError",
    "UnknownPreset",
    "PhysicalRangeWarning",
    "SojournClampWarning",
    "PartitionMonotonicityWarning",
    "EDGE",
    "CLOUD",
    "LOCAL",
    "GHZ",
]


# =============================================================================
# IMPORTS
# =============================================================================

import warnings


# =============================================================================
# CONSTANTS
# =============================================================================

#: Destination kinds.
LOCAL = "local"
EDGE = "edge"
CLOUD = "cloud"

#: One GHz in Hz. Prices are quoted per GHz.
GHZ = 1e9

#: Bits in one kilobyte (1 KB = 1000 bytes).
BITS_PER_KB = 8000.0

#: Joules in one watt-hour.
JOULES_PER_WH = 3600.0


# =============================================================================
# EXCEPTIONS
# =============================================================================


class ConfigurationError(ValueError):
    """The scenario can't be configured with the given parameters."""


class ContractViolation(ValueError):
    """A precondition of an operation was broken by the caller."""


class NoInteriorOptimum(ValueError):
    """The closed form resource allocation has no positive solution.

    Raised when the denominator of the optimal allocation is not positive or
    the radicand is negative; the destination must be pruned.

    """


class EnumerationTooLarge(ValueError):
    """The instance is too big for an exhaustive enumeration."""


class InvariantError(RuntimeError):
    """A committed decision violates a constraint of the problem.

    This never happens with a correct scheduler, so the run is aborted.

    """


class UnknownPreset(KeyError):
    """The requested application preset does not exist."""


# =============================================================================
# WARNINGS
# =============================================================================


class PhysicalRangeWarning(UserWarning):
    """A computed quantity is far outside any physical range."""


class SojournClampWarning(UserWarning):
    """A negative sojourn time was clamped to zero."""


class PartitionMonotonicityWarning(UserWarning):
    """The proposer share is not monotone in its own discount factor."""


warnings.simplefilter("always", PhysicalRangeWarning)
warnings.simplefilter("always", SojournClampWarning)
warnings.simplefilter("always", PartitionMonotonicityWarning)
