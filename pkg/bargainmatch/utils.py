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

"""bargainmatch utilities"""


# =============================================================================
# IMPORTS
# =============================================================================

import math

import numpy as np


# =============================================================================
# FUNCTIONS
# =============================================================================


def db_to_linear(db):
    """Convert a ratio in decibels into a linear power ratio."""
    return np.power(10.0, np.asarray(db, dtype=float) / 10.0)


def dbm_to_watts(dbm):
    """Convert a power in dBm into watts."""
    return db_to_linear(dbm) / 1000.0


def slots_for(duration, slot_duration):
    """Number of whole slots needed to cover ``duration`` seconds.

    A zero duration still occupies one slot.

    """
    if not math.isfinite(duration):
        raise ValueError(f"Duration must be finite. Found {duration}")
    return max(1, int(math.ceil(duration / slot_duration - 1e-9)))


def fmt_number(value, spec=".6g"):
    """Format a number for the text outputs; non finite values become NA."""
    if value is None:
        return "NA"
    try:
        value = float(value)
    except (TypeError, ValueError):
        return str(value)
    if not math.isfinite(value):
        return "NA"
    return format(value, spec)
