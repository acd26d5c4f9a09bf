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

"""This file is for distribute bargainmatch

"""


# =============================================================================
# IMPORTS
# =============================================================================

import os

from setuptools import find_packages, setup

os.environ["BARGAINMATCH_IN_SETUP"] = "True"
import bargainmatch  # noqa


# =============================================================================
# CONSTANTS
# =============================================================================

REQUIREMENTS = [
    "numpy",
    "scipy",
    "matplotlib",
    "pandas",
    "attrs",
    "joblib",
]


# =============================================================================
# FUNCTIONS
# =============================================================================


def do_setup():
    setup(
        name=bargainmatch.NAME,
        version=bargainmatch.VERSION,
        long_description=bargainmatch.DOC,
        description=bargainmatch.DOC.splitlines()[0],
        author=bargainmatch.AUTHORS,
        author_email=bargainmatch.EMAIL,
        url=bargainmatch.URL,
        license=bargainmatch.LICENSE,
        keywords=list(bargainmatch.KEYWORDS),
        classifiers=[
            "Development Status :: 4 - Beta",
            "Intended Audience :: Education",
            "Intended Audience :: Science/Research",
            "License :: OSI Approved :: MIT License",
            "Operating System :: OS Independent",
            "Programming Language :: Python",
            "Programming Language :: Python :: 3.8",
            "Programming Language :: Python :: 3.9",
            "Programming Language :: Python :: Implementation :: CPython",
            "Topic :: Scientific/Engineering",
        ],
        packages=[
            pkg for pkg in find_packages() if pkg.startswith("bargainmatch")
        ],
        entry_points={
            "console_scripts": ["bargainmatch=bargainmatch.cli:main"]
        },
        install_requires=REQUIREMENTS,
    )


if __name__ == "__main__":
    do_setup()
