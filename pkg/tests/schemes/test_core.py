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
# DOC
# =============================================================================

"""Schemes Tests"""


# =============================================================================
# IMPORTS
# =============================================================================

from unittest import mock

from bargainmatch import schemes
from bargainmatch.config import SCHEMES, ScenarioConfig
from bargainmatch.context import Decision
from bargainmatch.schemes import (
    Scheme,
    SchemeBadDefinedError,
    SchemeContractError,
    register_scheme,
)

import pytest

from pytest_unordered import unordered


# =============================================================================
# REGISTRY
# =============================================================================


def test_every_scheme_is_registered():
    assert schemes.available_schemes() == sorted(SCHEMES)
    assert list(schemes.registered_schemes()) == unordered(list(SCHEMES))


@pytest.mark.parametrize("name", SCHEMES)
def test_uses_uplink_of_registered_schemes(name):
    cls = schemes.scheme_of(name)
    assert cls.uses_uplink() is (name != "ELO")
    assert not hasattr(cls, "name")
    assert not hasattr(cls, "params")
    assert cls.uses_uplink.__self__ is cls


def test_uses_uplink_inherited_default(mock_schemes_register):
    class Offloader(Scheme):
        name = "EXO"

        def decide(self, tasks, context):
            return []

    assert Offloader.uses_uplink() is True
    assert Offloader.get_default_params() == {}


def test_scheme_of():
    assert schemes.scheme_of("nvo") is schemes.NVO
    assert schemes.scheme_of("BARGAIN_MATCH") is schemes.BargainMatch
    with pytest.raises(KeyError):
        schemes.scheme_of("foo")


def test_is_registered():
    assert schemes.is_registered("opora")
    assert schemes.is_registered(schemes.OPORA)
    assert not schemes.is_registered("foo")
    with pytest.raises(TypeError):
        schemes.is_registered(Decision)


def test_make_scheme():
    config = ScenarioConfig(scheme="nco", scheme_params={"nco": {"lr": 0.2}})
    scheme = schemes.make_scheme(config)
    assert isinstance(scheme, schemes.NCO)
    assert scheme.params == {"lr": 0.2, "response": 1.0, "initial": 0.5}


def test_make_scheme_ignores_other_sections():
    config = ScenarioConfig(scheme="ELO", scheme_params={"nco": {"lr": 0.2}})
    assert schemes.make_scheme(config).params == {}


@mock.patch("bargainmatch.schemes._schemes", {})
def test_register():
    @register_scheme
    class A(Scheme):
        name = "ELO"

        def decide(self, tasks, context):
            return []

    assert schemes.registered_schemes() == {"ELO": A}
    assert schemes.is_registered(A)
    assert register_scheme(A) is A


@mock.patch("bargainmatch.schemes._schemes", {})
def test_register_name_conflict():
    @register_scheme
    class A(Scheme):
        name = "ELO"

        def decide(self, tasks, context):
            return []

    class B(Scheme):
        name = "ELO"

        def decide(self, tasks, context):
            return []

    with pytest.raises(SchemeBadDefinedError):
        register_scheme(B)
    assert not schemes.is_registered(B)


def test_register_invalid():
    with pytest.raises(TypeError):
        register_scheme(Decision)
    with pytest.raises(TypeError):
        register_scheme(schemes.ELO())


# =============================================================================
# DEFINITION
# =============================================================================


def test_missing_name(mock_schemes_register):
    with pytest.raises(SchemeBadDefinedError):

        class A(Scheme):
            def decide(self, tasks, context):
                return []


def test_unknown_name(mock_schemes_register):
    with pytest.raises(SchemeBadDefinedError):

        class A(Scheme):
            name = "GREEDY"

            def decide(self, tasks, context):
                return []


def test_missing_decide(mock_schemes_register):
    with pytest.raises(SchemeBadDefinedError):

        class A(Scheme):
            name = "ELO"


def test_invalid_param_name(mock_schemes_register):
    with pytest.raises(SchemeBadDefinedError):

        class A(Scheme):
            name = "ELO"
            params = {1: None}

            def decide(self, tasks, context):
                return []


def test_conf(mock_schemes_register):
    class A(Scheme):
        name = "NCO"
        params = {"lr": 0.1}
        uses_uplink = False

        def decide(self, tasks, context):
            return []

    assert A.get_name() == "NCO"
    assert A.get_default_params() == {"lr": 0.1}
    assert not A.uses_uplink()
    assert not hasattr(A, "name")
    assert repr(A(lr=0.3)) == "A(lr=0.3)"
    assert schemes.ELO.uses_uplink() is False
    assert schemes.BargainMatch.uses_uplink() is True


# =============================================================================
# CONTRACT
# =============================================================================


def test_unknown_param():
    with pytest.raises(SchemeContractError):
        schemes.ELO(lr=1)


def test_run_checks_every_task_is_decided(mock_schemes_register, tiny):
    class Forgetful(Scheme):
        name = "ELO"

        def decide(self, tasks, context):
            return []

    class Twice(Scheme):
        name = "ELO"

        def decide(self, tasks, context):
            return [Decision.failed(t, "twice") for t in tasks + tasks]

    for cls in (Forgetful, Twice):
        with pytest.raises(SchemeContractError):
            cls().run([tiny.task], tiny.context)


def test_run(tiny):
    decisions = schemes.ELO().run([tiny.task], tiny.context)
    assert [d.task for d in decisions] == [tiny.task]
