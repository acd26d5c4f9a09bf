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

"""Scenario configuration.

All the parameters of a run live in a frozen :class:`ScenarioConfig` made of
smaller parameter blocks. The defaults reproduce the simulation table of the
corridor scenario (10 km six lane road, 30 road side servers, 100 vehicles).

Configurations are stored as INI files. Every section maps to a block and
every key to a field of that block; the ``[scenario]`` section holds the top
level fields:

.. code-block:: ini

    [scenario]
    vehicle_count = 150
    speed_range = 10, 20

    [mobility]
    arrival_mode = literal

    [opora]
    step = 0.05

"""

__all__ = [
    "SCHEMES",
    "ChannelParams",
    "EnergyParams",
    "BackhaulParams",
    "PricingParams",
    "MobilityParams",
    "BargainConfig",
    "ScenarioConfig",
    "CONFIG_KEYS",
    "load_config",
    "apply_overrides",
    "dump_config",
]


# =============================================================================
# IMPORTS
# =============================================================================

import configparser
import io
import math

import attr

from .core import ConfigurationError
from .utils import dbm_to_watts


# =============================================================================
# CONSTANTS
# =============================================================================

SCHEMES = ("BARGAIN_MATCH", "ELO", "EXO", "NVO", "ECO", "NCO", "OPORA")

ARRIVAL_MODES = ("corrected", "literal")

MOBILITY_PRIORS = ("heading", "markov")

LOS_MODELS = ("constant", "exponential")

APR_MODES = ("cycles", "bits")


# =============================================================================
# CONVERTERS
# =============================================================================


def _as_bool(value):
    if isinstance(value, str):
        lowered = value.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ConfigurationError(f"Invalid boolean {value!r}")
    return bool(value)


def _as_range(value):
    """Convert ``"lo, hi"``, ``"lo:hi"``, a number or a pair into a tuple."""
    if isinstance(value, str):
        parts = value.replace(":", ",").split(",")
        parts = [p for p in (p.strip() for p in parts) if p]
    elif isinstance(value, (int, float)):
        parts = [value]
    else:
        parts = list(value)
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2:
        raise ConfigurationError(f"A range needs two values. Found {value!r}")
    lo, hi = (float(p) for p in parts)
    if lo > hi:
        raise ConfigurationError(f"Range lower bound above upper: {value!r}")
    return (lo, hi)


def _as_optional_float(value):
    if value is None:
        return None
    if isinstance(value, str) and value.strip().lower() in ("", "none"):
        return None
    return float(value)


def _as_optional_str(value):
    if value is None:
        return None
    value = str(value).strip()
    return None if value.lower() in ("", "none") else value


def _as_int(value):
    if isinstance(value, str):
        value = value.strip()
    fvalue = float(value)
    if fvalue != int(fvalue):
        raise ConfigurationError(f"Expected an integer. Found {value!r}")
    return int(fvalue)


def _field(default, converter, doc):
    return attr.ib(default=default, converter=converter, metadata={"doc": doc})


def _check(condition, msg):
    if not condition:
        raise ConfigurationError(msg)


# =============================================================================
# PARAMETER BLOCKS
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class ChannelParams:
    """Uplink channel parameters (Nakagami fading, log-distance path loss,
    log-normal shadowing and probabilistic line of sight)."""

    bandwidth: float = _field(40e6, float, "Uplink bandwidth B (Hz)")
    carrier: float = _field(5.9e9, float, "Carrier frequency f_c (Hz)")
    ref_distance: float = _field(1.0, float, "Reference distance d0 (m)")
    beta_los: float = _field(3.0, float, "Path loss exponent under LoS")
    beta_nlos: float = _field(4.0, float, "Path loss exponent under NLoS")
    m_los: float = _field(2.0, float, "Nakagami m parameter under LoS")
    m_nlos: float = _field(1.0, float, "Nakagami m parameter under NLoS")
    sigma_los: float = _field(3.0, float, "Shadowing deviation LoS (dB)")
    sigma_nlos: float = _field(4.0, float, "Shadowing deviation NLoS (dB)")
    noise_dbm: float = _field(-98.0, float, "Noise power N0 (dBm)")
    los_model: str = _field(
        "constant", str, "LoS probability model: constant|exponential"
    )
    los_probability: float = _field(
        0.8, float, "Constant LoS probability (or value at d=0)"
    )
    los_decay: float = _field(
        200.0, float, "Decay distance of the exponential LoS model (m)"
    )
    light_speed: float = _field(3e8, float, "Speed of light c (m/s)")
    power_dbm_range: tuple = _field(
        (-85.0, 44.8), _as_range, "Vehicle transmit power range (dBm)"
    )
    power_dbm: float = _field(
        None,
        _as_optional_float,
        "Fixed transmit power (dBm); empty uses the linear range midpoint",
    )
    fading_power: float = _field(
        1.0, float, "Average fading envelope power (normalised to 1)"
    )

    def __attrs_post_init__(self):
        for name in ("m_los", "m_nlos"):
            m = getattr(self, name)
            _check(0.5 <= m <= 5, f"'{name}' must be in [0.5, 5]. Found {m}")
        _check(
            self.beta_los <= self.beta_nlos,
            "'beta_los' must not exceed 'beta_nlos'",
        )
        _check(
            0 <= self.los_probability <= 1,
            "'los_probability' must be in [0, 1]",
        )
        _check(
            self.los_model in LOS_MODELS,
            f"'los_model' must be one of {LOS_MODELS}",
        )
        for name in ("bandwidth", "carrier", "ref_distance", "light_speed"):
            _check(getattr(self, name) > 0, f"'{name}' must be positive")
        _check(self.los_decay > 0, "'los_decay' must be positive")
        _check(self.fading_power > 0, "'fading_power' must be positive")

    @property
    def noise_power(self):
        """N0 in watts."""
        return float(dbm_to_watts(self.noise_dbm))

    @property
    def transmit_power(self):
        """Transmit power P_i in watts.

        Without an explicit ``power_dbm`` the midpoint of the range is taken
        in the linear (watts) domain.

        """
        if self.power_dbm is not None:
            return float(dbm_to_watts(self.power_dbm))
        lo, hi = dbm_to_watts(self.power_dbm_range)
        return float((lo + hi) / 2.0)

    def los_probability_at(self, distance):
        """p_L(d) according to the configured model."""
        if self.los_model == "constant":
            return self.los_probability
        return self.los_probability * math.exp(-distance / self.los_decay)


@attr.s(frozen=True, auto_attribs=True)
class EnergyParams:
    """Execution energy model ``E = alpha * f**(tau - 1) * C_req``."""

    alpha_vehicle: float = _field(
        7.8e-21, float, "Switched capacitance of the vehicles"
    )
    alpha_server: float = _field(
        7.8e-21, float, "Switched capacitance of the servers"
    )
    tau: float = _field(3.0, float, "Exponent of the energy model")
    frequency_unit: float = _field(
        1e9, float, "Unit of f inside the energy model (Hz)"
    )
    vehicle_budget_wh_per_ghz: float = _field(
        1.0, float, "Vehicle energy budget per GHz of CPU (Wh/GHz)"
    )
    server_budget_wh_per_ghz: float = _field(
        1.0, float, "Server energy budget per GHz of CPU (Wh/GHz)"
    )

    def __attrs_post_init__(self):
        _check(
            self.alpha_vehicle >= 0 and self.alpha_server >= 0,
            "Switched capacitances must be non negative",
        )
        _check(self.tau > 0, "'tau' must be positive")
        _check(self.frequency_unit > 0, "'frequency_unit' must be positive")


@attr.s(frozen=True, auto_attribs=True)
class BackhaulParams:
    """Wired links between servers and toward the cloud."""

    fiber_rate: float = _field(4e9, float, "Fiber rate r_f (bit/s)")
    cloud_rate: float = _field(100e6, float, "Edge to cloud rate r_c (bit/s)")

    def __attrs_post_init__(self):
        _check(self.fiber_rate > 0, "'fiber_rate' must be positive")
        _check(self.cloud_rate > 0, "'cloud_rate' must be positive")


@attr.s(frozen=True, auto_attribs=True)
class PricingParams:
    """Monetary budgets of the market."""

    payment_budget: float = _field(
        20.0, float, "Maximum payment of a vehicle per task C_i^max ($)"
    )
    server_ceiling_per_ghz: float = _field(
        1.0, float, "Server price ceiling C_j^max ($/GHz)"
    )

    def __attrs_post_init__(self):
        _check(self.payment_budget > 0, "'payment_budget' must be positive")
        _check(
            self.server_ceiling_per_ghz > 0,
            "'server_ceiling_per_ghz' must be positive",
        )


@attr.s(frozen=True, auto_attribs=True)
class MobilityParams:
    """Direction, sojourn and arrival prediction settings."""

    arrival_mode: str = _field(
        "corrected", str, "Arrival server formula: corrected|literal"
    )
    prior: str = _field(
        "heading", str, "Direction prior when no displacement: heading|markov"
    )
    prior_confidence: float = _field(
        1.0, float, "Confidence of the heading prior"
    )
    markov_stay: float = _field(
        0.9, float, "Probability of keeping the direction (markov prior)"
    )
    lane_width: float = _field(3.5, float, "Lane width (m)")

    def __attrs_post_init__(self):
        _check(
            self.arrival_mode in ARRIVAL_MODES,
            f"'arrival_mode' must be one of {ARRIVAL_MODES}",
        )
        _check(
            self.prior in MOBILITY_PRIORS,
            f"'prior' must be one of {MOBILITY_PRIORS}",
        )
        _check(
            0 <= self.prior_confidence <= 1,
            "'prior_confidence' must be in [0, 1]",
        )
        _check(0 <= self.markov_stay <= 1, "'markov_stay' must be in [0, 1]")
        _check(self.lane_width > 0, "'lane_width' must be positive")


@attr.s(frozen=True, auto_attribs=True)
class BargainConfig:
    """Bargaining horizon and numerical guards."""

    horizon: int = _field(10, _as_int, "Bargaining horizon T^b (rounds)")
    clamp: bool = _field(True, _as_bool, "Clamp the partitions to [0, 1]")
    tolerance: float = _field(
        1e-6, float, "Relative price change declaring convergence"
    )

    def __attrs_post_init__(self):
        _check(self.horizon >= 1, "'horizon' must be at least 1")
        _check(self.tolerance > 0, "'tolerance' must be positive")


# =============================================================================
# SCENARIO
# =============================================================================


BLOCKS = {
    "channel": ChannelParams,
    "energy": EnergyParams,
    "backhaul": BackhaulParams,
    "pricing": PricingParams,
    "mobility": MobilityParams,
    "bargain": BargainConfig,
}


def _scheme_params(value):
    return {str(k).lower(): dict(v) for k, v in dict(value or {}).items()}


@attr.s(frozen=True, auto_attribs=True)
class ScenarioConfig:
    """Every parameter of a simulation run.

    The ranges (``*_range`` and the other tuples) are sampled uniformly once
    per vehicle, server or task.

    """

    road_length: float = _field(10000.0, float, "Road length (m)")
    lane_count: int = _field(6, _as_int, "Number of lanes (both directions)")
    slot_duration: float = _field(0.1, float, "Slot duration (s)")
    epoch_length: int = _field(
        10, _as_int, "Slots between two mobility updates T0"
    )
    horizon: int = _field(200, _as_int, "Number of simulated slots T")
    vehicle_count: int = _field(100, _as_int, "Number of vehicles V")
    server_count: int = _field(30, _as_int, "Number of edge servers E")
    server_radius: float = _field(166.0, float, "Coverage radius R (m)")
    speed_range: tuple = _field(
        (2.0, 30.0), _as_range, "Vehicle speed range (m/s)"
    )
    task_gen_probability: float = _field(
        0.05, float, "Task generation probability per vehicle and slot"
    )
    rng_seed: int = _field(0, _as_int, "Seed of every random stream")
    scheme: str = _field(
        "BARGAIN_MATCH", lambda v: str(v).upper(), "Offloading scheme"
    )
    app_preset: str = _field(
        None, _as_optional_str, "Application preset for the tasks"
    )
    task_size_kb: tuple = _field(
        (400.0, 1000.0), _as_range, "Task input size range (KB)"
    )
    task_size_mean_kb: float = _field(
        None,
        _as_optional_float,
        "If set, replaces the size range by mean +/- 300 KB",
    )
    intensity: tuple = _field(
        (500.0, 1500.0), _as_range, "Computation intensity (cycles/bit)"
    )
    deadline: tuple = _field((0.1, 5.0), _as_range, "Task deadline (s)")
    result_size_kb: tuple = _field(
        (0.1, 1.0), _as_range, "Task result size (KB)"
    )
    vehicle_cpu_ghz: tuple = _field(
        (0.5, 1.0), _as_range, "Vehicle CPU capacity (GHz)"
    )
    server_cpu_ghz: tuple = _field(
        (2.0, 10.0), _as_range, "Edge server CPU capacity (GHz)"
    )
    server_cores: tuple = _field(
        (2.0, 8.0), _as_range, "Edge server core count"
    )
    cloud_cpu_ghz: float = _field(30.0, float, "Cloud CPU capacity (GHz)")
    cloud_cores: int = _field(10, _as_int, "Cloud core count")
    vehicle_weight: tuple = _field(
        (0.2, 0.8), _as_range, "Vehicle satisfaction weight w_i"
    )
    server_weight: tuple = _field(
        (0.2, 0.8), _as_range, "Server revenue weight w_j"
    )
    sic_capacity: int = _field(
        4, _as_int, "Simultaneous uploaders decoded per server S_j"
    )
    apr_mode: str = _field(
        "cycles", str, "Processing rate numerator: cycles|bits"
    )
    channel: ChannelParams = attr.ib(factory=ChannelParams)
    energy: EnergyParams = attr.ib(factory=EnergyParams)
    backhaul: BackhaulParams = attr.ib(factory=BackhaulParams)
    pricing: PricingParams = attr.ib(factory=PricingParams)
    mobility: MobilityParams = attr.ib(factory=MobilityParams)
    bargain: BargainConfig = attr.ib(factory=BargainConfig)
    scheme_params: dict = attr.ib(factory=dict, converter=_scheme_params)

    def __attrs_post_init__(self):
        _check(self.road_length > 0, "'road_length' must be positive")
        _check(self.lane_count >= 1, "'lane_count' must be at least 1")
        _check(self.slot_duration > 0, "'slot_duration' must be positive")
        _check(self.epoch_length >= 1, "'epoch_length' must be at least 1")
        _check(self.horizon >= 0, "'horizon' can't be negative")
        _check(self.vehicle_count >= 0, "'vehicle_count' can't be negative")
        _check(self.server_count >= 1, "'server_count' must be at least 1")
        _check(self.server_radius > 0, "'server_radius' must be positive")
        _check(
            2 * self.server_radius * self.server_count <= self.road_length,
            "Server coverages overlap: 2 * server_radius * server_count "
            "exceeds road_length",
        )
        _check(self.speed_range[0] >= 0, "Speeds can't be negative")
        _check(
            0 <= self.task_gen_probability <= 1,
            "'task_gen_probability' must be in [0, 1]",
        )
        _check(
            0 <= self.rng_seed < 2**64,
            "'rng_seed' must be a 64 bit unsigned integer",
        )
        _check(
            self.scheme in SCHEMES, f"'scheme' must be one of {SCHEMES}"
        )
        _check(
            self.vehicle_weight[0] >= 0 and self.vehicle_weight[1] < 1,
            "Vehicle weights must be in [0, 1): w_i = 1 makes the price "
            "upper bound degenerate",
        )
        _check(
            self.server_weight[0] > 0 and self.server_weight[1] <= 1,
            "Server weights must be in (0, 1]: w_j = 0 makes the price "
            "lower bound degenerate",
        )
        for name in (
            "task_size_kb",
            "intensity",
            "deadline",
            "result_size_kb",
            "vehicle_cpu_ghz",
            "server_cpu_ghz",
            "server_cores",
        ):
            _check(getattr(self, name)[0] > 0, f"'{name}' must be positive")
        if self.task_size_mean_kb is not None:
            _check(
                self.task_size_mean_kb > 0,
                "'task_size_mean_kb' must be positive",
            )
        _check(self.cloud_cpu_ghz > 0, "'cloud_cpu_ghz' must be positive")
        _check(self.cloud_cores >= 1, "'cloud_cores' must be at least 1")
        _check(self.sic_capacity >= 1, "'sic_capacity' must be at least 1")
        _check(
            self.apr_mode in APR_MODES,
            f"'apr_mode' must be one of {APR_MODES}",
        )

    @property
    def bargain_horizon(self):
        """Bargaining horizon T^b."""
        return self.bargain.horizon

    @property
    def effective_task_size_kb(self):
        """The task size range after applying ``task_size_mean_kb``."""
        if self.task_size_mean_kb is None:
            return self.task_size_kb
        lo = max(1.0, self.task_size_mean_kb - 300.0)
        return (lo, self.task_size_mean_kb + 300.0)


# =============================================================================
# KEYS
# =============================================================================

_ALIASES = {"bargain_horizon": "bargain.horizon"}


def _documented_keys():
    keys = {}
    for field in attr.fields(ScenarioConfig):
        if field.name in BLOCKS or field.name == "scheme_params":
            continue
        keys[f"scenario.{field.name}"] = field.metadata["doc"]
    for section, cls in BLOCKS.items():
        for field in attr.fields(cls):
            keys[f"{section}.{field.name}"] = field.metadata["doc"]
    return keys


#: Every accepted configuration key with its description. Scheme sections
#: (``[nco]``, ``[opora]``) accept the parameters declared by each scheme.
CONFIG_KEYS = _documented_keys()


def _normalize_key(key):
    key = _ALIASES.get(key.strip(), key.strip())
    if "." not in key:
        key = f"scenario.{key}"
    section, name = key.split(".", 1)
    return section.lower(), name


def _scheme_defaults(section):
    from . import schemes  # the registry imports the whole engine stack

    for name, cls in schemes.registered_schemes().items():
        if name.lower() == section and cls.get_default_params():
            return cls.get_default_params()
    return None


def _convert_scheme_value(default, value):
    if not isinstance(value, str):
        return value
    if default is None or isinstance(default, float):
        return _as_optional_float(value)
    if isinstance(default, bool):
        return _as_bool(value)
    if isinstance(default, int):
        return _as_int(value)
    return value


def apply_overrides(config, overrides):
    """Return a copy of ``config`` with the given keys replaced.

    Parameters
    ----------
    config : ScenarioConfig
    overrides : mapping
        Keys are ``section.key`` (the ``scenario.`` prefix is optional);
        values are text as read from a file or already typed values.

    Raises
    ------
    ConfigurationError
        If a key is unknown or a value is invalid.

    """
    scenario, blocks, scheme_params = {}, {}, {}
    for raw_key, value in overrides.items():
        section, name = _normalize_key(raw_key)
        if section == "scenario" and f"scenario.{name}" in CONFIG_KEYS:
            scenario[name] = value
        elif section in BLOCKS and f"{section}.{name}" in CONFIG_KEYS:
            blocks.setdefault(section, {})[name] = value
        else:
            defaults = _scheme_defaults(section)
            if defaults is None or name not in defaults:
                raise ConfigurationError(
                    f"Unknown configuration key {raw_key!r}"
                )
            value = _convert_scheme_value(defaults[name], value)
            scheme_params.setdefault(section, {})[name] = value

    changes = dict(scenario)
    for section, values in blocks.items():
        changes[section] = attr.evolve(getattr(config, section), **values)
    if scheme_params:
        merged = {k: dict(v) for k, v in config.scheme_params.items()}
        for section, values in scheme_params.items():
            merged.setdefault(section, {}).update(values)
        changes["scheme_params"] = merged

    try:
        return attr.evolve(config, **changes)
    except (TypeError, ValueError) as err:
        if isinstance(err, ConfigurationError):
            raise
        raise ConfigurationError(str(err)) from err


def load_config(path, base=None):
    """Read an INI configuration file.

    Parameters
    ----------
    path : str or path-like
        The file to read.
    base : ScenarioConfig, optional
        Configuration to update; by default the built in defaults.

    Returns
    -------
    ScenarioConfig

    Raises
    ------
    FileNotFoundError
        If the file does not exist.
    ConfigurationError
        On unknown keys or invalid values.

    """
    parser = configparser.ConfigParser()
    parser.optionxform = str
    with open(path) as fp:
        try:
            parser.read_file(fp)
        except configparser.Error as err:
            raise ConfigurationError(str(err)) from err

    overrides = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            overrides[f"{section}.{key}"] = value
    return apply_overrides(base or ScenarioConfig(), overrides)


def _text(value):
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ", ".join(repr(v) for v in value)
    return str(value)


def dump_config(config):
    """Render ``config`` as INI text readable by :func:`load_config`."""
    parser = configparser.ConfigParser()
    parser.optionxform = str
    parser["scenario"] = {
        f.name: _text(getattr(config, f.name))
        for f in attr.fields(ScenarioConfig)
        if f.name not in BLOCKS and f.name != "scheme_params"
    }
    for section in BLOCKS:
        block = getattr(config, section)
        parser[section] = {
            f.name: _text(getattr(block, f.name))
            for f in attr.fields(type(block))
        }
    for section, values in sorted(config.scheme_params.items()):
        parser[section] = {k: _text(v) for k, v in values.items()}

    buff = io.StringIO()
    parser.write(buff)
    return buff.getvalue()
