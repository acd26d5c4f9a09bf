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

"""Command line interface of bargainmatch.

.. code-block:: bash

    # one run with the defaults, results in ./out
    $ bargainmatch --scheme NVO --seed 42 --out out

    # vehicle count sweep for every scheme over 10 seeds
    $ bargainmatch --sweep vehicle_count=50,100,150 --seeds 0:9 \\
        --schemes all --out sweep

    # property oracles at a tenth of their size
    $ bargainmatch --verify --verify-scale 0.1

"""

__all__ = [
    "RUN_COLUMNS",
    "SweepSpec",
    "parse_sweep",
    "build_parser",
    "cmd_run",
    "cmd_sweep",
    "cmd_verify",
    "main",
]


# =============================================================================
# IMPORTS
# =============================================================================

import argparse
import json
import logging
import math
import os
import sys

import attr

import joblib

import pandas as pd

from . import VERSION
from .config import SCHEMES, ScenarioConfig, apply_overrides, load_config
from .core import ConfigurationError, InvariantError
from .engine import run
from .metrics import summarize
from .utils import fmt_number
from .verify import run_verification


# =============================================================================
# CONSTANTS
# =============================================================================

logger = logging.getLogger(__name__)

#: Columns of ``run.csv``, in order.
RUN_COLUMNS = (
    "scheme",
    "seed",
    "param_key",
    "param_value",
    "slot",
    "sw",
    "sw_cum",
    "veh_util",
    "srv_util",
    "apr",
    "acd",
    "acr",
    "runtime_ms",
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3

_GP_RUN = """\
# gnuplot script written by bargainmatch {version}
set datafile separator ","
set key left top
set xlabel "Slot"
set ylabel "Cumulative social welfare"
plot "{csv}" using "slot":"sw_cum" with lines title "{scheme}"
"""

_GP_SWEEP = """\
# gnuplot script written by bargainmatch {version}
set datafile separator ","
set key left top
set xlabel "{key}"
set ylabel "Mean cumulative social welfare"
schemes = "{schemes}"
mean(s) = strcol("scheme") eq s ? column("sw_cum_mean") : NaN
plot for [s in schemes] "{csv}" \\
    using "param_value":(mean(s)) with linespoints title s
"""


# =============================================================================
# SWEEPS
# =============================================================================


@attr.s(frozen=True, auto_attribs=True)
class SweepSpec:
    """The runs of a sweep: ``values x schemes x seeds``."""

    key: str
    values: tuple = attr.ib(converter=tuple)
    seeds: tuple = attr.ib(converter=tuple)
    schemes: tuple = attr.ib(converter=tuple)

    def __attrs_post_init__(self):
        for name in ("values", "seeds", "schemes"):
            if not getattr(self, name):
                raise ConfigurationError(f"Sweep '{name}' can't be empty")
        unknown = set(self.schemes).difference(SCHEMES)
        if unknown:
            raise ConfigurationError(f"Unknown schemes {sorted(unknown)}")

    def __len__(self):
        return len(self.values) * len(self.seeds) * len(self.schemes)

    def jobs(self, base):
        """``(value, config)`` of every run in a deterministic order.

        Raises
        ------
        ConfigurationError
            If ``key`` is not a configuration key.

        """
        for value in self.values:
            varied = apply_overrides(base, {self.key: value})
            for scheme in self.schemes:
                for seed in self.seeds:
                    config = apply_overrides(
                        varied, {"scheme": scheme, "rng_seed": seed}
                    )
                    yield value, config


def _parse_seeds(text):
    """``"3"``, ``"0:9"`` (inclusive) or ``"1,5,7"``."""
    text = text.strip()
    if ":" in text:
        lo, hi = (int(p) for p in text.split(":"))
        return tuple(range(lo, hi + 1))
    return tuple(int(p) for p in text.split(",") if p.strip())


def _parse_schemes(text):
    if text.strip().lower() == "all":
        return SCHEMES
    return tuple(p.strip().upper() for p in text.split(",") if p.strip())


def parse_sweep(text, seeds="0", schemes="all"):
    """Build a :class:`SweepSpec` from ``KEY=v1,v2,...``."""
    if "=" not in text:
        raise ConfigurationError(f"Sweep must be KEY=v1,v2,... Found {text!r}")
    key, values = text.split("=", 1)
    return SweepSpec(
        key=key.strip(),
        values=[v.strip() for v in values.split(",") if v.strip()],
        seeds=_parse_seeds(seeds),
        schemes=_parse_schemes(schemes),
    )


def _sweep_row(key, value, config):
    metrics = run(config)
    n_slots = len(metrics.slots)
    return {
        "scheme": metrics.scheme,
        "seed": metrics.seed,
        "param_key": key,
        "param_value": value,
        "slot": config.horizon,
        "sw": metrics.sw_total / n_slots if n_slots else math.nan,
        "sw_cum": metrics.sw_total,
        "veh_util": float(metrics.vehicle_utility.sum()),
        "srv_util": float(metrics.server_utility.sum()),
        "apr": metrics.apr,
        "acd": metrics.acd,
        "acr": metrics.acr,
        "runtime_ms": metrics.runtime,
    }


# =============================================================================
# OUTPUT
# =============================================================================


def _write_csv(df, path):
    df.to_csv(path, index=False, na_rep="NA", float_format="%.10g")


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _write_json(data, path):
    with open(path, "w") as fp:
        json.dump(_json_safe(data), fp, indent=2, sort_keys=True)
        fp.write("\n")


def _run_table(metrics, timing):
    df = metrics.as_dataframe()
    df.insert(0, "scheme", metrics.scheme)
    df.insert(1, "seed", metrics.seed)
    df.insert(2, "param_key", None)
    df.insert(3, "param_value", None)
    df["apr"] = metrics.apr
    df["acd"] = metrics.acd
    df["acr"] = metrics.acr
    if not timing:
        df["runtime_ms"] = None
    return df[list(RUN_COLUMNS)]


# =============================================================================
# COMMANDS
# =============================================================================


def _load(args):
    config = ScenarioConfig()
    if args.config is not None:
        config = load_config(args.config)
    overrides = dict(_parse_set(args.set))
    for flag, key in (
        ("scheme", "scheme"),
        ("seed", "rng_seed"),
        ("slots", "horizon"),
        ("vehicles", "vehicle_count"),
    ):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = value
    return apply_overrides(config, overrides) if overrides else config


def _parse_set(items):
    for item in items or ():
        if "=" not in item:
            raise ConfigurationError(f"Override must be KEY=VALUE: {item!r}")
        key, value = item.split("=", 1)
        yield key.strip(), value.strip()


def cmd_run(config, out, trace=False, plot=False, timing=False):
    """Run one experiment and write its outputs into ``out``.

    Returns
    -------
    RunMetrics

    """
    os.makedirs(out, exist_ok=True)
    lines = [] if trace else None
    metrics = run(config, trace=lines)

    _write_csv(_run_table(metrics, timing), os.path.join(out, "run.csv"))
    _write_json(metrics.as_dict(), os.path.join(out, "summary.json"))
    if trace:
        with open(os.path.join(out, "trace.txt"), "w") as fp:
            fp.write("\n".join(lines) + "\n")
    if plot:
        with open(os.path.join(out, "plot_sw.gp"), "w") as fp:
            fp.write(
                _GP_RUN.format(
                    version=VERSION, csv="run.csv", scheme=metrics.scheme
                )
            )

    print(
        f"{metrics.scheme} seed={metrics.seed} slots={len(metrics.slots)} "
        f"sw_cum={fmt_number(metrics.sw_total)} "
        f"apr={fmt_number(metrics.apr)} acd={fmt_number(metrics.acd)} "
        f"acr={fmt_number(metrics.acr)} n_gen={metrics.n_gen} "
        f"n_succ={metrics.n_succ}"
    )
    return metrics


def cmd_sweep(config, spec, out, n_jobs=1, plot=False):
    """Run every job of ``spec`` and write one row per run.

    Returns
    -------
    pandas.DataFrame
        The rows of ``run.csv``.

    """
    jobs = list(spec.jobs(config))
    logger.info(
        "Sweeping %s over %d runs with %d workers", spec.key, len(jobs), n_jobs
    )
    rows = joblib.Parallel(n_jobs=n_jobs)(
        joblib.delayed(_sweep_row)(spec.key, value, job)
        for value, job in jobs
    )
    df = pd.DataFrame(rows, columns=list(RUN_COLUMNS))

    os.makedirs(out, exist_ok=True)
    _write_csv(df, os.path.join(out, "run.csv"))
    summary = summarize(rows, by=("param_value", "scheme"))
    _write_csv(summary, os.path.join(out, "sweep_summary.csv"))
    _write_json(
        {"key": spec.key, "runs": rows, "summary": summary.to_dict("records")},
        os.path.join(out, "summary.json"),
    )
    if plot:
        with open(os.path.join(out, "plot_sweep.gp"), "w") as fp:
            fp.write(
                _GP_SWEEP.format(
                    version=VERSION,
                    key=spec.key,
                    csv="sweep_summary.csv",
                    schemes=" ".join(spec.schemes),
                )
            )
    print(f"{len(df)} runs written to {os.path.join(out, 'run.csv')}")
    return df


def cmd_verify(scale=1.0, seed=0):
    """Run the property oracles; the exit code says if all passed."""
    reports = run_verification(scale=scale, seed=seed)
    for report in reports:
        print(report.summary())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


# =============================================================================
# MAIN
# =============================================================================


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bargainmatch",
        description="Simulate task offloading in a vehicular edge corridor.",
    )
    parser.add_argument("--version", action="version", version=VERSION)
    parser.add_argument("--config", help="INI configuration file")
    parser.add_argument(
        "--scheme", help=f"Offloading scheme: {', '.join(SCHEMES)}"
    )
    parser.add_argument("--seed", type=int, help="Seed of the run")
    parser.add_argument("--slots", type=int, help="Number of slots")
    parser.add_argument("--vehicles", type=int, help="Number of vehicles")
    parser.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="Override a configuration key (repeatable)",
    )
    parser.add_argument("--out", default="out", help="Output directory")
    parser.add_argument(
        "--sweep", metavar="KEY=v1,v2,...", help="Sweep a configuration key"
    )
    parser.add_argument(
        "--seeds", default=None, help="Sweep seeds: N, LO:HI or N,M,..."
    )
    parser.add_argument(
        "--schemes", default="all", help="Sweep schemes: all or A,B,..."
    )
    parser.add_argument(
        "--jobs", type=int, default=1, help="Sweep workers (-1: all CPUs)"
    )
    parser.add_argument(
        "--trace", action="store_true", help="Write trace.txt"
    )
    parser.add_argument(
        "--plot", action="store_true", help="Write gnuplot scripts"
    )
    parser.add_argument(
        "--timing",
        action="store_true",
        help="Write the slot runtimes into run.csv",
    )
    parser.add_argument(
        "--verify", action="store_true", help="Run the property oracles"
    )
    parser.add_argument(
        "--verify-scale",
        type=float,
        default=1.0,
        help="Fraction of the oracle instances",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging"
    )
    return parser


def main(argv=None):
    """Entry point of the ``bargainmatch`` command; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = (logging.WARNING, logging.INFO, logging.DEBUG)[
        min(args.verbose, 2)
    ]
    logging.basicConfig(
        level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )

    if args.verify:
        return cmd_verify(args.verify_scale, args.seed or 0)

    try:
        config = _load(args)
        if args.sweep:
            seeds = args.seeds or str(config.rng_seed)
            spec = parse_sweep(args.sweep, seeds, args.schemes)
            cmd_sweep(config, spec, args.out, args.jobs, args.plot)
        else:
            cmd_run(config, args.out, args.trace, args.plot, args.timing)
    except FileNotFoundError as err:
        print(f"bargainmatch: configuration not found: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as err:
        print(f"bargainmatch: invalid configuration: {err}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantError as err:
        print(f"bargainmatch: invariant violated: {err}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK
