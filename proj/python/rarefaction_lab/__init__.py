"""Python front end to the rarefaction lab core."""

import json

from . import _core
from ._core import (
    DimensionError,
    Error,
    GramDegeneracyError,
    InvalidArgument,
    Polynomial,
    UncertifiedError,
    curve_svg,
    harnack_bound,
    sample,
)

__all__ = [
    "DimensionError",
    "Error",
    "GramDegeneracyError",
    "InvalidArgument",
    "Polynomial",
    "UncertifiedError",
    "approximate",
    "chart_svg",
    "config_hash",
    "count_real_roots",
    "curve_svg",
    "curve_topology",
    "distance",
    "harnack_bound",
    "record_to_csv",
    "run_experiment",
    "sample",
    "split",
]


def distance(p, grid_density=0, refine=True):
    return json.loads(_core.distance(p, grid_density, refine))


def count_real_roots(p):
    return json.loads(_core.count_real_roots(p))


def curve_topology(p, resolution=12):
    return json.loads(_core.curve_topology(p, resolution))


def split(p, ell=1):
    return json.loads(_core.split(p, ell))


def approximate(p, ell=1):
    return json.loads(_core.approximate(p, ell))


def _config_text(config):
    return config if isinstance(config, str) else json.dumps(config)


def config_hash(config):
    return _core.config_hash(_config_text(config))


def run_experiment(config, threads=1):
    """Run an experiment from a config dict; returns the record as a dict."""
    return json.loads(_core.run_experiment(_config_text(config), threads))


def record_to_csv(record):
    return _core.record_to_csv(_config_text(record))


def chart_svg(record):
    return _core.chart(_config_text(record))
