"""Exact counting and asymptotic densities of integer sets.

The heavy lifting lives in the C++ extension; this wrapper decodes the JSON
payloads of the compound results into plain dicts.
"""

import json as _json

from ._densitylab import (
    DensityLabError,
    IntegerSet,
    WeightSequence,
    __version__,
    rule_catalogue,
    simple_profile,
)
from . import _densitylab as _core

__all__ = [
    "DensityLabError",
    "IntegerSet",
    "WeightSequence",
    "__version__",
    "evaluate_density",
    "mn_witness",
    "rule_catalogue",
    "run_job",
    "run_suite",
    "simple_profile",
]


def evaluate_density(s, kind, q="", mn="", options=None):
    """Evaluate one density functional; returns a dict with value/bracket."""
    opts = _json.dumps(options) if options else ""
    return _json.loads(_core.evaluate_density(s, kind, q, mn, opts))


def mn_witness(s, mn, l_grid, k_max=1_000_000):
    return _json.loads(_core.mn_witness(s, mn, l_grid, k_max))


def run_job(job):
    if not isinstance(job, str):
        job = _json.dumps(job)
    return _json.loads(_core.run_job(job))


def run_suite(name, seed=0, quick=False):
    return _json.loads(_core.run_suite(name, seed, quick))
