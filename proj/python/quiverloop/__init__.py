"""Spectral-action matrix models on quivers.

Thin Python layer over the C++ core. Functions that return structured
data come back from C++ as JSON and are decoded here.
"""

import json as _json

from ._quiverloop import (
    Job,
    QuiverLoopError,
    bessel_i,
    dirac_sample,
    feasible,
    first_moment,
    load_job,
    moment_matrix,
    moment_string,
    parse_job,
    partition_function,
    sample_haar,
    scan_region,
    triangle_job,
)
from . import _quiverloop as _ext

__all__ = [
    "Job",
    "QuiverLoopError",
    "bessel_i",
    "check_loop_equation",
    "dirac_sample",
    "ensemble",
    "estimate_wilson",
    "expand_action",
    "feasible",
    "first_moment",
    "load_job",
    "loop_equation",
    "moment_matrix",
    "moment_string",
    "moment_table",
    "parse_job",
    "partition_function",
    "sample_haar",
    "scan_region",
    "triangle_job",
]


def ensemble(job):
    return _json.loads(job.ensemble_json())


def expand_action(job):
    """Plaquette table: {"constant", "constant_by_vertex", "entries"}."""
    return _json.loads(_ext.expand_action_json(job))


def loop_equation(job, loop, root, large_n=False):
    return _json.loads(_ext.loop_equation_json(job, loop, root, large_n))


def moment_table(count):
    """[{n, terms: [{c, a, b}]}] with m_n = sum c * y**a / x**b."""
    return _json.loads(_ext.moment_table_json(count))


def estimate_wilson(job, loop, samples=100000, seed=1, method="reweight", threads=1):
    return _json.loads(_ext.estimate_wilson_json(job, loop, samples, seed, method, threads))


def check_loop_equation(job, loop, root, samples=100000, seed=1):
    return _json.loads(_ext.check_loop_equation_json(job, loop, root, samples, seed))
