"""Firework and reverse firework rumour processes on the integers.

Distributions, schedules and experiment configs are plain dicts (or JSON
strings) in the same shape the ``rumour_sim`` command line accepts.
"""

import json

from . import _core
from ._core import ConfigError, derive_key, wilson_interval

__all__ = [
    "ConfigError",
    "a_sequence",
    "criteria",
    "derive_key",
    "exact_reach_prob",
    "oracle",
    "pmf",
    "sample",
    "simulate",
    "sweep",
    "tail",
    "wilson_interval",
]


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def tail(distribution, k):
    return _core.tail(_text(distribution), k)


def pmf(distribution, k):
    return _core.pmf(_text(distribution), k)


def sample(distribution, u):
    return _core.sample(_text(distribution), u)


def a_sequence(schedule, n_max):
    """a_n = prod_{i=0}^{n} P(R_{n-i} < i + 1) for n = 0..n_max."""
    return _core.a_sequence(_text(schedule), n_max)


def exact_reach_prob(schedule, n):
    return _core.exact_reach_prob(_text(schedule), n)


def oracle(schedule, n, process="firework"):
    return _core.oracle(_text(schedule), process, n)


def criteria(schedule):
    return json.loads(_core.criteria(_text(schedule)))


def simulate(config):
    survivors, trials, p_hat, lo, hi = _core.simulate(_text(config))
    return {"survivors": survivors, "trials": trials, "p_hat": p_hat, "ci_lo": lo, "ci_hi": hi}


def sweep(config):
    return json.loads(_core.sweep(_text(config)))
