"""Conditional qubit sets and measurement-dependent conditional entropies.

Family specs are dicts (or JSON strings) tagged by "family", the same
format the command-line tool reads with --spec.
"""

import json as _json

import numpy as _np

from . import _core
from ._core import (
    CondqubitError,
    ellipsoid_params,
    rank2_optimal_angle,
    rank2_s2_min,
    spin_max_angle,
    spin_s2_curve,
    verify,
)

__all__ = [
    "CondqubitError",
    "conditional_state",
    "describe_set",
    "ellipsoid_params",
    "fano",
    "min_entropy",
    "rank2_optimal_angle",
    "rank2_s2_min",
    "sample_cloud",
    "spin_max_angle",
    "spin_s2_curve",
    "state",
    "verify",
]


def _spec(spec):
    return spec if isinstance(spec, str) else _json.dumps(spec)


def state(spec):
    """Density matrix of the family, qudit index first."""
    return _core.state(_spec(spec))


def fano(spec):
    """dict with r_a, r_b and the (dA^2-1) x 3 correlation matrix."""
    return _json.loads(_core.fano(_spec(spec)))


def describe_set(spec):
    """Analytic descriptor of the conditional Bloch vector set."""
    return _json.loads(_core.describe_set(_spec(spec)))


def sample_cloud(spec, n, seed=0, threads=1):
    """(n, 5) array with columns x, y, z, q, p."""
    return _core.sample_cloud(_spec(spec), int(n), int(seed), int(threads))


def conditional_state(spec, ket):
    """(r_B, probability) after the rank-one outcome |ket><ket| on the qudit."""
    return _core.conditional_state(_spec(spec), _np.asarray(ket, dtype=complex))


def min_entropy(spec, entropy="linear", method="analytic", restarts=32, seed=0, full_space=False):
    """Minimum conditional entropy; method is "analytic" or "brute"."""
    return _json.loads(_core.min_entropy(_spec(spec), entropy, method, int(restarts), int(seed), bool(full_space)))
