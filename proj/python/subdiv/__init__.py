"""Regularity analysis for non-stationary subdivision schemes."""

import json
import os

from . import _core
from ._core import (
    NotEnoughSumRulesError,
    ParseError,
    SubdivError,
    bessel_j0_zeros,
    spectral_radius,
)

__all__ = [
    "NotEnoughSumRulesError",
    "ParseError",
    "SubdivError",
    "analyze",
    "bessel_j0_zeros",
    "gamma_set",
    "generability",
    "jsr_bounds",
    "load_scheme",
    "restrict",
    "spectral_radius",
    "sum_rule_order",
    "support_interval",
]


def _text(scheme):
    if isinstance(scheme, (str, os.PathLike)) and os.path.exists(scheme):
        with open(scheme) as fh:
            return fh.read()
    if isinstance(scheme, dict):
        return json.dumps(scheme)
    return str(scheme)


def _interval(interval):
    if interval is None:
        return None
    lo, hi = interval
    return (str(lo), str(hi))


def load_scheme(path):
    with open(path) as fh:
        return json.load(fh)


def analyze(scheme, interval=None, ell=None):
    """Regularity report for a scheme (path, dict or JSON text)."""
    return json.loads(_core.analyze(_text(scheme), _interval(interval), ell))


def restrict(scheme, interval=None, ell=None):
    """Transition matrices on the difference space V_ell, as a dict."""
    return json.loads(_core.restrict(_text(scheme), _interval(interval), ell))


def jsr_bounds(matrices, depth=20, tol=1e-6, max_nodes=100000):
    import numpy as np

    mats = [np.asarray(m, dtype=float) for m in matrices]
    return json.loads(_core.jsr_bounds(mats, depth, tol, max_nodes))


def sum_rule_order(scheme):
    return _core.sum_rule_order(_text(scheme))


def support_interval(scheme):
    """Support of the limit function as a pair of rational strings."""
    return tuple(_core.support_interval(_text(scheme)))


def gamma_set(coeffs, r, m=2):
    """(base points, period) of the zero set of a level-r symbol."""
    points, period = _core.gamma_set([complex(c) for c in coeffs], r, m)
    return list(points), period


def generability(zeros, m=2, window=20.0):
    kind, witnesses, message = _core.generability([complex(z) for z in zeros], m, window)
    return {"verdict": kind, "witnesses": list(witnesses), "message": message}
