"""Kernel backend selection.

At import time the compiled extension ``minexp._core`` is preferred; the
pure-Python kernels are the fallback. Setting the environment variable
``MINEXP_PURE_PYTHON`` to a non-empty value forces the fallback (useful for
benchmarking and debugging).

The compiled subset scans require neighborhoods to fit a 64-bit mask, so
calls with more than 64 right nodes are routed to the Python kernels
regardless of the backend.
"""

from __future__ import annotations

import os

import numpy as np

from . import pycore

if os.environ.get("MINEXP_PURE_PYTHON"):
    _core = None
else:
    try:
        from .. import _core  # type: ignore[attr-defined]
    except ImportError:
        _core = None

BACKEND = "compiled" if _core is not None else "python"


def backend_name() -> str:
    """Active kernel backend: 'compiled' or 'python'."""
    return BACKEND


def simplex_standard(a, b, c, max_iter, degen_limit, tol=pycore.RATIO_TOL):
    if _core is not None:
        a = np.ascontiguousarray(a, dtype=np.float64)
        b = np.ascontiguousarray(b, dtype=np.float64)
        c = np.ascontiguousarray(c, dtype=np.float64)
        return _core.simplex_standard(a, b, c, int(max_iter), int(degen_limit), float(tol))
    return pycore.simplex_standard(a, b, c, max_iter, degen_limit, tol)


def _masks_fit_u64(masks) -> bool:
    return all(mask >> 64 == 0 for mask in masks)


def expansion_scan(masks, k, req, budget):
    if _core is not None and _masks_fit_u64(masks):
        marr = np.asarray(masks, dtype=np.uint64)
        rarr = np.asarray(req, dtype=np.int64)
        return _core.expansion_scan(marr, int(k), rarr, int(budget))
    return pycore.expansion_scan(masks, k, req, budget)


def deficiency_scan(masks, t, budget):
    if _core is not None and _masks_fit_u64(masks):
        marr = np.asarray(masks, dtype=np.uint64)
        return _core.deficiency_scan(marr, int(t), int(budget))
    return pycore.deficiency_scan(masks, t, budget)


def complete_rank_scan(cols, masks, max_r, tol, budget):
    if _core is not None and _masks_fit_u64(masks):
        carr = np.ascontiguousarray(cols, dtype=np.float64)
        marr = np.asarray(masks, dtype=np.uint64)
        return _core.complete_rank_scan(carr, marr, int(max_r), float(tol), int(budget))
    return pycore.complete_rank_scan(cols, masks, max_r, tol, budget)
