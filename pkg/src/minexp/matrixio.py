"""Plain-text serialization of measurement matrices.

Layout::

    n m d epsilon1
    0: r1:w1 r2:w2 ... rd:wd
    1: ...

One line per column, row indices ascending, weights printed with 17
significant digits so read(write(a)) reproduces every float bit for bit.
"""

from __future__ import annotations

import numpy as np

from .errors import ChecksumMismatchError, FormatError
from .graphs import BipartiteGraph, MeasurementMatrix

COLUMN_SUM_TOL = 1e-9


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_matrix(path, a: MeasurementMatrix) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{a.n} {a.m} {a.d} {_fmt(a.epsilon1)}\n")
        for j in range(a.n):
            pairs = " ".join(f"{int(r)}:{_fmt(w)}"
                             for r, w in zip(a.graph.columns[j], a.weights[j]))
            fh.write(f"{j}: {pairs}\n")


def read_matrix(path) -> MeasurementMatrix:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError("empty file", line=1)
    head = lines[0].split()
    if len(head) != 4:
        raise FormatError("header must be 'n m d epsilon1'", line=1)
    try:
        n, m, d = int(head[0]), int(head[1]), int(head[2])
        epsilon1 = float(head[3])
    except ValueError as exc:
        raise FormatError(f"bad header field: {exc}", line=1) from None
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != n:
        raise ChecksumMismatchError(f"header declares {n} columns, body has {len(body)}")

    columns = np.zeros((n, d), dtype=np.int64)
    weights = np.zeros((n, d))
    for lineno, ln in enumerate(body, start=2):
        head_part, _, rest = ln.partition(":")
        if not _:
            raise FormatError("missing ':' after column index", line=lineno)
        try:
            j = int(head_part)
        except ValueError:
            raise FormatError(f"bad column index {head_part!r}", line=lineno) from None
        if j != lineno - 2:
            raise FormatError(f"column index {j} out of order", line=lineno)
        pairs = rest.split()
        if len(pairs) != d:
            raise FormatError(f"column has {len(pairs)} entries, expected d={d}", line=lineno)
        prev = -1
        for slot, pair in enumerate(pairs):
            r_str, _, w_str = pair.partition(":")
            if not _:
                raise FormatError(f"entry {pair!r} is not 'row:weight'", line=lineno)
            try:
                r = int(r_str)
                w = float(w_str)
            except ValueError:
                raise FormatError(f"bad entry {pair!r}", line=lineno) from None
            if not 0 <= r < m:
                raise FormatError(f"row index {r} outside [0, {m})", line=lineno)
            if r < prev:
                raise FormatError("row indices must be ascending", line=lineno)
            if not np.isfinite(w) or w <= 0:
                raise FormatError(f"weight {w_str} must be a positive finite number", line=lineno)
            columns[j, slot] = r
            weights[j, slot] = w
            prev = r

    sums = weights.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - d) > COLUMN_SUM_TOL * d)
    if bad.size:
        raise ChecksumMismatchError(
            f"column {int(bad[0])} weight sum {sums[bad[0]]!r} differs from d={d}")
    graph = BipartiteGraph(n, m, d, columns, allow_repeats=True)
    return MeasurementMatrix(graph, weights, epsilon1, validate=False)
