"""Pure-Python array kernels.

Same signatures and results as the compiled ``_kernels`` extension; used when
the extension is not built. Arrays are 2-D int64 grids with 0 for a star.
``ptr``/``rows``/``cols`` is the occurrence index: the positions of integer
``s`` are ``rows[ptr[s-1]:ptr[s]]``, ``cols[ptr[s-1]:ptr[s]]`` in row-major
order.
"""

import numpy as np


def column_repeat(cells, S):
    """First (s, col, row1, row2) with ``s`` twice in one column, else None."""
    grid = cells.tolist()
    F = len(grid)
    K = len(grid[0]) if F else 0
    for k in range(K):
        seen = {}
        for f in range(F):
            v = grid[f][k]
            if v == 0:
                continue
            if v in seen:
                return (v, k, seen[v], f)
            seen[v] = f
    return None


def pair_scan(cells, ptr, rows, cols):
    """Scan equal-integer pairs for the PDA condition C3.

    Returns None or ``(code, s, f1, k1, f2, k2)`` where code 1 means the two
    entries share a row or column and code 2 means a cross entry of their
    2x2 subarray is not a star.
    """
    grid = cells.tolist()
    ptr = ptr.tolist()
    rows = rows.tolist()
    cols = cols.tolist()
    for s in range(1, len(ptr)):
        lo, hi = ptr[s - 1], ptr[s]
        for a in range(lo, hi):
            f1, k1 = rows[a], cols[a]
            for b in range(a + 1, hi):
                f2, k2 = rows[b], cols[b]
                if f1 == f2 or k1 == k2:
                    return (1, s, f1, k1, f2, k2)
                if grid[f1][k2] != 0 or grid[f2][k1] != 0:
                    return (2, s, f1, k1, f2, k2)
    return None


def row_counts(cells, ptr, rows, cols):
    """Integer entries in the row of each occurrence, restricted to the
    columns that contain the same integer."""
    grid = cells.tolist()
    ptr = ptr.tolist()
    rows = rows.tolist()
    cols = cols.tolist()
    out = [0] * len(rows)
    for s in range(1, len(ptr)):
        lo, hi = ptr[s - 1], ptr[s]
        span = cols[lo:hi]
        for a in range(lo, hi):
            row = grid[rows[a]]
            out[a] = sum(1 for k in span if row[k] != 0)
    return np.asarray(out, dtype=np.int64)


def relabel(cells, S1, group):
    """Replace the i-th row-major replica of each s by s + (i // group) * S1."""
    grid = cells.tolist()
    seen = [0] * (S1 + 1)
    for row in grid:
        for k, v in enumerate(row):
            if v:
                row[k] = v + (seen[v] // group) * S1
                seen[v] += 1
    return np.asarray(grid, dtype=np.int64).reshape(cells.shape)
