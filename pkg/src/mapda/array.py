"""Array model and the PDA / MAPDA validity audits.

An array is an F x K grid of stars and positive integers. Internally it is a
read-only int64 numpy grid with 0 standing for a star; rows and columns are
1-based in every public method and error witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import kernels


class _Star:
    __slots__ = ()

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return "STAR"


STAR = _Star()
Entry = Union[int, _Star]


class ArrayError(ValueError):
    """Base class for malformed or invalid arrays."""


class FormatError(ArrayError):
    pass


class StarCountError(ArrayError):
    """C1: columns carry different numbers of stars."""

    def __init__(self, counts):
        self.counts = tuple(counts)
        detail = ", ".join(f"col {k}: {c}" for k, c in enumerate(self.counts, 1))
        super().__init__(f"C1 violated: unequal star counts per column ({detail})")


class IntegerSetError(ArrayError):
    """C2: the integers are not exactly 1..S."""

    def __init__(self, missing, S):
        self.missing = tuple(missing)
        self.S = S
        if S == 0:
            msg = "C2 violated: array contains no integers"
        else:
            msg = f"C2 violated: integers {list(self.missing)} missing from 1..{S}"
        super().__init__(msg)


class RepeatError(ArrayError):
    """C3 (C3a for PDAs): an integer repeats in a row or column."""

    def __init__(self, s, first, second):
        self.s = s
        self.positions = (first, second)
        super().__init__(f"C3 violated: integer {s} at {first} and {second} "
                         "shares a row or column")


class CrossError(ArrayError):
    """C3b: the 2x2 subarray of two equal integers has a non-star corner."""

    def __init__(self, s, first, second, corner):
        self.s = s
        self.positions = (first, second)
        self.corner = corner
        super().__init__(f"C3b violated: integer {s} at {first} and {second}, "
                         f"entry at {corner} is not a star")


class AntennaError(ArrayError):
    """C4: a row of P^(s) has more than L integer entries."""

    def __init__(self, s, row, count, L):
        self.s = s
        self.row = row
        self.count = count
        self.L = L
        super().__init__(f"C4 violated: row {row} of P^({s}) carries {count} "
                         f"integer entries > L={L}")


class UnknownIntegerError(ArrayError, KeyError):
    def __str__(self):
        return self.args[0]


class AuditError(AssertionError):
    """A star-counting inequality failed on an array that validated."""


@dataclass(frozen=True, eq=False)
class CodedArray:
    """Immutable F x K array of stars and positive integers."""

    cells: np.ndarray
    _index: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.int64, copy=True, order="C")
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise FormatError(f"array must be a non-empty 2-D grid, got shape {cells.shape}")
        if (cells < 0).any():
            f, k = np.argwhere(cells < 0)[0]
            raise FormatError(f"negative entry at ({f + 1}, {k + 1})")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> "CodedArray":
        """Build from rows of ``'*'``/``STAR``/``None`` and positive ints."""
        grid = []
        for row in rows:
            out = []
            for v in row:
                if v is STAR or v is None or v == "*":
                    out.append(0)
                else:
                    v = int(v)
                    if v < 1:
                        raise FormatError(f"integer entries must be positive, got {v}")
                    out.append(v)
            grid.append(out)
        if not grid or len({len(r) for r in grid}) != 1:
            raise FormatError("rows must be non-empty and of equal length")
        return cls(np.asarray(grid, dtype=np.int64))

    @property
    def F(self) -> int:
        return self.cells.shape[0]

    @property
    def K(self) -> int:
        return self.cells.shape[1]

    @property
    def max_value(self) -> int:
        return int(self.cells.max())

    def entry(self, f: int, k: int) -> Entry:
        """Entry at 1-based row ``f`` and column ``k``."""
        v = int(self.cells[f - 1, k - 1])
        return STAR if v == 0 else v

    def rows(self) -> list[list[Entry]]:
        return [[STAR if v == 0 else v for v in row] for row in self.cells.tolist()]

    def star_counts(self) -> np.ndarray:
        return (self.cells == 0).sum(axis=0)

    def occurrences(self, s: int) -> list[tuple[int, int]]:
        """1-based positions of ``s`` in row-major order."""
        ptr, rows, cols = self.occurrence_index()
        if not 1 <= s < len(ptr):
            return []
        lo, hi = ptr[s - 1], ptr[s]
        return [(int(f) + 1, int(k) + 1) for f, k in zip(rows[lo:hi], cols[lo:hi])]

    def occurrence_index(self):
        """CSR index ``(ptr, rows, cols)`` over integers 1..max_value.

        Positions of ``s`` are ``rows[ptr[s-1]:ptr[s]]`` (0-based), row-major.
        """
        if self._index is None:
            flat = self.cells.ravel()
            pos = np.flatnonzero(flat)
            vals = flat[pos]
            order = np.argsort(vals, kind="stable")
            pos = pos[order]
            counts = np.bincount(vals, minlength=self.max_value + 1)
            ptr = np.concatenate(([0], np.cumsum(counts[1:]))).astype(np.int64)
            rows = (pos // self.K).astype(np.int64)
            cols = (pos % self.K).astype(np.int64)
            object.__setattr__(self, "_index", (ptr, rows, cols))
        return self._index

    def __add__(self, offset: int) -> "CodedArray":
        """Add ``offset`` to every integer entry; stars stay stars."""
        return CodedArray(np.where(self.cells == 0, 0, self.cells + offset))

    def __eq__(self, other):
        if not isinstance(other, CodedArray):
            return NotImplemented
        return np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.cells.shape, self.cells.tobytes()))

    def __repr__(self):
        return f"CodedArray(F={self.F}, K={self.K}, S={self.max_value})"

    def to_text(self) -> str:
        return format_array(self)

    def pretty(self) -> str:
        width = len(str(self.max_value))
        return "\n".join(
            " ".join(("*" if v == 0 else str(v)).rjust(width) for v in row)
            for row in self.cells.tolist()
        )


def hstack(arrays: Sequence[CodedArray]) -> CodedArray:
    return CodedArray(np.hstack([a.cells for a in arrays]))


def vstack(arrays: Sequence[CodedArray]) -> CodedArray:
    return CodedArray(np.vstack([a.cells for a in arrays]))


# -- text format -----------------------------------------------------------

def format_array(a: CodedArray) -> str:
    lines = [f"{a.F} {a.K}"]
    for row in a.cells.tolist():
        lines.append(" ".join("*" if v == 0 else str(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_array(text: str) -> CodedArray:
    """Parse the ``F K`` header plus F rows of K tokens format."""
    if not text.endswith("\n"):
        raise FormatError("missing trailing newline")
    lines = text[:-1].split("\n")
    header = lines[0].split(" ")
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise FormatError(f"bad header line {lines[0]!r}; expected 'F K'")
    F, K = int(header[0]), int(header[1])
    if F < 1 or K < 1:
        raise FormatError("F and K must be positive")
    body = lines[1:]
    if len(body) != F:
        raise FormatError(f"expected {F} rows, found {len(body)}")
    grid = []
    for f, line in enumerate(body, 1):
        tokens = line.split()
        if len(tokens) != K:
            raise FormatError(f"row {f}: expected {K} tokens, found {len(tokens)}")
        row = []
        for tok in tokens:
            if tok == "*":
                row.append(0)
            elif tok.isdigit() and int(tok) >= 1:
                row.append(int(tok))
            else:
                raise FormatError(f"row {f}: bad token {tok!r}")
        grid.append(row)
    return CodedArray(np.asarray(grid, dtype=np.int64))


def read_array(path) -> CodedArray:
    with open(path, "r", newline="") as fh:
        return parse_array(fh.read())


def write_array(a: CodedArray, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_array(a))


# -- parameters ------------------------------------------------------------

@dataclass(frozen=True)
class PdaParams:
    K: int
    F: int
    Z: int
    S: int
    g: Optional[int] = None

    @property
    def memory_ratio(self) -> Fraction:
        return Fraction(self.Z, self.F)

    def __str__(self):
        base = f"PDA(K={self.K},F={self.F},Z={self.Z},S={self.S})"
        return base if self.g is None else f"{base} g={self.g}"


@dataclass(frozen=True)
class MapdaParams:
    L: int
    K: int
    F: int
    Z: int
    S: int
    g: Optional[int] = None

    @property
    def memory_ratio(self) -> Fraction:
        return Fraction(self.Z, self.F)

    @property
    def dof_bound(self) -> Fraction:
        return Fraction(self.K * self.Z, self.F) + self.L

    def __str__(self):
        base = f"MAPDA(L={self.L},K={self.K},F={self.F},Z={self.Z},S={self.S})"
        return base if self.g is None else f"{base} g={self.g}"


def sum_dof(p) -> Fraction:
    """Sum-DoF K(F-Z)/S of the scheme realised by an array with params ``p``."""
    return Fraction(p.K * (p.F - p.Z), p.S)


# -- validation ------------------------------------------------------------

def _pos(f, k):
    return (int(f) + 1, int(k) + 1)


def _check_c1_c2(a: CodedArray):
    stars = a.star_counts()
    if (stars != stars[0]).any():
        raise StarCountError(stars.tolist())
    Z = int(stars[0])
    S = a.max_value
    ptr, _, _ = a.occurrence_index()
    counts = np.diff(ptr)
    if S == 0:
        raise IntegerSetError((), 0)
    missing = (np.flatnonzero(counts == 0) + 1).tolist()
    if missing:
        raise IntegerSetError(missing, S)
    g = int(counts[0]) if (counts == counts[0]).all() else None
    return Z, S, g


def validate_pda(a: CodedArray) -> PdaParams:
    """Check Definition-1 conditions C1, C2, C3a and C3b.

    Returns the ``(K, F, Z, S)`` parameters with ``g`` set when every integer
    occurs equally often. Raises the ArrayError subclass of the first violated
    condition, with 1-based witness positions.
    """
    Z, S, g = _check_c1_c2(a)
    ptr, rows, cols = a.occurrence_index()
    hit = kernels.pair_scan(a.cells, ptr, rows, cols)
    if hit is not None:
        code, s, f1, k1, f2, k2 = hit
        first, second = _pos(f1, k1), _pos(f2, k2)
        if code == 1:
            raise RepeatError(int(s), first, second)
        corner = _pos(f1, k2) if a.cells[f1, k2] != 0 else _pos(f2, k1)
        raise CrossError(int(s), first, second, corner)
    return PdaParams(K=a.K, F=a.F, Z=Z, S=S, g=g)


def validate_mapda(a: CodedArray, L: int) -> MapdaParams:
    """Check the multiple-antenna conditions C1-C4 for ``L`` antennas."""
    if L < 1:
        raise ValueError(f"antenna count must be >= 1, got {L}")
    Z, S, g = _check_c1_c2(a)
    hit = kernels.column_repeat(a.cells, S)
    if hit is not None:
        s, k, f1, f2 = hit
        raise RepeatError(int(s), _pos(f1, k), _pos(f2, k))
    ptr, rows, cols = a.occurrence_index()
    counts = kernels.row_counts(a.cells, ptr, rows, cols)
    over = np.flatnonzero(counts > L)
    if over.size:
        j = int(over[0])
        s = int(np.searchsorted(ptr, j, side="right"))
        raise AntennaError(s, int(rows[j]) + 1, int(counts[j]), L)
    return MapdaParams(L=L, K=a.K, F=a.F, Z=Z, S=S, g=g)


@dataclass(frozen=True)
class SubarrayView:
    """Rows and columns (1-based, ascending) of ``parent`` that contain ``s``."""

    parent: CodedArray
    s: int
    row_indices: tuple
    col_indices: tuple

    @property
    def shape(self):
        return (len(self.row_indices), len(self.col_indices))

    def rows(self) -> list[list[Entry]]:
        return [[self.parent.entry(f, k) for k in self.col_indices]
                for f in self.row_indices]

    def integer_counts(self) -> list[int]:
        """Number of integer entries in each row of the view."""
        return [sum(1 for v in row if v is not STAR) for row in self.rows()]


def subarray_of(a: CodedArray, s: int) -> SubarrayView:
    """The subarray P^(s) over the rows and columns that contain ``s``."""
    occ = a.occurrences(s)
    if not occ:
        raise UnknownIntegerError(f"integer {s} does not occur in the array")
    rows = tuple(sorted({f for f, _ in occ}))
    cols = tuple(sorted({k for _, k in occ}))
    return SubarrayView(a, s, rows, cols)


@dataclass(frozen=True)
class StarAudit:
    """Counting quantities behind the sum-DoF upper bound.

    ``per_integer_row[s-1][i]`` is the number of integer entries in the row
    of the i-th occurrence of ``s`` inside P^(s) (occurrences in row-major
    order); ``stars_used`` and ``star_capacity`` are the two sides of the
    star-usage inequality.
    """

    L: int
    K: int
    F: int
    Z: int
    S: int
    n: int
    per_integer: tuple
    per_integer_row: tuple
    per_row: tuple
    stars_used: int
    star_capacity: int
    s_lower_bound: Fraction
    achieved_dof: Fraction
    dof_bound: Fraction

    @property
    def meets_bound(self) -> bool:
        return self.achieved_dof == self.dof_bound


def star_audit(a: CodedArray, L: int) -> StarAudit:
    """Evaluate the star-counting chain for a validated MAPDA.

    Raises AuditError if ``M <= M'``, ``S >= nF/(FL+KF-n)`` or the sum-DoF
    bound fails; that can only happen on an array the validator should have
    rejected.
    """
    p = validate_mapda(a, L)
    ptr, rows, cols = a.occurrence_index()
    counts = kernels.row_counts(a.cells, ptr, rows, cols)
    r = np.diff(ptr)
    r_rep = np.repeat(r, r)
    M = int((r_rep - counts).sum())
    row_ints = (a.cells != 0).sum(axis=1)
    M_prime = int((row_ints * (a.K - row_ints)).sum())
    n = int(r.sum())
    if n != int(row_ints.sum()) or n != p.K * (p.F - p.Z):
        raise AuditError(f"integer count mismatch: n={n}")
    per_row_split = tuple(tuple(int(c) for c in counts[ptr[s]:ptr[s + 1]])
                          for s in range(p.S))
    s_lower = Fraction(n * p.F, p.F * L + p.K * p.F - n)
    achieved = sum_dof(p)
    bound = p.dof_bound
    if M > M_prime:
        raise AuditError(f"stars used M={M} exceeds capacity M'={M_prime}")
    if p.S < s_lower:
        raise AuditError(f"S={p.S} below lower bound {s_lower}")
    if achieved > bound:
        raise AuditError(f"sum-DoF {achieved} exceeds bound {bound}")
    return StarAudit(
        L=L, K=p.K, F=p.F, Z=p.Z, S=p.S, n=n,
        per_integer=tuple(int(x) for x in r),
        per_integer_row=per_row_split,
        per_row=tuple(int(x) for x in row_ints),
        stars_used=M, star_capacity=M_prime,
        s_lower_bound=s_lower, achieved_dof=achieved, dof_bound=bound,
    )
