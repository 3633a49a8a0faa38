"""Array constructions: MN PDA, cyclic Latin squares, the Latin-square
MAPDA and the lifting of a g-regular PDA to an MAPDA."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Optional

import numpy as np

from . import kernels
from .array import (
    STAR,
    ArrayError,
    CodedArray,
    hstack,
    subarray_of,
    validate_mapda,
    validate_pda,
    vstack,
)


class ConstructionError(ValueError):
    pass


def mn_pda(K: int, t: int) -> CodedArray:
    """The (t+1)-(K, C(K,t), C(K-1,t-1), C(K,t+1)) MN PDA.

    Rows are the t-subsets of [K] in lexicographic order; entry (T, k) is a
    star when k is in T, otherwise the lexicographic rank of T + {k} among the
    (t+1)-subsets.
    """
    if not 1 <= t < K:
        raise ConstructionError(f"need 1 <= t < K, got K={K}, t={t}")
    rank = {T: i for i, T in enumerate(combinations(range(K), t + 1), 1)}
    grid = []
    for T in combinations(range(K), t):
        members = set(T)
        grid.append([0 if k in members else rank[tuple(sorted(T + (k,)))]
                     for k in range(K)])
    return CodedArray(np.asarray(grid, dtype=np.int64))


def latin_square(n: int) -> CodedArray:
    """Cyclic Latin square L(i, j) = ((i + j - 2) mod n) + 1."""
    if n < 1:
        raise ConstructionError(f"order must be positive, got {n}")
    i = np.arange(n)
    return CodedArray((i[:, None] + i[None, :]) % n + 1)


def latin_mapda(K: int, L: int) -> CodedArray:
    """Cyclic Latin square of order K with the values L+1..K starred.

    The result is a K-regular (L, K, K, K-L, L) MAPDA with sum-DoF K.
    """
    if not 1 <= L <= K:
        raise ConstructionError(f"need 1 <= L <= K, got K={K}, L={L}")
    sq = latin_square(K).cells
    return CodedArray(np.where(sq > L, 0, sq))


def right_shift_row(row, shift: int) -> list:
    """Cyclically move the integers of ``row`` ``shift`` integer positions to
    the right; stars keep their places."""
    positions = [c for c, v in enumerate(row) if v is not STAR and v != 0 and v != "*"]
    out = list(row)
    p = len(positions)
    if p == 0:
        return out
    values = [row[c] for c in positions]
    for j, c in enumerate(positions):
        out[c] = values[(j - shift) % p]
    return out


def _shift_cells(row: np.ndarray, shift: int) -> np.ndarray:
    pos = np.flatnonzero(row)
    out = row.copy()
    if pos.size:
        out[pos] = np.roll(row[pos], shift)
    return out


@dataclass(frozen=True)
class LiftParams:
    m: int
    L: int
    g: int
    K1: int
    F1: int
    Z1: int
    S1: int

    @property
    def l(self) -> int:
        if self.L == self.m:
            return 1
        return self.m // gcd(self.m, self.L - self.m)

    @property
    def sgn_g(self) -> int:
        return 1 if self.L == self.m else self.g

    @property
    def alpha(self) -> int:
        a = (self.sgn_g + Fraction(self.L - self.m, self.m)) * self.l
        assert a.denominator == 1
        return int(a)

    @property
    def copies(self) -> int:
        """Rows per block A_j, i.e. l(L-m)/m."""
        c = Fraction(self.l * (self.L - self.m), self.m)
        assert c.denominator == 1
        return int(c)

    @property
    def target(self) -> tuple:
        """Claimed (L, K, F, Z, S) of the lifted array."""
        return (self.L, self.m * self.K1, self.alpha * self.F1,
                self.alpha * self.Z1, self.sgn_g * self.l * self.S1)

    @property
    def regularity(self) -> int:
        return self.m * (self.g - 1) + self.L



@dataclass(frozen=True)
class LiftTrace:
    params: LiftParams
    q: CodedArray
    q0: CodedArray
    p: CodedArray
    p1: Optional[CodedArray] = None
    u_prime: Optional[CodedArray] = None
    u: Optional[CodedArray] = None
    u0: Optional[CodedArray] = None
    p2: Optional[CodedArray] = None

    def stages(self) -> dict:
        """Non-empty stages keyed by the file suffix used when exporting."""
        named = {"q0": self.q0, "p1": self.p1, "u": self.u, "u0": self.u0,
                 "p2": self.p2, "p": self.p}
        return {k: v for k, v in named.items() if v is not None}


def lift_regular_pda(q: CodedArray, m: int, L: int) -> LiftTrace:
    """Lift a g-regular PDA to an (L, mK1, aF1, aZ1, sgn(g) l S1) MAPDA.

    Follows the two-part construction: P1 stacks gl shifted-label copies of
    the m-fold horizontal replica Q0; P2 replicates each row of Q l(L-m)/m
    times with the i-th copy's integers right-shifted by i, repeats that m
    times horizontally and relabels consecutive groups of L-m replicas.
    """
    pq = validate_pda(q)
    if pq.g is None:
        raise ConstructionError("input PDA is not regular")
    if not 1 <= m <= L:
        raise ConstructionError(f"need 1 <= m <= L, got m={m}, L={L}")
    params = LiftParams(m=m, L=L, g=pq.g, K1=pq.K, F1=pq.F, Z1=pq.Z, S1=pq.S)
    q0 = hstack([q] * m)
    if m == L:
        return LiftTrace(params=params, q=q, q0=q0, p=q0)

    gl = params.g * params.l
    p1 = vstack([q0 + j * params.S1 for j in range(gl)])

    c = params.copies
    u_prime = CodedArray(np.repeat(q.cells, c, axis=0))
    shifted = [_shift_cells(row, 1 + (f % c)) for f, row in enumerate(u_prime.cells)]
    u = CodedArray(np.asarray(shifted, dtype=np.int64))
    u0 = hstack([u] * m)
    p2 = CodedArray(kernels.relabel(u0.cells, params.S1, L - m))
    p = vstack([p1, p2])
    return LiftTrace(params=params, q=q, q0=q0, p=p, p1=p1,
                     u_prime=u_prime, u=u, u0=u0, p2=p2)


def shift_feasible(q: CodedArray, m: int, L: int) -> bool:
    """Whether the lift of ``q`` can produce a valid MAPDA.

    With m < L the i-th copy of each base row is shifted by i = 1..l(L-m)/m
    positions; the shifts must be distinct and non-zero modulo the number of
    integers in every row of ``q``. Otherwise a relabelled integer lands in a
    column that already holds it.
    """
    if m == L:
        return True
    pq = validate_pda(q)
    params = LiftParams(m=m, L=L, g=pq.g or 0, K1=pq.K, F1=pq.F, Z1=pq.Z, S1=pq.S)
    per_row = int((q.cells != 0).sum(axis=1).min())
    return params.copies < per_row


def mn_mapda(K1: int, t1: int, m: int, L: int) -> LiftTrace:
    """Lift of the MN PDA ``mn_pda(K1, t1)`` with ``m`` replicas and ``L``
    antennas."""
    return lift_regular_pda(mn_pda(K1, t1), m, L)


def mn_mapda_params(K1: int, t1: int, m: int, L: int) -> LiftParams:
    """Lift parameters for the MN base PDA, without building any array."""
    return LiftParams(m=m, L=L, g=t1 + 1, K1=K1, F1=comb(K1, t1),
                      Z1=comb(K1 - 1, t1 - 1), S1=comb(K1, t1 + 1))


# -- lift audit --------------------------------------------------------------

class LiftAuditError(AssertionError):
    def __init__(self, report):
        self.report = report
        super().__init__(report.summary())


@dataclass(frozen=True)
class LiftAudit:
    """Outcome of the three structural statements about a lifted array.

    ``distinct_columns``: every integer of P lies in m(g-1)+L distinct
    columns. ``p1_row_stars``: every row of P1^(s) has exactly m(g-1) stars.
    ``p2_rows_matched``: every row of P2 holding s has a star-twin row in P1
    holding s. Each ``*_witness`` is None on success, else the first failure.
    """

    distinct_columns: bool
    p1_row_stars: bool
    p2_rows_matched: bool
    distinct_columns_witness: Optional[tuple] = None
    p1_row_stars_witness: Optional[tuple] = None
    p2_rows_matched_witness: Optional[tuple] = None
    vacuous: bool = False

    @property
    def passed(self) -> bool:
        return self.distinct_columns and self.p1_row_stars and self.p2_rows_matched

    def summary(self) -> str:
        lines = []
        for name in ("distinct_columns", "p1_row_stars", "p2_rows_matched"):
            ok = getattr(self, name)
            w = getattr(self, name + "_witness")
            note = " (vacuous)" if self.vacuous and name != "distinct_columns" else ""
            lines.append(f"{name}: {'pass' if ok else 'FAIL'}{note}"
                         + ("" if w is None else f" witness={w}"))
        return "\n".join(lines)


def audit_lift(trace: LiftTrace, raise_on_failure: bool = True) -> LiftAudit:
    p = trace.p
    params = trace.params
    if trace.p1 is None:
        want = params.m * params.g
    else:
        want = params.regularity
    ptr, rows, cols = p.occurrence_index()

    distinct_w = None
    for s in range(1, len(ptr)):
        ncols = len(set(cols[ptr[s - 1]:ptr[s]].tolist()))
        if ncols != want:
            distinct_w = (s, ncols, want)
            break

    if trace.p1 is None:
        report = LiftAudit(distinct_columns=distinct_w is None, p1_row_stars=True,
                           p2_rows_matched=True,
                           distinct_columns_witness=distinct_w, vacuous=True)
        if raise_on_failure and not report.passed:
            raise LiftAuditError(report)
        return report

    p1, p2 = trace.p1, trace.p2
    stars_w = None
    want_stars = params.m * (params.g - 1)
    S = p1.max_value
    for s in range(1, S + 1):
        try:
            view = subarray_of(p1, s)
        except ArrayError:
            stars_w = (s, None, 0, want_stars)
            break
        for f, count in zip(view.row_indices, view.integer_counts()):
            nstars = len(view.col_indices) - count
            if nstars != want_stars:
                stars_w = (s, f, nstars, want_stars)
                break
        if stars_w:
            break

    match_w = None
    star1 = p1.cells == 0
    rows_of_p1 = {}
    for f, row in enumerate(p1.cells):
        key = star1[f].tobytes()
        for v in set(row[row != 0].tolist()):
            rows_of_p1.setdefault(v, set()).add(key)
    for f, row in enumerate(p2.cells):
        key = (row == 0).tobytes()
        for v in sorted(set(row[row != 0].tolist())):
            if key not in rows_of_p1.get(v, ()):
                match_w = (v, f + 1)
                break
        if match_w:
            break

    report = LiftAudit(
        distinct_columns=distinct_w is None,
        p1_row_stars=stars_w is None,
        p2_rows_matched=match_w is None,
        distinct_columns_witness=distinct_w,
        p1_row_stars_witness=stars_w,
        p2_rows_matched_witness=match_w,
    )
    if raise_on_failure and not report.passed:
        raise LiftAuditError(report)
    return report


def check_lift(trace: LiftTrace):
    """Validate the lifted array against its claimed parameters.

    Returns the MapdaParams; raises ArrayError or ConstructionError.
    """
    params = trace.params
    got = validate_mapda(trace.p, params.L)
    want = params.target
    if (got.L, got.K, got.F, got.Z, got.S) != want:
        raise ConstructionError(f"lift produced {got}, expected {want}")
    reg = params.m * params.g if params.m == params.L else params.regularity
    if got.g != reg:
        raise ConstructionError(f"lift regularity {got.g}, expected {reg}")
    return got
