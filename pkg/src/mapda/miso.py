"""Noiseless L-antenna MISO broadcast with zero-forcing precoders.

Every block of a delivery plan is simulated symbolically: packet j of the
block is the formal unit vector e_j, so user i receives row i of the
effective matrix R = H V. After cancelling the packets in its cache the
residue has to be exactly e_i. Exact mode runs over ``Fraction``; float mode
over complex128 with a 1e-9 relative tolerance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional, Sequence

import numpy as np

from .array import CodedArray, sum_dof, validate_mapda
from .scheme import BlockPlan, place, plan_delivery

log = logging.getLogger(__name__)

KINDS = ("cauchy", "vandermonde", "gaussian")
MODES = ("exact", "float")
FLOAT_TOL = 1e-9
MAX_CONDITION = 1e8
# Gaussian channels with more L x L minors than this are only checked lazily
# by the precoder solve.
MINOR_CHECK_LIMIT = 200_000


class ChannelError(ValueError):
    pass


class PrecoderError(ArithmeticError):
    pass


class DecodeError(AssertionError):
    def __init__(self, s, user, packet_index, coefficient):
        self.s = s
        self.user = user
        self.packet_index = packet_index
        self.coefficient = coefficient
        super().__init__(f"block {s}: user {user} residue has coefficient "
                         f"{coefficient} on packet #{packet_index}")


@dataclass(frozen=True)
class ChannelMatrix:
    """K x L channel, exact (tuple of Fraction rows) or complex float."""

    kind: str
    K: int
    L: int
    seed: Optional[int]
    mode: str
    entries: object = field(repr=False)

    def row(self, k: int):
        """Channel row of 1-based user ``k``."""
        return self.entries[k - 1]

    def rows(self, users: Sequence[int]):
        if self.mode == "exact":
            return [self.entries[k - 1] for k in users]
        return self.entries[[k - 1 for k in users]]

    def as_float(self) -> "ChannelMatrix":
        if self.mode == "float":
            return self
        values = np.array([[complex(x) for x in row] for row in self.entries])
        return ChannelMatrix(self.kind, self.K, self.L, self.seed, "float", values)


def _minors_ok(h: np.ndarray, L: int) -> bool:
    K = h.shape[0]
    size = min(K, L)
    if comb(K, size) > MINOR_CHECK_LIMIT:
        return True
    idx = np.array(list(combinations(range(K), size)))
    conds = np.linalg.cond(h[idx])
    return bool(np.all(conds < MAX_CONDITION))


def make_channel(kind: str, K: int, L: int, seed: Optional[int] = 0,
                 mode: str = "exact") -> ChannelMatrix:
    """Channel generators.

    cauchy: h(k, i) = 1 / (k + K + i); every square submatrix is nonsingular.
    vandermonde: h(k, i) = k**(i-1); every L x L row selection is nonsingular.
    gaussian: i.i.d. CN(0, 1) from ``numpy.random.default_rng(seed)``, redrawn
    while some L x L minor has condition number above 1e8. Float mode only.
    """
    if kind not in KINDS:
        raise ChannelError(f"unknown channel kind {kind!r}; choose from {KINDS}")
    if mode not in MODES:
        raise ChannelError(f"unknown mode {mode!r}; choose from {MODES}")
    if K < 1 or L < 1:
        raise ChannelError(f"need K, L >= 1, got K={K}, L={L}")
    if kind == "gaussian":
        if mode == "exact":
            raise ChannelError("gaussian channels are float-only; use --mode float")
        rng = np.random.default_rng(seed)
        for _ in range(100):
            h = (rng.standard_normal((K, L)) + 1j * rng.standard_normal((K, L))) / np.sqrt(2)
            if _minors_ok(h, L):
                return ChannelMatrix(kind, K, L, seed, mode, h)
        raise ChannelError("could not draw a well-conditioned gaussian channel")
    if kind == "cauchy":
        exact = tuple(tuple(Fraction(1, k + K + i) for i in range(1, L + 1))
                      for k in range(1, K + 1))
    else:
        exact = tuple(tuple(Fraction(k) ** (i - 1) for i in range(1, L + 1))
                      for k in range(1, K + 1))
    ch = ChannelMatrix(kind, K, L, seed, "exact", exact)
    return ch if mode == "exact" else ch.as_float()


def solve_exact(A, b):
    """Solve the square system A x = b over the rationals; None if singular."""
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(rhs)] for row, rhs in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                factor = M[r][c]
                M[r] = [x - factor * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def _solve_float(A, b):
    A = np.asarray(A, dtype=complex)
    if np.linalg.cond(A) > 1e12:
        return None
    return np.linalg.solve(A, np.asarray(b, dtype=complex))


@dataclass(frozen=True)
class PrecoderBlock:
    s: int
    users: tuple
    columns: tuple  # one length-L vector per served user

    def matrix(self):
        """V as a list of L rows (exact) or an L x r array (float)."""
        if self.columns and isinstance(self.columns[0], np.ndarray):
            return np.column_stack(self.columns)
        return [list(r) for r in zip(*self.columns)]


def solve_precoder(h: ChannelMatrix, b: BlockPlan, cache: Optional[dict] = None) -> PrecoderBlock:
    """Zero-forcing vector per served user.

    v_i gives unit gain at user i and zero gain at every other user of its
    interference set. With n = |set| < L the coordinates outside the first
    nonsingular n-column subset (lexicographic) are fixed to zero.

    ``cache`` maps (user, interference set) to a solved vector; pass the same
    dict across blocks of one channel to skip repeated solves.
    """
    exact = h.mode == "exact"
    cols = []
    for user, iset in zip(b.users, b.interference_sets):
        if cache is not None and (user, iset) in cache:
            cols.append(cache[user, iset])
            continue
        n = len(iset)
        if n > h.L:
            raise PrecoderError(f"block {b.s}: user {user} must null {n - 1} users "
                                f"with only L={h.L} antennas")
        rows = h.rows(iset)
        rhs = [1 if u == user else 0 for u in iset]
        v = None
        for sub in combinations(range(h.L), n):
            if exact:
                A = [[row[c] for c in sub] for row in rows]
                x = solve_exact(A, rhs)
            else:
                x = _solve_float(rows[:, list(sub)], rhs)
            if x is not None:
                if exact:
                    v = [Fraction(0)] * h.L
                else:
                    v = np.zeros(h.L, dtype=complex)
                for c, val in zip(sub, x):
                    v[c] = val
                break
        if v is None:
            raise PrecoderError(f"block {b.s}: singular zero-forcing system for "
                                f"user {user}, interference set {iset}")
        v = tuple(v) if exact else v
        if cache is not None:
            cache[user, iset] = v
        cols.append(v)
    return PrecoderBlock(b.s, b.users, tuple(cols))


def _dot(row, col):
    return sum((a * b for a, b in zip(row, col) if b), Fraction(0))


def effective_matrix(h: ChannelMatrix, pre: PrecoderBlock):
    """R = H^(s) V^(s); row i is what served user i receives."""
    if h.mode == "exact":
        rows = h.rows(pre.users)
        return tuple(tuple(_dot(row, col) for col in pre.columns) for row in rows)
    return h.rows(pre.users) @ pre.matrix()


@dataclass(frozen=True)
class BlockResult:
    s: int
    users: tuple
    effective: object
    decoded: tuple
    failures: tuple = ()

    @property
    def r(self) -> int:
        return len(self.users)


@dataclass(frozen=True)
class SimulationReport:
    mode: str
    kind: str
    seed: Optional[int]
    L: int
    K: int
    F: int
    Z: int
    S: int
    blocks: tuple

    @property
    def served(self) -> int:
        return sum(sum(b.decoded) for b in self.blocks)

    @property
    def sum_dof(self) -> Fraction:
        return Fraction(self.served, self.S)

    @property
    def all_decoded(self) -> bool:
        return all(all(b.decoded) for b in self.blocks)

    def to_text(self) -> str:
        return format_report(self)


def _decode_block(b: BlockPlan, R, caches, exact: bool):
    decoded, failures = [], []
    for i, user in enumerate(b.users):
        if exact:
            coeffs = list(R[i])
        else:
            coeffs = np.asarray(R[i]).tolist()
        # cancel the contributions of packets this user already holds
        for j, pkt in enumerate(b.packets):
            if j != i and pkt in caches[user - 1]:
                coeffs[j] = 0
        bad = None
        if exact:
            for j, c in enumerate(coeffs):
                if c != (1 if j == i else 0):
                    bad = (j + 1, c)
                    break
        else:
            scale = max(1.0, max(abs(c) for c in np.asarray(R[i]).tolist()))
            for j, c in enumerate(coeffs):
                want = 1 if j == i else 0
                if abs(c - want) > FLOAT_TOL * scale:
                    bad = (j + 1, c)
                    break
        decoded.append(bad is None)
        if bad is not None:
            failures.append((user,) + bad)
    return tuple(decoded), tuple(failures)


def simulate(a: CodedArray, L: int, d: Sequence[int], kind: str = "cauchy",
             seed: Optional[int] = 0, N: Optional[int] = None, mode: str = "exact",
             strict: bool = True) -> SimulationReport:
    """Place, plan and transmit every block; verify each delivery decodes.

    With ``strict`` a failed decode raises DecodeError, otherwise it is
    recorded in the block's ``decoded`` flags.
    """
    p = validate_mapda(a, L)
    d = tuple(d)
    N = max(d) if N is None else N
    caches = place(a, N)
    plan = plan_delivery(a, d, N)
    h = make_channel(kind, a.K, L, seed, mode)
    exact = h.mode == "exact"
    results = []
    solved = {}
    for b in plan.blocks:
        pre = solve_precoder(h, b, solved)
        R = effective_matrix(h, pre)
        decoded, failures = _decode_block(b, R, caches, exact)
        if strict and failures:
            user, j, c = failures[0]
            raise DecodeError(b.s, user, j, c)
        results.append(BlockResult(b.s, b.users, R, decoded, failures))
    report = SimulationReport(mode=h.mode, kind=kind, seed=seed, L=L, K=p.K, F=p.F,
                              Z=p.Z, S=p.S, blocks=tuple(results))
    if report.all_decoded and report.sum_dof != sum_dof(p):
        log.warning("measured sum-DoF %s differs from K(F-Z)/S = %s",
                    report.sum_dof, sum_dof(p))
    return report


def _fmt_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    x = complex(x)
    return f"{x.real:.17g}{x.imag:+.17g}j"


def format_report(r: SimulationReport) -> str:
    out = [f"mode {r.mode}", f"channel {r.kind}", f"seed {r.seed}",
           f"L {r.L} K {r.K} F {r.F} Z {r.Z} S {r.S}",
           f"served {r.served}", f"sum_dof {_fmt_scalar(r.sum_dof)}",
           f"all_decoded {str(r.all_decoded).lower()}", ""]
    for b in r.blocks:
        out.append(f"block {b.s}")
        out.append(f"  users {' '.join(map(str, b.users))}")
        out.append("  effective")
        R = b.effective
        rows = R.tolist() if isinstance(R, np.ndarray) else R
        for row in rows:
            out.append("    " + " ".join(_fmt_scalar(x) for x in row))
        out.append("  decoded " + " ".join("1" if ok else "0" for ok in b.decoded))
        for user, j, c in b.failures:
            out.append(f"  failure user {user} packet {j} coefficient {_fmt_scalar(c)}")
        out.append("")
    return "\n".join(out)
