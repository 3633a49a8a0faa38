"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary
lines, or through pytest where each criterion is its own test.
"""

import sys
import time
from fractions import Fraction
from math import comb, gcd
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import (  # noqa: E402
    DERIVED_Q,
    EX1,
    GOLDEN_LATIN5,
    GOLDEN_LATIN_MAPDA,
    GOLDEN_P2,
    GOLDEN_U,
    GOLDEN_U0,
    as_grid,
)
from oracles import c1_c2_ok, pairwise_mapda_ok  # noqa: E402

from mapda import (  # noqa: E402
    ArrayError,
    CodedArray,
    MapdaParams,
    audit_lift,
    compare_subpacketization,
    latin_mapda,
    lift_regular_pda,
    mn_mapda,
    mn_pda,
    simulate,
    star_audit,
    validate_mapda,
)

GRID = [(K1, t1, m, L)
        for K1 in range(3, 9) for t1 in range(1, K1)
        for L in range(1, 6) for m in range(1, L + 1)]
EXACT_LIMIT = 16
REL_TOL = 1e-9


def _line(n, title, ok, detail):
    return f"criterion {n} {title}: {'PASS' if ok else 'FAIL'} ({detail})"


def _shorten(items, k=6):
    items = list(items)
    head = ", ".join(map(str, items[:k]))
    return head + (f", ... {len(items) - k} more" if len(items) > k else "")


def _alpha(m, L, g):
    # independent of LiftParams: l = m / gcd(m, L-m), sgn(g) = 1 when L = m
    l = m // gcd(m, L - m)
    sg = 1 if L == m else g
    return (sg + Fraction(L - m, m)) * l


# -- criteria ---------------------------------------------------------------

def criterion_1():
    t0 = time.perf_counter()
    tr = lift_regular_pda(mn_pda(4, 2), 2, 3)
    p = validate_mapda(tr.p, 3)
    dt = time.perf_counter() - t0
    checks = {
        "U": as_grid(tr.u) == GOLDEN_U,
        "U0": as_grid(tr.u0) == GOLDEN_U0,
        "P2": as_grid(tr.p2) == GOLDEN_P2,
        "params": p == MapdaParams(L=3, K=8, F=42, Z=21, S=24, g=7),
        "time": dt < 1.0,
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"7-(3,8,42,21,24) golden arrays, {dt:.3f}s" + (f", failed {bad}" if bad else "")


def criterion_2():
    t0 = time.perf_counter()
    a = CodedArray.from_rows(EX1)
    p = validate_mapda(a, 3)
    r = simulate(a, 3, (1, 2, 3, 4), kind="cauchy", mode="exact")
    dt = time.perf_counter() - t0
    ok = (p == MapdaParams(L=3, K=4, F=4, Z=1, S=3, g=4) and r.all_decoded
          and r.served == 12 and r.sum_dof == 4 and dt < 1.0)
    return ok, f"served {r.served}/12, sum-DoF {r.sum_dof}, {dt:.3f}s"


def criterion_3():
    t0 = time.perf_counter()
    bad = []
    for K in range(1, 13):
        for L in range(1, K + 1):
            a = latin_mapda(K, L)
            p = validate_mapda(a, L)
            r = simulate(a, L, range(1, K + 1))
            if (p.F, p.Z, p.S) != (K, K - L, L) or r.sum_dof != K or not r.all_decoded:
                bad.append((K, L))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10.0
    return ok, f"78 (K,L) pairs, {len(bad)} wrong, {dt:.2f}s"


def _grid_point(K1, t1, m, L):
    """Return None when the lifted array meets every stated property, else a reason."""
    tr = mn_mapda(K1, t1, m, L)
    try:
        p = validate_mapda(tr.p, L)
    except ArrayError as exc:
        return f"invalid: {type(exc).__name__}"
    g = t1 + 1
    if p.g != m * (g - 1) + L:
        return f"regularity {p.g}"
    if Fraction(p.Z, p.F) != Fraction(t1, K1):
        return f"memory ratio {p.Z}/{p.F}"
    if p.F != _alpha(m, L, g) * comb(K1, t1):
        return f"F={p.F}"
    K = m * K1
    if K <= EXACT_LIMIT:
        r = simulate(tr.p, L, range(1, K + 1), mode="exact")
    else:
        r = simulate(tr.p, L, range(1, K + 1), kind="gaussian", mode="float", seed=K)
    if not r.all_decoded or r.sum_dof != m * t1 + L:
        return f"sum-DoF {r.sum_dof}"
    return None


def criterion_4():
    t0 = time.perf_counter()
    bad = {}
    for pt in GRID:
        try:
            why = _grid_point(*pt)
        except Exception as exc:  # a decode or precoder failure is a criterion failure
            why = f"{type(exc).__name__}: {exc}"
        if why:
            bad[pt] = why
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120.0
    detail = f"{len(GRID) - len(bad)}/{len(GRID)} grid points, {dt:.1f}s"
    if bad:
        detail += f"; failing (K1,t1,m,L): {_shorten(bad)}"
    return ok, detail


def _constructed():
    """Every array produced by criteria 1-4, with its antenna count."""
    yield "lift(4,2;2,3)", lift_regular_pda(mn_pda(4, 2), 2, 3).p, 3
    yield "ex1", CodedArray.from_rows(EX1), 3
    for K in range(1, 13):
        for L in range(1, K + 1):
            yield f"latin({K},{L})", latin_mapda(K, L), L
    for K1, t1, m, L in GRID:
        yield f"mn_mapda{(K1, t1, m, L)}", mn_mapda(K1, t1, m, L).p, L


def _relabel(a, rng):
    """Random integer relabelling plus row and column permutations."""
    perm = np.concatenate([[0], rng.permutation(a.max_value) + 1])
    cells = perm[a.cells]
    cells = cells[rng.permutation(a.F)][:, rng.permutation(a.K)]
    return CodedArray(np.ascontiguousarray(cells, dtype=np.int64))


def _audit_ok(a, L, expect_equality):
    au = star_audit(a, L)
    # the bound recomputed from the shape alone
    bound = Fraction(au.K * au.Z, au.F) + L
    dof = Fraction(au.K * (au.F - au.Z), au.S)
    if au.stars_used > au.star_capacity or au.S < au.s_lower_bound or dof > bound:
        return False
    return dof == bound if expect_equality else True


def criterion_5():
    bad = []
    pool = []
    total = 0
    for name, a, L in _constructed():
        total += 1
        try:
            if not _audit_ok(a, L, True):
                bad.append(name)
            else:
                pool.append((a, L))
        except (ArrayError, AssertionError) as exc:
            bad.append(f"{name} [{type(exc).__name__}]")
    rng = np.random.default_rng(20260101)
    rbad = 0
    for i in range(100):
        a, L = pool[int(rng.integers(len(pool)))]
        b = _relabel(a, rng)
        try:
            if not _audit_ok(b, L, True):
                rbad += 1
        except (ArrayError, AssertionError):
            rbad += 1
    ok = not bad and rbad == 0
    detail = f"{total - len(bad)}/{total} constructed, {100 - rbad}/100 relabelled"
    if bad:
        detail += f"; failing: {_shorten(bad, 3)}"
    return ok, detail


def criterion_6():
    bad = []
    points = [pt for pt in GRID if pt[2] < pt[3]]
    for pt in points:
        rep = audit_lift(mn_mapda(*pt), raise_on_failure=False)
        if not rep.passed:
            failed = [name for name, v in (("stmt1", rep.distinct_columns),
                                           ("stmt2", rep.p1_row_stars),
                                           ("stmt3", rep.p2_rows_matched)) if not v]
            bad.append((pt, "+".join(failed)))
    ok = not bad
    detail = f"{len(points) - len(bad)}/{len(points)} m<L points"
    if bad:
        detail += f"; failing: {_shorten(bad, 4)}"
    return ok, detail


def criterion_7():
    a = {r.scheme: r.value for r in compare_subpacketization(100, 7, 5, m=5)}
    b = {r.scheme: r.value for r in compare_subpacketization(8, 3, 4, m=2)}
    got = (a["mb"], a["thm5"], b["nma"], b["sch"], b["thm5"])
    want = (75_287_520, 240, 10080, 210, 42)
    return got == want, f"mb={got[0]} thm5={got[1]}; nma={got[2]} sch={got[3]} thm5={got[4]}"


def _small_fixtures():
    grids = [EX1, DERIVED_Q, GOLDEN_U, GOLDEN_U0, GOLDEN_P2, GOLDEN_LATIN5, GOLDEN_LATIN_MAPDA]
    grids += [as_grid(mn_pda(K, t)) for K in range(2, 6) for t in range(1, K)]
    grids += [as_grid(latin_mapda(K, L)) for K in range(1, 9) for L in range(1, K + 1)]
    grids = [g for g in grids if len(g) * len(g[0]) <= 64]
    out = list(grids)
    # deterministic single-cell mutations give rejecting cases too
    for g in grids:
        vals = sorted({v for row in g for v in row if v != "*"})
        for f in range(len(g)):
            for k in range(len(g[0])):
                if g[f][k] == "*" or len(vals) < 2:
                    continue
                h = [row[:] for row in g]
                h[f][k] = vals[(vals.index(g[f][k]) + 1) % len(vals)]
                out.append(h)
    return out


def _validator_accepts(grid, L):
    try:
        validate_mapda(CodedArray.from_rows(grid), L)
        return True
    except ArrayError:
        return False


def criterion_8():
    fixtures = _small_fixtures()
    disagree = 0
    cases = 0
    accepted = 0
    for g in fixtures:
        for L in range(1, 5):
            cases += 1
            want = c1_c2_ok(g) and pairwise_mapda_ok(g, L)
            got = _validator_accepts(g, L)
            accepted += got
            disagree += want != got
    a = CodedArray.from_rows(EX1)
    ex = simulate(a, 3, (1, 2, 3, 4), mode="exact")
    fl = simulate(a, 3, (1, 2, 3, 4), mode="float")
    worst = 0.0
    for be, bf in zip(ex.blocks, fl.blocks):
        E = np.array([[float(x) for x in row] for row in be.effective])
        F = np.asarray(bf.effective)
        scale = np.maximum(1.0, np.abs(E).max(axis=1, keepdims=True))
        worst = max(worst, float((np.abs(F - E) / scale).max()))
    ok = disagree == 0 and worst <= REL_TOL and 0 < accepted < cases
    return ok, (f"{cases} scanner cases ({accepted} accepted), {disagree} disagreements; "
                f"float vs exact max rel err {worst:.2e}")


CRITERIA = [
    (1, "golden lift fixtures", criterion_1),
    (2, "worked 4-user example", criterion_2),
    (3, "Latin sweep", criterion_3),
    (4, "lifted MN grid", criterion_4),
    (5, "star-counting audit", criterion_5),
    (6, "lift audit", criterion_6),
    (7, "subpacketization table", criterion_7),
    (8, "brute-force and float agreement", criterion_8),
]


@pytest.mark.parametrize("n,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(n, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(n, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    status = 0
    for n, title, fn in CRITERIA:
        ok, detail = fn()
        print(_line(n, title, ok, detail), flush=True)
        status |= not ok
    sys.exit(status)
