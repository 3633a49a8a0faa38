"""Subpacketization of the known schemes reaching sum-DoF t + L."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd
from typing import Optional, Union

from .constructions import LiftParams

SCHEMES = ("nma", "sch", "ep", "spset", "mb", "thm5")


@dataclass(frozen=True)
class ComparisonRow:
    scheme: str
    applicable: bool
    value: Optional[Union[int, Fraction]] = None
    reason: str = ""

    def __str__(self):
        if not self.applicable:
            return f"{self.scheme} = n/a ({self.reason})"
        return f"{self.scheme} = {self.value}"


def _na(scheme, reason):
    return ComparisonRow(scheme, False, None, reason)


def compare_subpacketization(K: int, L: int, t: int, m: Optional[int] = None) -> list[ComparisonRow]:
    """Evaluate every scheme's subpacketization at memory ratio t/K.

    Rows whose limitation does not hold are marked inapplicable. ``thm5``
    needs ``m`` with m <= L, m | K, m | t and t/m < K/m. A non-integral spset
    value is kept as a Fraction and a warning is issued.
    """
    if K < 1 or L < 1:
        raise ValueError(f"need K, L >= 1, got K={K}, L={L}")
    if not 1 <= t <= K:
        raise ValueError(f"t must lie in 1..K={K}, got {t}")
    rows = []

    if t + L <= K:
        rows.append(ComparisonRow("nma", True, comb(K, t) * factorial(t)
                                  * factorial(K - t - 1) // factorial(K - t - L)))
        rows.append(ComparisonRow("sch", True, comb(K, t) * comb(K - t - 1, L - 1)))
    else:
        rows.append(_na("nma", "needs t + L <= K"))
        rows.append(_na("sch", "needs t + L <= K"))

    if K % L == 0 and t % L == 0:
        rows.append(ComparisonRow("ep", True, comb(K // L, t // L)))
    else:
        rows.append(_na("ep", "needs K/L and t/L integral"))

    if t <= L:
        g = gcd(gcd(K, t), L)
        v = Fraction(K * (t + L), g * g)
        if v.denominator != 1:
            warnings.warn(f"spset subpacketization {v} is not an integer", stacklevel=2)
        rows.append(ComparisonRow("spset", True, int(v) if v.denominator == 1 else v))
    else:
        rows.append(_na("spset", "needs t <= L"))

    if (t + L) % (t + 1) == 0:
        rows.append(ComparisonRow("mb", True, comb(K, t)))
    else:
        rows.append(_na("mb", "needs (t+L)/(t+1) integral"))

    if m is None:
        rows.append(_na("thm5", "no m given"))
    elif not 1 <= m <= L or K % m or t % m or t // m >= K // m:
        rows.append(_na("thm5", "needs m <= L, m | K, m | t, t < K"))
    else:
        K1, t1 = K // m, t // m
        p = LiftParams(m=m, L=L, g=t1 + 1, K1=K1, F1=comb(K1, t1),
                       Z1=comb(K1 - 1, t1 - 1), S1=comb(K1, t1 + 1))
        rows.append(ComparisonRow("thm5", True, p.alpha * p.F1))
    return rows


def sweep_csv(K: int, L: int, m: Optional[int] = None) -> str:
    """CSV of applicable rows for t = 1..K, header ``t,scheme,subpacketization``."""
    lines = ["t,scheme,subpacketization"]
    for t in range(1, K + 1):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rows = compare_subpacketization(K, L, t, m)
        for row in rows:
            if row.applicable:
                lines.append(f"{t},{row.scheme},{row.value}")
    return "\n".join(lines) + "\n"
