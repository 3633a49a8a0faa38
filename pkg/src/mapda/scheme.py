"""Placement and delivery planning from a (MA)PDA.

Column k of the array is user k, row f is packet f of every file. A star at
(f, k) means user k caches packet f of all N files; integer s at (f, k)
means block s carries packet f of the file user k asked for.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .array import CodedArray


class PlanError(ValueError):
    pass


class PacketId(NamedTuple):
    n: int  # file, 1..N
    f: int  # packet, 1..F


@dataclass(frozen=True)
class CacheState:
    user: int
    packets: frozenset

    def __contains__(self, packet):
        return packet in self.packets


@dataclass(frozen=True)
class BlockPlan:
    s: int
    users: tuple
    packet_rows: tuple
    interference_sets: tuple
    packets: tuple

    @property
    def r(self) -> int:
        return len(self.users)

    def structure(self):
        """Demand-independent part of the block."""
        return (self.s, self.users, self.packet_rows, self.interference_sets)


@dataclass(frozen=True)
class DeliveryPlan:
    demands: tuple
    F: int
    blocks: tuple

    @property
    def served(self) -> int:
        return sum(b.r for b in self.blocks)

    def to_text(self) -> str:
        return format_plan(self)


def place(a: CodedArray, N: int) -> list[CacheState]:
    """Cache contents of every user: all packets whose row is starred in the
    user's column, for every file."""
    if N < 1:
        raise ValueError(f"need at least one file, got N={N}")
    out = []
    for k in range(a.K):
        rows = [f + 1 for f in range(a.F) if a.cells[f, k] == 0]
        out.append(CacheState(k + 1, frozenset(PacketId(n, f)
                                               for n in range(1, N + 1) for f in rows)))
    return out


def plan_delivery(a: CodedArray, d: Sequence[int], N: Optional[int] = None) -> DeliveryPlan:
    """One block per integer s with its users in ascending order.

    For the i-th served user the interference set holds the served users
    whose entry in that user's packet row is an integer, i.e. the users that
    do not have the packet cached.
    """
    d = tuple(int(x) for x in d)
    if len(d) != a.K:
        raise PlanError(f"demand vector has {len(d)} entries, expected K={a.K}")
    for k, dk in enumerate(d, 1):
        if dk < 1 or (N is not None and dk > N):
            bound = "" if N is None else f"..{N}"
            raise PlanError(f"demand d_{k}={dk} outside 1{bound}")
    cells = a.cells
    blocks = []
    for s in range(1, a.max_value + 1):
        occ = sorted((k, f) for f, k in a.occurrences(s))
        users = tuple(k for k, _ in occ)
        if len(set(users)) != len(users):
            raise PlanError(f"integer {s} appears twice in one column")
        rows = tuple(f for _, f in occ)
        sets = tuple(
            tuple(u for u in users if cells[f - 1, u - 1] != 0)
            for f in rows
        )
        packets = tuple(PacketId(d[k - 1], f) for k, f in occ)
        blocks.append(BlockPlan(s, users, rows, sets, packets))
    return DeliveryPlan(demands=d, F=a.F, blocks=tuple(blocks))


@dataclass(frozen=True)
class PlanReport:
    served: int
    expected: int
    blocks: int
    max_interference: int


def verify_plan(p: DeliveryPlan, caches: Sequence[CacheState],
                L: Optional[int] = None) -> PlanReport:
    """Check block invariants and that every demanded, uncached packet is
    delivered exactly once. Raises PlanError on the first violation."""
    K = len(p.demands)
    if len(caches) != K:
        raise PlanError(f"{len(caches)} caches for {K} users")
    cache = {c.user: c for c in caches}
    delivered = {}
    widest = 0
    for b in p.blocks:
        if len(set(b.users)) != len(b.users):
            raise PlanError(f"block {b.s}: repeated user in {b.users}")
        if list(b.users) != sorted(b.users):
            raise PlanError(f"block {b.s}: users not ascending {b.users}")
        for user, f, iset, pkt in zip(b.users, b.packet_rows, b.interference_sets, b.packets):
            if pkt != PacketId(p.demands[user - 1], f):
                raise PlanError(f"block {b.s}: user {user} sent {pkt}, "
                                f"wants file {p.demands[user - 1]}")
            if user not in iset:
                raise PlanError(f"block {b.s}: user {user} missing from own interference set")
            if L is not None and len(iset) > L:
                raise PlanError(f"block {b.s}: user {user} interference set "
                                f"{iset} larger than L={L}")
            widest = max(widest, len(iset))
            for other in iset:
                if pkt in cache[other]:
                    raise PlanError(f"block {b.s}: user {other} in interference set "
                                    f"of user {user} but caches {pkt}")
            for other in b.users:
                if other not in iset and pkt not in cache[other]:
                    raise PlanError(f"block {b.s}: user {other} lacks {pkt} but is "
                                    f"outside the interference set of user {user}")
            key = (user, f)
            if key in delivered:
                raise PlanError(f"user {user} packet row {f} delivered in blocks "
                                f"{delivered[key]} and {b.s}")
            delivered[key] = b.s
    expected = 0
    for k in range(1, K + 1):
        for f in range(1, p.F + 1):
            pkt = PacketId(p.demands[k - 1], f)
            if pkt in cache[k]:
                if (k, f) in delivered:
                    raise PlanError(f"user {k} is sent cached packet {pkt}")
                continue
            expected += 1
            if (k, f) not in delivered:
                raise PlanError(f"coverage: user {k} never receives {pkt}")
    return PlanReport(served=len(delivered), expected=expected,
                      blocks=len(p.blocks), max_interference=widest)


def format_plan(p: DeliveryPlan) -> str:
    """Plain-text plan, one stanza per block."""
    out = [f"demands {' '.join(map(str, p.demands))}", f"packets_per_file {p.F}",
           f"blocks {len(p.blocks)}", ""]
    for b in p.blocks:
        out.append(f"block {b.s}")
        out.append(f"  users {' '.join(map(str, b.users))}")
        out.append(f"  rows {' '.join(map(str, b.packet_rows))}")
        out.append("  packets " + " ".join(f"W{pk.n},{pk.f}" for pk in b.packets))
        for user, iset in zip(b.users, b.interference_sets):
            out.append(f"  interference {user}: {' '.join(map(str, iset))}")
        out.append("")
    return "\n".join(out)
