"""Exact maximum union-free / a-union-free subfamilies by branch and bound.

Only meant for desk-scale families; the member caps can be raised through the
``UNIONFREE_ORACLE_LIMIT`` environment variable.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass

from .errors import CapabilityError, ContractError
from .family import SetFamily, expressible_as_union, is_subset, popcount

DEFAULT_UNION_LIMIT = 22
DEFAULT_A_UNION_LIMIT = 18
DEFAULT_TIME_LIMIT = 60.0
ENV_LIMIT = "UNIONFREE_ORACLE_LIMIT"

__all__ = [
    "OracleLimits",
    "OracleResult",
    "expressible_as_union",
    "max_a_union_free_exact",
    "max_union_free_exact",
]


@dataclass(frozen=True)
class OracleLimits:
    max_members: int | None = None
    time_limit: float = DEFAULT_TIME_LIMIT

    def cap(self, default: int) -> int:
        if self.max_members is not None:
            return self.max_members
        env = os.environ.get(ENV_LIMIT)
        return int(env) if env else default


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: tuple[int, ...]
    nodes_explored: int
    time_limit_hit: bool = False

    def to_dict(self) -> dict:
        return {
            "optimum": self.optimum,
            "witness": list(self.witness),
            "nodes_explored": self.nodes_explored,
            "partial": self.time_limit_hit,
        }


class _Timeout(Exception):
    pass


def _branch_order(fam: SetFamily) -> list[int]:
    # larger sets first: they are the most constrained union targets
    return sorted(range(fam.m), key=lambda i: (-popcount(fam.members[i]), i))


class _Search:
    """Include/exclude search with best-so-far pruning.

    ``conflicts(v, chosen)`` says whether adding ``v`` to the chosen bitmask
    creates a forbidden configuration.
    """

    def __init__(self, order, conflicts, time_limit):
        self.order = order
        self.conflicts = conflicts
        self.deadline = time.monotonic() + time_limit
        self.best = 0
        self.best_mask = 0
        self.nodes = 0

    def run(self, forced: int = 0) -> None:
        self.best, self.best_mask = popcount(forced), forced
        self._visit(0, forced, popcount(forced))

    def _visit(self, pos: int, chosen: int, size: int) -> None:
        self.nodes += 1
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _Timeout
        if size > self.best:
            self.best, self.best_mask = size, chosen
        if size + len(self.order) - pos <= self.best:
            return
        if pos == len(self.order):
            return
        v = self.order[pos]
        if not self.conflicts(v, chosen):
            self._visit(pos + 1, chosen | 1 << v, size + 1)
        self._visit(pos + 1, chosen, size)


def _finish(search: _Search, timed_out: bool) -> OracleResult:
    witness = tuple(i for i in range(search.best_mask.bit_length()) if search.best_mask >> i & 1)
    return OracleResult(search.best, witness, search.nodes, timed_out)


def max_union_free_exact(fam: SetFamily, limits: OracleLimits | None = None) -> OracleResult:
    limits = limits or OracleLimits()
    cap = limits.cap(DEFAULT_UNION_LIMIT)
    if fam.m > cap:
        raise CapabilityError(f"union-free oracle limited to {cap} sets, got {fam.m}")
    # for each member, bitmasks of the partner pairs that complete a triple with it
    partners: list[list[int]] = [[] for _ in range(fam.m)]
    for x in range(fam.m):
        for y in range(x + 1, fam.m):
            z = fam.content_index.get(fam.members[x] | fam.members[y])
            if z is None or z == x or z == y:
                continue
            partners[x].append(1 << y | 1 << z)
            partners[y].append(1 << x | 1 << z)
            partners[z].append(1 << x | 1 << y)
    free = 0
    for v in range(fam.m):
        if not partners[v]:
            free |= 1 << v

    def conflicts(v: int, chosen: int) -> bool:
        return any(chosen & pm == pm for pm in partners[v])

    order = [v for v in _branch_order(fam) if partners[v]]
    search = _Search(order, conflicts, limits.time_limit)
    try:
        search.run(forced=free)
    except _Timeout:
        return _finish(search, True)
    return _finish(search, False)


def max_a_union_free_exact(fam: SetFamily, a: int, limits: OracleLimits | None = None) -> OracleResult:
    if a < 2:
        raise ContractError("a must be at least 2")
    if a >= fam.m:
        return OracleResult(fam.m, tuple(range(fam.m)), 0)
    limits = limits or OracleLimits()
    cap = limits.cap(DEFAULT_A_UNION_LIMIT)
    if fam.m > cap:
        raise CapabilityError(f"a-union-free oracle limited to {cap} sets, got {fam.m}")
    members = fam.members
    subsets = [
        [y for y in range(fam.m) if y != z and is_subset(members[y], members[z])] for z in range(fam.m)
    ]
    supersets = [[z for z in range(fam.m) if v in subsets[z]] for v in range(fam.m)]
    # a member with fewer than a proper subsets and no superset never takes part
    free = 0
    for v in range(fam.m):
        if len(subsets[v]) < a and not supersets[v]:
            free |= 1 << v

    def conflicts(v: int, chosen: int) -> bool:
        chosen |= 1 << v
        sel = [i for i in range(fam.m) if chosen >> i & 1]
        if expressible_as_union(fam, sel, v, a):
            return True
        return any(chosen >> z & 1 and expressible_as_union(fam, sel, z, a) for z in supersets[v])

    order = [v for v in _branch_order(fam) if not free >> v & 1]
    search = _Search(order, conflicts, limits.time_limit)
    try:
        search.run(forced=free)
    except _Timeout:
        return _finish(search, True)
    return _finish(search, False)
