"""Strict partial orders as dense boolean matrices, plus level decompositions.

``dominates[x, y]`` is True when ``y`` lies strictly below ``x``.  All
tie-breaks go to the lowest element index.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError
from .family import ANTICHAIN, CHAIN, NEITHER, SetFamily

FROM_MAXIMAL = "from_maximal"
FROM_MINIMAL = "from_minimal"

# orders up to this size are checked exhaustively; larger ones by sampling
FULL_CHECK_LIMIT = 400
_SAMPLED_PAIRS = 256


class OrderRelation:
    def __init__(self, dominates: np.ndarray, check: bool = True):
        d = np.array(dominates, dtype=bool)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ContractError("dominance matrix must be square")
        d.flags.writeable = False
        self.dominates = d
        self.n = d.shape[0]
        self.out_degree = d.sum(axis=1)
        self.in_degree = d.sum(axis=0)
        if check:
            self._check()

    @classmethod
    def from_matrix(cls, matrix) -> "OrderRelation":
        return cls(matrix, check=True)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "OrderRelation":
        """Transitive closure of ``(upper, lower)`` cover pairs."""
        d = np.zeros((n, n), dtype=bool)
        for hi, lo in pairs:
            d[hi, lo] = True
        return cls(transitive_closure(d), check=True)

    def _check(self):
        d = self.dominates
        if d.diagonal().any():
            raise ContractError("order is not irreflexive")
        if (d & d.T).any():
            raise ContractError("order is not antisymmetric")
        if self.n <= FULL_CHECK_LIMIT:
            two_step = (d.astype(np.int32) @ d.astype(np.int32)) > 0
            if (two_step & ~d).any():
                raise ContractError("order is not transitive")
            return
        rng = np.random.default_rng(0)
        xs, ys = np.nonzero(d)
        if len(xs) == 0:
            return
        for k in rng.choice(len(xs), size=min(_SAMPLED_PAIRS, len(xs)), replace=False):
            x, y = xs[k], ys[k]
            if (d[y] & ~d[x]).any():
                raise ContractError("order is not transitive")

    def below(self, x: int, y: int) -> bool:
        """True when ``x`` lies strictly below ``y``."""
        return bool(self.dominates[y, x])

    def comparable(self, x: int, y: int) -> bool:
        return bool(self.dominates[x, y] or self.dominates[y, x])

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"OrderRelation(n={self.n}, relations={int(self.out_degree.sum())})"


def transitive_closure(d: np.ndarray) -> np.ndarray:
    closure = np.array(d, dtype=bool)
    while True:
        step = closure | ((closure.astype(np.int32) @ closure.astype(np.int32)) > 0)
        if (step == closure).all():
            return closure
        closure = step


def _member_words(fam: SetFamily) -> np.ndarray:
    nwords = max(1, -(-fam.universe_size // 64))
    words = np.zeros((fam.m, nwords), dtype=np.uint64)
    low = (1 << 64) - 1
    for i, mask in enumerate(fam.members):
        for w in range(nwords):
            words[i, w] = (mask >> (64 * w)) & low
    return words


def build_inclusion_order(fam: SetFamily) -> OrderRelation:
    """Strict inclusion order on the members of ``fam``."""
    words = _member_words(fam)
    d = np.zeros((fam.m, fam.m), dtype=bool)
    for x in range(fam.m):
        # rows y with words[y] contained in words[x]
        d[x] = np.all((words & words[x]) == words, axis=1)
    np.fill_diagonal(d, False)
    return OrderRelation(d, check=False)


@dataclass(frozen=True)
class LevelDecomposition:
    direction: str
    levels: tuple[tuple[int, ...], ...]
    rank: tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.levels)

    def level(self, i: int) -> tuple[int, ...]:
        """Elements of level ``i`` (1-based)."""
        return self.levels[i - 1]


def decompose_levels(order: OrderRelation, direction: str = FROM_MAXIMAL) -> LevelDecomposition:
    """Peel maximal (or minimal) elements repeatedly into antichain levels."""
    if direction not in (FROM_MAXIMAL, FROM_MINIMAL):
        raise ContractError(f"unknown direction {direction!r}")
    d = order.dominates
    if direction == FROM_MINIMAL:
        count = order.out_degree.astype(np.int64)
    else:
        count = order.in_degree.astype(np.int64)
    remaining = np.ones(order.n, dtype=bool)
    peeled = []
    while remaining.any():
        layer = np.flatnonzero(remaining & (count == 0))
        remaining[layer] = False
        peeled.append(tuple(int(v) for v in layer))
        if direction == FROM_MINIMAL:
            count -= d[:, layer].sum(axis=1)
        else:
            count -= d[layer, :].sum(axis=0)
    if direction == FROM_MAXIMAL:
        peeled.reverse()
    rank = [0] * order.n
    for i, layer in enumerate(peeled, start=1):
        for v in layer:
            rank[v] = i
    return LevelDecomposition(direction, tuple(peeled), tuple(rank))


def _lowest_in(candidates: Sequence[int], mask_row: np.ndarray) -> int | None:
    for v in candidates:
        if mask_row[v]:
            return v
    return None


def ascending_chain_through_levels(
    lv: LevelDecomposition, order: OrderRelation, start: int, lo: int, hi: int
) -> list[int]:
    """Walk successors upward from ``start``; return the elements at levels lo..hi."""
    if lv.direction != FROM_MAXIMAL:
        raise ContractError("ascending walk needs a from_maximal decomposition")
    if not 1 <= lv.rank[start] <= lo <= hi <= lv.t:
        raise ContractError(
            f"need rank(start)={lv.rank[start]} <= lo={lo} <= hi={hi} <= t={lv.t}"
        )
    column = order.dominates[:, start]
    current, chain = start, []
    for level in range(lv.rank[start], hi + 1):
        if level > lv.rank[start]:
            nxt = _lowest_in(lv.level(level), order.dominates[:, current])
            if nxt is None:
                raise AssertionError(f"successor property fails at element {current}")
            current = nxt
        if level >= lo:
            chain.append(current)
    assert column[chain[0]] or chain[0] == start
    return chain


def longest_chain(order: OrderRelation, lv: LevelDecomposition) -> list[int]:
    """A chain hitting every level once, listed bottom to top."""
    if lv.t == 0:
        return []
    if lv.direction == FROM_MAXIMAL:
        return ascending_chain_through_levels(lv, order, lv.level(1)[0], 1, lv.t)
    current = lv.level(lv.t)[0]
    chain = [current]
    for level in range(lv.t - 1, 0, -1):
        nxt = _lowest_in(lv.level(level), order.dominates[current])
        if nxt is None:
            raise AssertionError(f"predecessor walk fails at element {current}")
        chain.append(nxt)
        current = nxt
    chain.reverse()
    return chain


def restrict_to(order: OrderRelation, keep: Iterable[int]) -> tuple[OrderRelation, tuple[int, ...]]:
    """Induced suborder on ``keep``; the tuple maps new indices to old ones."""
    remap = tuple(sorted(set(int(k) for k in keep)))
    idx = np.array(remap, dtype=np.intp)
    return OrderRelation(order.dominates[np.ix_(idx, idx)], check=False), remap


def largest_level(lv: LevelDecomposition) -> tuple[int, ...]:
    best: tuple[int, ...] = ()
    for layer in lv.levels:
        if len(layer) > len(best):
            best = layer
    return best


def classify(order: OrderRelation, elements: Iterable[int]) -> str:
    els = sorted(set(elements))
    if len(els) <= 1:
        return CHAIN
    sub = order.dominates[np.ix_(els, els)]
    related = sub | sub.T
    off = ~np.eye(len(els), dtype=bool)
    if related[off].all():
        return CHAIN
    if not related.any():
        return ANTICHAIN
    return NEITHER


def is_degenerate(order: OrderRelation, elements: Iterable[int], a: int) -> bool:
    """No element strictly dominates ``a`` or more of the other elements."""
    els = sorted(set(elements))
    if len(els) <= a:
        return True
    sub = order.dominates[np.ix_(els, els)]
    return bool((sub.sum(axis=1) < a).all())


def pairwise_chain(order: OrderRelation, chain: Sequence[int]) -> bool:
    """True when ``chain`` is listed strictly increasing."""
    return all(order.below(p, q) for p, q in zip(chain, chain[1:]))


def antichain_ok(order: OrderRelation, elements: Sequence[int]) -> bool:
    return all(not order.comparable(p, q) for p, q in combinations(elements, 2))
