"""a-union-free extraction on arbitrary posets via degenerate sets and ladders.

The target for ``m >= a`` elements is ``max(a, a**0.25 * sqrt(m) / 3)``.
Every threshold is compared with integer arithmetic on fourth powers, so
``s >= a**0.25 * sqrt(m) / 3`` is evaluated as ``81 * s**4 >= a * m**2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import isqrt, sqrt

import numpy as np

from .errors import RegimeError
from .family import DEFAULT_PREDICATE_LIMIT, SetFamily, is_a_union_free
from .poset import (
    FROM_MINIMAL,
    LevelDecomposition,
    OrderRelation,
    antichain_ok,
    build_inclusion_order,
    classify,
    decompose_levels,
    is_degenerate,
    largest_level,
    longest_chain,
    pairwise_chain,
    restrict_to,
)

WHOLE_FAMILY = "whole_family"
ANY_A_ELEMENTS = "any_a_elements"
CHAIN = "chain"
ANTICHAIN = "antichain"
DEGENERATE = "degenerate"
LADDER = "ladder"
KINDS = (WHOLE_FAMILY, ANY_A_ELEMENTS, CHAIN, ANTICHAIN, DEGENERATE, LADDER)

MAIN_LOOP_MIN_A = 82


def reaches_target(s: int, a: int, m: int) -> bool:
    """``s >= a**0.25 * sqrt(m) / 3`` in exact arithmetic."""
    return 81 * s**4 >= a * m * m


def meets_target(s: int, a: int, m: int) -> bool:
    return s >= a and reaches_target(s, a, m)


def height_reaches(h: int, i: int, a: int, m: int) -> bool:
    """``h >= h_i`` where ``h_i = 4**-i * a**0.25 * sqrt(m) / 3``."""
    return reaches_target(4**i * h, a, m)


def min_target_size(a: int, m: int) -> int:
    """Smallest ``s`` with ``meets_target(s, a, m)``; ``m`` itself when ``m < a``."""
    if m < a:
        return m
    s = max(a, isqrt(isqrt(a * m * m // 81)))
    while s > a and reaches_target(s - 1, a, m):
        s -= 1
    while not reaches_target(s, a, m):
        s += 1
    return s


@dataclass(frozen=True)
class RefinementSchedule:
    a: int
    m: int
    T: int
    x: tuple[int, ...]

    @property
    def beta(self) -> float:
        return 9 * 2**self.T / sqrt(self.a)


def compute_schedule(a: int, m: int) -> RefinementSchedule:
    """T is the integer with sqrt(a)/4 <= 2**T < sqrt(a)/2, i.e. 4*4**T < a <= 16*4**T."""
    if a < MAIN_LOOP_MIN_A:
        raise RegimeError(f"the refinement loop needs a > 81, got a={a}")
    T = 0
    while 16 * 4**T < a:
        T += 1
    assert 4 * 4**T < a <= 16 * 4**T
    return RefinementSchedule(a, m, T, tuple(2 ** (T - i) for i in range(T + 1)))


@dataclass(frozen=True)
class Ladder:
    """Chain ``X_1 < ... < X_l`` with one antichain rung of ``alpha`` elements per chain element."""

    chain: tuple[int, ...]
    rungs: tuple[tuple[int, ...], ...]

    @property
    def ell(self) -> int:
        return len(self.chain)

    @property
    def alpha(self) -> int:
        return len(self.rungs[0]) if self.rungs else 0

    @property
    def size(self) -> int:
        return self.ell * max(self.alpha, 1)

    def flattened(self) -> tuple[int, ...]:
        """Elements of the a-union-free subfamily the ladder guarantees."""
        if self.alpha <= 1:
            return tuple(sorted(self.chain))
        return tuple(sorted(y for rung in self.rungs for y in rung))


def ladder_is_valid(ladder: Ladder, order: OrderRelation) -> bool:
    if len(ladder.rungs) != ladder.ell:
        return False
    if not pairwise_chain(order, ladder.chain):
        return False
    alpha = ladder.alpha
    for j, (x, rung) in enumerate(zip(ladder.chain, ladder.rungs)):
        if len(rung) != alpha or len(set(rung)) != alpha or not antichain_ok(order, rung):
            return False
        for y in rung:
            if not (y == x or order.below(y, x)):
                return False
            if j > 0:
                prev = ladder.chain[j - 1]
                if y == prev or order.below(y, prev):
                    return False
    return True


@dataclass(frozen=True)
class StepRecord:
    i: int
    active: int
    levels: int
    blocks: int
    bad: int
    nice: int
    max_block_bad: int
    next_height: int | None = None


@dataclass(frozen=True)
class Certificate:
    kind: str
    elements: tuple[int, ...]
    claimed_size: int
    m: int
    a: int
    exit: str = ""
    ladder: Ladder | None = None
    steps: tuple[StepRecord, ...] = field(default=())

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "exit": self.exit,
            "m": self.m,
            "a": self.a,
            "size": self.claimed_size,
            "target": min_target_size(self.a, self.m),
            "elements": list(self.elements),
        }
        if self.ladder is not None:
            out["ladder"] = {
                "chain": list(self.ladder.chain),
                "rungs": [list(r) for r in self.ladder.rungs],
                "ell": self.ladder.ell,
                "alpha": self.ladder.alpha,
            }
        if self.steps:
            out["steps"] = [vars(s) for s in self.steps]
        return out


@dataclass
class RefinementState:
    """Active elements ``P_i`` (indices into the full order) at step ``i``."""

    i: int
    active: tuple[int, ...]
    order: OrderRelation = field(repr=False, compare=False)
    history: tuple[StepRecord, ...] = ()

    @cached_property
    def sub(self) -> tuple[OrderRelation, tuple[int, ...]]:
        return restrict_to(self.order, self.active)

    @cached_property
    def levels(self) -> LevelDecomposition:
        return decompose_levels(self.sub[0], FROM_MINIMAL)

    def blocks(self, width: int) -> list[list[int]]:
        """Sub-indices grouped into runs of ``width`` consecutive levels (last may be short)."""
        lv = self.levels
        return [
            [v for layer in lv.levels[k : k + width] for v in layer]
            for k in range(0, lv.t, width)
        ]


def _exit(kind, elements, m, a, exit_name, steps=(), ladder=None) -> Certificate:
    elements = tuple(sorted(int(e) for e in elements))
    size = ladder.size if ladder is not None else len(elements)
    return Certificate(kind, elements, size, m, a, exit_name, ladder, tuple(steps))


def refine_step(state: RefinementState, sched: RefinementSchedule, order: OrderRelation):
    """One nice/bad refinement.  Returns the next state or an early-exit certificate."""
    a, m, i = sched.a, sched.m, state.i
    if not 0 <= i <= sched.T - 1:
        raise RegimeError(f"step {i} outside 0..{sched.T - 1}")
    width = sched.x[i]
    sub, remap = state.sub
    d = sub.dominates
    bad_blocks, nice = [], []
    for block in state.blocks(width):
        idx = np.array(block, dtype=np.intp)
        counts = d[np.ix_(idx, idx)].sum(axis=1)
        bad_blocks.append([remap[v] for v, c in zip(block, counts) if c < a])
        nice.extend(remap[v] for v, c in zip(block, counts) if c >= a)
    total_bad = sum(len(b) for b in bad_blocks)
    assert len(nice) + total_bad == len(state.active), "conservation audit failed"
    record = StepRecord(
        i, len(state.active), state.levels.t, len(bad_blocks), total_bad, len(nice),
        max((len(b) for b in bad_blocks), default=0),
    )
    for bad in bad_blocks:
        if reaches_target(len(bad), a, m):
            return _exit(DEGENERATE, bad, m, a, DEGENERATE, state.history + (record,))

    assert len(nice) * 2 ** (i + 1) >= m, "bad elements exceeded half of the active set"
    nxt = RefinementState(i + 1, tuple(sorted(nice)), order)
    height = nxt.levels.t
    record = StepRecord(**{**vars(record), "next_height": height})
    nxt.history = state.history + (record,)
    if height_reaches(height, i + 1, a, m):
        sub_next, remap_next = nxt.sub
        chain = [remap_next[v] for v in longest_chain(sub_next, nxt.levels)]
        ladder = assemble_ladder(chain, state, sched, order)
        return _exit(LADDER, ladder.flattened(), m, a, LADDER, nxt.history, ladder)
    return nxt


def assemble_ladder(
    chain: list[int], state: RefinementState, sched: RefinementSchedule, order: OrderRelation
) -> Ladder:
    """Build a ladder from a chain of nice elements of ``state``'s active set."""
    a, i = sched.a, state.i
    width = sched.x[i]
    alpha = -(-a // width)
    assert alpha >= 2 or a <= 81, "rungs must hold at least two elements"
    sub, remap = state.sub
    local = {old: new for new, old in enumerate(remap)}
    rank = state.levels.rank
    d = sub.dominates

    picked, seen_blocks = [], set()
    for x in chain:
        block = (rank[local[x]] - 1) // width
        if block not in seen_blocks:
            seen_blocks.add(block)
            picked.append((x, block))

    levels = state.levels.levels
    rungs = []
    for x, block in picked:
        lx = local[x]
        rung = None
        for layer in levels[block * width : (block + 1) * width]:
            under = [v for v in layer if d[lx, v]]
            if len(under) >= alpha:
                rung = tuple(remap[v] for v in under[:alpha])
                break
        assert rung is not None, f"pigeonhole failed for chain element {x}"
        rungs.append(rung)
    ladder = Ladder(tuple(x for x, _ in picked), tuple(rungs))
    assert meets_target(ladder.size, a, sched.m), "ladder below target"
    return ladder


def extract_a_union_free(order: OrderRelation, a: int) -> Certificate:
    """Certificate for a subset that is a-degenerate or forms a ladder, meeting the target."""
    if a < 2:
        raise RegimeError("a must be at least 2")
    m = order.n
    if m <= a:
        return _exit(WHOLE_FAMILY, range(m), m, a, WHOLE_FAMILY)
    if m * m <= 81 * a**3:
        cert = _exit(ANY_A_ELEMENTS, range(a), m, a, ANY_A_ELEMENTS)
        assert meets_target(cert.claimed_size, a, m)
        return cert

    lv = decompose_levels(order, FROM_MINIMAL)
    if a < MAIN_LOOP_MIN_A:
        if lv.t**2 >= m:
            cert = _exit(CHAIN, longest_chain(order, lv), m, a, "tall_chain")
        else:
            cert = _exit(ANTICHAIN, largest_level(lv), m, a, "wide_level")
        assert meets_target(cert.claimed_size, a, m), "chain-or-antichain guard below target"
        return cert

    if height_reaches(lv.t, 0, a, m):
        cert = _exit(CHAIN, longest_chain(order, lv), m, a, "tall_chain")
        assert meets_target(cert.claimed_size, a, m)
        return cert

    sched = compute_schedule(a, m)
    state = RefinementState(0, tuple(range(m)), order)
    for _ in range(sched.T):
        result = refine_step(state, sched, order)
        if isinstance(result, Certificate):
            assert meets_target(result.claimed_size, a, m), f"{result.kind} exit below target"
            return result
        state = result
    sub, remap = state.sub
    wide = [remap[v] for v in largest_level(state.levels)]
    cert = _exit(ANTICHAIN, wide, m, a, "final_antichain", state.history)
    assert meets_target(cert.claimed_size, a, m), "final antichain below target"
    return cert


def extract_from_family(fam: SetFamily, a: int) -> tuple[Certificate, OrderRelation]:
    order = build_inclusion_order(fam)
    return extract_a_union_free(order, a), order


def validate_certificate(
    cert: Certificate,
    order: OrderRelation,
    a: int,
    fam: SetFamily | None = None,
    limit: int = DEFAULT_PREDICATE_LIMIT,
) -> bool:
    """Mechanically check a certificate; with a small family also run the exact predicate."""
    els = cert.elements
    if len(set(els)) != len(els) or any(not 0 <= e < order.n for e in els):
        return False
    if cert.kind not in KINDS:
        return False
    if cert.kind == LADDER:
        if cert.ladder is None or not ladder_is_valid(cert.ladder, order):
            return False
        if cert.claimed_size != cert.ladder.size or els != cert.ladder.flattened():
            return False
    else:
        if cert.claimed_size != len(els):
            return False
        if cert.kind == WHOLE_FAMILY and els != tuple(range(order.n)):
            return False
        if cert.kind == ANY_A_ELEMENTS and (len(els) != min(a, order.n) or not is_degenerate(order, els, a)):
            return False
        if cert.kind == CHAIN and classify(order, els) != CHAIN:
            return False
        if cert.kind == ANTICHAIN and len(els) > 1 and classify(order, els) != ANTICHAIN:
            return False
        if cert.kind == DEGENERATE and not is_degenerate(order, els, a):
            return False
    if fam is not None and len(els) <= limit:
        if fam.m != order.n:
            return False
        return is_a_union_free(fam, els, a, limit=limit)
    return True
