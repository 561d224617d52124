"""Extremal families, ladder families and seeded random instances."""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import isqrt
from typing import Sequence

import numpy as np

from .errors import ContractError, InfeasibleError
from .family import SetFamily
from .ladder import Ladder
from .poset import OrderRelation, transitive_closure

SQUARE = "square"
RECT = "rect"
SQUARE_MINUS = "square_minus"
RECT_MINUS = "rect_minus"
VARIANTS = (SQUARE, RECT, SQUARE_MINUS, RECT_MINUS)


@dataclass(frozen=True)
class GridSpec:
    n: int
    variant: str = SQUARE

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ContractError(f"unknown variant {self.variant!r}")
        minimum = 2 if self.variant.endswith("_minus") else 1
        if self.n < minimum:
            raise ContractError(f"{self.variant} grid needs n >= {minimum}")

    @property
    def rows(self) -> int:
        return self.n + 1 if self.variant in (RECT, RECT_MINUS) else self.n

    @property
    def expected_m(self) -> int:
        m = self.rows * self.n
        return m - 1 if self.variant.endswith("_minus") else m


def grid_set(n: int, i: int, j: int) -> range:
    """``X_ij = {x : n + 1 - i <= x <= n + j}``."""
    return range(n + 1 - i, n + j + 1)


def erdos_shelah(spec: GridSpec | int, variant: str = SQUARE) -> SetFamily:
    """Interval grid family on which the union-free bound is tight.

    Members are listed row-major in ``(i, j)``; the minus variants omit
    ``X_11``, which every maximal union-free subfamily contains.
    """
    if isinstance(spec, int):
        spec = GridSpec(spec, variant)
    n = spec.n
    drop_corner = spec.variant.endswith("_minus")
    sets, names = [], []
    for i in range(1, spec.rows + 1):
        for j in range(1, n + 1):
            if drop_corner and (i, j) == (1, 1):
                continue
            sets.append(grid_set(n, i, j))
            names.append(f"X[{i},{j}]")
    return SetFamily.from_sets(sets, names=names)


@dataclass(frozen=True)
class StackSpec:
    a: int
    n: int

    def __post_init__(self):
        if self.a < 2 or self.n < 1:
            raise ContractError("stacked grid needs a >= 2 and n >= 1")

    @property
    def k(self) -> int:
        return isqrt(self.a - 1) + 1

    @property
    def expected_m(self) -> int:
        return self.k * self.n**2


def barat(spec: StackSpec | int, n: int | None = None) -> SetFamily:
    """``ceil(sqrt(a))`` square grids on disjoint universes, each block on top of all earlier ones."""
    if isinstance(spec, int):
        spec = StackSpec(spec, n)
    k, n = spec.k, spec.n
    span = 2 * n
    sets, names = [], []
    for block in range(k):
        offset = block * span
        below = range(offset)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                sets.append([*below, *(x - 1 + offset for x in grid_set(n, i, j))])
                names.append(f"B{block + 1}X[{i},{j}]")
    return SetFamily.from_sets(sets, names=names)


def random_family(
    seed: int, m: int, universe_size: int, density: float = 0.5, mode: str = "bernoulli"
) -> SetFamily:
    """Seeded family of ``m`` distinct sets.

    ``bernoulli`` includes each of the elements ``0..u-1`` independently with
    probability ``density``; ``interval`` draws distinct subintervals of
    ``[1, u]`` and ignores ``density``.
    """
    if m < 0 or universe_size < 0:
        raise ContractError("m and universe_size must be non-negative")
    rng = random.Random(seed)
    if mode == "interval":
        intervals = [(lo, hi) for lo in range(1, universe_size + 1) for hi in range(lo, universe_size + 1)]
        if m > len(intervals):
            raise InfeasibleError(f"only {len(intervals)} intervals of [1, {universe_size}]")
        return SetFamily.from_sets(range(lo, hi + 1) for lo, hi in rng.sample(intervals, m))
    if mode != "bernoulli":
        raise ContractError(f"unknown mode {mode!r}")
    if not 0 < density < 1:
        raise ContractError("density must lie in (0, 1)")
    total = 1 << universe_size
    if m > total:
        raise InfeasibleError(f"cannot draw {m} distinct subsets of a {universe_size}-element universe")
    seen: dict[int, None] = {}
    attempts = 0
    while len(seen) < m and attempts < 50 * m + 1000:
        mask = 0
        for k in range(universe_size):
            if rng.random() < density:
                mask |= 1 << k
        seen.setdefault(mask, None)
        attempts += 1
    if len(seen) < m:
        # rejection stalls near exhaustion: top up uniformly from the unused masks
        unused = [x for x in range(total) if x not in seen]
        for mask in rng.sample(unused, m - len(seen)):
            seen[mask] = None
    sets = [[k for k in range(universe_size) if mask >> k & 1] for mask in seen]
    return SetFamily.from_sets(sets)


def random_ladder(seed: int, ell: int, alpha: int, noise: int = 0) -> tuple[SetFamily, Ladder]:
    """Family containing an ``(ell, alpha)`` ladder, plus ``noise`` extra random sets.

    Chain sets grow by a fresh block of elements per step.  Rung ``j`` sets
    each own a private element of block ``j`` (keeping the rung an antichain
    and outside the previous chain set) plus random earlier elements.
    """
    if ell < 1 or alpha < 0:
        raise ContractError("need ell >= 1 and alpha >= 0")
    rng = random.Random(seed)
    next_element = 0
    chain_sets: list[frozenset[int]] = []
    rung_sets: list[list[frozenset[int]]] = []
    current: frozenset[int] = frozenset()
    for _ in range(ell):
        private = list(range(next_element, next_element + alpha))
        extra = list(range(next_element + alpha, next_element + alpha + rng.randint(1, 2)))
        next_element = extra[-1] + 1
        pool = sorted(current) + extra
        rung = []
        for p in private:
            rung.append(frozenset([p, *(x for x in pool if rng.random() < 0.5)]))
        current = current | frozenset(private) | frozenset(extra)
        chain_sets.append(current)
        rung_sets.append(rung)
    sets = list(chain_sets) + [s for rung in rung_sets for s in rung]
    for _ in range(noise):
        sets.append(frozenset(x for x in range(next_element) if rng.random() < 0.5))
    fam = SetFamily.from_sets(sets)
    index = {frozenset(fam.member_set(i)): i for i in range(fam.m)}
    ladder = Ladder(
        tuple(index[s] for s in chain_sets),
        tuple(tuple(sorted(index[s] for s in rung)) for rung in rung_sets),
    )
    return fam, ladder


def layered_poset(widths: Sequence[int]) -> OrderRelation:
    """Ordinal sum of antichains: every element of level ``j`` dominates all lower levels."""
    level = np.repeat(np.arange(len(widths)), widths)
    return OrderRelation(level[:, None] > level[None, :], check=False)


def random_poset(seed: int, n: int, p: float = 0.1) -> OrderRelation:
    """Transitive closure of a random DAG on ``0..n-1`` (edges only from higher to lower index)."""
    rng = np.random.default_rng(seed)
    d = np.tril(rng.random((n, n)) < p, k=-1)
    return OrderRelation(transitive_closure(d), check=n <= 400)
