"""Union-free subfamily extraction with the sqrt(4m+1) - 1 guarantee.

Levels are peeled from the top.  Every incomparable pair of members whose
union is again a member yields a witness interval ``[s, r]`` on level
indices; level ``i`` is adjacent to ``i' > i`` when some witness has
``s <= i`` and ``r >= i'``.  Levels are greedily split into classes whose
consecutive members are non-adjacent, one candidate subfamily is built per
class, and the largest candidate is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .family import SetFamily, is_union_free
from .poset import (
    FROM_MAXIMAL,
    LevelDecomposition,
    OrderRelation,
    ascending_chain_through_levels,
    build_inclusion_order,
    decompose_levels,
)

# candidates larger than this skip the defensive quadratic union-free check
CHECK_LIMIT = 1500


def moser_bound(m: int) -> int:
    """Guaranteed union-free subfamily size for any family of ``m`` sets."""
    return isqrt(4 * m + 1) - 1


@dataclass(frozen=True, order=True)
class WitnessInterval:
    s: int
    r: int
    x_idx: int
    y_idx: int
    union_idx: int


@dataclass(frozen=True)
class WitnessGraph:
    """Auxiliary graph on levels ``1..t`` stored as prefix maxima of witness ends.

    ``reach[i - 1]`` is the largest union rank over witnesses starting at or
    below level ``i`` (0 when there are none).
    """

    t: int
    reach: tuple[int, ...]
    witness_at: tuple[WitnessInterval | None, ...]
    n_witnesses: int = 0

    def __post_init__(self):
        if len(self.reach) != self.t or len(self.witness_at) != self.t:
            raise ValueError("reach and witness_at need one entry per level")
        if any(p > q for p, q in zip(self.reach, self.reach[1:])):
            raise ValueError("reach must be non-decreasing")

    def M(self, i: int) -> int:
        return self.reach[i - 1]

    def adjacent(self, i: int, j: int) -> bool:
        if i == j:
            return False
        lo, hi = min(i, j), max(i, j)
        return self.reach[lo - 1] >= hi


def _better(r: int, x: int, y: int, current: WitnessInterval | None) -> bool:
    if current is None:
        return True
    return (r, -x, -y) > (current.r, -current.x_idx, -current.y_idx)


def _scan_python(fam: SetFamily, rank: tuple[int, ...], best: list, count: int) -> int:
    members = fam.members
    for x in range(fam.m):
        mx = members[x]
        for y in range(x + 1, fam.m):
            my = members[y]
            u = mx | my
            if u == mx or u == my:
                continue
            z = fam.content_index.get(u)
            if z is None:
                continue
            count += 1
            s, r = max(rank[x], rank[y]), rank[z]
            if _better(r, x, y, best[s]):
                best[s] = WitnessInterval(s, r, x, y, z)
    return count


def _scan_numpy(fam: SetFamily, rank: tuple[int, ...], best: list, count: int) -> int:
    w = np.array(fam.members, dtype=np.int64)
    order = np.argsort(w, kind="stable")
    ordered = w[order]
    ranks = np.array(rank, dtype=np.int64)
    m = fam.m
    for x in range(m - 1):
        ys = np.arange(x + 1, m)
        u = w[x] | w[ys]
        keep = (u != w[x]) & (u != w[ys])
        if not keep.any():
            continue
        ys, u = ys[keep], u[keep]
        pos = np.minimum(np.searchsorted(ordered, u), m - 1)
        found = ordered[pos] == u
        if not found.any():
            continue
        ys, z = ys[found], order[pos[found]]
        count += len(ys)
        s = np.maximum(ranks[x], ranks[ys])
        r = ranks[z]
        # per start level: largest r, then lowest y (x is fixed in this row)
        srt = np.lexsort((ys, -r, s))
        _, first = np.unique(s[srt], return_index=True)
        for k in srt[first]:
            sk, rk, yk = int(s[k]), int(r[k]), int(ys[k])
            if _better(rk, x, yk, best[sk]):
                best[sk] = WitnessInterval(sk, rk, x, yk, int(z[k]))
    return count


def build_witness_graph(fam: SetFamily, order: OrderRelation, lv_max: LevelDecomposition) -> WitnessGraph:
    t = lv_max.t
    best: list[WitnessInterval | None] = [None] * (t + 1)
    if fam.universe_size <= 62:
        count = _scan_numpy(fam, lv_max.rank, best, 0)
    else:
        count = _scan_python(fam, lv_max.rank, best, 0)
    reach, witness_at = [], []
    current: WitnessInterval | None = None
    for i in range(1, t + 1):
        cand = best[i]
        if cand is not None and _better(cand.r, cand.x_idx, cand.y_idx, current):
            current = cand
        reach.append(current.r if current else 0)
        witness_at.append(current)
    return WitnessGraph(t, tuple(reach), tuple(witness_at), count)


@dataclass(frozen=True)
class GreedyPartition:
    classes: tuple[tuple[int, ...], ...]

    def class_of(self, level: int) -> int:
        for k, cls in enumerate(self.classes, start=1):
            if level in cls:
                return k
        raise KeyError(level)


def greedy_partition(wg: WitnessGraph) -> GreedyPartition:
    """Split levels into classes; within a class each next level is the least
    unused one not adjacent to the previous member."""
    unused = set(range(1, wg.t + 1))
    classes = []
    while unused:
        v = min(unused)
        unused.discard(v)
        cls = [v]
        while True:
            start = max(v + 1, wg.M(v) + 1)
            nxt = next((w for w in range(start, wg.t + 1) if w in unused), None)
            if nxt is None:
                break
            unused.discard(nxt)
            cls.append(nxt)
            v = nxt
        classes.append(tuple(cls))
    return GreedyPartition(tuple(classes))


@dataclass(frozen=True)
class Candidate:
    class_index: int
    selection: tuple[int, ...]
    level_total: int
    lowest_level: int
    anchor: int | None = None
    witness: WitnessInterval | None = None
    dropped_z: int | None = None

    @property
    def size(self) -> int:
        return len(self.selection)


def build_candidate(
    fam: SetFamily,
    order: OrderRelation,
    lv_max: LevelDecomposition,
    wg: WitnessGraph,
    gp: GreedyPartition,
    i: int,
) -> Candidate:
    """Candidate union-free subfamily for class ``i`` (1-based)."""
    if not 1 <= i <= len(gp.classes):
        raise ValueError(f"class index {i} out of range")
    cls = gp.classes[i - 1]
    picked = [v for level in cls for v in lv_max.level(level)]
    level_total = len(picked)
    a = cls[0]
    if i == 1:
        sel = tuple(sorted(picked))
        return Candidate(i, _checked(fam, sel), level_total, a)

    anchors = []
    for earlier in gp.classes[: i - 1]:
        below = [v for v in earlier if v < a]
        assert below, f"class {earlier} has no level below {a}"
        aj = below[-1]
        assert wg.adjacent(aj, a), f"levels {aj} and {a} should be adjacent"
        anchors.append(aj)
    b = min(anchors)
    w = wg.witness_at[b - 1]
    assert w is not None and w.s <= b and w.r >= a
    chain_x = ascending_chain_through_levels(lv_max, order, w.x_idx, b, a - 1)
    chain_y = ascending_chain_through_levels(lv_max, order, w.y_idx, b, a - 1)
    assert not set(chain_x) & set(chain_y), "witness chains must be disjoint"
    z = w.union_idx if w.r == a else None
    if z is not None:
        assert lv_max.rank[z] == a
    chosen = set(chain_x) | set(chain_y) | set(picked)
    chosen.discard(z)
    sel = tuple(sorted(chosen))
    assert len(sel) >= level_total + 2 * (a - b) - 1, "candidate below its size audit"
    return Candidate(i, _checked(fam, sel), level_total, a, b, w, z)


def _checked(fam: SetFamily, sel: tuple[int, ...]) -> tuple[int, ...]:
    if len(sel) <= CHECK_LIMIT:
        assert is_union_free(fam, sel), f"candidate {sel} is not union-free"
    return sel


@dataclass(frozen=True)
class ExtractionReport:
    m: int
    bound: int
    t: int
    chosen_class: int | None
    selection: tuple[int, ...]
    candidates: tuple[Candidate, ...] = field(default=())
    classes: tuple[tuple[int, ...], ...] = field(default=())
    n_witnesses: int = 0

    @property
    def size(self) -> int:
        return len(self.selection)

    @property
    def class_sizes(self) -> list[int]:
        return [c.size for c in self.candidates]

    @property
    def dropped_z(self) -> int | None:
        if self.chosen_class is None:
            return None
        return self.candidates[self.chosen_class - 1].dropped_z

    def to_dict(self, fam: SetFamily | None = None) -> dict:
        out = {
            "m": self.m,
            "bound": self.bound,
            "size": self.size,
            "met": self.size >= self.bound,
            "levels": self.t,
            "chosen_class": self.chosen_class,
            "class_sizes": self.class_sizes,
            "classes": [list(c) for c in self.classes],
            "dropped_z": self.dropped_z,
            "selection": list(self.selection),
        }
        if fam is not None:
            out["sets"] = [sorted(fam.member_set(i)) for i in self.selection]
        return out


def extract_union_free(fam: SetFamily, order: OrderRelation | None = None) -> ExtractionReport:
    bound = moser_bound(fam.m)
    if fam.m == 0:
        return ExtractionReport(0, bound, 0, None, ())
    if order is None:
        order = build_inclusion_order(fam)
    lv = decompose_levels(order, FROM_MAXIMAL)
    wg = build_witness_graph(fam, order, lv)
    gp = greedy_partition(wg)
    cands = tuple(build_candidate(fam, order, lv, wg, gp, i) for i in range(1, len(gp.classes) + 1))
    best = max(cands, key=lambda c: (c.size, -c.class_index))
    report = ExtractionReport(
        fam.m, bound, lv.t, best.class_index, best.selection, cands, gp.classes, wg.n_witnesses
    )
    assert report.size >= bound, f"extracted {report.size} < guaranteed {bound}"
    return report
