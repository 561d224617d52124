"""Set families over a dense universe, file formats and exact predicates.

Members are stored as Python ints used as bit-vectors: bit ``k`` is set when
the ``k``-th smallest original element label belongs to the set.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapabilityError, ContractError, ParseError

DEFAULT_PREDICATE_LIMIT = 24

CHAIN = "chain"
ANTICHAIN = "antichain"
NEITHER = "neither"

# text-format token for the empty set (a blank line is ignored)
EMPTY_SET_TOKEN = "-"


def popcount(mask: int) -> int:
    return mask.bit_count()


def is_subset(x: int, y: int) -> bool:
    return x & y == x


@dataclass(frozen=True)
class SetFamily:
    """Indexed collection of distinct finite sets.

    ``members[i]`` is the bit-vector of member ``i``; ``labels[k]`` is the
    original element behind dense index ``k``.  ``names`` optionally carries a
    display name per member.
    """

    members: tuple[int, ...]
    labels: tuple[int, ...] = ()
    names: tuple[str, ...] | None = None
    dropped_duplicates: int = 0
    content_index: dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        index = {}
        for i, mask in enumerate(self.members):
            if mask in index:
                raise ContractError(f"members {index[mask]} and {i} are equal")
            if mask >> len(self.labels):
                raise ContractError(f"member {i} uses bits beyond the universe")
            index[mask] = i
        if self.names is not None and len(self.names) != len(self.members):
            raise ContractError("names must have one entry per member")
        object.__setattr__(self, "content_index", index)

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], names: Sequence[str] | None = None) -> "SetFamily":
        """Canonicalize raw sets: remap the universe densely and drop duplicates.

        The first occurrence of a duplicated set wins, including its name.
        """
        raw = [frozenset(int(x) for x in s) for s in sets]
        if names is not None and len(names) != len(raw):
            raise ContractError("names must have one entry per set")
        for s in raw:
            for x in s:
                if x < 0:
                    raise ContractError(f"negative element {x}")
        labels = sorted(set().union(*raw)) if raw else []
        position = {x: k for k, x in enumerate(labels)}
        members, kept_names, seen = [], [], set()
        for j, s in enumerate(raw):
            mask = 0
            for x in s:
                mask |= 1 << position[x]
            if mask in seen:
                continue
            seen.add(mask)
            members.append(mask)
            if names is not None:
                kept_names.append(str(names[j]))
        return cls(
            members=tuple(members),
            labels=tuple(labels),
            names=tuple(kept_names) if names is not None else None,
            dropped_duplicates=len(raw) - len(members),
        )

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def universe_size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.members)

    def member_set(self, i: int) -> frozenset[int]:
        mask = self.members[i]
        return frozenset(self.labels[k] for k in range(mask.bit_length()) if mask >> k & 1)

    def sets(self) -> list[list[int]]:
        return [sorted(self.member_set(i)) for i in range(self.m)]

    def index_of(self, elements: Iterable[int]) -> int | None:
        position = {x: k for k, x in enumerate(self.labels)}
        mask = 0
        for x in elements:
            if x not in position:
                return None
            mask |= 1 << position[x]
        return self.content_index.get(mask)

    def size(self, i: int) -> int:
        return popcount(self.members[i])


def as_selection(fam: SetFamily, indices: Iterable[int] | None = None) -> tuple[int, ...]:
    """Normalize member indices into a sorted tuple; ``None`` selects everything."""
    if indices is None:
        return tuple(range(fam.m))
    sel = sorted(int(i) for i in indices)
    for i in sel:
        if not 0 <= i < fam.m:
            raise ContractError(f"member index {i} out of range for m={fam.m}")
    for p, q in zip(sel, sel[1:]):
        if p == q:
            raise ContractError(f"member index {p} selected twice")
    return tuple(sel)


# --- file formats -----------------------------------------------------------

def parse_family(source: str) -> SetFamily:
    """Parse the text or JSON family format (JSON when the input starts with ``{``)."""
    if source.lstrip().startswith("{"):
        return _parse_json(source)
    return _parse_text(source)


def _parse_text(source: str) -> SetFamily:
    sets = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line == EMPTY_SET_TOKEN:
            sets.append(())
            continue
        elements = []
        for token in line.split():
            try:
                x = int(token)
            except ValueError:
                raise ParseError(f"malformed element {token!r}", lineno) from None
            if x < 0:
                raise ParseError(f"negative element {x}", lineno)
            elements.append(x)
        sets.append(elements)
    return SetFamily.from_sets(sets)


def _parse_json(source: str) -> SetFamily:
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("sets"), list):
        raise ParseError('expected an object with a "sets" list')
    sets = []
    for j, s in enumerate(doc["sets"]):
        if not isinstance(s, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in s):
            raise ParseError(f"set {j} is not a list of integers")
        if any(x < 0 for x in s):
            raise ParseError(f"set {j} has a negative element")
        sets.append(s)
    names = doc.get("labels")
    if names is not None and (not isinstance(names, list) or len(names) != len(sets)):
        raise ParseError('"labels" must be a list with one entry per set')
    return SetFamily.from_sets(sets, names=names)


def serialize_family(fam: SetFamily, fmt: str = "text") -> str:
    if fmt == "json":
        doc: dict = {"sets": fam.sets()}
        if fam.names is not None:
            doc["labels"] = list(fam.names)
        return json.dumps(doc) + "\n"
    if fmt != "text":
        raise ContractError(f"unknown family format {fmt!r}")
    lines = [" ".join(map(str, s)) if s else EMPTY_SET_TOKEN for s in fam.sets()]
    return "".join(line + "\n" for line in lines)


# --- predicates -------------------------------------------------------------

def is_union_free(fam: SetFamily, sel: Iterable[int] | None = None) -> bool:
    """True iff no three distinct selected sets satisfy X | Y == Z."""
    sel = as_selection(fam, sel)
    chosen = set(sel)
    members = fam.members
    for i, j in combinations(sel, 2):
        u = members[i] | members[j]
        k = fam.content_index.get(u)
        if k is not None and k != i and k != j and k in chosen:
            return False
    return True


def covers_within(target: int, pool: Iterable[int], k: int) -> bool:
    """Can at most ``k`` sets from ``pool`` (all subsets of ``target``) cover it?"""
    # a set contained in another pool set is never needed in a smallest cover
    ordered = sorted(set(pool), key=popcount, reverse=True)
    maximal: list[int] = []
    for p in ordered:
        if not any(is_subset(p, q) for q in maximal):
            maximal.append(p)
    reach = 0
    for p in maximal:
        reach |= p
    if reach != target:
        return False
    widest = popcount(maximal[0]) if maximal else 0

    def search(uncovered: int, depth: int) -> bool:
        if not uncovered:
            return True
        left = popcount(uncovered)
        if left <= depth:
            return True
        if depth == 0 or -(-left // widest) > depth:
            return False
        low = uncovered & -uncovered
        return any(p & low and search(uncovered & ~p, depth - 1) for p in maximal)

    return search(target, k)


def expressible_as_union(fam: SetFamily, sel: Iterable[int], z: int, a: int) -> bool:
    """True iff ``a`` distinct selected proper subsets of member ``z`` union to it.

    A cover of size s <= a can be padded with a - s further proper subsets
    without changing the union, so a bounded cover search decides it.
    """
    target = fam.members[z]
    pool = [fam.members[i] for i in sel if i != z and is_subset(fam.members[i], target)]
    if len(pool) < a:
        return False
    return covers_within(target, pool, a)


def is_a_union_free(
    fam: SetFamily, sel: Iterable[int] | None, a: int, limit: int = DEFAULT_PREDICATE_LIMIT
) -> bool:
    if a < 2:
        raise ContractError("a must be at least 2")
    sel = as_selection(fam, sel)
    if len(sel) > limit:
        raise CapabilityError(
            f"exact a-union-free check limited to {limit} sets, got {len(sel)}"
        )
    if len(sel) <= a:
        return True
    return not any(expressible_as_union(fam, sel, z, a) for z in sel)


def is_a_degenerate(fam: SetFamily, sel: Iterable[int] | None, a: int) -> bool:
    """True iff every selected set strictly contains at most ``a - 1`` selected sets."""
    sel = as_selection(fam, sel)
    if len(sel) <= a:
        return True
    masks = [fam.members[i] for i in sel]
    for z in masks:
        below = sum(1 for y in masks if y != z and is_subset(y, z))
        if below >= a:
            return False
    return True


def classify_structure(fam: SetFamily, sel: Iterable[int] | None = None) -> str:
    """Return ``"chain"``, ``"antichain"`` or ``"neither"``; sizes 0 and 1 report chain."""
    sel = as_selection(fam, sel)
    if len(sel) <= 1:
        return CHAIN
    comparable = incomparable = False
    for i, j in combinations(sel, 2):
        x, y = fam.members[i], fam.members[j]
        if is_subset(x, y) or is_subset(y, x):
            comparable = True
        else:
            incomparable = True
        if comparable and incomparable:
            return NEITHER
    return CHAIN if comparable else ANTICHAIN
