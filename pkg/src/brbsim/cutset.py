"""Delivery decisions over collected relay labels.

A pathset is the set of intermediate relays a copy of the content crossed.
Cut verification asks whether every hitting set of the collected pathsets has
at least ``threshold`` labels; disjoint-path verification asks whether
``count`` pairwise disjoint path records exist. Both searches are depth
bounded by the threshold, which stays small (f is at most (k-1)/2).

Internally label sets are Python ints used as bitmasks.
"""

from __future__ import annotations

from collections.abc import Iterable
from itertools import combinations

from .errors import CapacityError

PathSet = frozenset  # frozenset[int]
PathRecord = tuple  # tuple[int, ...]

ORACLE_LABEL_LIMIT = 20


def to_mask(labels: Iterable[int]) -> int:
    mask = 0
    for label in labels:
        mask |= 1 << label
    return mask


def minimal_masks(masks: Iterable[int]) -> list[int]:
    """Drop duplicates and strict supersets; result sorted by size then value."""
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda x: (x.bit_count(), x)):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


class PathSetCollection:
    """Pathsets received for one content, kept as an antichain.

    A pathset that is a superset of a stored one cannot change any cut
    decision, so it is dropped on insertion; stored supersets of a new
    pathset are evicted for the same reason.
    """

    def __init__(self, sets: Iterable[Iterable[int]] = (), contains_direct: bool = False):
        self.contains_direct = contains_direct
        self._masks: dict[int, frozenset[int]] = {}
        for s in sets:
            self.add(s)

    def add(self, labels: Iterable[int]) -> bool:
        """Insert a pathset; returns False when it was redundant."""
        s = frozenset(labels)
        m = to_mask(s)
        for stored in self._masks:
            if stored & m == stored:
                return False
        for stored in [x for x in self._masks if x & m == m]:
            del self._masks[stored]
        self._masks[m] = s
        return True

    def dominates(self, labels: Iterable[int]) -> bool:
        """True if some stored pathset is a subset of ``labels``."""
        m = to_mask(labels)
        return any(stored & m == stored for stored in self._masks)

    def purge(self, label: int) -> None:
        """Remove every stored pathset that contains ``label``."""
        bit = 1 << label
        for stored in [x for x in self._masks if x & bit]:
            del self._masks[stored]

    @property
    def sets(self) -> list[frozenset[int]]:
        return list(self._masks.values())

    @property
    def masks(self) -> list[int]:
        return list(self._masks)

    def __len__(self) -> int:
        return len(self._masks)

    def __repr__(self) -> str:
        body = sorted(sorted(s) for s in self._masks.values())
        return f"PathSetCollection({body}, contains_direct={self.contains_direct})"


def _hitting_set_within(masks: list[int], budget: int) -> bool:
    """True iff some set of at most ``budget`` labels intersects every mask."""
    if not masks:
        return True
    if budget == 0:
        return False
    pivot = min(masks, key=int.bit_count)
    if pivot == 0:
        return False
    rest = pivot
    while rest:
        low = rest & -rest
        rest ^= low
        if _hitting_set_within([m for m in masks if not m & low], budget - 1):
            return True
    return False


def min_cut_at_least(c: PathSetCollection | Iterable[Iterable[int]], threshold: int) -> bool:
    """Decide whether the minimum hitting set of ``c`` has size >= ``threshold``.

    A collection flagged ``contains_direct`` always passes (no cut separates
    neighbours). An empty collection never passes.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    if not isinstance(c, PathSetCollection):
        c = PathSetCollection(c)
    if c.contains_direct:
        return True
    if not len(c):
        return False
    return not _hitting_set_within(minimal_masks(c.masks), threshold - 1)


def _packing_within(masks: list[int], count: int, used: int) -> bool:
    if count == 0:
        return True
    for i, m in enumerate(masks):
        if m & used:
            continue
        if len(masks) - i < count:
            return False
        if _packing_within(masks[i + 1:], count - 1, used | m):
            return True
    return False


def has_disjoint_paths(paths: Iterable[Iterable[int]], count: int) -> bool:
    """Decide whether ``count`` records with pairwise disjoint labels exist.

    Records are compared as label sets. Replacing a record by one whose label
    set is a subset never breaks a packing, so only minimal sets are searched.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    raw = {to_mask(p) for p in paths}
    if 0 in raw:
        raw.discard(0)
        count -= 1
    return _packing_within(minimal_masks(raw), count, 0)


def as_pathsets(paths: Iterable[Iterable[int]]) -> PathSetCollection:
    """Collection built from path records; the empty record marks a direct receipt."""
    coll = PathSetCollection()
    for p in paths:
        if len(p) == 0:
            coll.contains_direct = True
        else:
            coll.add(p)
    return coll


def oracle_min_hitting_set(c: PathSetCollection | Iterable[Iterable[int]]) -> int:
    """Exact minimum hitting set size by enumerating label subsets by size.

    Returns 0 for an empty collection; a collection holding the empty set has
    no hitting set and raises ``ValueError``.
    """
    sets = c.sets if isinstance(c, PathSetCollection) else [frozenset(s) for s in c]
    if any(not s for s in sets):
        raise ValueError("the empty set cannot be hit")
    universe = sorted(set().union(*sets)) if sets else []
    if len(universe) > ORACLE_LABEL_LIMIT:
        raise CapacityError(f"{len(universe)} labels exceed the oracle limit of {ORACLE_LABEL_LIMIT}")
    for size in range(len(universe) + 1):
        for cand in combinations(universe, size):
            chosen = set(cand)
            if all(s & chosen for s in sets):
                return size
    raise AssertionError("unreachable: the full universe hits every set")


def oracle_max_packing(paths: Iterable[Iterable[int]]) -> int:
    """Largest number of pairwise disjoint records, by enumerating record subsets."""
    records = [frozenset(p) for p in paths]
    if len(records) > ORACLE_LABEL_LIMIT:
        raise CapacityError(f"{len(records)} records exceed the oracle limit of {ORACLE_LABEL_LIMIT}")
    for size in range(len(records), 0, -1):
        for cand in combinations(records, size):
            if all(not (a & b) for a, b in combinations(cand, 2)):
                return size
    return 0
