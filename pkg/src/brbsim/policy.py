"""Pathset selection under a per-link, per-round channel capacity.

Multi-Shortest visits pathsets by size. Equal sizes are ordered
lexicographically and then, when an rng is supplied, shuffled by it: a fixed
lexicographic order always favours the same low-numbered relays, so the
forwarded pathsets keep sharing labels and their cut stops growing.
"""

from __future__ import annotations

import enum
import random
from collections.abc import Iterable, Sequence


class PolicyKind(str, enum.Enum):
    MULTI_SHORTEST = "multi_shortest"
    MULTI_RANDOM = "multi_random"
    UNBOUNDED = "unbounded"


def shortest_key(p: frozenset[int]) -> tuple[int, tuple[int, ...]]:
    return len(p), tuple(sorted(p))


def candidate_order(queue: Sequence[frozenset[int]], order: PolicyKind, rng: random.Random | None) -> list:
    if order is PolicyKind.MULTI_RANDOM:
        if rng is None:
            raise ValueError("MultiRandom needs an rng")
        shuffled = list(queue)
        rng.shuffle(shuffled)
        return shuffled
    ordered = sorted(queue, key=shortest_key)
    if rng is not None:
        # random tie-break among equal lengths, independent of arrival order
        rng.shuffle(ordered)
        ordered.sort(key=len)
    return ordered


def plan_sends(
    queue: Sequence[frozenset[int]],
    neighbors_to_contact: Iterable[int],
    capacity: int | None,
    order: PolicyKind,
    rng: random.Random | None = None,
) -> list[tuple[frozenset[int], list[int]]]:
    """Pick pathsets and the links each one goes out on.

    Candidates are visited in policy order; one is kept iff some neighbour that
    has not been served yet is absent from it. A kept pathset is sent to every
    contact absent from it whose link still has room. The scan ends once every
    contact has been served. ``capacity=None`` means unbounded links, in which
    case every pathset useful to somebody is sent.
    """
    contacts = sorted(neighbors_to_contact)
    if capacity is not None and capacity < 1:
        raise ValueError("capacity must be >= 1")
    if capacity is None or order is PolicyKind.UNBOUNDED:
        plan = []
        for p in queue:
            targets = [q for q in contacts if q not in p]
            if targets:
                plan.append((p, targets))
        return plan

    load = dict.fromkeys(contacts, 0)
    pending = set(contacts)
    plan = []
    for p in candidate_order(queue, order, rng):
        if not pending:
            break
        targets = [q for q in contacts if q not in p and load[q] < capacity]
        if not pending.intersection(targets):
            continue
        for q in targets:
            load[q] += 1
        pending.difference_update(targets)
        plan.append((p, targets))
    return plan


def select(
    queue: Sequence[frozenset[int]],
    neighbors_to_contact: Iterable[int],
    capacity: int | None,
    order: PolicyKind,
    rng: random.Random | None = None,
) -> list[frozenset[int]]:
    return [p for p, _ in plan_sends(queue, neighbors_to_contact, capacity, order, rng)]
