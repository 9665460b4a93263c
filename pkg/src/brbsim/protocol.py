"""Per-process state machines for the three reliable-broadcast variants.

``DOLEV`` carries ordered paths and verifies with disjoint paths.
``MAURER_TD`` carries unordered pathsets and verifies with a minimum vertex
cut. ``BFT`` uses the same carrier and check as ``MAURER_TD`` and adds the
five message-saving rules:

1. a copy received straight from the source is delivered at once;
2. after delivery only the empty pathset is relayed;
3. nothing is relayed to neighbours known to have delivered;
4. once a neighbour q sent the empty pathset, every longer pathset naming q
   is ignored and purged;
5. after delivering and relaying the empty pathset the process goes silent.

The baselines apply none of these and never halt on their own.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .cutset import PathSetCollection, has_disjoint_paths, min_cut_at_least
from .errors import ChannelViolation
from .policy import PolicyKind, plan_sends

EMPTY = frozenset()


class ProtocolKind(str, enum.Enum):
    DOLEV = "dolev"
    MAURER_TD = "mtd"
    BFT = "bft"


@dataclass(frozen=True)
class Content:
    source: int
    payload: bytes


@dataclass(frozen=True)
class BroadcastMessage:
    content: Content
    carrier: frozenset[int] | tuple[int, ...] = EMPTY


@dataclass
class ContentRecord:
    pathsets: PathSetCollection = field(default_factory=PathSetCollection)
    paths: list[tuple[int, ...]] = field(default_factory=list)
    seen: set = field(default_factory=set)
    to_forward: list = field(default_factory=list)
    neigh_del: set[int] = field(default_factory=set)
    delivered: bool = False
    empty_sent: bool = False
    dirty: bool = False


class ProcessState:
    """Bookkeeping of one correct process; ``f`` is its delivery threshold."""

    def __init__(self, self_id: int, neighbors, f: int):
        self.self_id = self_id
        self.neighbors = tuple(sorted(neighbors))
        self.neighbor_set = frozenset(self.neighbors)
        self.f = f
        self.records: dict[Content, ContentRecord] = {}

    def record(self, content: Content) -> ContentRecord:
        rec = self.records.get(content)
        if rec is None:
            rec = self.records[content] = ContentRecord()
        return rec

    def delivered(self, content: Content) -> bool:
        rec = self.records.get(content)
        return rec is not None and rec.delivered

    def is_quiet(self) -> bool:
        return not any(rec.to_forward for rec in self.records.values())


def source_emit(
    state: ProcessState, content: Content, kind: ProtocolKind = ProtocolKind.BFT
) -> list[tuple[int, BroadcastMessage]]:
    if state.self_id != content.source:
        raise ValueError(f"process {state.self_id} is not the source of {content}")
    rec = state.record(content)
    rec.delivered = True
    rec.empty_sent = True
    carrier = () if kind is ProtocolKind.DOLEV else EMPTY
    return [(q, BroadcastMessage(content, carrier)) for q in state.neighbors]


def on_receive(state: ProcessState, sender: int, msg: BroadcastMessage, kind: ProtocolKind) -> None:
    if sender not in state.neighbor_set:
        raise ChannelViolation(f"process {state.self_id} got a message from non-neighbour {sender}")
    content = msg.content
    src = content.source
    me = state.self_id
    if me == src:
        return
    rec = state.record(content)
    if rec.delivered and kind is ProtocolKind.BFT:
        return

    if kind is ProtocolKind.DOLEV:
        path = tuple(x for x in msg.carrier if x != src)
        if sender != src:
            path += (sender,)
        if me in path or len(set(path)) != len(path):
            return
        if path in rec.seen:
            return
        rec.seen.add(path)
        rec.paths.append(path)
        rec.to_forward.append(path)
        rec.dirty = True
        return

    labels = frozenset(msg.carrier) - {src}
    if sender in labels or me in labels:
        return
    if sender == src:
        rec.pathsets.contains_direct = True
        extended = labels
    else:
        extended = labels | {sender}

    if kind is ProtocolKind.BFT:
        if not labels and sender != src and sender not in rec.neigh_del:
            rec.neigh_del.add(sender)
            rec.pathsets.purge(sender)
            rec.to_forward = [p for p in rec.to_forward if sender not in p]
        if len(extended) > 1 and not extended.isdisjoint(rec.neigh_del):
            return
        # A superset of a stored pathset is dominated for this process and,
        # once relayed, for every neighbour as well.
        if extended and rec.pathsets.dominates(extended):
            return

    if extended in rec.seen:
        return
    rec.seen.add(extended)
    if extended:
        rec.pathsets.add(extended)
    rec.to_forward.append(extended)
    rec.dirty = True


def try_deliver(state: ProcessState, content: Content, kind: ProtocolKind) -> bool:
    rec = state.record(content)
    if rec.delivered:
        return True
    if not rec.dirty:
        return False
    rec.dirty = False
    threshold = state.f + 1
    if kind is ProtocolKind.DOLEV:
        ok = has_disjoint_paths(rec.paths, threshold)
    else:
        # contains_direct short-circuits the cut check
        ok = min_cut_at_least(rec.pathsets, threshold)
    if ok:
        rec.delivered = True
        if kind is ProtocolKind.BFT:
            rec.pathsets = PathSetCollection(contains_direct=rec.pathsets.contains_direct)
            rec.to_forward = [EMPTY]
    return ok


def select_outgoing(
    state: ProcessState,
    content: Content,
    policy: PolicyKind,
    capacity: int | None,
    rng: random.Random | None,
    kind: ProtocolKind,
) -> list[tuple[int, BroadcastMessage]]:
    rec = state.records.get(content)
    if rec is None or not rec.to_forward:
        return []
    if kind is ProtocolKind.BFT:
        if rec.delivered and rec.empty_sent:
            rec.to_forward = []
            return []
        contacts = [q for q in state.neighbors if q not in rec.neigh_del and q != content.source]
    else:
        contacts = [q for q in state.neighbors if q != content.source]

    plan = plan_sends(rec.to_forward, contacts, capacity, policy, rng)
    out = [(q, BroadcastMessage(content, p)) for p, targets in plan for q in targets]

    if kind is ProtocolKind.BFT and rec.delivered:
        rec.empty_sent = True
        rec.to_forward = []
    elif capacity is None or policy is PolicyKind.UNBOUNDED:
        rec.to_forward = []
    else:
        chosen = {p for p, _ in plan}
        # a pathset naming every remaining contact can never be useful again
        rec.to_forward = [
            p for p in rec.to_forward if p not in chosen and any(q not in p for q in contacts)
        ]
    return out
