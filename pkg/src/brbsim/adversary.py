"""Byzantine behaviours used in the simulations.

Faulty processes never forge the payload (a forged content would live in a
separate broadcast instance and can never gather a large enough cut); they
try to slow delivery down by flooding fabricated pathsets for the true
content instead. To a receiver q a fabricated pathset names one of q's own
correct neighbours, so it adds nothing a single label cannot hit. From the
second emitting round on, a random extra label is added.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .protocol import BroadcastMessage, Content
from .topology import Graph


class AdversaryKind(str, enum.Enum):
    ALL_CORRECT = "all_correct"
    PASSIVE = "passive"
    ACTIVE_GENERAL = "active_general"
    ACTIVE_OMNISCIENT = "active_omniscient"

    @property
    def active(self) -> bool:
        return self in (AdversaryKind.ACTIVE_GENERAL, AdversaryKind.ACTIVE_OMNISCIENT)


@dataclass
class AdversaryView:
    graph: Graph
    faulty: frozenset[int]
    source: int
    content: Content
    kind: AdversaryKind
    rng: random.Random
    budget: int
    path_carriers: bool = False
    learned: dict[int, int] = field(default_factory=dict)
    emitted_rounds: dict[int, int] = field(default_factory=dict)
    cursor: dict[tuple[int, int], int] = field(default_factory=dict)

    def observe(self, b: int, msg: BroadcastMessage, round_no: int) -> None:
        """Record that faulty process ``b`` received a copy of the content."""
        if msg.content == self.content:
            self.learned.setdefault(b, round_no)

    def will_emit(self, b: int, round_no: int) -> bool:
        if self.kind is AdversaryKind.ACTIVE_OMNISCIENT:
            return True
        if self.kind is AdversaryKind.ACTIVE_GENERAL:
            return b in self.learned and round_no > self.learned[b]
        return False

    def helpers(self, q: int) -> list[int]:
        return [c for c in self.graph.neighbors(q) if c not in self.faulty and c != self.source]


def byzantine_emit(view: AdversaryView, b: int, round_no: int) -> list[tuple[int, BroadcastMessage]]:
    if not view.will_emit(b, round_no):
        return []
    first = view.emitted_rounds.get(b, 0) == 0
    view.emitted_rounds[b] = view.emitted_rounds.get(b, 0) + 1
    n = view.graph.n
    out = []
    for q in view.graph.neighbors(b):
        if q in view.faulty or q == view.source:
            continue
        helpers = view.helpers(q)
        if not helpers:
            continue
        key = (b, q)
        if key not in view.cursor:
            view.cursor[key] = view.rng.randrange(len(helpers))
        start = view.cursor[key]
        picks: list[frozenset[int]] = []
        step = 0
        while len(picks) < view.budget and step < 4 * view.budget + len(helpers):
            c = helpers[(start + step) % len(helpers)]
            step += 1
            if first:
                cand = frozenset((c,))
            else:
                banned = {q, b, view.source, c}
                if n - len(banned) <= 0:
                    continue
                r = view.rng.randrange(n)
                while r in banned:
                    r = view.rng.randrange(n)
                cand = frozenset((c, r))
            if cand not in picks:
                picks.append(cand)
            if first and step >= len(helpers):
                break
        view.cursor[key] = (start + step) % len(helpers)
        for p in picks:
            carrier = tuple(sorted(p)) if view.path_carriers else p
            out.append((q, BroadcastMessage(view.content, carrier)))
    return out
