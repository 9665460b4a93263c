import random

import pytest

from brbsim.cutset import PathSetCollection
from brbsim.errors import ChannelViolation
from brbsim.policy import PolicyKind
from brbsim.protocol import (
    EMPTY,
    BroadcastMessage,
    Content,
    ProcessState,
    ProtocolKind,
    on_receive,
    select_outgoing,
    source_emit,
    try_deliver,
)
from brbsim.topology import Graph, TopologyKind, generate

from helpers import A, B, C, CUBE, D, E, F, U, V

BFT = ProtocolKind.BFT
MTD = ProtocolKind.MAURER_TD
DOLEV = ProtocolKind.DOLEV
CONTENT = Content(U, b"m")


def state(p, f=1, g=CUBE):
    return ProcessState(p, g.neighbors(p), f)


def msg(*labels, content=CONTENT):
    return BroadcastMessage(content, frozenset(labels))


class TestSourceEmit:
    def test_cube(self):
        out = source_emit(state(U), CONTENT)
        assert [q for q, _ in out] == [A, B, C]
        assert all(m.carrier == EMPTY for _, m in out)
        assert state(U).delivered(CONTENT) is False  # fresh state untouched

    def test_marks_source_delivered(self):
        s = state(U)
        source_emit(s, CONTENT)
        assert s.delivered(CONTENT)

    def test_isolated_source(self):
        s = ProcessState(0, (), 0)
        assert source_emit(s, Content(0, b"x")) == []

    def test_not_the_source(self):
        with pytest.raises(ValueError):
            source_emit(state(A), CONTENT)

    def test_dolev_carrier_is_a_path(self):
        out = source_emit(state(U), CONTENT, DOLEV)
        assert all(m.carrier == () for _, m in out)

    @pytest.mark.parametrize("kind", list(TopologyKind))
    def test_one_message_per_neighbour(self, kind):
        g = generate(kind, 24, 4, seed=1)
        for s in (0, 5, 23):
            out = source_emit(ProcessState(s, g.neighbors(s), 1), Content(s, b"x"))
            assert len(out) == g.degree(s)


class TestReceive:
    @pytest.mark.parametrize("kind", [MTD, BFT])
    def test_walkthrough_relay(self, kind):
        d = state(D)
        on_receive(d, A, msg(), kind)
        assert d.record(CONTENT).pathsets.sets == [frozenset({A})]
        assert d.record(CONTENT).to_forward == [frozenset({A})]

    def test_empty_carrier_fills_neigh_del(self):
        d = state(D)
        on_receive(d, B, msg(A), BFT)
        on_receive(d, A, msg(), BFT)
        rec = d.record(CONTENT)
        assert rec.neigh_del == {A}
        # {A, B} named A and was purged; {A} itself stays
        assert rec.pathsets.sets == [frozenset({A})]
        assert frozenset({A, B}) not in rec.to_forward

    def test_modification_four_discards(self):
        d = state(D)
        on_receive(d, A, msg(), BFT)
        on_receive(d, B, msg(A, 9), BFT)
        rec = d.record(CONTENT)
        assert frozenset({A, B, 9}) not in rec.seen
        assert len(rec.pathsets) == 1

    def test_baseline_ignores_neigh_del(self):
        d = state(D)
        on_receive(d, A, msg(), MTD)
        on_receive(d, B, msg(A, 9), MTD)
        assert d.record(CONTENT).neigh_del == set()
        assert frozenset({A, B, 9}) in d.record(CONTENT).to_forward

    @pytest.mark.parametrize("kind", [MTD, BFT])
    def test_own_label_discarded(self, kind):
        d = state(D)
        on_receive(d, A, msg(D, E), kind)
        assert d.record(CONTENT).to_forward == []

    @pytest.mark.parametrize("kind", [MTD, BFT])
    def test_sender_label_discarded(self, kind):
        d = state(D)
        on_receive(d, A, msg(A), kind)
        assert d.record(CONTENT).to_forward == []

    def test_source_label_stripped(self):
        d = state(D)
        on_receive(d, A, msg(U, E), MTD)
        assert d.record(CONTENT).pathsets.sets == [frozenset({A, E})]

    @pytest.mark.parametrize("kind", [MTD, BFT])
    def test_direct_from_source(self, kind):
        a = state(A)
        on_receive(a, U, msg(), kind)
        assert a.record(CONTENT).pathsets.contains_direct
        assert try_deliver(a, CONTENT, kind)

    def test_non_neighbour(self):
        with pytest.raises(ChannelViolation):
            on_receive(state(D), C, msg(), BFT)

    def test_duplicates_suppressed(self):
        d = state(D)
        on_receive(d, A, msg(E), MTD)
        on_receive(d, A, msg(E), MTD)
        assert d.record(CONTENT).to_forward == [frozenset({A, E})]

    def test_purged_not_readmitted(self):
        d = state(D)
        on_receive(d, B, msg(E), BFT)
        on_receive(d, B, msg(), BFT)
        on_receive(d, V, msg(B, E), BFT)
        assert all(B not in p or len(p) == 1 for p in d.record(CONTENT).to_forward)

    def test_bft_drops_dominated_pathsets(self):
        d = state(D)
        on_receive(d, A, msg(E), BFT)
        on_receive(d, V, msg(A, E), BFT)
        assert d.record(CONTENT).to_forward == [frozenset({A, E})]

    def test_dolev_records_paths(self):
        d = state(D)
        on_receive(d, A, BroadcastMessage(CONTENT, ()), DOLEV)
        on_receive(d, B, BroadcastMessage(CONTENT, (F,)), DOLEV)
        on_receive(d, B, BroadcastMessage(CONTENT, (D,)), DOLEV)
        on_receive(d, B, BroadcastMessage(CONTENT, (F,)), DOLEV)
        assert d.record(CONTENT).paths == [(A,), (F, B)]

    def test_source_ignores_echoes(self):
        s = state(U)
        source_emit(s, CONTENT)
        on_receive(s, A, msg(B), BFT)
        assert s.record(CONTENT).to_forward == []


class TestDeliver:
    def test_three_disjoint_relays(self):
        v = ProcessState(V, CUBE.neighbors(V), 2)
        for sender, via in ((E, A), (D, B), (F, C)):
            on_receive(v, sender, msg(via), MTD)
        assert try_deliver(v, CONTENT, MTD)

    def test_shared_relay_blocks(self):
        p = ProcessState(9, (1, 2, 3), 1)
        rec = p.record(CONTENT)
        rec.pathsets = PathSetCollection([{1, 2}, {1, 3}])
        rec.dirty = True
        assert not try_deliver(p, CONTENT, MTD)

    def test_direct_flag(self):
        for f in range(4):
            p = ProcessState(9, (1,), f)
            p.record(CONTENT).pathsets.contains_direct = True
            p.record(CONTENT).dirty = True
            assert try_deliver(p, CONTENT, BFT)

    def test_bft_delivery_queues_only_empty(self):
        a = state(A)
        on_receive(a, D, msg(B), BFT)
        on_receive(a, U, msg(), BFT)
        assert try_deliver(a, CONTENT, BFT)
        assert a.record(CONTENT).to_forward == [EMPTY]

    def test_dolev_needs_disjoint_paths(self):
        d = state(D, f=1)
        on_receive(d, A, BroadcastMessage(CONTENT, ()), DOLEV)
        assert not try_deliver(d, CONTENT, DOLEV)
        on_receive(d, B, BroadcastMessage(CONTENT, ()), DOLEV)
        assert try_deliver(d, CONTENT, DOLEV)

    def test_forged_content_with_small_cut_rejected(self):
        # f faulty relays can only produce pathsets all hit by themselves
        rng = random.Random(8)
        forged = Content(U, b"forged")
        for _ in range(200):
            f = rng.randint(1, 3)
            byz = rng.sample(range(1, 30), f)
            p = ProcessState(40, tuple(range(1, 30)), f)
            for _ in range(rng.randint(1, 15)):
                sender = rng.choice(byz)
                extra = rng.sample(range(1, 30), rng.randint(0, 3))
                on_receive(p, sender, msg(*extra, content=forged), BFT)
            assert p.record(forged).pathsets.sets or p.record(forged).neigh_del
            assert not try_deliver(p, forged, BFT)


class TestSelect:
    def test_after_delivery_one_empty_each(self):
        a = state(A)
        on_receive(a, E, msg(C), BFT)
        on_receive(a, D, msg(), BFT)
        on_receive(a, U, msg(), BFT)
        assert try_deliver(a, CONTENT, BFT)
        out = select_outgoing(a, CONTENT, PolicyKind.MULTI_SHORTEST, 2, random.Random(0), BFT)
        # U is the source and D already delivered
        assert out == [(E, msg())]
        assert select_outgoing(a, CONTENT, PolicyKind.MULTI_SHORTEST, 2, random.Random(0), BFT) == []
        assert a.is_quiet()

    def test_nothing_queued(self):
        assert select_outgoing(state(D), CONTENT, PolicyKind.MULTI_SHORTEST, 2, random.Random(0), BFT) == []

    def test_baseline_forwards_everything(self):
        d = state(D)
        on_receive(d, A, msg(), MTD)
        on_receive(d, B, msg(), MTD)
        out = select_outgoing(d, CONTENT, PolicyKind.UNBOUNDED, None, None, MTD)
        assert sorted((q, tuple(sorted(m.carrier))) for q, m in out) == [(A, (B,)), (B, (A,)), (V, (A,)), (V, (B,))]
        assert d.is_quiet()

    def test_capacity_respected(self):
        g = Graph.from_edges(6, [(0, i) for i in range(1, 6)])
        p = ProcessState(0, g.neighbors(0), 1)
        c = Content(9, b"x")
        for i in range(1, 6):
            p.record(c).to_forward.append(frozenset({i + 10, i + 20}))
        out = select_outgoing(p, c, PolicyKind.MULTI_SHORTEST, 1, random.Random(0), BFT)
        loads = {}
        for q, _ in out:
            loads[q] = loads.get(q, 0) + 1
        assert max(loads.values()) <= 1
