"""Synchronous round executor: send, receive, compute, repeat.

Messages sent in a round's send phase are received in the same round's
receive phase, so a copy moves exactly one hop per round. Randomness comes
from four named streams derived from the run seed (``topology``,
``placement``, ``policy``, ``adversary``): stream ``name`` is
``random.Random(f"{name}:{seed}")``, which seeds through SHA-512 and does not
depend on the interpreter's hash randomization.
"""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .adversary import AdversaryKind, AdversaryView, byzantine_emit
from .errors import ConfigError, ParameterError, SweepError
from .policy import PolicyKind
from .protocol import (
    Content,
    ProcessState,
    ProtocolKind,
    on_receive,
    select_outgoing,
    source_emit,
    try_deliver,
)
from .topology import Graph, TopologyKind, check_parameters, generate, vertex_connectivity

AUTO_CAPACITY = "f+1"
PLACEMENTS = ("random", "worst-clique", "worst-neighborhood")
PAYLOAD = b"content"


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation run.

    ``k`` is the family's connectivity parameter, or the attachment parameter
    for Barabasi-Albert graphs. ``f`` is the number of faults placed (none
    under ``ALL_CORRECT``); ``delivery_threshold`` is the largest cut a
    process still refuses. Either left as ``None`` defaults to
    ``(kappa - 1) // 2`` for the generated graph's connectivity ``kappa``.
    ``capacity`` is a message count per link per round, ``None`` for
    unbounded links, or ``"f+1"``.
    """

    topology: TopologyKind
    n: int
    k: int
    f: int | None = None
    protocol: ProtocolKind = ProtocolKind.BFT
    policy: PolicyKind = PolicyKind.MULTI_SHORTEST
    capacity: int | str | None = AUTO_CAPACITY
    adversary: AdversaryKind = AdversaryKind.ALL_CORRECT
    seed: int = 0
    round_cap: int | None = None
    delivery_threshold: int | None = None
    placement: str = "random"
    strict: bool = True

    def __post_init__(self):
        for name, enum_type in (
            ("topology", TopologyKind),
            ("protocol", ProtocolKind),
            ("policy", PolicyKind),
            ("adversary", AdversaryKind),
        ):
            try:
                object.__setattr__(self, name, enum_type(getattr(self, name)))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None

    def validate(self, check_family: bool = True) -> "ExperimentConfig":
        """Check field ranges; ``check_family`` also checks (n, k) against the family."""
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.round_cap is not None and self.round_cap < 1:
            raise ConfigError("round_cap must be >= 1")
        if self.f is not None and self.f < 0:
            raise ConfigError("f must be >= 0")
        if self.placement not in PLACEMENTS:
            raise ConfigError(f"placement must be one of {', '.join(PLACEMENTS)}")
        cap = self.capacity
        if cap is not None and cap != AUTO_CAPACITY and (not isinstance(cap, int) or cap < 1):
            raise ConfigError("capacity must be a positive integer, 'f+1' or unbounded")
        if self.policy is PolicyKind.UNBOUNDED and cap is not None:
            raise ConfigError("the unbounded policy requires unbounded capacity")
        if not check_family:
            return self
        try:
            check_parameters(self.topology, self.n, self.k)
        except ParameterError as exc:
            raise ConfigError(str(exc)) from None
        if self.topology is not TopologyKind.BARABASI_ALBERT:
            self.resolve(self.k)
        return self

    def resolve(self, kappa: int) -> tuple[int, int, int, int | None]:
        """(f, faults placed, delivery threshold, link capacity) for connectivity kappa."""
        tolerable = max((kappa - 1) // 2, 0)
        f = tolerable if self.f is None else self.f
        threshold = tolerable if self.delivery_threshold is None else self.delivery_threshold
        if threshold < 0:
            raise ConfigError("delivery_threshold must be >= 0")
        if f > threshold:
            raise ConfigError(f"f={f} exceeds the delivery threshold {threshold}")
        if self.strict and f > tolerable:
            raise ConfigError(f"f={f} exceeds floor((k-1)/2)={tolerable}; liveness cannot hold")
        faults = 0 if self.adversary is AdversaryKind.ALL_CORRECT else f
        if faults >= self.n:
            raise ConfigError(f"{faults} faults do not fit in {self.n} processes")
        capacity = f + 1 if self.capacity == AUTO_CAPACITY else self.capacity
        return f, faults, threshold, capacity


@dataclass
class RunMetrics:
    messages_total: int = 0
    messages_correct: int = 0
    latency_rounds: int | None = None
    quiescence_round: int | None = None
    delivered_correct: int = 0
    safety_violations: int = 0
    per_round_messages: list[int] = field(default_factory=list)
    per_round_correct: list[int] = field(default_factory=list)
    connectivity: int = 0
    f: int = 0
    faults: int = 0
    capacity: int | None = None
    source: int = 0
    byzantine: tuple[int, ...] = ()
    delivery_rounds: dict[int, int] = field(default_factory=dict)


def stream(name: str, seed: int) -> random.Random:
    return random.Random(f"{name}:{seed}")


def build_graph(config: ExperimentConfig) -> Graph:
    topo_seed = stream("topology", config.seed).getrandbits(64)
    return generate(config.topology, config.n, config.k, topo_seed)


def place(config: ExperimentConfig, graph: Graph, rng: random.Random, faults: int) -> tuple[int, frozenset[int]]:
    """Choose the source and the faulty processes.

    ``worst-clique`` puts the faults on the highest-degree nodes (the hub
    clique of a generalized wheel) and the source elsewhere.
    ``worst-neighborhood`` puts the faults next to the source, preferring
    neighbours whose own neighbourhoods differ (distinct groups of a
    multipartite wheel).
    """
    n = graph.n
    if faults >= n:
        raise ConfigError(f"{faults} faults do not fit in {n} processes")
    if config.placement == "worst-clique":
        by_degree = sorted(range(n), key=lambda u: (-graph.degree(u), u))
        byz = by_degree[:faults]
        top = graph.degree(by_degree[0])
        rest = [u for u in range(n) if u not in byz and graph.degree(u) < top]
        rest = rest or [u for u in range(n) if u not in byz]
        return rng.choice(rest), frozenset(byz)
    source = rng.randrange(n)
    byz: list[int] = []
    if config.placement == "worst-neighborhood":
        around = list(graph.neighbors(source))
        seen_shapes: set[frozenset[int]] = set()
        for q in around:
            shape = frozenset(graph.neighbors(q)) - {source}
            if len(byz) < faults and shape not in seen_shapes:
                byz.append(q)
                seen_shapes.add(shape)
        byz += [q for q in around if q not in byz][: faults - len(byz)]
    others = [u for u in range(n) if u != source and u not in byz]
    byz += rng.sample(others, faults - len(byz))
    return source, frozenset(byz)


RoundHook = Callable[[int, dict[int, ProcessState]], None]


def run(config: ExperimentConfig, graph: Graph | None = None, on_round: RoundHook | None = None) -> RunMetrics:
    """Simulate one broadcast; a supplied ``graph`` replaces the generated one."""
    config.validate(check_family=graph is None)
    if graph is None:
        graph = build_graph(config)
    kappa = graph.k if graph.k is not None else vertex_connectivity(graph)
    f, faults, threshold, capacity = config.resolve(kappa)
    if config.policy is PolicyKind.UNBOUNDED:
        capacity = None
    kind = config.protocol
    round_cap = config.round_cap if config.round_cap is not None else 4 * graph.n

    source, byz = place(config, graph, stream("placement", config.seed), faults)
    content = Content(source, PAYLOAD)
    states = {p: ProcessState(p, graph.neighbors(p), threshold) for p in range(graph.n) if p not in byz}
    policy_rng = stream("policy", config.seed)
    view = AdversaryView(
        graph=graph,
        faulty=byz,
        source=source,
        content=content,
        kind=config.adversary,
        rng=stream("adversary", config.seed),
        budget=min(faults + 1, capacity) if capacity is not None else faults + 1,
        path_carriers=kind is ProtocolKind.DOLEV,
    )

    m = RunMetrics(connectivity=kappa, f=f, faults=faults, capacity=capacity, source=source, byzantine=tuple(sorted(byz)))
    delivered = {source: 0}
    first_sends = source_emit(states[source], content, kind)
    last_correct_send = 0
    quiescent = False

    round_no = 0
    while round_no < round_cap:
        round_no += 1
        sends = []
        if round_no == 1:
            sends += [(source, q, msg) for q, msg in first_sends]
        for p in sorted(states):
            for c in list(states[p].records):
                sends += [(p, q, msg) for q, msg in select_outgoing(states[p], c, config.policy, capacity, policy_rng, kind)]
        correct_count = len(sends)
        if capacity is not None:
            link_load = Counter((s, q) for s, q, _ in sends)
            assert max(link_load.values(), default=0) <= capacity, "correct process exceeded link capacity"
        for b in sorted(byz):
            emitted = byzantine_emit(view, b, round_no)
            if capacity is not None:
                per_link = Counter()
                clipped = []
                for q, msg in emitted:
                    per_link[q] += 1
                    if per_link[q] <= capacity:
                        clipped.append((q, msg))
                emitted = clipped
            sends += [(b, q, msg) for q, msg in emitted]

        m.per_round_messages.append(len(sends))
        m.per_round_correct.append(correct_count)
        m.messages_total += len(sends)
        m.messages_correct += correct_count
        if correct_count:
            last_correct_send = round_no

        for s, q, msg in sends:
            if q in byz:
                view.observe(q, msg, round_no)
            else:
                on_receive(states[q], s, msg, kind)

        for p, st in states.items():
            for c, rec in st.records.items():
                if not rec.delivered and try_deliver(st, c, kind):
                    if c == content:
                        delivered.setdefault(p, round_no)
                    else:
                        m.safety_violations += 1

        if on_round is not None:
            on_round(round_no, states)

        all_delivered = len(delivered) == len(states)
        if all(st.is_quiet() for st in states.values()) and (
            all_delivered or not any(view.will_emit(b, round_no + 1) for b in byz)
        ):
            quiescent = True
            break

    m.delivery_rounds = dict(sorted(delivered.items()))
    m.delivered_correct = len(delivered)
    if len(delivered) == len(states):
        m.latency_rounds = max(delivered.values())
    m.quiescence_round = last_correct_send if quiescent else None
    return m


def _run_indexed(args: tuple[int, int, ExperimentConfig]) -> RunMetrics:
    index, rep, config = args
    try:
        return run(config)
    except Exception as exc:
        raise SweepError(index, rep, exc) from exc


def sweep(configs: Sequence[ExperimentConfig], repetitions: int = 1, parallel: int = 1) -> list[RunMetrics]:
    """One run per (config, repetition); repetition i uses seed ``config.seed + i``."""
    if repetitions < 1:
        raise ConfigError("repetitions must be >= 1")
    jobs = [
        (i, r, replace(cfg, seed=cfg.seed + r))
        for i, cfg in enumerate(configs)
        for r in range(repetitions)
    ]
    if parallel <= 1 or len(jobs) <= 1:
        return [_run_indexed(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        return list(pool.map(_run_indexed, jobs, chunksize=1))
