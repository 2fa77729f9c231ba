"""Synchronous CONGEST round simulator.

Each round has three steps. Every running node produces an outbox, the
kernel checks every message against the per-edge bit budget, and then every
running node consumes the messages addressed to it. A message sent in round
``r`` is received in round ``r``'s receive step, which is the model's "one
round later" from the sender's point of view.

Nodes only ever see a :class:`NodeView`: their id, the id-space size, the
incident edge ids with the neighbor id behind each one, a private seeded
random stream and an optional local input.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, TextIO, Union

from .errors import BandwidthViolation, NonTermination
from .graph import Graph

Payload = Union[None, int, tuple]

SIMULATED = "simulated"
CHARGED = "charged"
IDLE = "idle"


def id_bits(id_space: int) -> int:
    return max(1, math.ceil(math.log2(max(id_space, 2))))


def payload_bits(payload: Payload) -> int:
    """Serialized size: ints cost their bit length (plus a sign bit), None costs 1."""
    if isinstance(payload, tuple):
        return sum(_scalar_bits(x) for x in payload)
    return _scalar_bits(payload)


def _scalar_bits(x) -> int:
    if x is None:
        return 1
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"messages carry ints, None or flat tuples, not {type(x).__name__}")
    return max(1, abs(x).bit_length()) + (1 if x < 0 else 0)


@dataclass
class SimConfig:
    bandwidth_c: int = 4
    bandwidth_bits: Optional[int] = None
    max_rounds: Optional[int] = None
    seed: int = 0
    trace: Optional[TextIO] = None

    def budget(self, id_space: int) -> int:
        """Per-edge per-round bit budget ``B`` for an id space of this size."""
        bits = id_bits(id_space)
        b = self.bandwidth_bits if self.bandwidth_bits is not None else self.bandwidth_c * bits
        if b < bits + 3:
            raise ValueError(f"bandwidth {b} cannot fit an id plus a tag ({bits + 3} bits)")
        return b

    def round_cap(self, n: int) -> int:
        return self.max_rounds if self.max_rounds is not None else 50 * n * n


@dataclass
class Phase:
    kind: str
    rounds: int = 0


@dataclass
class RoundReport:
    """Round and message accounting per phase label, plus a chained trace hash."""

    phases: dict = field(default_factory=dict)
    messages: int = 0
    max_bits: int = 0
    bandwidth: int = 0
    trace_hash: str = "0" * 16

    def _add(self, label: str, kind: str, rounds: int) -> None:
        entry = self.phases.get(label)
        if entry is None:
            self.phases[label] = Phase(kind, rounds)
        else:
            if entry.kind != kind:
                raise ValueError(f"phase {label!r} is {entry.kind}, not {kind}")
            entry.rounds += rounds

    def _chain(self, blob: bytes) -> None:
        h = hashlib.blake2b(bytes.fromhex(self.trace_hash), digest_size=8)
        h.update(blob)
        self.trace_hash = h.hexdigest()

    def _total(self, kind: str) -> int:
        return sum(p.rounds for p in self.phases.values() if p.kind == kind)

    @property
    def rounds_simulated(self) -> int:
        return self._total(SIMULATED)

    @property
    def rounds_charged(self) -> int:
        return self._total(CHARGED)

    @property
    def rounds_idle(self) -> int:
        return self._total(IDLE)

    @property
    def rounds_elapsed(self) -> int:
        return sum(p.rounds for p in self.phases.values())

    def rounds_of(self, prefix: str) -> int:
        return sum(p.rounds for label, p in self.phases.items()
                   if label == prefix or label.startswith(prefix + "/"))

    def record_simulation(self, label, rounds, messages, max_bits, digest, bandwidth):
        self._add(label, SIMULATED, rounds)
        self.messages += messages
        self.max_bits = max(self.max_bits, max_bits)
        self.bandwidth = max(self.bandwidth, bandwidth)
        self._chain(bytes.fromhex(digest))

    def absorb(self, other: "RoundReport", prefix: str = "") -> "RoundReport":
        """Append ``other`` sequentially, optionally prefixing its labels."""
        for label, p in other.phases.items():
            self._add(f"{prefix}/{label}" if prefix else label, p.kind, p.rounds)
        self.messages += other.messages
        self.max_bits = max(self.max_bits, other.max_bits)
        self.bandwidth = max(self.bandwidth, other.bandwidth)
        self._chain(bytes.fromhex(other.trace_hash))
        return self

    def merge_parallel(self, reports: list, prefix: str = "") -> "RoundReport":
        """Account for sub-runs executed concurrently on disjoint node sets.

        Rounds are those of the longest sub-run; messages add up; every
        sub-run still feeds the trace hash in order.
        """
        if not reports:
            return self
        longest = max(reports, key=lambda r: r.rounds_elapsed)
        for label, p in longest.phases.items():
            self._add(f"{prefix}/{label}" if prefix else label, p.kind, p.rounds)
        for r in reports:
            self.messages += r.messages
            self.max_bits = max(self.max_bits, r.max_bits)
            self.bandwidth = max(self.bandwidth, r.bandwidth)
            self._chain(bytes.fromhex(r.trace_hash))
        return self

    def summary(self) -> dict:
        return {
            "rounds_sim": self.rounds_simulated,
            "rounds_charged": self.rounds_charged,
            "rounds_idle": self.rounds_idle,
            "rounds_total": self.rounds_elapsed,
            "messages": self.messages,
            "max_bits": self.max_bits,
            "bandwidth": self.bandwidth,
            "trace_hash": self.trace_hash,
        }


def charge(report: RoundReport, phase: str, rounds: int) -> RoundReport:
    """Book ``rounds`` to ``phase`` without any message traffic."""
    if rounds < 0:
        raise ValueError("cannot charge a negative number of rounds")
    if rounds:
        report._add(phase, CHARGED, rounds)
        report._chain(f"charge:{phase}:{rounds}".encode())
    return report


def idle(report: RoundReport, phase: str, rounds: int) -> RoundReport:
    """Book rounds during which every node waits for its schedule slot to end."""
    if rounds < 0:
        raise ValueError("cannot idle a negative number of rounds")
    if rounds:
        report._add(phase, IDLE, rounds)
    return report


class NodeView:
    """Everything a node knows about the network at start-up."""

    __slots__ = ("id", "n", "ports", "rng", "input")

    def __init__(self, node, id_space, ports, rng, local_input):
        self.id = node
        self.n = id_space
        self.ports = ports
        self.rng = rng
        self.input = local_input

    def port_to(self, nbr: int) -> Optional[int]:
        for e, u in self.ports.items():
            if u == nbr:
                return e
        return None


class NodeProgram:
    """Base class for per-node programs.

    Subclasses override :meth:`setup`, :meth:`send` and :meth:`receive`. A
    program stops by setting ``self.halted``; messages returned by the same
    ``send`` call are still delivered. ``self.output`` is the local result.
    """

    def __init__(self):
        self.halted = False
        self.output: Any = None
        self.view: Optional[NodeView] = None

    def setup(self, view: NodeView) -> None:
        self.view = view

    def send(self, rnd: int) -> Mapping[int, Payload]:
        return {}

    def receive(self, rnd: int, inbox: Mapping[int, Payload]) -> None:
        pass

    def halt(self, output=None) -> None:
        if output is not None:
            self.output = output
        self.halted = True


ProgramSource = Union[Mapping[int, NodeProgram], Callable[[int], NodeProgram]]


def run(
    g: Graph,
    programs: ProgramSource,
    cfg: Optional[SimConfig] = None,
    *,
    inputs: Optional[Mapping[int, Any]] = None,
    report: Optional[RoundReport] = None,
    phase: str = "sim",
) -> tuple[dict, RoundReport]:
    """Run node programs on ``g`` until every node halts.

    Returns ``(outputs, report)``. When ``report`` is given the run is
    appended to it under ``phase``; otherwise a fresh report is created.
    """
    cfg = cfg or SimConfig()
    budget = cfg.budget(g.id_space)
    cap = cfg.round_cap(max(g.n, 2))
    inputs = inputs or {}
    progs: dict[int, NodeProgram] = {}
    for v in g.nodes:
        prog = programs(v) if callable(programs) else programs[v]
        ports = {e: g.other(e, v) for e in g.incident(v)}
        rng = random.Random(f"{cfg.seed}:{v}")
        prog.setup(NodeView(v, g.id_space, ports, rng, inputs.get(v)))
        progs[v] = prog

    digest = hashlib.blake2b(digest_size=8)
    messages = max_bits = rnd = 0
    while any(not p.halted for p in progs.values()):
        rnd += 1
        if rnd > cap:
            raise NonTermination(f"no termination within {cap} rounds")
        inboxes: dict[int, dict[int, Payload]] = {}
        for v in g.nodes:
            prog = progs[v]
            if prog.halted:
                continue
            out = prog.send(rnd) or {}
            for e in sorted(out):
                payload = out[e]
                if e not in prog.view.ports:
                    raise ValueError(f"node {v} has no port {e}")
                bits = payload_bits(payload)
                if bits > budget:
                    raise BandwidthViolation(v, e, rnd, bits, budget)
                messages += 1
                max_bits = max(max_bits, bits)
                record = repr((rnd, v, e, payload)).encode()
                digest.update(record)
                if cfg.trace is not None:
                    ph = hashlib.blake2b(repr(payload).encode(), digest_size=4).hexdigest()
                    cfg.trace.write(f"{rnd} {v} {e} {bits} {ph}\n")
                inboxes.setdefault(prog.view.ports[e], {})[e] = payload
        for v in g.nodes:
            prog = progs[v]
            if not prog.halted:
                prog.receive(rnd, inboxes.get(v, {}))

    report = report if report is not None else RoundReport()
    report.record_simulation(phase, rnd, messages, max_bits, digest.hexdigest(), budget)
    return {v: p.output for v, p in progs.items()}, report
