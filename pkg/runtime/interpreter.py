"""Single-threaded reference interpreter used as the oracle for the threaded runtime.

Execution proceeds in passes: within a pass every actor fires at most once, always
picking the lexicographically first fireable actor. Queues are unbounded and only
observed, so occupancy beyond the analysed bounds shows up instead of blocking.
"""

import hashlib
import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from analyzer.consistency import analyze
from model.errors import InconsistentGraph, OracleDeadlock, ProtocolError
from model.graph import ActorKind
from runtime.behaviors import FiringContext, resolve_behaviors
from runtime.config import RuntimeConfig
from runtime.control import ControlToken, control_width, drp_elements, token_rates

logger = logging.getLogger(__name__)

READY = "ready"
WAIT = "wait"
EOS = "eos"


class TokenQueue:
    def __init__(self, fifo):
        self.fifo = fifo
        self.width = fifo.token_bytes
        self.data = bytearray(fifo.initial_bytes())
        self.head = 0
        self.written = 0
        self.released = 0
        self.closed = False

    @property
    def tokens(self):
        return (len(self.data) - self.head) // self.width

    @property
    def at_eos(self):
        return self.closed and self.released >= self.written

    def peek(self, count):
        return bytes(self.data[self.head:self.head + count * self.width])

    def push(self, raw):
        self.data.extend(raw)
        self.written += len(raw) // self.width

    def pop(self, count):
        self.head += count * self.width
        self.released += count
        if self.head > 1 << 16:
            del self.data[:self.head]
            self.head = 0


@dataclass
class InterpState:
    queues: dict
    firing_log: list = field(default_factory=list)  # (actor, firing index)
    events: list = field(default_factory=list)  # (fifo, op, occupancy)


@dataclass
class InterpretResult:
    graph: str
    outputs: dict
    sink_digests: dict
    firing_log: list
    firing_counts: dict
    max_occupancy: dict
    port_tokens: dict


def max_occupancy(events, initial=None):
    """Per-FIFO maxima over an event log, starting from the initial (delay) counts."""
    maxima = dict(initial or {})
    for fifo_id, _, occupancy in events:
        maxima[fifo_id] = max(maxima.get(fifo_id, 0), occupancy)
    return maxima


class _Interpreter:
    def __init__(self, graph, behaviors, config):
        self.graph = graph
        self.behaviors = behaviors
        self.config = config
        self.state = InterpState({f.id: TokenQueue(f) for f in graph.fifos})
        self.firings = {a.id: 0 for a in graph.actors}
        self.finished = set()
        self.moved = Counter()
        self.sinks = {a.id: (hashlib.sha256(), bytearray()) for a in graph.actors if a.is_sink}

    def queue_into(self, port):
        return self.state.queues[self.graph.fifo_into(port.key).id]

    def _log(self, queue, op):
        event = (queue.fifo.id, op, queue.tokens)
        self.state.events.append(event)
        if self.config.trace is not None:
            self.config.trace.record(*event)

    def readiness(self, actor):
        """(status, control token, rates) for the actor's next firing."""
        token = None
        if actor.is_source:
            if self.firings[actor.id] >= self.config.firings_for(actor.id):
                return EOS, None, None
            return READY, None, token_rates(actor)
        if actor.kind is ActorKind.DYNAMIC:
            control = self.queue_into(actor.control_input)
            if control.at_eos:
                return EOS, None, None
            if control.tokens < 1:
                return WAIT, None, None
            token = ControlToken.decode(np.frombuffer(control.peek(1), dtype=np.uint8),
                                        control_width(self.graph, actor))
            elements = drp_elements(self.graph, actor)
            rates = token_rates(actor, {p: token.element(e) for p, e in elements.items()})
        else:
            rates = token_rates(actor)
        for port in actor.inputs:
            if port.is_control or not rates[port.id]:
                continue
            queue = self.queue_into(port)
            if queue.at_eos:
                return EOS, None, None
            if queue.tokens < rates[port.id]:
                return WAIT, None, None
        return READY, token, rates

    def _activation(self, actor, token):
        elements = drp_elements(self.graph, actor)
        activation = self.behaviors[actor.id].control(token, elements)
        expected = {port_id: token.element(e) for port_id, e in elements.items()}
        if dict(activation) != expected:
            raise ProtocolError(f"{actor.id}: activation {activation} does not follow "
                                f"the control table {expected}")
        return activation

    def fire(self, actor, token, rates):
        index = self.firings[actor.id]
        if token is not None:
            self._activation(actor, token)
        inputs = {}
        taken = []
        for port in actor.inputs:
            queue = self.queue_into(port)
            if port.is_control:
                taken.append((queue, 1, port))
                continue
            count = rates[port.id]
            inputs[port.id] = np.frombuffer(queue.peek(count), dtype=np.uint8)
            if count:
                taken.append((queue, count, port))
        outputs = {}
        for port in actor.outputs:
            fifos = self.graph.fifos_from(port.key)
            size = rates[port.id] * fifos[0].token_bytes if rates[port.id] else 0
            outputs[port.id] = np.zeros(size, dtype=np.uint8)

        self.behaviors[actor.id].fire(FiringContext(actor.id, index, inputs, outputs,
                                                    rates, token))

        if actor.id in self.sinks:
            digest, data = self.sinks[actor.id]
            for port in actor.inputs:
                if not port.is_control and rates[port.id]:
                    raw = inputs[port.id].tobytes()
                    digest.update(raw)
                    data.extend(raw)
        for port in actor.outputs:
            if not rates[port.id]:
                continue
            for fifo in self.graph.fifos_from(port.key):
                queue = self.state.queues[fifo.id]
                queue.push(outputs[port.id].tobytes())
                self._log(queue, "w")
            self.moved[port.key] += rates[port.id]
        for queue, count, port in taken:
            queue.pop(count)
            self._log(queue, "r")
            self.moved[port.key] += count
        self.firings[actor.id] = index + 1
        self.state.firing_log.append((actor.id, index))

    def finish(self, actor):
        self.behaviors[actor.id].finish()
        self.finished.add(actor.id)
        for port in actor.outputs:
            for fifo in self.graph.fifos_from(port.key):
                self.state.queues[fifo.id].closed = True

    def run(self):
        actors = sorted(self.graph.actors, key=lambda a: a.id)
        while True:
            fired = set()
            while True:
                chosen = None
                for actor in actors:
                    if actor.id in self.finished or actor.id in fired:
                        continue
                    status, token, rates = self.readiness(actor)
                    if status == READY:
                        chosen = (actor, token, rates)
                        break
                if chosen is None:
                    break
                self.fire(*chosen)
                fired.add(chosen[0].id)
            if fired:
                continue
            ending = [a for a in actors if a.id not in self.finished
                      and self.readiness(a)[0] == EOS]
            if ending:
                for actor in ending:
                    self.finish(actor)
                continue
            pending = [a.id for a in actors if a.id not in self.finished]
            if not pending:
                return
            state = ", ".join(f"{q.fifo.id}={q.tokens}"
                              for q in self.state.queues.values() if q.tokens)
            raise OracleDeadlock(f"no fireable actor among {', '.join(pending)}; "
                                 f"tokens {state or 'none'}")


def interpret(graph, behaviors=None, config=None, report=None):
    config = config or RuntimeConfig()
    report = report or analyze(graph)
    if not report.consistent:
        raise InconsistentGraph(report)
    behaviors = behaviors if behaviors is not None else resolve_behaviors(graph, config)
    for actor in graph.actors:
        behaviors[actor.id].init()

    machine = _Interpreter(graph, behaviors, config)
    machine.run()
    state = machine.state
    initial = {f.id: f.delay for f in graph.fifos}
    logger.info("interpreted %s: %d firings", graph.name, len(state.firing_log))
    return InterpretResult(
        graph=graph.name,
        outputs={a: bytes(data) for a, (_, data) in sorted(machine.sinks.items())},
        sink_digests={a: d.hexdigest() for a, (d, _) in sorted(machine.sinks.items())},
        firing_log=state.firing_log,
        firing_counts=dict(sorted(machine.firings.items())),
        max_occupancy=max_occupancy(state.events, initial),
        port_tokens=dict(sorted(machine.moved.items())),
    )
