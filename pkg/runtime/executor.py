"""Threaded runtime: one OS thread per actor over blocking SPSC channels."""

import hashlib
import logging
import os
import threading
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from analyzer.consistency import analyze
from fifo.channel import Channel
from model.errors import (
    ActorPanic,
    AllocationFailure,
    InconsistentGraph,
    Poisoned,
    ProtocolError,
    Timeout,
    UnknownReference,
)
from model.graph import ActorKind
from runtime.behaviors import EMPTY, FiringContext, resolve_behaviors
from runtime.config import RuntimeConfig
from runtime.control import ControlToken, control_width, drp_elements, token_rates

logger = logging.getLogger(__name__)


@dataclass
class RunReport:
    graph: str
    sink_digests: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    max_occupancy: dict = field(default_factory=dict)
    firing_counts: dict = field(default_factory=dict)
    port_tokens: dict = field(default_factory=dict)  # port key -> tokens moved
    wall_time: float = 0.0
    slots: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)

    @property
    def throughput(self):
        """Sink firings per second."""
        fired = sum(self.firing_counts.get(actor, 0) for actor in self.sink_digests)
        return fired / self.wall_time if self.wall_time > 0 else 0.0


class SinkRecorder:
    def __init__(self, keep):
        self.digest = hashlib.sha256()
        self.data = bytearray() if keep else None

    def add(self, spans):
        for span in spans:
            raw = span.tobytes()
            self.digest.update(raw)
            if self.data is not None:
                self.data.extend(raw)


class Runtime:
    def __init__(self, graph, behaviors, config, report, channels):
        self.graph = graph
        self.behaviors = behaviors
        self.config = config
        self.analysis = report
        self.channels = channels
        self.threads = []
        self.panics = {}
        self.firing_counts = {}
        self.port_tokens = Counter()
        self.sinks = {a.id: SinkRecorder(config.keep_outputs) for a in graph.actors if a.is_sink}
        self.started = False
        self._lock = threading.Lock()

    def channel_into(self, port):
        return self.channels[self.graph.fifo_into(port.key).id]

    def channels_from(self, port):
        return [self.channels[f.id] for f in self.graph.fifos_from(port.key)]

    def poison_all(self):
        for channel in self.channels.values():
            channel.poison()

    def panic(self, actor_id, exc):
        with self._lock:
            self.panics.setdefault(actor_id, exc)
        self.poison_all()

    def settle(self, actor_id, firings, moved):
        with self._lock:
            self.firing_counts[actor_id] = firings
            self.port_tokens.update(moved)

    def report(self, wall_time):
        return RunReport(
            graph=self.graph.name,
            sink_digests={a: r.digest.hexdigest() for a, r in sorted(self.sinks.items())},
            outputs={a: bytes(r.data) for a, r in sorted(self.sinks.items())
                     if r.data is not None},
            max_occupancy={f: c.max_occupancy for f, c in self.channels.items()},
            firing_counts=dict(sorted(self.firing_counts.items())),
            port_tokens=dict(sorted(self.port_tokens.items())),
            wall_time=wall_time,
            slots={f: c.plan.slots for f, c in self.channels.items()},
            bounds={f: c.bound for f, c in self.channels.items()},
        )


def instantiate(graph, behaviors=None, config=None, report=None):
    """Allocate channels with delay payloads, resolve behaviors and run init hooks."""
    config = config or RuntimeConfig()
    report = report or analyze(graph)
    if not report.consistent:
        raise InconsistentGraph(report)
    behaviors = behaviors if behaviors is not None else resolve_behaviors(graph, config)
    missing = [a.id for a in graph.actors if a.id not in behaviors]
    if missing:
        raise UnknownReference(f"no behavior for actors {', '.join(missing)}")

    channels = {}
    for fifo in graph.fifos:
        beta = report.bounds.beta.get(fifo.id, fifo.delay + fifo.rate)
        try:
            channel = Channel(fifo, config.c_factor, beta, config.trace)
        except MemoryError as exc:
            raise AllocationFailure(f"fifo {fifo.id}: {exc}") from None
        if channel.plan.slots < beta:
            raise AllocationFailure(f"fifo {fifo.id} gets {channel.plan.slots} slots for "
                                    f"C={config.c_factor} but needs {beta}")
        channels[fifo.id] = channel

    for actor in graph.actors:
        behaviors[actor.id].init()
    logger.info("instantiated %s: %d actors, %d channels", graph.name, len(graph.actors),
                len(channels))
    return Runtime(graph, behaviors, config, report, channels)


def _pin(actor_id, config):
    core = config.core_pinning.get(actor_id)
    if core is None:
        return
    if not hasattr(os, "sched_setaffinity"):
        logger.warning("core pinning is not available here; %s runs unpinned", actor_id)
        return
    try:
        os.sched_setaffinity(0, {core})
    except OSError as exc:
        logger.warning("cannot pin %s to core %d: %s", actor_id, core, exc)


def _fire_until_done(runtime, actor, moved):
    graph = runtime.graph
    config = runtime.config
    behavior = runtime.behaviors[actor.id]
    limit = config.firings_for(actor.id) if actor.is_source else None
    jitter = None
    if config.jitter_ms:
        index = [a.id for a in graph.actors].index(actor.id)
        jitter_seed = config.jitter_seed if config.jitter_seed is not None else config.seed
        jitter = np.random.default_rng([jitter_seed or 0, index])

    control = None
    if actor.kind is ActorKind.DYNAMIC:
        control = runtime.channel_into(actor.control_input)
        width = control_width(graph, actor)
        elements = drp_elements(graph, actor)
    in_ports = [p for p in actor.inputs if not p.is_control]
    out_ports = list(actor.outputs)
    static_rates = token_rates(actor) if control is None else None
    recorder = runtime.sinks.get(actor.id)

    firings = 0
    while limit is None or firings < limit:
        token = None
        rates = static_rates
        if control is not None:
            span = control.read_start()
            if span is None:
                break
            token = ControlToken.decode(span, width)
            control.read_end()
            moved[actor.control_input.key] += 1
            activation = behavior.control(token, elements)
            expected = {port_id: token.element(e) for port_id, e in elements.items()}
            if dict(activation) != expected:
                raise ProtocolError(f"{actor.id}: activation {activation} does not follow "
                                    f"the control table {expected}")
            rates = token_rates(actor, activation)

        inputs = {}
        reads = []
        for port in in_ports:
            if not rates[port.id]:
                inputs[port.id] = EMPTY
                continue
            channel = runtime.channel_into(port)
            span = channel.read_start()
            if span is None:
                return firings
            inputs[port.id] = span
            reads.append(channel)

        outputs = {}
        writes = []
        for port in out_ports:
            if not rates[port.id]:
                outputs[port.id] = np.zeros(0, dtype=np.uint8)
                continue
            targets = runtime.channels_from(port)
            spans = [c.write_start() for c in targets]
            outputs[port.id] = spans[0]
            writes.append((targets, spans))

        if jitter is not None:
            time.sleep(jitter.uniform(0, config.jitter_ms) / 1000.0)
        behavior.fire(FiringContext(actor.id, firings, inputs, outputs, rates, token))
        logger.debug("%s fired #%d", actor.id, firings)

        if recorder is not None:
            recorder.add(inputs[p.id] for p in in_ports if rates[p.id])
        for targets, spans in writes:
            for extra in spans[1:]:
                extra[:] = spans[0]
            for channel in targets:
                channel.write_end()
        for channel in reads:
            channel.read_end()
        for port in in_ports + out_ports:
            if rates[port.id]:
                moved[port.key] += rates[port.id]
        firings += 1
    return firings


def actor_loop(runtime, actor):
    """Thread body: control, read, fire, write until end-of-stream, then finish."""
    _pin(actor.id, runtime.config)
    moved = Counter()
    firings = 0
    try:
        firings = _fire_until_done(runtime, actor, moved)
        runtime.behaviors[actor.id].finish()
    except Poisoned:
        logger.debug("%s stopped on a poisoned fifo", actor.id)
        return
    except Exception as exc:
        logger.error("actor %s panicked", actor.id, exc_info=True)
        runtime.panic(actor.id, exc)
        return
    finally:
        runtime.settle(actor.id, firings, moved)
    for port in actor.outputs:
        for channel in runtime.channels_from(port):
            channel.close()


def shutdown(runtime, abort=False):
    """Join every actor thread; poison the channels first when aborting."""
    if abort:
        runtime.poison_all()
    deadline = time.monotonic() + runtime.config.timeout_ms / 1000.0
    for thread in runtime.threads:
        thread.join(max(0.0, deadline - time.monotonic()))
    stuck = [t.name for t in runtime.threads if t.is_alive()]
    if stuck:
        runtime.poison_all()
        for thread in runtime.threads:
            thread.join(1.0)
        raise Timeout(runtime.config.timeout_ms, stuck)


def run(runtime):
    if runtime.started:
        raise ProtocolError("a runtime runs once")
    runtime.started = True
    logger.info("running %s", runtime.graph.name)
    start = time.perf_counter()
    for actor in runtime.graph.actors:
        thread = threading.Thread(target=actor_loop, args=(runtime, actor),
                                  name=actor.id, daemon=True)
        runtime.threads.append(thread)
        thread.start()
    shutdown(runtime)
    wall_time = time.perf_counter() - start
    if runtime.panics:
        actor_id = sorted(runtime.panics)[0]
        raise ActorPanic(actor_id, runtime.panics[actor_id])
    report = runtime.report(wall_time)
    logger.info("%s finished in %.3f s, %d firings", runtime.graph.name, wall_time,
                sum(report.firing_counts.values()))
    return report
