"""One-period schedules and buffer bounds for analysis regions."""

import logging
from dataclasses import dataclass, field

import networkx as nx

from model.errors import DeadlockError
from model.graph import PortKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Region:
    name: str
    actors: tuple
    fifos: tuple


@dataclass(frozen=True)
class Schedule:
    region: str
    firings: tuple  # ((actor, count), ...) in firing order
    max_tokens: dict = field(default_factory=dict, hash=False)
    final_tokens: dict = field(default_factory=dict, hash=False)

    @property
    def order(self):
        return tuple(actor for actor, _ in self.firings)


@dataclass(frozen=True)
class BufferBounds:
    per_region: dict = field(default_factory=dict, hash=False)  # region -> fifo -> B_k(f)
    beta: dict = field(default_factory=dict, hash=False)  # fifo -> max over regions


def static_region(graph):
    """The whole graph with every dynamic component treated as active."""
    return Region("static", tuple(sorted(a.id for a in graph.actors)), graph.fifos)


def dc_region(graph, dpg, dc):
    """A DC together with x and y and the FIFOs among them (control FIFOs excluded)."""
    if dc.dummy:
        direct = set(zip(dc.in_drps, dc.out_drps))
        fifos = tuple(f for f in graph.fifos if (f.src, f.dst) in direct)
        actors = (dpg.x, dpg.y)
    else:
        actors = tuple(dc.actors) + (dpg.x, dpg.y)
        members = set(actors)
        fifos = tuple(f for f in graph.fifos
                      if f.src_actor in members and f.dst_actor in members
                      and graph.port(f.src).kind is not PortKind.CONTROL_OUT
                      and not (f.src_actor == dpg.x and f.dst_actor == dpg.y))
    return Region(f"{dpg.name}.{dc.label}", tuple(sorted(actors)), fifos)


def _stuck_cycle(pending, fifos, tokens):
    waits = nx.DiGraph()
    waits.add_nodes_from(pending)
    for fifo in fifos:
        if fifo.src_actor in waits and fifo.dst_actor in waits and tokens[fifo.id] < fifo.rate:
            waits.add_edge(fifo.src_actor, fifo.dst_actor)
    try:
        edges = nx.find_cycle(waits)
    except nx.NetworkXNoCycle:
        return ()
    return tuple(u for u, _ in edges) + (edges[0][0],)


def compute_schedule(region):
    """Fire every region actor once, lexicographically first fireable actor first.

    Outputs of a firing are counted before its inputs are released, so the recorded
    maxima match a runtime that holds input spans while it writes.
    """
    tokens = {f.id: f.delay for f in region.fifos}
    peak = dict(tokens)
    inputs = {a: [f for f in region.fifos if f.dst_actor == a] for a in region.actors}
    outputs = {a: [f for f in region.fifos if f.src_actor == a] for a in region.actors}

    pending = sorted(region.actors)
    firings = []
    while pending:
        ready = [a for a in pending if all(tokens[f.id] >= f.rate for f in inputs[a])]
        if not ready:
            starved = {f.id: tokens[f.id] for a in pending for f in inputs[a]
                       if tokens[f.id] < f.rate}
            raise DeadlockError(region.name, pending, starved,
                                _stuck_cycle(pending, region.fifos, tokens))
        actor = ready[0]
        for f in outputs[actor]:
            tokens[f.id] += f.rate
            peak[f.id] = max(peak[f.id], tokens[f.id])
        for f in inputs[actor]:
            tokens[f.id] -= f.rate
        pending.remove(actor)
        firings.append((actor, 1))

    logger.debug("region %s scheduled: %s", region.name, " ".join(a for a, _ in firings))
    return Schedule(region.name, tuple(firings), peak, tokens)


def compute_bounds(schedules):
    per_region = {}
    beta = {}
    for schedule in schedules:
        per_region[schedule.region] = dict(schedule.max_tokens)
        for fifo_id, count in schedule.max_tokens.items():
            beta[fifo_id] = max(beta.get(fifo_id, 0), count)
    return BufferBounds(per_region, beta)
