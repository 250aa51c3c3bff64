"""Chains, connecting subchains and linked DRP discovery."""

import logging
from dataclasses import dataclass

import networkx as nx

from model.graph import ActorKind, Direction, PortKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chain:
    actors: tuple

    def __post_init__(self):
        if not self.actors:
            raise ValueError("a chain needs at least one actor")

    @property
    def is_simple(self):
        return len(set(self.actors)) == len(self.actors)

    def __str__(self):
        return "(" + ", ".join(self.actors) + ")"


@dataclass(frozen=True)
class LinkedDrpPair:
    px: str  # output DRP of x
    py: str  # input DRP of y
    direct: bool  # fifo(px) = fifo(py)
    subchains: tuple = ()

    @property
    def x(self):
        return self.px.split(".", 1)[0]

    @property
    def y(self):
        return self.py.split(".", 1)[0]

    @property
    def parents(self):
        return frozenset((self.x, self.y))


def _subchain_paths(relation, start, end):
    if start == end:
        return [[start]]
    return list(nx.all_simple_paths(relation, start, end))


def _linking_relation(graph, x, y):
    """Actor adjacency without x, y and without any FIFO that ends at a DRP.

    Other dynamic actors stay in, joined only by their non-DRP FIFOs, so a chain can
    run into one but never through a DRP link of another pair.
    """
    relation = nx.Graph()
    relation.add_nodes_from(a.id for a in graph.actors if a.id not in (x, y))
    for fifo in graph.fifos:
        if fifo.src_actor == fifo.dst_actor or {fifo.src_actor, fifo.dst_actor} & {x, y}:
            continue
        if PortKind.DRP in (graph.port(fifo.src).kind, graph.port(fifo.dst).kind):
            continue
        relation.add_edge(fifo.src_actor, fifo.dst_actor)
    return relation


def _heads(graph, x):
    """Actors fed by an output DRP of x."""
    return {f.dst_actor for p in graph.actor(x).drps if p.direction is Direction.OUT
            for f in graph.fifos_from(p.key)} - {x}


def _tails(graph, y):
    """Actors feeding an input DRP of y."""
    return {graph.fifo_into(p.key).src_actor for p in graph.actor(y).drps
            if p.direction is Direction.IN} - {y}


def _side_neighbors(graph, actor_id):
    """Actors joined to actor_id by a FIFO on one of its non-DRP ports."""
    found = set()
    for fifo in graph.input_fifos(actor_id) + graph.output_fifos(actor_id):
        own, other = (fifo.dst, fifo.src_actor) if fifo.dst_actor == actor_id else (
            fifo.src, fifo.dst_actor)
        if graph.port(own).kind is not PortKind.DRP:
            found.add(other)
    return found


def find_linked_drps(graph):
    """Every linked DRP pair {px, py} with px an output DRP and py an input DRP.

    Connecting subchains run from the actor px feeds to the actor feeding py over the
    undirected adjacency with x, y and every DRP FIFO removed. A dynamic actor reached
    through its other ports lands on the subchain, where rule 3 reports it.
    """
    dynamic = [a for a in graph.actors if a.kind is ActorKind.DYNAMIC]
    relations = {}

    pairs = []
    for x in dynamic:
        for px in x.drps:
            if px.direction is not Direction.OUT:
                continue
            px_fifos = graph.fifos_from(px.key)
            for y in dynamic:
                if y.id == x.id:
                    continue
                if (x.id, y.id) not in relations:
                    relations[(x.id, y.id)] = _linking_relation(graph, x.id, y.id)
                interior = relations[(x.id, y.id)]
                heads = sorted({f.dst_actor for f in px_fifos} & set(interior.nodes))
                for py in y.drps:
                    if py.direction is not Direction.IN:
                        continue
                    fifo_y = graph.fifo_into(py.key)
                    direct = fifo_y in px_fifos
                    tail = fifo_y.src_actor
                    subchains = set()
                    if tail in interior:
                        for head in heads:
                            for path in _subchain_paths(interior, head, tail):
                                subchains.add(Chain(tuple(path)))
                    if direct or subchains:
                        ordered = tuple(sorted(subchains, key=lambda c: c.actors))
                        pairs.append(LinkedDrpPair(px.key, py.key, direct, ordered))
    pairs.sort(key=lambda p: (p.px, p.py))
    logger.debug("graph %s: %d linked DRP pairs", graph.name, len(pairs))
    return pairs


def connecting_actors(graph, x, y):
    """Actors on some chain from an output DRP of x to an input DRP of y.

    The chain never passes through an actor wired to x or y by a non-DRP port, so a
    source feeding x does not count as lying between x and y.
    """
    blocked = _side_neighbors(graph, x) | _side_neighbors(graph, y)
    relation = _linking_relation(graph, x, y)
    relation = relation.subgraph(n for n in relation.nodes if n not in blocked)
    found = set()
    for head in _heads(graph, x) & set(relation.nodes):
        for tail in _tails(graph, y) & set(relation.nodes):
            for path in _subchain_paths(relation, head, tail):
                found.update(path)
    return found
