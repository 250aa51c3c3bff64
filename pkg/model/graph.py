"""PRUNE graph model: actors, ports, FIFOs and the control table.

`build_graph` turns a parsed graph document into an immutable `Graph` or raises a
`GraphError`; nothing half-built escapes.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import networkx as nx

from model.errors import (
    BadActorShape,
    DanglingPort,
    DuplicateId,
    GraphError,
    RateMismatch,
    TokenWidthMismatch,
    Uncontrolled,
    UnknownReference,
    suggest,
)

logger = logging.getLogger(__name__)

DEFAULT_TOKEN_BYTES = 4


class ActorKind(str, Enum):
    STATIC = "static"
    DYNAMIC = "dynamic"
    CONFIGURATION = "configuration"


class PortKind(str, Enum):
    SRP = "srp"
    DRP = "drp"
    CONTROL_IN = "control_in"
    CONTROL_OUT = "control_out"


class Direction(str, Enum):
    IN = "in"
    OUT = "out"


@dataclass(frozen=True)
class Port:
    actor: str
    id: str
    kind: PortKind
    direction: Direction
    atr: int = 1
    control_len: int = 0

    @property
    def key(self):
        return f"{self.actor}.{self.id}"

    @property
    def itr(self):
        # inactive token rate: zero for DRPs, the fixed rate otherwise
        return 0 if self.kind is PortKind.DRP else self.atr

    @property
    def is_control(self):
        return self.kind in (PortKind.CONTROL_IN, PortKind.CONTROL_OUT)

    @property
    def is_input(self):
        return self.direction is Direction.IN


@dataclass(frozen=True)
class Actor:
    id: str
    kind: ActorKind
    ports: tuple
    behavior: str = "passthrough"
    params: dict = field(default_factory=dict, hash=False)

    def port(self, port_id):
        for port in self.ports:
            if port.id == port_id:
                return port
        raise UnknownReference(f"actor {self.id} has no port {port_id}"
                               + suggest(port_id, [p.id for p in self.ports]))

    @property
    def inputs(self):
        return tuple(p for p in self.ports if p.is_input)

    @property
    def outputs(self):
        return tuple(p for p in self.ports if not p.is_input)

    @property
    def drps(self):
        return tuple(p for p in self.ports if p.kind is PortKind.DRP)

    @property
    def control_input(self):
        for port in self.ports:
            if port.kind is PortKind.CONTROL_IN:
                return port
        return None

    @property
    def is_source(self):
        return not self.inputs

    @property
    def is_sink(self):
        return not self.outputs


@dataclass(frozen=True)
class Fifo:
    id: str
    src: str
    dst: str
    rate: int
    delay: int = 0
    token_bytes: int = DEFAULT_TOKEN_BYTES
    delay_payloads: tuple = ()

    @property
    def src_actor(self):
        return self.src.split(".", 1)[0]

    @property
    def dst_actor(self):
        return self.dst.split(".", 1)[0]

    def initial_bytes(self):
        """Bytes of the delay tokens in stream order (zero-filled when not given)."""
        if self.delay_payloads:
            return b"".join(self.delay_payloads)
        return bytes(self.delay * self.token_bytes)


@dataclass(frozen=True)
class ControlTable:
    """Sparse control table T: (control output port, DRP) -> 1-based element index."""

    entries: dict = field(default_factory=dict, hash=False)
    lengths: dict = field(default_factory=dict, hash=False)

    def element(self, control_port, drp):
        return self.entries.get((control_port, drp), 0)

    def controllers(self, drp):
        return sorted((port, element) for (port, target), element in self.entries.items()
                      if target == drp and element > 0)

    def matrix(self, control_ports, drps):
        return [[self.element(port, drp) for drp in drps] for port in control_ports]


@dataclass(frozen=True)
class Graph:
    name: str
    actors: tuple
    fifos: tuple
    control_table: ControlTable = field(default_factory=ControlTable)

    @cached_property
    def _actors_by_id(self):
        return {actor.id: actor for actor in self.actors}

    @cached_property
    def _ports_by_key(self):
        return {port.key: port for actor in self.actors for port in actor.ports}

    @cached_property
    def _fifos_by_src(self):
        table = {}
        for fifo in self.fifos:
            table.setdefault(fifo.src, []).append(fifo)
        return {key: tuple(value) for key, value in table.items()}

    @cached_property
    def _fifo_by_dst(self):
        return {fifo.dst: fifo for fifo in self.fifos}

    def actor(self, actor_id):
        try:
            return self._actors_by_id[actor_id]
        except KeyError:
            raise UnknownReference(f"unknown actor {actor_id}"
                                   + suggest(actor_id, self._actors_by_id)) from None

    def port(self, key):
        try:
            return self._ports_by_key[key]
        except KeyError:
            raise UnknownReference(f"unknown port {key}"
                                   + suggest(key, self._ports_by_key)) from None

    def fifo(self, fifo_id):
        for fifo in self.fifos:
            if fifo.id == fifo_id:
                return fifo
        raise UnknownReference(f"unknown fifo {fifo_id}")

    def fifo_into(self, port_key):
        return self._fifo_by_dst.get(port_key)

    def fifos_from(self, port_key):
        return self._fifos_by_src.get(port_key, ())

    def fifos_of(self, port):
        if port.is_input:
            fifo = self.fifo_into(port.key)
            return (fifo,) if fifo else ()
        return self.fifos_from(port.key)

    def input_fifos(self, actor_id):
        return tuple(f for f in self.fifos if f.dst_actor == actor_id)

    def output_fifos(self, actor_id):
        return tuple(f for f in self.fifos if f.src_actor == actor_id)

    def actors_of_kind(self, kind):
        return tuple(a for a in self.actors if a.kind is kind)

    def controlled_actors(self, control_port):
        """Actors whose control input is fed by `control_port`, in FIFO order."""
        return tuple(f.dst_actor for f in self.fifos_from(control_port))


# Construction

def _parse_port(actor_id, doc):
    kind = PortKind(doc["kind"])
    if kind is PortKind.CONTROL_IN:
        direction = Direction.IN
    elif kind is PortKind.CONTROL_OUT:
        direction = Direction.OUT
    else:
        if "direction" not in doc:
            raise BadActorShape(f"port {actor_id}.{doc['id']} needs a direction")
        direction = Direction(doc["direction"])
    atr = 1 if kind in (PortKind.CONTROL_IN, PortKind.CONTROL_OUT) else int(doc.get("atr", 1))
    if atr < 1:
        raise RateMismatch(f"port {actor_id}.{doc['id']} has non-positive atr {atr}")
    control_len = int(doc.get("control_len", 0))
    if kind is PortKind.CONTROL_OUT and control_len < 1:
        raise BadActorShape(f"control port {actor_id}.{doc['id']} needs control_len >= 1")
    return Port(actor_id, doc["id"], kind, direction, atr, control_len)


def _check_actor_shape(actor):
    kinds = [p.kind for p in actor.ports]
    if actor.kind is ActorKind.STATIC:
        if any(k is not PortKind.SRP for k in kinds):
            raise BadActorShape(f"static actor {actor.id} may only have SRPs")
    elif actor.kind is ActorKind.DYNAMIC:
        if kinds.count(PortKind.CONTROL_IN) != 1:
            raise BadActorShape(f"dynamic actor {actor.id} needs exactly one control input")
        if PortKind.DRP not in kinds:
            raise BadActorShape(f"dynamic actor {actor.id} needs at least one DRP")
        if PortKind.CONTROL_OUT in kinds:
            raise BadActorShape(f"dynamic actor {actor.id} may not own control outputs")
    else:
        if PortKind.CONTROL_OUT not in kinds:
            raise BadActorShape(f"configuration actor {actor.id} needs a control output")
        if PortKind.DRP in kinds or PortKind.CONTROL_IN in kinds:
            raise BadActorShape(f"configuration actor {actor.id} may only have SRPs "
                                "and control outputs")


def _build_actors(document):
    actors = []
    seen = set()
    for doc in document.get("actors", []):
        actor_id = doc["id"]
        if actor_id in seen:
            raise DuplicateId(f"duplicate actor id {actor_id}")
        seen.add(actor_id)
        ports = []
        port_ids = set()
        for port_doc in doc.get("ports", []):
            if port_doc["id"] in port_ids:
                raise DuplicateId(f"duplicate port id {actor_id}.{port_doc['id']}")
            port_ids.add(port_doc["id"])
            ports.append(_parse_port(actor_id, port_doc))
        actor = Actor(actor_id, ActorKind(doc["kind"]), tuple(ports),
                      doc.get("behavior", "passthrough"), dict(doc.get("params", {})))
        _check_actor_shape(actor)
        actors.append(actor)
    return actors


def _resolve(ports, key, role, fifo_id):
    if key not in ports:
        raise UnknownReference(f"fifo {fifo_id} {role} {key} does not exist"
                               + suggest(key, ports))
    return ports[key]


def _decode_payload(value, fifo_id):
    if isinstance(value, (bytes, bytearray)):
        return bytes(value)
    try:
        return bytes.fromhex(value)
    except (TypeError, ValueError):
        raise GraphError(f"fifo {fifo_id} has a delay payload that is not hex") from None


def _build_fifos(document, ports):
    fifos = []
    seen = set()
    for doc in document.get("fifos", []):
        fifo_id = doc["id"]
        if fifo_id in seen:
            raise DuplicateId(f"duplicate fifo id {fifo_id}")
        seen.add(fifo_id)
        src = _resolve(ports, doc["src"], "source", fifo_id)
        dst = _resolve(ports, doc["dst"], "sink", fifo_id)
        if src.is_input:
            raise GraphError(f"fifo {fifo_id} source {src.key} is an input port")
        if not dst.is_input:
            raise GraphError(f"fifo {fifo_id} sink {dst.key} is an output port")
        if src.is_control != dst.is_control:
            raise GraphError(f"fifo {fifo_id} joins a control port to a data port")
        rate = int(doc.get("rate", src.atr))
        for port in (src, dst):
            if port.atr != rate:
                raise RateMismatch(f"fifo {fifo_id} has rate {rate} but atr({port.key}) "
                                   f"= {port.atr}")
        delay = int(doc.get("delay", 0))
        if delay < 0:
            raise GraphError(f"fifo {fifo_id} has negative delay {delay}")
        token_bytes = int(doc.get("token_bytes", DEFAULT_TOKEN_BYTES))
        if token_bytes < 1:
            raise GraphError(f"fifo {fifo_id} has non-positive token_bytes")
        payloads = tuple(_decode_payload(v, fifo_id) for v in doc.get("delay_payloads", []))
        if payloads and len(payloads) != delay:
            raise GraphError(f"fifo {fifo_id} has {len(payloads)} delay payloads for "
                             f"delay {delay}")
        if any(len(p) != token_bytes for p in payloads):
            raise GraphError(f"fifo {fifo_id} delay payloads must be {token_bytes} bytes")
        if src.kind is PortKind.CONTROL_OUT and token_bytes < src.control_len:
            raise TokenWidthMismatch(f"control fifo {fifo_id} holds {token_bytes} bytes "
                                     f"but {src.key} sends {src.control_len} elements")
        fifos.append(Fifo(fifo_id, src.key, dst.key, rate, delay, token_bytes, payloads))
    return fifos


def _check_connections(actors, fifos):
    by_dst = {}
    by_src = {}
    for fifo in fifos:
        by_dst.setdefault(fifo.dst, []).append(fifo)
        by_src.setdefault(fifo.src, []).append(fifo)
    for actor in actors:
        for port in actor.ports:
            if port.is_input:
                attached = by_dst.get(port.key, [])
                if not attached:
                    raise DanglingPort(f"input port {port.key} is not fed by any fifo")
                if len(attached) > 1:
                    raise GraphError(f"input port {port.key} is fed by "
                                     f"{len(attached)} fifos")
            else:
                attached = by_src.get(port.key, [])
                if not attached:
                    raise DanglingPort(f"output port {port.key} feeds no fifo")
                widths = {f.token_bytes for f in attached}
                if len(widths) > 1:
                    raise TokenWidthMismatch(f"broadcast fifos of {port.key} differ in "
                                             f"token_bytes {sorted(widths)}")


def _build_control_table(document, ports, fifos):
    entries = {}
    for doc in document.get("control", []):
        port = _resolve(ports, doc["port"], "control port", "control")
        drp = _resolve(ports, doc["drp"], "drp", "control")
        if port.kind is not PortKind.CONTROL_OUT:
            raise GraphError(f"control entry names {port.key}, which is not a control output")
        if drp.kind is not PortKind.DRP:
            raise GraphError(f"control entry names {drp.key}, which is not a DRP")
        if (port.key, drp.key) in entries:
            raise DuplicateId(f"control entry {port.key} -> {drp.key} given twice")
        element = int(doc["element"])
        if element < 0 or element > port.control_len:
            raise GraphError(f"control entry {port.key} -> {drp.key} uses element "
                             f"{element} outside 1..{port.control_len}")
        entries[(port.key, drp.key)] = element
    lengths = {key: port.control_len for key, port in ports.items()
               if port.kind is PortKind.CONTROL_OUT}
    table = ControlTable(entries, lengths)

    feeds = {fifo.dst: fifo.src for fifo in fifos}
    for port in ports.values():
        if port.kind is not PortKind.DRP:
            continue
        controllers = table.controllers(port.key)
        if not controllers:
            raise Uncontrolled(f"DRP {port.key} has no controlling control port")
        if len(controllers) > 1:
            raise GraphError(f"DRP {port.key} is controlled by "
                             f"{', '.join(c for c, _ in controllers)}")
        control_port = controllers[0][0]
        cport = f"{port.actor}.{_control_input_id(ports, port.actor)}"
        if feeds.get(cport) != control_port:
            raise GraphError(f"DRP {port.key} is controlled by {control_port} but "
                             f"{cport} is fed by {feeds.get(cport)}")
    return table


def _control_input_id(ports, actor_id):
    for port in ports.values():
        if port.actor == actor_id and port.kind is PortKind.CONTROL_IN:
            return port.id
    raise BadActorShape(f"actor {actor_id} owns DRPs but no control input")


def build_graph(document):
    """Build and validate a Graph from a parsed graph document (a mapping)."""
    actors = _build_actors(document)
    ports = {port.key: port for actor in actors for port in actor.ports}
    fifos = _build_fifos(document, ports)
    _check_connections(actors, fifos)
    table = _build_control_table(document, ports, fifos)
    graph = Graph(document.get("name", "graph"), tuple(actors), tuple(fifos), table)
    logger.debug("built graph %s: %d actors, %d fifos", graph.name, len(actors), len(fifos))
    return graph


def adjacency(graph):
    """Undirected actor adjacency; parallel FIFOs collapse to one edge, self-loops drop."""
    relation = nx.Graph()
    relation.add_nodes_from(actor.id for actor in graph.actors)
    for fifo in graph.fifos:
        if fifo.src_actor != fifo.dst_actor:
            relation.add_edge(fifo.src_actor, fifo.dst_actor)
    return relation


def control_lookup(graph, drp):
    """Return (controlling control port key, 1-based element index) for a DRP."""
    port = drp if isinstance(drp, Port) else graph.port(drp)
    if port.kind is not PortKind.DRP:
        raise GraphError(f"{port.key} is not a DRP")
    controllers = graph.control_table.controllers(port.key)
    if not controllers:
        raise Uncontrolled(f"DRP {port.key} has no controlling control port")
    if len(controllers) > 1:
        raise GraphError(f"DRP {port.key} is controlled more than once")
    return controllers[0]
