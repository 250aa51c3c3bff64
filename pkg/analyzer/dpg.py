"""Dynamic processing graphs (DPGs) and their dynamic components (DCs)."""

import logging
from dataclasses import dataclass, replace

import networkx as nx

from model.errors import OrphanDynamicActor, SharedMembership
from model.graph import ActorKind, Direction, adjacency, control_lookup
from rules.chains import find_linked_drps

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    subjects: tuple
    message: str

    def line(self):
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class DynamicComponent:
    id: int
    actors: tuple  # member actors, or just the dummy name
    in_drps: tuple  # DRPs of x feeding the component
    out_drps: tuple  # DRPs of y fed by the component
    dummy: bool = False

    @property
    def label(self):
        return f"Z{self.id}"

    def membership(self):
        return "{" + ", ".join(self.actors) + "}"


@dataclass(frozen=True)
class Dpg:
    name: str
    q: str
    control_port: str
    x: str
    y: str
    control_value_len: int
    dcs: tuple = ()

    @property
    def dyn_pair(self):
        return (self.x, self.y)

    @property
    def members(self):
        actors = {self.q, self.x, self.y}
        for dc in self.dcs:
            if not dc.dummy:
                actors.update(dc.actors)
        return frozenset(actors)


def identify_dpgs(graph, pairs=None):
    """Pair every dynamic actor with its single partner; DCs are filled in later."""
    pairs = find_linked_drps(graph) if pairs is None else pairs
    partners = {}
    for pair in pairs:
        partners.setdefault(pair.x, set()).add(pair.y)
        partners.setdefault(pair.y, set()).add(pair.x)

    for actor in graph.actors_of_kind(ActorKind.DYNAMIC):
        found = partners.get(actor.id)
        if not found:
            raise OrphanDynamicActor(f"dynamic actor {actor.id} has no linked partner")
        if len(found) > 1:
            raise SharedMembership(f"dynamic actor {actor.id} is linked to "
                                   f"{', '.join(sorted(found))}")

    dpgs = []
    seen = set()
    for pair in pairs:
        if (pair.x, pair.y) in seen:
            continue
        seen.add((pair.x, pair.y))
        if pair.x in {d.y for d in dpgs} or pair.y in {d.x for d in dpgs}:
            raise SharedMembership(f"actors {pair.x} and {pair.y} take both sides of a DPG")
        control_port, _ = control_lookup(graph, pair.px)
        q = control_port.split(".", 1)[0]
        length = graph.control_table.lengths[control_port]
        dpgs.append(Dpg(f"D{len(dpgs) + 1}", q, control_port, pair.x, pair.y, length))
    logger.debug("graph %s: %d DPGs", graph.name, len(dpgs))
    return dpgs


def _dummy_names(graph, count):
    names = ["d"] if count == 1 else [f"d{i}" for i in range(1, count + 1)]
    taken = {a.id for a in graph.actors}
    result = []
    for name in names:
        while name in taken:
            name = "_" + name
        result.append(name)
    return result


def decompose_dcs(graph, dpg):
    """Insert dummies on direct x->y FIFOs, drop q, x and y, and take components."""
    x = graph.actor(dpg.x)
    y = graph.actor(dpg.y)
    removed = {dpg.q, dpg.x, dpg.y}
    interior = adjacency(graph).subgraph(
        a.id for a in graph.actors if a.id not in removed and a.kind is not ActorKind.DYNAMIC)

    components = {}  # frozenset of actors -> [in_drps, out_drps, order]
    direct = []  # (px, py) per direct FIFO
    for order, px in enumerate(p for p in x.drps if p.direction is Direction.OUT):
        for fifo in graph.fifos_from(px.key):
            if fifo.dst_actor == dpg.y:
                direct.append((order, px.key, fifo.dst))
            elif fifo.dst_actor in interior:
                members = frozenset(nx.node_connected_component(interior, fifo.dst_actor))
                entry = components.setdefault(members, [[], [], order])
                entry[0].append(px.key)
    offset = len(x.drps)
    for order, py in enumerate(p for p in y.drps if p.direction is Direction.IN):
        fifo = graph.fifo_into(py.key)
        if fifo.src_actor in interior:
            members = frozenset(nx.node_connected_component(interior, fifo.src_actor))
            entry = components.setdefault(members, [[], [], offset + order])
            entry[1].append(py.key)

    ordered = []
    for members, (ins, outs, order) in components.items():
        ordered.append((order, tuple(sorted(members)), tuple(ins), tuple(outs), False))
    for (order, px, py), name in zip(direct, _dummy_names(graph, len(direct))):
        ordered.append((order, (name,), (px,), (py,), True))
    ordered.sort(key=lambda item: (item[0], item[1]))

    dcs = tuple(DynamicComponent(k, actors, ins, outs, dummy)
                for k, (_, actors, ins, outs, dummy) in enumerate(ordered, start=1))
    logger.debug("%s: %d dynamic components", dpg.name, len(dcs))
    return replace(dpg, dcs=dcs)


def _leaks(graph, dpg):
    """FIFOs of DC members that end somewhere other than the DC, x's output DRPs or y's
    input DRPs."""
    x_out = {p.key for p in graph.actor(dpg.x).drps if p.direction is Direction.OUT}
    y_in = {p.key for p in graph.actor(dpg.y).drps if p.direction is Direction.IN}
    for dc in dpg.dcs:
        if dc.dummy:
            continue
        members = set(dc.actors)
        seen = set()
        for actor_id in dc.actors:
            for fifo in graph.input_fifos(actor_id) + graph.output_fifos(actor_id):
                if fifo.id in seen:
                    continue
                seen.add(fifo.id)
                if fifo.src_actor in members and fifo.dst_actor in members:
                    continue
                if fifo.src in x_out or fifo.dst in y_in:
                    continue
                yield dc, fifo


def validate_dpg(graph, dpg):
    diagnostics = []
    for dc in dpg.dcs:
        if not dc.in_drps or not dc.out_drps:
            missing = dpg.x if not dc.in_drps else dpg.y
            diagnostics.append(Diagnostic("SurjectivityFailure", (dpg.name, dc.label),
                                          f"{dpg.name} {dc.label} {dc.membership()} touches "
                                          f"no DRP of {missing}"))
    for dc, fifo in _leaks(graph, dpg):
        diagnostics.append(Diagnostic("ComponentLeak", (dpg.name, dc.label, fifo.id),
                                      f"{dpg.name} {dc.label} {dc.membership()} reaches "
                                      f"outside through fifo {fifo.id} "
                                      f"({fifo.src} -> {fifo.dst})"))
    if dpg.control_value_len != len(dpg.dcs):
        diagnostics.append(Diagnostic("BijectionFailure", (dpg.name, dpg.control_port),
                                      f"{dpg.control_port} declares {dpg.control_value_len} "
                                      f"control elements but {dpg.name} has "
                                      f"{len(dpg.dcs)} dynamic components"))
    owners = {}
    for dc in dpg.dcs:
        elements = {control_lookup(graph, drp)[1] for drp in dc.in_drps + dc.out_drps}
        if len(elements) > 1:
            diagnostics.append(Diagnostic("ElementSplit", (dpg.name, dc.label),
                                          f"{dpg.name} {dc.label} is steered by elements "
                                          f"{sorted(elements)}"))
        for element in elements:
            owners.setdefault(element, []).append(dc.label)
    for element, labels in sorted(owners.items()):
        if len(labels) > 1:
            diagnostics.append(Diagnostic("BijectionFailure", (dpg.name,) + tuple(labels),
                                          f"{dpg.name} components {', '.join(labels)} share "
                                          f"control element {element}"))
    return diagnostics
