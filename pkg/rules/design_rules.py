import logging
from dataclasses import dataclass

from model.graph import ActorKind, Direction, PortKind, control_lookup
from rules.chains import connecting_actors, find_linked_drps

logger = logging.getLogger(__name__)

RULE_NAMES = {
    1: "linked port control",
    2: "balanced delay",
    3: "connecting subchain",
    4: "single-sided dynamism",
    5: "encapsulation",
}


@dataclass(frozen=True)
class Violation:
    rule: int
    subjects: tuple
    message: str

    @property
    def name(self):
        return RULE_NAMES[self.rule]

    def line(self):
        return f"rule {self.rule} {self.name}: {', '.join(self.subjects)}: {self.message}"


def _pair_label(actors):
    return "{" + ", ".join(sorted(actors)) + "}"


def check_rule1_linked_port_control(graph, pairs):
    violations = []
    for pair in pairs:
        port_x, element_x = control_lookup(graph, pair.px)
        port_y, element_y = control_lookup(graph, pair.py)
        if port_x != port_y:
            violations.append(Violation(1, (pair.px, pair.py),
                                        f"controlled by different control ports "
                                        f"{port_x} and {port_y}"))
        elif element_x != element_y:
            violations.append(Violation(1, (pair.px, pair.py),
                                        f"controlled by elements {element_x} and {element_y} "
                                        f"of {port_x}"))
    return violations


def check_rule2_balanced_delay(graph):
    """Every fan-out of a control output port must carry the same delay."""
    violations = []
    for actor in graph.actors:
        for port in actor.ports:
            if port.kind is not PortKind.CONTROL_OUT:
                continue
            fifos = graph.fifos_from(port.key)
            if len({f.delay for f in fifos}) > 1:
                delays = ", ".join(f"{f.id}={f.delay}" for f in fifos)
                subjects = (port.key,) + tuple(f.dst_actor for f in fifos)
                violations.append(Violation(2, subjects,
                                            f"control fifos carry unequal delays {delays}"))
    return violations


def check_rule3_connecting_subchain(graph, pairs):
    violations = []
    associations = {}
    flagged = set()
    for pair in pairs:
        for chain in pair.subchains:
            for actor_id in chain.actors:
                associations.setdefault(actor_id, set()).add(pair.parents)
                kind = graph.actor(actor_id).kind
                if kind is not ActorKind.STATIC and actor_id not in flagged:
                    flagged.add(actor_id)
                    violations.append(Violation(3, (actor_id,),
                                                f"{kind.value} actor on a connecting subchain "
                                                f"of {_pair_label(pair.parents)}"))
    for actor_id in sorted(associations):
        parents = associations[actor_id]
        if len(parents) > 1:
            labels = " and ".join(sorted(_pair_label(p) for p in parents))
            violations.append(Violation(3, (actor_id,),
                                        f"lies on connecting subchains of {labels}"))
    return violations


def check_rule4_single_sided(graph):
    violations = []
    for actor in graph.actors_of_kind(ActorKind.DYNAMIC):
        directions = {p.direction for p in actor.drps}
        if directions == {Direction.IN, Direction.OUT}:
            violations.append(Violation(4, (actor.id,),
                                        "dynamic actor has both input and output DRPs"))
    return violations


def check_rule5_encapsulation(graph, pairs):
    violations = []
    connecting = {}
    reported = set()
    for pair in pairs:
        x, y = pair.x, pair.y
        for chain in pair.subchains:
            members = set(chain.actors)
            for actor_id in chain.actors:
                touching = graph.input_fifos(actor_id) + graph.output_fifos(actor_id)
                for fifo in touching:
                    outside = fifo.src if fifo.dst_actor == actor_id else fifo.dst
                    other = graph.port(outside)
                    if other.actor in members or other.actor in (x, y):
                        continue
                    if other.kind is not PortKind.SRP:
                        continue
                    if (x, y) not in connecting:
                        connecting[(x, y)] = connecting_actors(graph, x, y)
                    if other.actor in connecting[(x, y)]:
                        continue
                    key = (other.actor, actor_id, x, y)
                    if key in reported:
                        continue
                    reported.add(key)
                    violations.append(Violation(5, (other.actor, actor_id),
                                                f"{other.actor} is adjacent to subchain actor "
                                                f"{actor_id} but lies on no chain connecting "
                                                f"{x} and {y}"))
    return violations


def check_all(graph):
    """All five rule checks, deduplicated, ordered by rule number then subjects."""
    pairs = find_linked_drps(graph)
    found = (check_rule1_linked_port_control(graph, pairs)
             + check_rule2_balanced_delay(graph)
             + check_rule3_connecting_subchain(graph, pairs)
             + check_rule4_single_sided(graph)
             + check_rule5_encapsulation(graph, pairs))
    violations = sorted(set(found), key=lambda v: (v.rule, v.subjects, v.message))
    logger.info("graph %s: %d rule violations", graph.name, len(violations))
    return violations
