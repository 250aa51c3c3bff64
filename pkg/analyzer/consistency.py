import logging
from dataclasses import dataclass, field

from analyzer.dpg import Diagnostic, decompose_dcs, identify_dpgs, validate_dpg
from analyzer.schedule import compute_bounds, compute_schedule, dc_region, static_region
from model.errors import DeadlockError, OrphanDynamicActor, SharedMembership
from rules.chains import find_linked_drps
from rules.design_rules import check_all

logger = logging.getLogger(__name__)

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"


@dataclass
class ConsistencyReport:
    graph: str
    verdict: str = INCONSISTENT
    violations: list = field(default_factory=list)
    dpgs: list = field(default_factory=list)
    schedules: list = field(default_factory=list)
    bounds: object = None
    diagnostics: list = field(default_factory=list)

    @property
    def consistent(self):
        return self.verdict == CONSISTENT

    def beta(self, fifo_id):
        return self.bounds.beta[fifo_id] if self.bounds else None


def _disjointness(dpgs):
    diagnostics = []
    owner = {}
    for dpg in dpgs:
        for dc in dpg.dcs:
            if dc.dummy:
                continue
            for actor in dc.actors:
                if actor in owner and owner[actor] != dpg.name:
                    diagnostics.append(Diagnostic("SharedMembership", (actor,),
                                                  f"{actor} belongs to {owner[actor]} "
                                                  f"and {dpg.name}"))
                owner.setdefault(actor, dpg.name)
    return diagnostics


def analyze(graph):
    """Rule checks, DPG decomposition and validity, schedules, buffer bounds, verdict."""
    report = ConsistencyReport(graph.name)

    report.violations = check_all(graph)
    if report.violations:
        report.diagnostics = [Diagnostic("RuleViolation", v.subjects, v.line())
                              for v in report.violations]
        logger.info("graph %s: %s (rule violations)", graph.name, report.verdict)
        return report

    try:
        dpgs = identify_dpgs(graph, find_linked_drps(graph))
    except (OrphanDynamicActor, SharedMembership) as exc:
        report.diagnostics.append(Diagnostic(type(exc).__name__, (), str(exc)))
        return report
    report.dpgs = [decompose_dcs(graph, dpg) for dpg in dpgs]
    for dpg in report.dpgs:
        report.diagnostics.extend(validate_dpg(graph, dpg))
    report.diagnostics.extend(_disjointness(report.dpgs))
    if report.diagnostics:
        logger.info("graph %s: %s (invalid DPGs)", graph.name, report.verdict)
        return report

    regions = [dc_region(graph, dpg, dc) for dpg in report.dpgs for dc in dpg.dcs]
    regions.append(static_region(graph))
    for region in regions:
        try:
            report.schedules.append(compute_schedule(region))
        except DeadlockError as exc:
            report.diagnostics.append(Diagnostic("DeadlockError", exc.cycle or exc.pending,
                                                 str(exc)))
    if report.diagnostics:
        logger.info("graph %s: %s (deadlock)", graph.name, report.verdict)
        return report

    report.bounds = compute_bounds(report.schedules)
    report.verdict = CONSISTENT
    logger.info("graph %s: consistent, %d DPGs", graph.name, len(report.dpgs))
    return report
