import pytest

from conftest import chain_document, doubled, load_document, load_graph, loop_document
from analyzer.consistency import CONSISTENT, INCONSISTENT, analyze
from analyzer.dpg import decompose_dcs, identify_dpgs, validate_dpg
from analyzer.schedule import Region, Schedule, compute_bounds, compute_schedule, static_region
from corpus.motion_detection import app_motion_detection
from model.errors import DeadlockError, InconsistentGraph, OrphanDynamicActor
from model.graph import build_graph
from runtime.executor import instantiate


def branch_bypass_variant(second_branch):
    """branch_bypass with the direct x.p2 -> y.p2 FIFO replaced."""
    document = load_document("branch_bypass")
    document["fifos"] = [f for f in document["fifos"] if f["id"] != "f_xy"]
    document["actors"].append({"id": "a2", "kind": "static", "ports": [
        {"id": "in", "kind": "srp", "direction": "in"}]})
    document["fifos"].append({"id": "f_x2", "src": "x.p2", "dst": "a2.in"})
    if second_branch:
        document["actors"][-1]["ports"].append({"id": "out", "kind": "srp",
                                                "direction": "out"})
        document["fifos"].append({"id": "f_2y", "src": "a2.out", "dst": "y.p2"})
    else:
        for actor in document["actors"]:
            if actor["id"] == "y":
                actor["ports"] = [p for p in actor["ports"] if p["id"] != "p2"]
        document["control"] = [c for c in document["control"] if c["drp"] != "y.p2"]
    return build_graph(document)


def test_identify_three_components(three_components) -> None:
    [dpg] = identify_dpgs(three_components)
    assert (dpg.name, dpg.q, dpg.control_port, dpg.x, dpg.y) == ("D1", "q", "q.c", "x", "y")
    assert dpg.control_value_len == 3


def test_static_graph_has_no_dpgs() -> None:
    assert identify_dpgs(load_graph("chain")) == []


def test_doubled_three_components_has_two_dpgs() -> None:
    graph = build_graph(doubled(load_document("three_components")))
    dpgs = identify_dpgs(graph)
    assert [(d.x, d.y) for d in dpgs] == [("x", "y"), ("x_b", "y_b")]
    report = analyze(graph)
    assert report.consistent
    assert [len(d.dcs) for d in report.dpgs] == [3, 3]


def test_orphan_dynamic_actor() -> None:
    with pytest.raises(OrphanDynamicActor):
        identify_dpgs(load_graph("rule4_two_sided"))


def test_decompose_three_components(three_components) -> None:
    [dpg] = identify_dpgs(three_components)
    dpg = decompose_dcs(three_components, dpg)
    assert [f"{dc.label} = {dc.membership()}" for dc in dpg.dcs] == [
        "Z1 = {a1, a2, a3}", "Z2 = {a4}", "Z3 = {d}"]
    assert dpg.dcs[0].in_drps == ("x.px1", "x.px2")
    assert dpg.dcs[0].out_drps == ("y.py1",)
    assert dpg.dcs[2].dummy
    assert validate_dpg(three_components, dpg) == []


def test_direct_fifo_only_gives_single_dummy() -> None:
    document = load_document("single_branch")
    document["actors"] = [a for a in document["actors"] if a["id"] != "a"]
    document["fifos"] = [f for f in document["fifos"] if f["id"] not in ("f_xa", "f_ay")]
    document["fifos"].append({"id": "f_xy", "src": "x.p", "dst": "y.p"})
    graph = build_graph(document)
    [dpg] = identify_dpgs(graph)
    dpg = decompose_dcs(graph, dpg)
    assert [dc.membership() for dc in dpg.dcs] == ["{d}"]


def test_dummy_name_avoids_existing_actor() -> None:
    document = load_document("three_components")
    for actor in document["actors"]:
        if actor["id"] == "a4":
            actor["id"] = "d"
    for fifo in document["fifos"]:
        fifo["src"] = fifo["src"].replace("a4.", "d.")
        fifo["dst"] = fifo["dst"].replace("a4.", "d.")
    graph = build_graph(document)
    dpg = decompose_dcs(graph, identify_dpgs(graph)[0])
    assert [dc.membership() for dc in dpg.dcs] == ["{a1, a2, a3}", "{d}", "{_d}"]


def test_two_single_actor_branches() -> None:
    graph = branch_bypass_variant(second_branch=True)
    dpg = decompose_dcs(graph, identify_dpgs(graph)[0])
    assert [dc.membership() for dc in dpg.dcs] == ["{a1}", "{a2}"]
    assert validate_dpg(graph, dpg) == []


def test_declared_length_mismatch_is_a_bijection_failure() -> None:
    document = load_document("three_components")
    for actor in document["actors"]:
        if actor["id"] == "q":
            actor["ports"][0]["control_len"] = 2
    for entry in document["control"]:
        entry["element"] = min(entry["element"], 2)
    graph = build_graph(document)
    dpg = decompose_dcs(graph, identify_dpgs(graph)[0])
    kinds = {d.kind for d in validate_dpg(graph, dpg)}
    assert "BijectionFailure" in kinds


def test_component_that_never_reaches_y() -> None:
    graph = branch_bypass_variant(second_branch=False)
    dpg = decompose_dcs(graph, identify_dpgs(graph)[0])
    [diagnostic] = validate_dpg(graph, dpg)
    assert diagnostic.kind == "SurjectivityFailure"
    assert diagnostic.subjects == ("D1", "Z2")


def test_schedule_of_a_chain() -> None:
    schedule = compute_schedule(static_region(load_graph("chain")))
    assert schedule.order == ("src", "filt", "snk")
    assert all(count == 1 for _, count in schedule.firings)


def test_zero_delay_cycle_deadlocks() -> None:
    graph = build_graph(loop_document())
    with pytest.raises(DeadlockError) as info:
        compute_schedule(static_region(graph))
    assert info.value.cycle == ("a", "b", "a")
    assert str(info.value) == ("deadlock in region static: a, b cannot fire "
                               "(cycle a -> b -> a); tokens ab=0, ba=0")


def test_delayed_cycle_is_schedulable() -> None:
    graph = build_graph(loop_document(rate=2, back_delay=2))
    schedule = compute_schedule(static_region(graph))
    assert schedule.order == ("a", "b")
    assert schedule.final_tokens == {"ab": 0, "ba": 2}


@pytest.mark.parametrize("rate, delay, bound", [(1, 0, 1), (4, 1, 5), (4, 4, 8)])
def test_bounds_count_outputs_before_inputs(rate, delay, bound) -> None:
    graph = build_graph(chain_document(rate=rate, delay=delay))
    bounds = compute_bounds([compute_schedule(static_region(graph))])
    assert bounds.beta == {"f": bound}
    assert bounds.per_region == {"static": {"f": bound}}


def test_bounds_take_the_maximum_over_regions() -> None:
    fifos = (build_graph(chain_document()).fifos[0],)
    schedule = compute_schedule(Region("one", ("snk", "src"), fifos))
    bounds = compute_bounds([schedule, Schedule("two", (), {"f": 3}, {})])
    assert bounds.beta == {"f": 3}


def test_analyze_three_components(three_components) -> None:
    report = analyze(three_components)
    assert report.verdict == CONSISTENT
    assert len(report.dpgs[0].dcs) == 3
    assert [s.region for s in report.schedules] == ["D1.Z1", "D1.Z2", "D1.Z3", "static"]
    assert report.schedules[-1].order == ("q", "src", "x", "a1", "a2", "a3", "a4", "y", "snk")
    assert report.schedules[0].order == ("x", "a1", "a2", "a3", "y")
    assert set(report.bounds.beta.values()) == {1}
    assert report.beta("f_xy") == 1


def test_analyze_rule2_fixture() -> None:
    report = analyze(load_graph("rule2_unbalanced"))
    assert report.verdict == INCONSISTENT
    assert [v.rule for v in report.violations] == [2]
    assert report.bounds is None


def test_analyze_deadlock_names_the_site() -> None:
    report = analyze(load_graph("cycle_deadlock"))
    assert not report.consistent
    [diagnostic] = report.diagnostics
    assert diagnostic.kind == "DeadlockError"
    assert diagnostic.subjects == ("a", "b", "a")


def test_analyze_static_chain() -> None:
    report = analyze(load_graph("chain"))
    assert report.consistent
    assert report.dpgs == []
    assert report.beta("f1") == 1


def test_analyze_motion_detection() -> None:
    app = app_motion_detection(frame_w=8, frame_h=8, n_frames=2)
    report = analyze(app.graph)
    assert report.consistent
    assert report.dpgs == []
    assert report.bounds.beta == app.expected["beta"]


def leaking_source_document():
    """src feeds x and a side actor b that joins DC member a2; x.p2 -> y.p2 is direct."""
    document = load_document("rule5_side_actor")
    for actor in document["actors"]:
        if actor["id"] == "q":
            actor["ports"][0]["control_len"] = 2
        if actor["id"] == "b":
            actor.pop("behavior")
            actor["ports"].insert(0, {"id": "in", "kind": "srp", "direction": "in"})
        if actor["id"] in ("x", "y"):
            direction = "out" if actor["id"] == "x" else "in"
            actor["ports"].append({"id": "p2", "kind": "drp", "direction": direction})
    document["fifos"] += [{"id": "f_sb", "src": "src.out", "dst": "b.in"},
                          {"id": "f_xy", "src": "x.p2", "dst": "y.p2"}]
    document["control"] += [{"port": "q.c", "drp": "x.p2", "element": 2},
                            {"port": "q.c", "drp": "y.p2", "element": 2}]
    return document


def test_component_leaking_into_the_source_is_rejected() -> None:
    graph = build_graph(leaking_source_document())
    dpg = decompose_dcs(graph, identify_dpgs(graph)[0])
    assert [dc.membership() for dc in dpg.dcs] == ["{a1, a2, b, src}", "{d}"]
    [leak] = validate_dpg(graph, dpg)
    assert leak.kind == "ComponentLeak"
    assert leak.subjects == ("D1", "Z1", "f_src")
    assert "f_src (src.out -> x.in)" in leak.message

    report = analyze(graph)
    assert report.verdict == INCONSISTENT
    assert report.bounds is None
    with pytest.raises(InconsistentGraph):
        instantiate(graph)


def test_three_components_has_no_leaks(three_components) -> None:
    dpg = decompose_dcs(three_components, identify_dpgs(three_components)[0])
    assert not [d for d in validate_dpg(three_components, dpg) if d.kind == "ComponentLeak"]
