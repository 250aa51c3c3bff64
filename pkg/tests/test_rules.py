import pytest

from conftest import chain_document, combined, load_document, load_graph, renamed
from model.graph import build_graph
from rules.chains import Chain, connecting_actors, find_linked_drps
from rules.design_rules import (
    RULE_NAMES,
    check_all,
    check_rule1_linked_port_control,
    check_rule2_balanced_delay,
    check_rule3_connecting_subchain,
    check_rule4_single_sided,
    check_rule5_encapsulation,
)


def srp(port_id, direction):
    return {"id": port_id, "kind": "srp", "direction": direction}


def static(actor_id, inputs=("in",), outputs=("out",)):
    return {"id": actor_id, "kind": "static",
            "ports": [srp(p, "in") for p in inputs] + [srp(p, "out") for p in outputs]}


def test_rule_names() -> None:
    assert RULE_NAMES == {
        1: "linked port control",
        2: "balanced delay",
        3: "connecting subchain",
        4: "single-sided dynamism",
        5: "encapsulation",
    }


def test_linked_drps_of_three_components(three_components) -> None:
    pairs = find_linked_drps(three_components)
    assert [(p.px, p.py) for p in pairs] == [
        ("x.px1", "y.py1"), ("x.px2", "y.py1"), ("x.px3", "y.py2"), ("x.px4", "y.py3")]
    assert [p.direct for p in pairs] == [False, False, False, True]
    assert pairs[0].subchains == (Chain(("a1", "a3")),)
    assert pairs[2].subchains == (Chain(("a4",)),)
    assert pairs[3].subchains == ()
    assert all(p.parents == frozenset({"x", "y"}) for p in pairs)


def test_no_drps_no_pairs() -> None:
    assert find_linked_drps(load_graph("chain")) == []


def diamond_document():
    """single_branch with a diamond s1 -> (s2 | s3) -> s4 between x and y."""
    document = load_document("single_branch")
    document["actors"] = [a for a in document["actors"] if a["id"] != "a"] + [
        static("s1", outputs=("o1", "o2")), static("s2"), static("s3"),
        static("s4", inputs=("i1", "i2"))]
    document["fifos"] = [f for f in document["fifos"] if f["id"] not in ("f_xa", "f_ay")] + [
        {"id": "d1", "src": "x.p", "dst": "s1.in"},
        {"id": "d2", "src": "s1.o1", "dst": "s2.in"},
        {"id": "d3", "src": "s1.o2", "dst": "s3.in"},
        {"id": "d4", "src": "s2.out", "dst": "s4.i1"},
        {"id": "d5", "src": "s3.out", "dst": "s4.i2"},
        {"id": "d6", "src": "s4.out", "dst": "y.p"},
    ]
    return document


def test_diamond_gives_one_pair_with_two_subchains() -> None:
    pairs = find_linked_drps(build_graph(diamond_document()))
    assert len(pairs) == 1
    assert pairs[0].subchains == (Chain(("s1", "s2", "s4")), Chain(("s1", "s3", "s4")))
    assert all(chain.is_simple for chain in pairs[0].subchains)


@pytest.mark.parametrize("name", [
    "single_branch", "branch_bypass", "three_components", "chain", "unaligned_delay"])
def test_valid_fixtures_have_no_violations(name) -> None:
    assert check_all(load_graph(name)) == []


@pytest.mark.parametrize("name, rule", [
    ("rule3_shared_subchain", 3), ("rule4_two_sided", 4), ("rule5_side_actor", 5),
    ("rule2_unbalanced", 2)])
def test_violation_fixtures_name_their_rule(name, rule) -> None:
    violations = check_all(load_graph(name))
    assert [v.rule for v in violations] == [rule]


def test_rule3_shared_subchain_flags_a2() -> None:
    [violation] = check_all(load_graph("rule3_shared_subchain"))
    assert violation.subjects == ("a2",)
    assert violation.line().startswith("rule 3 connecting subchain: a2: ")
    assert "{x, y}" in violation.message and "{y, z}" in violation.message


def test_rule4_two_sided_line() -> None:
    [violation] = check_rule4_single_sided(load_graph("rule4_two_sided"))
    assert violation.line() == ("rule 4 single-sided dynamism: x: dynamic actor has both "
                                "input and output DRPs")


def test_rule5_side_actor_flags_b_next_to_a2() -> None:
    graph = load_graph("rule5_side_actor")
    [violation] = check_rule5_encapsulation(graph, find_linked_drps(graph))
    assert violation.subjects == ("b", "a2")


def test_rule1_unequal_elements() -> None:
    document = load_document("branch_bypass")
    for entry in document["control"]:
        if entry["drp"].startswith("y."):
            entry["element"] = 3 - entry["element"]
    graph = build_graph(document)
    violations = check_rule1_linked_port_control(graph, find_linked_drps(graph))
    assert [v.subjects for v in violations] == [("x.p1", "y.p1"), ("x.p2", "y.p2")]
    assert "elements 1 and 2" in violations[0].message


def test_rule2_equal_nonzero_delays_pass() -> None:
    document = load_document("single_branch")
    for fifo in document["fifos"]:
        if fifo["src"] == "q.c":
            fifo["delay"] = 2
    assert check_rule2_balanced_delay(build_graph(document)) == []


def test_rule2_unequal_delays() -> None:
    [violation] = check_rule2_balanced_delay(load_graph("rule2_unbalanced"))
    assert violation.subjects == ("q.c", "x", "y")
    assert "c_x=1" in violation.message


def test_rule3_configuration_actor_on_subchain() -> None:
    document = load_document("single_branch")
    for actor in document["actors"]:
        if actor["id"] == "a":
            actor["kind"] = "configuration"
            actor["ports"].append({"id": "k", "kind": "control_out", "control_len": 1})
    document["actors"] += [
        {"id": "w", "kind": "dynamic",
         "ports": [{"id": "c", "kind": "control_in"},
                   {"id": "p", "kind": "drp", "direction": "out"}]},
        static("t", outputs=()),
    ]
    document["fifos"] += [{"id": "c_w", "src": "a.k", "dst": "w.c"},
                          {"id": "f_wt", "src": "w.p", "dst": "t.in"}]
    document["control"].append({"port": "a.k", "drp": "w.p", "element": 1})
    graph = build_graph(document)
    violations = check_rule3_connecting_subchain(graph, find_linked_drps(graph))
    assert [(v.rule, v.subjects) for v in violations] == [(3, ("a",))]
    assert "configuration actor" in violations[0].message


def test_rule4_only_output_drps_pass() -> None:
    assert check_rule4_single_sided(load_graph("single_branch")) == []


def test_rule5_exception_for_actors_on_a_connecting_chain() -> None:
    graph = build_graph(diamond_document())
    assert connecting_actors(graph, "x", "y") == {"s1", "s2", "s3", "s4"}
    assert check_rule5_encapsulation(graph, find_linked_drps(graph)) == []


def test_rule5_feedback_from_y_is_not_a_connecting_chain() -> None:
    document = load_document("rule5_side_actor")
    for actor in document["actors"]:
        if actor["id"] == "b":
            actor["ports"].append(srp("in", "in"))
        if actor["id"] == "y":
            actor["ports"].append(srp("tap", "out"))
    document["fifos"].append({"id": "f_yb", "src": "y.tap", "dst": "b.in"})
    graph = build_graph(document)
    assert connecting_actors(graph, "x", "y") == {"a1", "a2"}
    [violation] = check_rule5_encapsulation(graph, find_linked_drps(graph))
    assert violation.subjects == ("b", "a2")


def test_rule5_source_shared_with_x_is_not_a_connecting_chain() -> None:
    document = load_document("rule5_side_actor")
    for actor in document["actors"]:
        if actor["id"] == "b":
            actor.pop("behavior")
            actor["ports"].append(srp("in", "in"))
    document["fifos"].append({"id": "f_sb", "src": "src.out", "dst": "b.in"})
    graph = build_graph(document)
    assert "src" not in connecting_actors(graph, "x", "y")
    assert [(v.rule, v.subjects) for v in check_all(graph)] == [(5, ("b", "a2"))]


def test_rule3_dynamic_actor_on_subchain() -> None:
    document = load_document("single_branch")
    document["actors"] += [
        {"id": "z", "kind": "dynamic",
         "ports": [{"id": "c", "kind": "control_in"}, srp("in", "in"),
                   {"id": "p", "kind": "drp", "direction": "out"}]}]
    for fifo in document["fifos"]:
        if fifo["id"] == "f_ay":
            fifo["dst"] = "z.in"
    document["fifos"] += [{"id": "f_zy", "src": "z.p", "dst": "y.p"},
                          {"id": "c_z", "src": "q.c", "dst": "z.c"}]
    document["control"].append({"port": "q.c", "drp": "z.p", "element": 1})
    graph = build_graph(document)
    pairs = find_linked_drps(graph)
    assert [(p.px, p.py, p.subchains) for p in pairs] == [
        ("x.p", "y.p", (Chain(("a", "z")),)), ("z.p", "y.p", ())]
    violations = check_all(graph)
    assert [(v.rule, v.subjects) for v in violations] == [(3, ("z",))]
    assert "dynamic actor on a connecting subchain of {x, y}" in violations[0].message


def test_dynamic_actors_in_series_are_not_linked() -> None:
    document = combined("series", load_document("single_branch"),
                        renamed(load_document("single_branch"), "_2"))
    document["actors"] = [a for a in document["actors"] if a["id"] not in ("snk", "src_2")]
    document["fifos"] = [f for f in document["fifos"] if f["id"] not in ("f_snk", "f_src_2")]
    document["fifos"].append({"id": "f_y_x2", "src": "y.out", "dst": "x_2.in"})
    graph = build_graph(document)
    assert [(p.px, p.py) for p in find_linked_drps(graph)] == [("x.p", "y.p"),
                                                             ("x_2.p", "y_2.p")]
    assert check_all(graph) == []


def test_composite_fixture_gives_rules_3_4_5() -> None:
    document = combined("composite", renamed(load_document("rule3_shared_subchain"), "_c"),
                        renamed(load_document("rule4_two_sided"), "_d"),
                        renamed(load_document("rule5_side_actor"), "_e"))
    violations = check_all(build_graph(document))
    assert [(v.rule, v.subjects) for v in violations] == [
        (3, ("a2_c",)), (4, ("x_d",)), (5, ("b_e", "a2_e"))]


def test_static_chain_has_no_violations() -> None:
    assert check_all(build_graph(chain_document())) == []
