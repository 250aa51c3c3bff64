import copy
import json
from pathlib import Path

import pytest

from model.graph import build_graph
from preprocessor.parser import parse_graph_file

GRAPHS = Path(__file__).resolve().parent.parent / "data" / "graphs"


def fixture_path(name):
    return GRAPHS / f"{name}.json"


def load_document(name):
    return parse_graph_file(fixture_path(name)).document


def load_graph(name):
    return build_graph(load_document(name))


def renamed(document, suffix):
    """Copy of a graph document with `suffix` appended to every actor and FIFO id."""
    twin = copy.deepcopy(document)

    def rename(key):
        actor, port = key.split(".", 1)
        return f"{actor}{suffix}.{port}"

    for actor in twin["actors"]:
        actor["id"] += suffix
    for fifo in twin["fifos"]:
        fifo["id"] += suffix
        fifo["src"] = rename(fifo["src"])
        fifo["dst"] = rename(fifo["dst"])
    for entry in twin.get("control", []):
        entry["port"] = rename(entry["port"])
        entry["drp"] = rename(entry["drp"])
    return twin


def combined(name, *parts):
    """One graph document holding the given documents side by side."""
    return {
        "name": name,
        "actors": [a for part in parts for a in part["actors"]],
        "fifos": [f for part in parts for f in part["fifos"]],
        "control": [c for part in parts for c in part.get("control", [])],
    }


def doubled(document, suffix="_b"):
    """Two disjoint copies of a graph document in one graph."""
    return combined(document.get("name", "graph") + "_doubled", document,
                    renamed(document, suffix))


def chain_document(rate=1, delay=0, token_bytes=4):
    return {
        "name": "pair",
        "actors": [
            {"id": "src", "kind": "static", "behavior": "counter",
             "ports": [{"id": "out", "kind": "srp", "direction": "out", "atr": rate}]},
            {"id": "snk", "kind": "static", "behavior": "sink",
             "ports": [{"id": "in", "kind": "srp", "direction": "in", "atr": rate}]},
        ],
        "fifos": [{"id": "f", "src": "src.out", "dst": "snk.in", "delay": delay,
                   "token_bytes": token_bytes}],
        "control": [],
    }


def loop_document(rate=1, back_delay=0):
    return {
        "name": "loop",
        "actors": [
            {"id": "a", "kind": "static",
             "ports": [{"id": "in", "kind": "srp", "direction": "in", "atr": rate},
                       {"id": "out", "kind": "srp", "direction": "out", "atr": rate}]},
            {"id": "b", "kind": "static",
             "ports": [{"id": "in", "kind": "srp", "direction": "in", "atr": rate},
                       {"id": "out", "kind": "srp", "direction": "out", "atr": rate}]},
        ],
        "fifos": [{"id": "ab", "src": "a.out", "dst": "b.in"},
                  {"id": "ba", "src": "b.out", "dst": "a.in", "delay": back_delay}],
    }


@pytest.fixture
def three_components():
    return load_graph("three_components")


@pytest.fixture
def write_graph(tmp_path):
    """Write a document to a temporary graph file and return its path."""

    def write(document, name="graph.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return write
