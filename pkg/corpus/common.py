"""Shared pieces of the application corpus: the CorpusApp bundle and generator sources."""

import copy
import hashlib
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from model.graph import build_graph
from runtime.behaviors import ActorBehavior
from runtime.config import RuntimeConfig
from runtime.interpreter import interpret

logger = logging.getLogger(__name__)


def digest(data):
    return hashlib.sha256(data).hexdigest()


@dataclass
class CorpusApp:
    """Graph document, seeded input, expected analysis facts and a standalone oracle.

    `source` names the actor whose output the input file replays; `oracle` returns
    the expected sink bytes computed without the graph machinery.
    """

    name: str
    document: dict
    source: str
    input_data: bytes
    firings: int
    expected: dict = field(default_factory=dict)
    oracle: object = None
    _golden: dict = field(default=None, init=False, repr=False)

    @cached_property
    def graph(self):
        return build_graph(self.document)

    def config(self, **overrides):
        overrides.setdefault("source_firings", self.firings)
        return RuntimeConfig(**overrides)

    def golden_digests(self):
        """Sink digests from the reference interpreter, computed once per app."""
        if self._golden is None:
            self._golden = interpret(self.graph, config=self.config()).sink_digests
        return dict(self._golden)

    def oracle_digests(self):
        return {sink: digest(data) for sink, data in self.oracle().items()}

    def file_document(self, input_name):
        """The graph document with the source replaced by a `file` source."""
        document = copy.deepcopy(self.document)
        for actor in document["actors"]:
            if actor["id"] == self.source:
                actor["behavior"] = "file"
                actor["params"] = {"path": input_name}
        return document

    def write_files(self, out_dir):
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        input_path = out_dir / f"{self.name}.input.bin"
        graph_path = out_dir / f"{self.name}.json"
        golden_path = out_dir / f"{self.name}.golden.json"
        input_path.write_bytes(self.input_data)
        with open(graph_path, "w", encoding="utf-8") as f:
            json.dump(self.file_document(input_path.name), f, indent=2)
            f.write("\n")
        with open(golden_path, "w", encoding="utf-8") as f:
            json.dump({"firings": self.firings, "sink_digests": self.golden_digests()}, f,
                      indent=2)
            f.write("\n")
        logger.info("wrote corpus app %s to %s", self.name, out_dir)
        return graph_path, input_path, golden_path


class GeneratorSource(ActorBehavior):
    """Source whose k-th firing emits `generate(k)`; the same function builds the
    app's input file, so replaying that file reproduces the stream."""

    def generate(self, index):
        raise NotImplementedError

    def fire(self, ctx):
        data = np.frombuffer(self.generate(ctx.index), dtype=np.uint8)
        for span in ctx.outputs.values():
            span[:] = data


def actor(actor_id, kind, behavior, ports, params=None):
    doc = {"id": actor_id, "kind": kind, "behavior": behavior, "ports": ports}
    if params:
        doc["params"] = params
    return doc


def port(port_id, kind="srp", direction=None, atr=1, control_len=None):
    doc = {"id": port_id, "kind": kind}
    if direction:
        doc["direction"] = direction
        doc["atr"] = atr
    if control_len:
        doc["control_len"] = control_len
    return doc


def fifo(fifo_id, src, dst, token_bytes, rate=1, delay=0):
    return {"id": fifo_id, "src": src, "dst": dst, "rate": rate, "delay": delay,
            "token_bytes": token_bytes}
