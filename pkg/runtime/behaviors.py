"""Actor functions (init, control, fire, finish) and the built-in behavior set.

Graph files name a behavior either as "package.module:factory" or by one of the
short names in BUILTINS. A factory is called as factory(actor, params, config)
and returns an ActorBehavior.
"""

import importlib
import itertools

import numpy as np

from model.errors import UnknownReference, suggest
from runtime.control import ControlToken

EMPTY = np.zeros(0, dtype=np.uint8)


def random_activation(rng, length, min_active=1):
    """A uniformly sized random subset of at least `min_active` of `length` elements."""
    low = min(min_active, length)
    count = int(rng.integers(low, length + 1))
    active = set(rng.choice(length, size=count, replace=False).tolist())
    return tuple(i in active for i in range(length))


class FiringContext:
    """Spans of one firing. Input spans are read-only uint8 views; zero-rate ports
    get empty spans."""

    def __init__(self, actor, index, inputs, outputs, rates, control=None):
        self.actor = actor
        self.index = index
        self.inputs = inputs
        self.outputs = outputs
        self.rates = rates
        self.control = control

    def input_array(self, port_id, dtype=np.uint8):
        return self.inputs[port_id].view(dtype)

    def output_array(self, port_id, dtype=np.uint8):
        return self.outputs[port_id].view(dtype)

    def emit_control(self, port_id, bits):
        span = self.outputs[port_id]
        span[:] = np.frombuffer(ControlToken(tuple(bits)).encode(span.size), dtype=np.uint8)


class ActorBehavior:
    def __init__(self, actor, params, config):
        self.actor = actor
        self.params = params
        self.config = config

    def init(self):
        pass

    def control(self, token, elements):
        """Per-DRP activation for this firing: element T[j][p] of the control value."""
        return {port_id: token.element(element) for port_id, element in elements.items()}

    def fire(self, ctx):
        raise NotImplementedError

    def finish(self):
        pass

    @property
    def seed(self):
        return self.config.seed_for(self.params)


class CounterSource(ActorBehavior):
    """Writes consecutive integers, one per token, little-endian in the token width."""

    def init(self):
        self.next_value = int(self.params.get("start", 0))

    def fire(self, ctx):
        first = self.next_value
        for port_id, span in ctx.outputs.items():
            if not span.size:
                continue
            width = span.size // ctx.rates[port_id]
            for i in range(ctx.rates[port_id]):
                value = (first + i) % (1 << (8 * width))
                span[i * width:(i + 1) * width] = np.frombuffer(
                    value.to_bytes(width, "little"), dtype=np.uint8)
            self.next_value = first + ctx.rates[port_id]


class RandomSource(ActorBehavior):
    def init(self):
        self.rng = np.random.default_rng(self.seed)

    def fire(self, ctx):
        for span in ctx.outputs.values():
            span[:] = self.rng.integers(0, 256, span.size, dtype=np.uint8)


class FileSource(ActorBehavior):
    """Streams a raw binary file (`path`) in firing-sized chunks; a short tail is
    zero padded."""

    def init(self):
        with open(self.params["path"], "rb") as f:
            self.data = np.frombuffer(f.read(), dtype=np.uint8)
        self.offset = 0

    def fire(self, ctx):
        for span in ctx.outputs.values():
            chunk = self.data[self.offset:self.offset + span.size]
            span[:chunk.size] = chunk
            span[chunk.size:] = 0
            self.offset += span.size


class Passthrough(ActorBehavior):
    """Copies the concatenated active inputs to every output, cycled or cut to size."""

    def fire(self, ctx):
        data = [span for span in ctx.inputs.values() if span.size]
        joined = np.concatenate(data) if data else EMPTY
        for span in ctx.outputs.values():
            if not span.size:
                continue
            span[:] = np.resize(joined, span.size) if joined.size else 0


class Sink(ActorBehavior):
    def fire(self, ctx):
        pass


class ControlSource(ActorBehavior):
    """Emits control values from a cycled `pattern`, or a seeded random subset
    of at least `min_active` elements when `policy` is "random"."""

    def init(self):
        self.rng = np.random.default_rng(self.seed)
        self.patterns = {}
        for port in self.actor.outputs:
            if port.control_len:
                pattern = self.params.get("pattern") or [[1] * port.control_len]
                self.patterns[port.id] = itertools.cycle([tuple(bool(b) for b in p)
                                                          for p in pattern])

    def choose(self, length):
        return random_activation(self.rng, length, int(self.params.get("min_active", 1)))

    def fire(self, ctx):
        for port in self.actor.outputs:
            if not port.control_len:
                continue
            if self.params.get("policy") == "random":
                bits = self.choose(port.control_len)
            else:
                bits = next(self.patterns[port.id])
            ctx.emit_control(port.id, bits)


BUILTINS = {
    "counter": CounterSource,
    "random": RandomSource,
    "file": FileSource,
    "passthrough": Passthrough,
    "sink": Sink,
    "control": ControlSource,
}


def load_factory(name):
    if ":" in name:
        module_name, _, attr = name.partition(":")
        try:
            return getattr(importlib.import_module(module_name), attr)
        except (ImportError, AttributeError) as exc:
            raise UnknownReference(f"cannot load behavior {name}: {exc}") from None
    if name not in BUILTINS:
        raise UnknownReference(f"unknown behavior {name}" + suggest(name, BUILTINS))
    return BUILTINS[name]


def resolve_behaviors(graph, config):
    """A fresh behavior instance per actor; stateful behaviors never share state."""
    return {actor.id: load_factory(actor.behavior)(actor, dict(actor.params), config)
            for actor in graph.actors}
