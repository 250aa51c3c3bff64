"""Control tokens and the dynamic token-rate rule: tokrate(p) = BTOI(active) * atr(p)."""

from dataclasses import dataclass

import numpy as np

from model.errors import InvalidParams
from model.graph import PortKind, control_lookup


def btoi(value):
    return 1 if value else 0


@dataclass(frozen=True)
class ControlToken:
    bits: tuple

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    def __len__(self):
        return len(self.bits)

    def element(self, index):
        """Element `index` of the control value, 1-based."""
        return self.bits[index - 1]

    def encode(self, width):
        """One byte per Boolean, zero padded to the control FIFO's token width."""
        if width < len(self.bits):
            raise InvalidParams(f"control token of {len(self.bits)} elements does not fit "
                                f"{width} bytes")
        return bytes(btoi(b) for b in self.bits) + bytes(width - len(self.bits))

    @classmethod
    def decode(cls, data, length):
        raw = np.asarray(data, dtype=np.uint8)[:length]
        return cls(tuple(bool(v) for v in raw))


def drp_elements(graph, actor):
    """Port id -> controlling element index for every DRP of `actor`."""
    return {port.id: control_lookup(graph, port)[1] for port in actor.drps}


def control_width(graph, actor):
    """Declared control-value length on the port feeding the actor's control input."""
    fifo = graph.fifo_into(actor.control_input.key)
    return graph.control_table.lengths[fifo.src]


def token_rates(actor, activation=None):
    """tokrate(p) per port id: BTOI(active) * atr for DRPs, atr otherwise."""
    rates = {}
    for port in actor.ports:
        if port.kind is PortKind.DRP:
            rates[port.id] = btoi(activation[port.id]) * port.atr
        else:
            rates[port.id] = port.atr
    return rates
