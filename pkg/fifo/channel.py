import logging
import threading

import numpy as np

from fifo.capacity import fifo_plan
from model.errors import Poisoned, ProtocolError

logger = logging.getLogger(__name__)


class Channel:
    """Blocking single-producer/single-consumer FIFO over a CapacityPlan.

    Spans handed out by `write_start`/`read_start` are numpy views into the channel
    buffer (r tokens of B bytes). Occupancy counts delay tokens, published tokens and
    tokens whose read has started but not ended. Writers also respect `bound`, the
    analysed occupancy limit, when it is tighter than the buffer.
    """

    def __init__(self, fifo, c_factor, bound=None, trace=None):
        self.fifo = fifo
        self.plan = fifo_plan(fifo, c_factor)
        self.rate = fifo.rate
        self.token_bytes = fifo.token_bytes
        self.delay = fifo.delay
        self.bound = min(bound, self.plan.slots) if bound else self.plan.slots
        self.buffer = np.zeros(self.plan.bytes, dtype=np.uint8)
        self.trace = trace

        self.written = 0  # published tokens, delay excluded
        self.released = 0  # tokens whose read ended
        self.copies = 0
        self.max_occupancy = self.delay
        self.closed = False
        self.poisoned = False
        self._writing = None
        self._reading = None
        self._cond = threading.Condition()

        if self.delay:
            initial = np.frombuffer(fifo.initial_bytes(), dtype=np.uint8)
            self.buffer[: initial.size] = initial

    @property
    def id(self):
        return self.fifo.id

    @property
    def occupancy(self):
        return self.delay + self.written - self.released

    # slot arithmetic

    def _write_slot(self):
        if self.plan.needs_wrap_copy:
            return self.delay + self.written - self.copies * self.plan.cycle_tokens
        return (self.delay + self.written) % self.plan.slots

    def _read_slot(self):
        if self.plan.needs_wrap_copy:
            return self.released - self.copies * self.plan.cycle_tokens
        return self.released % self.plan.slots

    def _span(self, slot):
        start = slot * self.token_bytes
        return self.buffer[start:start + self.rate * self.token_bytes]

    def _can_write(self):
        if self.occupancy + self.rate > self.bound:
            return False
        if self.plan.needs_wrap_copy:
            return self.written // self.plan.cycle_tokens == self.copies
        return True

    def _can_read(self):
        if self.occupancy < self.rate:
            return False
        if self.plan.needs_wrap_copy:
            return self.released // self.plan.cycle_tokens == self.copies
        return True

    def _at_eos(self):
        return self.closed and self.released >= self.written

    def _maybe_copy(self):
        if not self.plan.needs_wrap_copy or self._writing is not None or self._reading is not None:
            return
        edge = (self.copies + 1) * self.plan.cycle_tokens
        if self.written >= edge and self.released >= edge:
            (src_lo, src_hi), (dst_lo, dst_hi) = self.plan.copy_spec
            B = self.token_bytes
            chunk = self.buffer[src_lo * B:(src_hi + 1) * B].copy()
            self.buffer[dst_lo * B:(dst_hi + 1) * B] = chunk
            self.copies += 1
            logger.debug("fifo %s wrap copy %d", self.id, self.copies)
            self._record("copy")

    def _record(self, op):
        if self.trace is not None:
            self.trace.record(self.id, op, self.occupancy)

    def _wait(self, ready):
        while not (self.poisoned or ready()):
            self._cond.wait()
        if self.poisoned:
            raise Poisoned(f"fifo {self.id} was poisoned")

    # two-phase protocol

    def write_start(self):
        with self._cond:
            if self._writing is not None:
                raise ProtocolError(f"fifo {self.id}: write_start while a write is open")
            if self.closed:
                raise ProtocolError(f"fifo {self.id}: write after close")
            self._wait(self._can_write)
            self._writing = self._write_slot()
            return self._span(self._writing)

    def write_end(self):
        with self._cond:
            if self._writing is None:
                raise ProtocolError(f"fifo {self.id}: write_end without write_start")
            self._writing = None
            self.written += self.rate
            self.max_occupancy = max(self.max_occupancy, self.occupancy)
            self._record("w")
            self._maybe_copy()
            self._cond.notify_all()

    def read_start(self):
        """Block for r tokens; return a read-only span, or None at end-of-stream."""
        with self._cond:
            if self._reading is not None:
                raise ProtocolError(f"fifo {self.id}: read_start while a read is open")
            self._wait(lambda: self._at_eos() or self._can_read())
            if self._at_eos():
                return None
            self._reading = self._read_slot()
            span = self._span(self._reading)
            span.flags.writeable = False
            return span

    def read_end(self):
        with self._cond:
            if self._reading is None:
                raise ProtocolError(f"fifo {self.id}: read_end without read_start")
            self._reading = None
            self.released += self.rate
            self._record("r")
            self._maybe_copy()
            self._cond.notify_all()

    def close(self):
        with self._cond:
            self.closed = True
            self._cond.notify_all()

    def poison(self):
        with self._cond:
            self.poisoned = True
            self._cond.notify_all()
