"""FIFO capacity for a rate, delay and buffering factor, and the slot layout built on it."""

from dataclasses import dataclass

from model.errors import InvalidParams


def _check(r, Q, C, B=1):
    for name, value, low in (("rate", r, 1), ("token bytes", B, 1), ("delay", Q, 0),
                             ("buffering factor", C, 2)):
        if not isinstance(value, int) or isinstance(value, bool) or value < low:
            raise InvalidParams(f"{name} must be an integer >= {low}, got {value!r}")


def is_aligned(r, Q):
    """A delay is aligned when it is an integer multiple of the rate (0 included)."""
    return Q % r == 0


def capacity_slots(r, Q, C):
    _check(r, Q, C)
    if is_aligned(r, Q):
        return max(r * C, Q)
    return r * C + Q


def capacity(r, B, Q, C):
    """Capacity in bytes: B*(r*C+Q) for an unaligned delay, B*max(r*C, Q) otherwise."""
    _check(r, Q, C, B)
    return B * capacity_slots(r, Q, C)


@dataclass(frozen=True)
class CapacityPlan:
    slots: int
    bytes: int
    r: int
    Q: int
    C: int
    needs_wrap_copy: bool
    write_chunks: tuple
    read_chunks: tuple
    copy_spec: tuple = None  # ((src_lo, src_hi), (dst_lo, dst_hi)), inclusive

    @property
    def cycle_tokens(self):
        return self.r * self.C

    @property
    def chunks(self):
        return self.slots // self.r if not self.needs_wrap_copy else self.C

    def describe_copy(self):
        if not self.copy_spec:
            return "-"
        (src_lo, src_hi), (dst_lo, dst_hi) = self.copy_spec
        if src_lo == src_hi:
            return f"{src_lo}->{dst_lo}"
        return f"{src_lo}..{src_hi}->{dst_lo}..{dst_hi}"


def layout_plan(r, Q, C, B=1):
    """Slot layout for one FIFO.

    Unaligned delays keep the stream contiguous: the Q delay tokens sit in front,
    writes land at Q + k*r, reads start at k*r, and once a full cycle of C chunks
    is written and read the trailing Q slots move to the front. Aligned delays use
    a plain ring of max(r*C, Q)/r chunks.
    """
    slots = capacity_slots(r, Q, C)
    _check(r, Q, C, B)
    if is_aligned(r, Q):
        chunks = slots // r
        first = Q // r
        writes = tuple(((first + k) % chunks) * r for k in range(chunks))
        reads = tuple(k * r for k in range(chunks))
        return CapacityPlan(slots, B * slots, r, Q, C, False, writes, reads)
    writes = tuple(Q + k * r for k in range(C))
    reads = tuple(k * r for k in range(C))
    copy_spec = ((r * C, r * C + Q - 1), (0, Q - 1))
    return CapacityPlan(slots, B * slots, r, Q, C, True, writes, reads, copy_spec)


def fifo_plan(fifo, C):
    return layout_plan(fifo.rate, fifo.delay, C, fifo.token_bytes)


def trace_layout(plan, cycles):
    """Slot-level access sequence over `cycles` full cycles: ("w"|"r"|"copy", slots).

    Writes of a cycle precede its reads here; the copy closes each unaligned cycle.
    """
    events = []
    per_cycle = plan.C if plan.needs_wrap_copy else plan.chunks
    for cycle in range(cycles):
        for k in range(per_cycle):
            start = plan.write_chunks[k]
            events.append(("w", tuple(range(start, start + plan.r))))
        for k in range(per_cycle):
            start = plan.read_chunks[k]
            events.append(("r", tuple(range(start, start + plan.r))))
        if plan.needs_wrap_copy:
            (src_lo, src_hi), _ = plan.copy_spec
            events.append(("copy", tuple(range(src_lo, src_hi + 1))))
    return events
