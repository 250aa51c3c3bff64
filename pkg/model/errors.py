"""Exception hierarchy shared by every prunekit layer.

Each class carries the process exit status the CLI reports for it:
2 for bad input, 1 for rule or consistency failures, 3 for runtime failures.
"""

from rapidfuzz import fuzz, process

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_INPUT = 2
EXIT_RUNTIME = 3


def suggest(name, candidates, threshold=70):
    """Return ' (did you mean "x"?)' for the closest candidate, or an empty string."""
    candidates = list(candidates)
    if not candidates or name is None:
        return ""
    result = process.extractOne(str(name), candidates, scorer=fuzz.ratio)
    if result:
        best, score, _ = result
        if score >= threshold:
            return f' (did you mean "{best}"?)'
    return ""


class PruneError(Exception):
    exit_code = EXIT_RUNTIME


# Input errors

class InputError(PruneError):
    exit_code = EXIT_INPUT


class ParseError(InputError):
    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:{column}:"
        super().__init__(f"{where} {message}".strip())


class SchemaError(InputError):
    """A document that parses but breaks the graph schema; `field` is the offending path."""

    def __init__(self, field, message, source=None):
        self.field = field
        self.detail = message
        self.source = source
        where = f"{source}: " if source else ""
        super().__init__(f"{where}{field}: {message}")


class InvalidParams(InputError):
    pass


class GraphError(InputError):
    """Structural problem found while building a graph."""


class DanglingPort(GraphError):
    pass


class RateMismatch(GraphError):
    pass


class DuplicateId(GraphError):
    pass


class BadActorShape(GraphError):
    pass


class UnknownReference(GraphError):
    pass


class TokenWidthMismatch(GraphError):
    pass


class Uncontrolled(GraphError):
    pass


# Analysis errors

class AnalysisError(PruneError):
    exit_code = EXIT_INCONSISTENT


class DeadlockError(AnalysisError):
    """No actor of a region can fire before the period completes."""

    def __init__(self, region, pending, tokens, cycle=None):
        self.region = region
        self.pending = tuple(pending)
        self.tokens = dict(tokens)
        self.cycle = tuple(cycle or ())
        state = ", ".join(f"{fifo}={count}" for fifo, count in sorted(self.tokens.items()))
        message = f"deadlock in region {region}: {', '.join(self.pending)} cannot fire"
        if self.cycle:
            message += f" (cycle {' -> '.join(self.cycle)})"
        if state:
            message += f"; tokens {state}"
        super().__init__(message)


class OrphanDynamicActor(AnalysisError):
    pass


class SharedMembership(AnalysisError):
    pass


class InconsistentGraph(AnalysisError):
    def __init__(self, report):
        self.report = report
        reasons = "; ".join(d.message for d in report.diagnostics) or "analysis failed"
        super().__init__(f"graph is not consistent: {reasons}")


# Runtime errors

class RuntimeFailure(PruneError):
    exit_code = EXIT_RUNTIME


class ActorPanic(RuntimeFailure):
    def __init__(self, actor, cause):
        self.actor = actor
        self.cause = cause
        super().__init__(f"actor {actor} panicked: {cause!r}")


class Timeout(RuntimeFailure):
    def __init__(self, timeout_ms, stuck=()):
        self.timeout_ms = timeout_ms
        self.stuck = tuple(stuck)
        message = f"run exceeded {timeout_ms} ms"
        if self.stuck:
            message += f"; still running: {', '.join(self.stuck)}"
        super().__init__(message)


class AllocationFailure(RuntimeFailure):
    pass


class Poisoned(RuntimeFailure):
    pass


class ProtocolError(RuntimeFailure):
    pass


class OracleDeadlock(RuntimeFailure):
    pass


class OracleMismatch(RuntimeFailure):
    pass
