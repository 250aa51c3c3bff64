"""Command implementations behind prune.py. Each writes its report to `out` and
returns the process exit status; failures surface as PruneError subclasses."""

import logging
import time
from dataclasses import replace

from analyzer.consistency import analyze
from builder.report import (
    render_analysis,
    render_bench,
    render_capacity,
    render_check,
    render_run,
)
from corpus.adaptive_bypass import app_adaptive_bypass
from corpus.motion_detection import app_motion_detection
from corpus.predistortion import app_dynamic_predistortion
from model.errors import (
    EXIT_INCONSISTENT,
    EXIT_OK,
    InconsistentGraph,
    OracleMismatch,
    UnknownReference,
    suggest,
)
from model.graph import build_graph
from preprocessor.parser import parse_graph_file
from rules.design_rules import check_all
from runtime.config import DEFAULT_C_FACTOR, RuntimeConfig, parse_pinning
from runtime.executor import instantiate, run
from runtime.interpreter import interpret
from runtime.trace import TraceLog

logger = logging.getLogger(__name__)

CORPUS_APPS = {
    "motion_detection": app_motion_detection,
    "predistortion": app_dynamic_predistortion,
    "adaptive_bypass": app_adaptive_bypass,
}


def load_graph(path):
    return build_graph(parse_graph_file(path).document)


def cmd_check(path, out):
    graph = load_graph(path)
    violations = check_all(graph)
    out.write(render_check(graph, violations))
    return EXIT_INCONSISTENT if violations else EXIT_OK


def cmd_analyze(path, out, output=None):
    graph = load_graph(path)
    report = analyze(graph)
    text = render_analysis(report)
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
    out.write(text)
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def cmd_run(path, out, iterations=None, seed=None, pin=None, trace=None, oracle=False,
            c_factor=DEFAULT_C_FACTOR, timeout_ms=None, jitter_ms=0.0):
    graph = load_graph(path)
    report = analyze(graph)
    if not report.consistent:
        out.write(render_analysis(report))
        raise InconsistentGraph(report)

    options = {"core_pinning": parse_pinning(pin), "seed": seed, "c_factor": c_factor,
               "jitter_ms": jitter_ms, "trace": TraceLog() if trace else None}
    if iterations is not None:
        options["source_firings"] = iterations
    if timeout_ms is not None:
        options["timeout_ms"] = timeout_ms
    config = RuntimeConfig(**options)

    result = run(instantiate(graph, config=config, report=report))
    if trace:
        config.trace.write(trace)

    match = None
    if oracle:
        reference = interpret(graph, config=replace(config, trace=None), report=report)
        match = reference.sink_digests == result.sink_digests
    out.write(render_run(result, match))
    if match is False:
        differing = sorted(a for a in result.sink_digests
                           if reference.sink_digests.get(a) != result.sink_digests[a])
        logger.warning("oracle disagrees on %s", ", ".join(differing))
        raise OracleMismatch(f"sink digests differ from the reference interpreter for "
                             f"{', '.join(differing)}")
    return EXIT_OK


def cmd_capacity(path, out, c_factor=DEFAULT_C_FACTOR):
    graph = load_graph(path)
    out.write(render_capacity(graph, c_factor))
    return EXIT_OK


def cmd_corpus(out_dir, out, names=None):
    """Write graph, input and golden digest files for the named corpus apps (all by
    default)."""
    names = names or list(CORPUS_APPS)
    for name in names:
        if name not in CORPUS_APPS:
            raise UnknownReference(f"unknown corpus app {name}" + suggest(name, CORPUS_APPS))
    for name in names:
        app = CORPUS_APPS[name]()
        graph_path, input_path, golden_path = app.write_files(out_dir)
        out.write(f"{name}: {graph_path} {input_path} {golden_path}\n")
    return EXIT_OK


def cmd_bench(path, out, iterations=None):
    """Firings per second of the threaded runtime against the interpreter."""
    graph = load_graph(path)
    report = analyze(graph)
    if not report.consistent:
        raise InconsistentGraph(report)
    options = {"keep_outputs": False}
    if iterations is not None:
        options["source_firings"] = iterations
    config = RuntimeConfig(**options)

    result = run(instantiate(graph, config=config, report=report))
    firings = sum(result.firing_counts.values())
    runtime_rate = firings / result.wall_time if result.wall_time > 0 else 0.0

    start = time.perf_counter()
    interpret(graph, config=config, report=report)
    elapsed = time.perf_counter() - start
    interpreter_rate = firings / elapsed if elapsed > 0 else 0.0

    out.write(render_bench(graph, firings, runtime_rate, interpreter_rate))
    return EXIT_OK
